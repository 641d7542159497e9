// Linear ridge readout and scoring metrics.
#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qrn {

struct RidgeModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;
    double alpha = 0.0;
};

struct Metrics {
    /// Squared correlation between prediction and target; empty when either
    /// side has zero variance.
    std::optional<double> r2;
    double rmse = 0.0;
};

/// Minimizes ||A w + b − y||² + α||w||² with an unpenalized intercept,
/// by centering and a Cholesky solve of the regularized normal equations.
/// Throws std::domain_error when the system is numerically singular.
RidgeModel ridge_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double alpha);

Eigen::VectorXd predict(const RidgeModel& model, const Eigen::MatrixXd& a);

/// cov(pred, target)² / (var(pred) var(target)). This is the correlation
/// form, not 1 − SSE/SST; the two agree only for a least-squares fit
/// evaluated on its own training data.
std::optional<double> r_squared(const Eigen::VectorXd& pred, const Eigen::VectorXd& target);

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& target);

/// Arithmetic mean of the RMSE over the five short delays τ = 0..−4.
double mean_rmse_short(std::span<const double> per_delay_rmse);

/// Population standard deviation; the RMSE of the best constant predictor.
double random_guess_floor(const Eigen::VectorXd& target);

Metrics score(const Eigen::VectorXd& pred, const Eigen::VectorXd& target);

}  // namespace qrn
