#include "qrn/readout.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrn {

RidgeModel ridge_fit(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double alpha) {
    if (a.rows() != y.size()) throw std::invalid_argument("ridge_fit: row count != target length");
    if (a.rows() < 2) throw std::invalid_argument("ridge_fit: need at least two samples");
    if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("ridge_fit: alpha must be >= 0");

    const Eigen::RowVectorXd col_mean = a.colwise().mean();
    const double y_mean = y.mean();
    const Eigen::MatrixXd centered = a.rowwise() - col_mean;
    const Eigen::VectorXd yc = y.array() - y_mean;

    Eigen::MatrixXd gram = centered.transpose() * centered;
    gram.diagonal().array() += alpha;
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success ||
        llt.rcond() < 64 * std::numeric_limits<double>::epsilon()) {
        throw std::domain_error("ridge_fit: regularized normal equations are singular or ill-conditioned; increase alpha");
    }
    RidgeModel model;
    model.weights = llt.solve(centered.transpose() * yc);
    model.intercept = y_mean - col_mean.dot(model.weights);
    model.alpha = alpha;
    return model;
}

Eigen::VectorXd predict(const RidgeModel& model, const Eigen::MatrixXd& a) {
    if (a.cols() != model.weights.size()) throw std::invalid_argument("predict: feature dimension mismatch");
    return (a * model.weights).array() + model.intercept;
}

std::optional<double> r_squared(const Eigen::VectorXd& pred, const Eigen::VectorXd& target) {
    if (pred.size() != target.size() || pred.size() < 2) {
        throw std::invalid_argument("r_squared: need two equal-length vectors of length >= 2");
    }
    const Eigen::ArrayXd dp = pred.array() - pred.mean();
    const Eigen::ArrayXd dt = target.array() - target.mean();
    // Spread at the rounding level of the mean counts as zero variance.
    const auto flat = [](const Eigen::VectorXd& v, const Eigen::ArrayXd& d) {
        return d.abs().maxCoeff() <= 16 * std::numeric_limits<double>::epsilon() * v.cwiseAbs().maxCoeff();
    };
    if (flat(pred, dp) || flat(target, dt)) return std::nullopt;
    const double var_p = dp.square().sum();
    const double var_t = dt.square().sum();
    const double cov = (dp * dt).sum();
    return cov * cov / (var_p * var_t);
}

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& target) {
    if (pred.size() != target.size() || pred.size() == 0) {
        throw std::invalid_argument("rmse: need two non-empty vectors of equal length");
    }
    return std::sqrt((pred - target).squaredNorm() / static_cast<double>(pred.size()));
}

double mean_rmse_short(std::span<const double> per_delay_rmse) {
    if (per_delay_rmse.size() != 5) {
        throw std::invalid_argument("mean_rmse_short: expected RMSE for the five delays 0..-4");
    }
    double sum = 0.0;
    for (double v : per_delay_rmse) sum += v;
    return sum / 5.0;
}

double random_guess_floor(const Eigen::VectorXd& target) {
    if (target.size() == 0) throw std::invalid_argument("random_guess_floor: empty target");
    return std::sqrt((target.array() - target.mean()).square().mean());
}

Metrics score(const Eigen::VectorXd& pred, const Eigen::VectorXd& target) {
    return {r_squared(pred, target), rmse(pred, target)};
}

}  // namespace qrn
