"""Quantum recurrent reservoir simulator."""

from ._qrn import (
    EmbeddingWeights,
    __version__,
    bitstring_label,
    crz,
    damping_channel,
    embedding_unitary,
    init_weights,
    kraus_pair,
    narma5,
    outcome_distribution,
    partial_swap_unitary,
    predict,
    purity,
    r_squared,
    ridge_fit,
    rmse,
    run_narma,
    run_reservoir,
    run_stmc,
    rx,
    ry,
)

__all__ = [
    "EmbeddingWeights",
    "__version__",
    "bitstring_label",
    "crz",
    "damping_channel",
    "embedding_unitary",
    "init_weights",
    "kraus_pair",
    "narma5",
    "outcome_distribution",
    "partial_swap_unitary",
    "predict",
    "purity",
    "r_squared",
    "ridge_fit",
    "rmse",
    "run_narma",
    "run_reservoir",
    "run_stmc",
    "rx",
    "ry",
]
