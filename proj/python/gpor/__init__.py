"""Gaussian-process output regulation: python facade over the C++ core."""

from _gpor import (  # noqa: F401
    GpModel,
    InternalModel,
    Kernel,
    RunMetrics,
    build_chain,
    kernel_eval,
    lorenz_ideal_feedforward,
    lorenz_regulator_residual,
    lorenz_steady_state,
    max_real_eigenvalue_of_chain,
    optimize_hyperparameters,
    run_config,
    run_example,
)

__all__ = [
    "GpModel",
    "InternalModel",
    "Kernel",
    "RunMetrics",
    "build_chain",
    "kernel_eval",
    "lorenz_ideal_feedforward",
    "lorenz_regulator_residual",
    "lorenz_steady_state",
    "max_real_eigenvalue_of_chain",
    "optimize_hyperparameters",
    "run_config",
    "run_example",
]
