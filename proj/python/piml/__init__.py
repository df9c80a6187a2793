"""Python surface for the piml C++ core."""

from _piml import (
    Kernel,
    Model,
    effective_dimension,
    exact_spectrum,
    fit,
    minimax_schedule,
    model_from_json,
    run_experiment,
    set_thread_limit,
    speedup_schedule,
)

__all__ = [
    "Kernel",
    "Model",
    "effective_dimension",
    "exact_spectrum",
    "fit",
    "minimax_schedule",
    "model_from_json",
    "run_experiment",
    "set_thread_limit",
    "speedup_schedule",
]
