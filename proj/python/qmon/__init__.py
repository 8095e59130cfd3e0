"""Simulate quantum systems under repeated projective measurements."""

from ._core import (
    DataError,
    Model,
    NumericalError,
    classify,
    closed_form,
    cycle_duration,
    decay_rate,
    fit_gamma,
    noise_timescale,
    run_exact,
    run_shots,
    stationary_limit,
    transition_matrix,
)

__all__ = [
    "DataError",
    "Model",
    "NumericalError",
    "classify",
    "closed_form",
    "cycle_duration",
    "decay_rate",
    "fit_gamma",
    "noise_timescale",
    "run_exact",
    "run_shots",
    "stationary_limit",
    "transition_matrix",
]
