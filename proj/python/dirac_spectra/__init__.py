"""Spectral analysis of 2x2 Dirac-type boundary value problems."""

from ._core import (
    PotentialGrid,
    ReducedBC,
    Weights,
    a0_critical_d,
    check_regularity,
    classify_strict,
    delta0_eval,
    delta0_spectrum,
    delta0_zeros,
    find_strictifying_weight,
    reduce_bc,
    spectrum,
    timoshenko_reduction,
)

__all__ = [
    "PotentialGrid",
    "ReducedBC",
    "Weights",
    "a0_critical_d",
    "check_regularity",
    "classify_strict",
    "delta0_eval",
    "delta0_spectrum",
    "delta0_zeros",
    "find_strictifying_weight",
    "reduce_bc",
    "spectrum",
    "timoshenko_reduction",
]
