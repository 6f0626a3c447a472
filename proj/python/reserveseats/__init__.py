"""Deferred acceptance with reserved seats for disadvantaged students."""

from ._core import (
    Instance,
    InputError,
    InvariantError,
    compare,
    golden_names,
    hc_rate,
    highly_competitive,
    in_group_blocking_pairs,
    normal_quantile_approx,
    run,
    thm44_condition,
    verify_golden,
)

MECHANISMS = ("base", "disc", "mr", "jsa")

__all__ = [
    "Instance",
    "InputError",
    "InvariantError",
    "MECHANISMS",
    "compare",
    "golden_names",
    "hc_rate",
    "highly_competitive",
    "in_group_blocking_pairs",
    "normal_quantile_approx",
    "run",
    "thm44_condition",
    "verify_golden",
]
