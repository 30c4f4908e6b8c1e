"""Python front end to the fracback C++ core."""

from ._core import (
    CacheMismatch,
    NumericalError,
    add_noise,
    default_grading,
    forward,
    gamma,
    graded_times,
    oracle_check,
    reconstruct,
    table1,
    table2,
)

__all__ = [
    "CacheMismatch",
    "NumericalError",
    "add_noise",
    "default_grading",
    "forward",
    "gamma",
    "graded_times",
    "oracle_check",
    "reconstruct",
    "table1",
    "table2",
]
