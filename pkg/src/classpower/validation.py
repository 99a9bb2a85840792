"""Input checks shared by the estimator and the command line."""

from __future__ import annotations

import numpy as np

from .chartable import CharacterTable
from .group import FiniteGroup

MAX_N_BOUNDS = (2, 16)
MAX_TOLERANCE = 1e-3


def check_source(X) -> FiniteGroup | CharacterTable:
    if isinstance(X, (FiniteGroup, CharacterTable)):
        return X
    raise TypeError(f"expected a FiniteGroup or CharacterTable, got {type(X).__name__}")


def check_max_n(max_n) -> int:
    if isinstance(max_n, bool) or not isinstance(max_n, (int, np.integer)):
        raise TypeError("max_n must be an integer")
    lo, hi = MAX_N_BOUNDS
    if not lo <= max_n <= hi:
        raise ValueError(f"max_n must lie in [{lo}, {hi}], got {max_n}")
    return int(max_n)


def check_tolerance(tol) -> float:
    tol = float(tol)
    if not 0 < tol <= MAX_TOLERANCE:
        raise ValueError(f"tolerance must lie in (0, {MAX_TOLERANCE}], got {tol}")
    return tol


def check_class_pairs(X, k: int, max_n: int) -> np.ndarray:
    """Coerce ``X`` into an ``(m, 2)`` integer array of ``(class id, n)`` pairs."""
    arr = np.asarray(X)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr.reshape(1, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"expected shape (m, 2), got {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("class ids and exponents must be integers")
    arr = arr.astype(np.int64)
    if arr.size:
        if arr[:, 0].min() < 1 or arr[:, 0].max() >= k:
            raise ValueError(f"class ids must lie in [1, {k - 1}]")
        if arr[:, 1].min() < 2 or arr[:, 1].max() > max_n:
            raise ValueError(f"exponents must lie in [2, {max_n}]")
    return arr
