"""Zeta and Möbius transforms on the subset lattice of ``{1..n}``.

Arrays are indexed by bitmask along axis 0, so trailing axes (operator
entries, for instance) are transformed entrywise.
"""

import numpy as np

from .errors import TooLarge

MAX_N = 24


def _prepare(values, n):
    if n > MAX_N:
        raise TooLarge(f"subset transforms are capped at n = {MAX_N}, got {n}")
    arr = np.array(values, copy=True)
    if not np.issubdtype(arr.dtype, np.inexact):
        arr = arr.astype(float)
    if arr.shape[0] != 1 << n:
        raise ValueError(f"expected {1 << n} entries along axis 0, got {arr.shape[0]}")
    return arr


def mobius_accumulate(alpha, n: int) -> np.ndarray:
    """``beta[J] = sum over L ⊆ J of alpha[L]``, one sweep per element."""
    arr = _prepare(alpha, n)
    tail = arr.shape[1:]
    for i in range(n):
        view = arr.reshape((1 << (n - i - 1), 2, 1 << i) + tail)
        view[:, 1] += view[:, 0]
    return arr


def mobius_invert(beta, n: int) -> np.ndarray:
    """``alpha[J] = sum over L ⊆ J of (-1)^|J - L| beta[L]``."""
    arr = _prepare(beta, n)
    tail = arr.shape[1:]
    for i in range(n):
        view = arr.reshape((1 << (n - i - 1), 2, 1 << i) + tail)
        view[:, 1] -= view[:, 0]
    return arr
