"""
Single-qubit projective geometry.

A qubit state ``(x, y)`` is identified with the point ``x / y`` of the
extended complex plane. The antipodal map ``sigma`` sends a state to its
unique orthogonal partner, and every point is written as either a point of
the fundamental domain ``F`` or the sigma-image of one.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotUnitNorm

NORM_TOL = 1e-9


class _Infinity:
    """The point at infinity of the projective line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(p) -> bool:
    return p is INF


def as_point(p):
    """Coerce a number (or INF) into a projective point."""
    if p is INF:
        return INF
    return complex(p)


@dataclass(frozen=True)
class CanonicalQubit:
    """A qubit state stored as a point of ``F`` plus a flip flag.

    ``flipped=True`` means the represented state is ``sigma(base)``.
    """

    base: complex
    flipped: bool = False

    def flip(self) -> CanonicalQubit:
        return CanonicalQubit(self.base, not self.flipped)


def _finite_or_inf(z: complex):
    # quotients by subnormals overflow; they represent the point at infinity
    return z if cmath.isfinite(z) else INF


def sigma_point(p):
    """Antipodal map on the extended plane, ``z -> -1/conj(z)``."""
    if p is INF:
        return 0j
    p = complex(p)
    if p == 0:
        return INF
    return _finite_or_inf(-1.0 / p.conjugate())


def _check_unit(v):
    norm = math.sqrt(abs(v[0]) ** 2 + abs(v[1]) ** 2)
    if abs(norm - 1.0) > NORM_TOL:
        raise NotUnitNorm(f"qubit vector has norm {norm!r}")


def sigma_vector(v) -> np.ndarray:
    """``(x, y) -> (-conj(y), conj(x))``, orthogonal to ``v``."""
    v = np.asarray(v, dtype=complex)
    _check_unit(v)
    return np.array([-v[1].conjugate(), v[0].conjugate()])


def in_fundamental_domain(p) -> bool:
    """Membership in ``F``: the open unit disk, the open upper half of the
    unit circle, and the point 1.

    Comparisons are strict on the computed ``|p|**2``; points numerically on
    the circle are decided by that value alone.
    """
    if p is INF:
        return False
    p = complex(p)
    r2 = p.real * p.real + p.imag * p.imag
    if r2 < 1.0:
        return True
    if r2 == 1.0:
        return p.imag > 0 or p == 1
    return False


def canonicalize(p) -> CanonicalQubit:
    # only p is tested; the sigma image is trusted so the split is a partition
    if in_fundamental_domain(p):
        return CanonicalQubit(complex(p), False)
    return CanonicalQubit(complex(sigma_point(p)), True)


def point_to_vector(q: CanonicalQubit) -> np.ndarray:
    """Unit vector for ``q`` with the lift ``(w, 1)/sqrt(1+|w|^2)``.

    Flipped qubits get ``sigma_vector`` of that lift.
    """
    w = complex(q.base)
    s = math.sqrt(1.0 + (w.real * w.real + w.imag * w.imag))
    x, y = w / s, 1.0 / s
    if q.flipped:
        return np.array([-y + 0j, x.conjugate()])
    return np.array([x, y + 0j])


def vector_to_point(v):
    v = np.asarray(v, dtype=complex)
    _check_unit(v)
    x, y = complex(v[0]), complex(v[1])
    if abs(y) > 0:
        return _finite_or_inf(x / y)
    return INF


def sample_fundamental(rng: np.random.Generator, margin: float = 1e-6) -> complex:
    """Uniform point of the open disk of radius ``1 - margin``."""
    r = math.sqrt(rng.random()) * (1.0 - margin)
    theta = 2.0 * math.pi * rng.random()
    return complex(r * math.cos(theta), r * math.sin(theta))


def random_qubit_vector(rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=2) + 1j * rng.normal(size=2)
    return g / np.linalg.norm(g)
