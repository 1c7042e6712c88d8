"""
Product (unentangled) states and subset masks.

Subsets of the positions ``1..n`` are plain ``int`` bitmasks: position ``i``
is bit ``i - 1``. Qubit factors carry their canonical data so that the
coordinates fed to phi-functions are bit-exact copies, never recomputed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import NonQubitPosition, NotCanonical, ShapeMismatch, TooLarge, NotUnitNorm
from .qubit import CanonicalQubit, canonicalize, point_to_vector, vector_to_point

MAX_POSITIONS = 63
MAX_FULL_DIM = 2 ** 20
ORTHO_TOL = 1e-9


class _Omega:
    """Value of ``tau`` when every position is projected out."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "OMEGA"

    def __reduce__(self):
        return (_Omega, ())


OMEGA = _Omega()


# -- masks -------------------------------------------------------------------

def full_mask(n: int) -> int:
    if not 0 <= n <= MAX_POSITIONS:
        raise TooLarge(f"at most {MAX_POSITIONS} positions, got {n}")
    return (1 << n) - 1


def mask_from_indices(indices: Iterable[int]) -> int:
    """Mask from 1-based positions."""
    m = 0
    for i in indices:
        if not 1 <= i <= MAX_POSITIONS:
            raise ValueError(f"position {i} out of range 1..{MAX_POSITIONS}")
        m |= 1 << (i - 1)
    return m


def mask_indices(mask: int) -> list[int]:
    """Sorted 1-based positions of a mask."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All ``L`` with ``L ⊆ mask``, in decreasing order, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# -- states ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FactorState:
    """A unit vector in one tensor factor.

    ``canonical`` is present exactly when ``dim == 2``.
    """

    amps: np.ndarray
    canonical: Optional[CanonicalQubit] = None

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        norm = float(np.linalg.norm(amps))
        if amps.size == 0 or abs(norm - 1.0) > 1e-9:
            raise NotUnitNorm(f"factor has norm {norm!r}")
        if amps.size == 2 and self.canonical is None:
            object.__setattr__(self, "canonical", canonicalize(vector_to_point(amps)))
        if amps.size != 2 and self.canonical is not None:
            raise ShapeMismatch("canonical data given for a non-qubit factor")

    @property
    def dim(self) -> int:
        return self.amps.size

    @classmethod
    def qubit(cls, base, flipped: bool = False) -> FactorState:
        q = CanonicalQubit(complex(base), bool(flipped))
        return cls(point_to_vector(q), q)

    @classmethod
    def from_canonical(cls, q: CanonicalQubit) -> FactorState:
        return cls(point_to_vector(q), q)

    def sigma(self) -> FactorState:
        if self.canonical is None:
            raise NonQubitPosition(f"sigma needs a qubit factor, got dim {self.dim}")
        return FactorState.from_canonical(self.canonical.flip())

    def __repr__(self):
        if self.canonical is not None:
            return f"FactorState.qubit({self.canonical.base!r}, {self.canonical.flipped})"
        return f"FactorState({self.amps!r})"


@dataclass(frozen=True, eq=False)
class ProductState:
    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ShapeMismatch("a product state needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @property
    def signature(self) -> tuple:
        return tuple(f.dim for f in self.factors)

    @property
    def dim(self) -> int:
        return math.prod(self.signature)

    def __len__(self):
        return len(self.factors)

    @property
    def flip_mask(self) -> int:
        """Mask of flipped qubit positions."""
        m = 0
        for i, f in enumerate(self.factors):
            if f.canonical is not None and f.canonical.flipped:
                m |= 1 << i
        return m

    def bases(self) -> tuple:
        """Canonical base of every factor (qubits only)."""
        out = []
        for i, f in enumerate(self.factors):
            if f.canonical is None:
                raise NonQubitPosition(f"factor {i + 1} has dim {f.dim}")
            out.append(f.canonical.base)
        return tuple(out)


def qubit_state(bases: Sequence, flip_mask: int = 0) -> ProductState:
    """Product of qubits ``sigma_J(z)`` with ``z`` given by its bases in F."""
    return ProductState(tuple(
        FactorState.qubit(b, bool(flip_mask >> i & 1)) for i, b in enumerate(bases)
    ))


def _check_signature(a: ProductState, b: ProductState):
    if a.signature != b.signature:
        raise ShapeMismatch(f"signatures differ: {a.signature} vs {b.signature}")


def inner_product(a: ProductState, b: ProductState) -> complex:
    _check_signature(a, b)
    out = 1 + 0j
    for fa, fb in zip(a.factors, b.factors):
        out *= complex(np.vdot(fa.amps, fb.amps))
    return out


def is_orthogonal(a: ProductState, b: ProductState, tol: float = ORTHO_TOL) -> bool:
    """Factorwise test: orthogonal iff some factor overlap vanishes."""
    _check_signature(a, b)
    return min(abs(np.vdot(fa.amps, fb.amps)) for fa, fb in zip(a.factors, b.factors)) <= tol


def apply_sigma_mask(z: ProductState, mask: int) -> ProductState:
    if mask >> len(z.factors):
        raise NonQubitPosition(f"mask {mask_indices(mask)} exceeds {len(z.factors)} positions")
    factors = list(z.factors)
    for i in mask_indices(mask):
        f = factors[i - 1]
        if f.canonical is None:
            raise NonQubitPosition(f"position {i} has dim {f.dim}")
        factors[i - 1] = f.sigma()
    return ProductState(tuple(factors))


def tau_project(z: ProductState, mask: int):
    """Bases at the positions outside ``mask``, or OMEGA if none remain."""
    n = len(z.factors)
    if mask == full_mask(n):
        return OMEGA
    out = []
    for i, f in enumerate(z.factors):
        if mask >> i & 1:
            continue
        if f.canonical is None:
            raise NonQubitPosition(f"position {i + 1} has dim {f.dim}")
        if f.canonical.flipped:
            raise NotCanonical(f"position {i + 1} is flipped but retained by tau")
        out.append(f.canonical.base)
    return tuple(out)


def expand_to_full_vector(z: ProductState) -> np.ndarray:
    if z.dim > MAX_FULL_DIM:
        raise TooLarge(f"full dimension {z.dim} exceeds {MAX_FULL_DIM}")
    out = np.ones(1, dtype=complex)
    for f in z.factors:
        out = np.kron(out, f.amps)
    return out
