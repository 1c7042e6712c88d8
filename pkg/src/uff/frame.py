"""
Scalar frame functions on ``n`` qubits.

A frame function is fixed by one real function ``phi_J`` per proper subset
``J`` of the positions, defined on the coordinates that remain after
projecting ``J`` out, plus the constant ``c`` that plays the role of
``phi`` on the full set. On ``sigma_J(z)`` with ``z`` in ``F_n`` it takes
the inclusion-exclusion value

    f(sigma_J(z)) = sum over L ⊆ J of (-1)^|J - L| phi_L(tau_L(z))

and every such ``f`` sums to ``c`` over every UOB. Conversely the partial
sums of any function that sums to a constant over UOBs recover the phi data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from operator import itemgetter
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import InconsistentOracle, NonQubitFactor, NotCanonical, ShapeMismatch, UnsampledPoint
from .lattice import mobius_accumulate
from .prf import derive_seed, prf_uniform
from .product import (
    FactorState,
    ProductState,
    apply_sigma_mask,
    full_mask,
    mask_indices,
    popcount,
    submasks,
    tau_project,
)
from .qubit import canonicalize, random_qubit_vector, vector_to_point
from .uob import UOB, require_valid

CONSISTENCY_TOL = 1e-8


# -- phi functions -----------------------------------------------------------
# Each takes the tuple of retained coordinates and returns a float.

@dataclass(frozen=True)
class ConstantPhi:
    value: float
    kind = "constant"

    def __call__(self, coords) -> float:
        return self.value

    def params(self) -> dict:
        return {"value": self.value}


@dataclass(frozen=True)
class PolyPhi:
    """``const + sum_i (lin_re[i] Re z_i + lin_im[i] Im z_i + quad[i] |z_i|^2)``."""

    const: float = 0.0
    linear: tuple = ()
    quad: tuple = ()
    kind = "poly"

    def __call__(self, coords) -> float:
        out = self.const
        for z, (cr, ci) in zip(coords, self.linear):
            out += cr * z.real + ci * z.imag
        for z, q in zip(coords, self.quad):
            out += q * (z.real * z.real + z.imag * z.imag)
        return out

    def params(self) -> dict:
        return {"const": self.const, "linear": [list(p) for p in self.linear], "quad": list(self.quad)}


@dataclass(frozen=True)
class PrfPhi:
    """Deterministic pseudorandom function with values uniform in ``[low, high)``."""

    seed: int
    low: float = 0.0
    high: float = 1.0
    kind = "prf"

    def __call__(self, coords) -> float:
        return self.low + (self.high - self.low) * prf_uniform(self.seed, coords)

    def params(self) -> dict:
        return {"low": self.low, "high": self.high}


@dataclass(frozen=True, eq=False)
class TablePhi:
    """Phi known only at sampled coordinates (the output of recovery)."""

    table: Mapping
    kind = "table"

    def __call__(self, coords):
        try:
            return self.table[tuple(coords)]
        except KeyError:
            raise UnsampledPoint(f"no recovered value at {tuple(coords)!r}") from None


# -- families ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PhiFamily:
    n: int
    c: float
    phi: Mapping[int, Callable]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a qubit family needs n >= 1")
        full = full_mask(self.n)
        missing = [mask_indices(m) for m in range(full) if m not in self.phi]
        if missing:
            raise ValueError(f"phi missing for subsets {missing[:4]}")
        if full in self.phi:
            raise ValueError("the full set is represented by c, not by phi")


def constant_family(n: int, values: Mapping[int, float], c: float = 1.0) -> PhiFamily:
    return PhiFamily(n, float(c), {m: ConstantPhi(float(values[m])) for m in range(full_mask(n))})


def uniform_family(n: int) -> PhiFamily:
    """The family of ``f ≡ 2^-n``: ``phi_J = 2^(|J| - n)``, ``c = 1``."""
    return PhiFamily(n, 1.0, {m: ConstantPhi(2.0 ** (popcount(m) - n)) for m in range(full_mask(n))})


def prf_family(n: int, seed: int, c: float = 1.0, low: float = 0.0, high: float = 1.0) -> PhiFamily:
    phi = {m: PrfPhi(derive_seed(seed, m), low, high) for m in range(full_mask(n))}
    return PhiFamily(n, float(c), phi)


@dataclass(frozen=True, eq=False)
class FrameFunction:
    family: PhiFamily

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def c(self) -> float:
        return self.family.c

    def __call__(self, state: ProductState) -> float:
        return evaluate(self, state)


def _as_ff(ff) -> FrameFunction:
    return ff if isinstance(ff, FrameFunction) else FrameFunction(ff)


@lru_cache(maxsize=4096)
def _keeper(n: int, sub: int) -> Callable:
    """Selector for the coordinates outside ``sub``, as a tuple."""
    kept = [i for i in range(n) if not sub >> i & 1]
    if len(kept) == 1:
        i = kept[0]
        return lambda bases: (bases[i],)
    if not kept:
        return lambda bases: ()
    return itemgetter(*kept)


def alternating_sum(phi: Mapping[int, Callable], top, bases: Sequence[complex], flips: int, zero):
    """Inclusion-exclusion sum over ``L ⊆ flips`` of ``± phi_L(tau_L(z))``.

    ``top`` stands in for ``phi`` on the full set. Shared with the
    operator-valued engine, where terms are matrices.
    """
    n = len(bases)
    full = (1 << n) - 1
    total = zero
    for sub in submasks(flips):
        term = top if sub == full else phi[sub](_keeper(n, sub)(bases))
        if (flips ^ sub).bit_count() & 1:
            total = total - term
        else:
            total = total + term
    return total


def _qubit_data(n: int, state: ProductState):
    if len(state.factors) != n:
        raise ShapeMismatch(f"state has {len(state.factors)} factors, family has n = {n}")
    bases = []
    flips = 0
    for i, f in enumerate(state.factors):
        q = f.canonical
        if q is None:
            raise NonQubitFactor(f"factor {i + 1} has dim {f.dim}")
        bases.append(q.base)
        if q.flipped:
            flips |= 1 << i
    return bases, flips


def evaluate(ff, state: ProductState) -> float:
    """Value of the frame function on a product of qubits.

    The flipped positions of ``state`` give ``J`` and the canonical bases give
    ``z``, so the cost is ``2^|J|`` phi calls.
    """
    ff = _as_ff(ff)
    bases, flips = _qubit_data(ff.n, state)
    return float(alternating_sum(ff.family.phi, ff.family.c, bases, flips, 0.0))


def partial_sum(ff, z: ProductState, mask: int) -> float:
    """``sum over L ⊆ mask of f(sigma_L(z))``; equals ``phi_mask(tau_mask(z))``."""
    ff = _as_ff(ff)
    if z.flip_mask:
        raise NotCanonical(f"positions {mask_indices(z.flip_mask)} of z are flipped")
    return sum(evaluate(ff, apply_sigma_mask(z, sub)) for sub in submasks(mask))


def recover_phi(f_oracle: Callable[[ProductState], float], n: int,
                z_samples: Sequence[ProductState], tol: float = CONSISTENCY_TOL) -> PhiFamily:
    """Rebuild phi data from a black-box frame function at sampled ``z``.

    For each sample all ``2^n`` flips are queried once and the partial sums
    come from a single zeta transform. Raises :class:`InconsistentOracle` if
    two samples with equal projected coordinates disagree by more than ``tol``.
    """
    if not z_samples:
        raise ValueError("recover_phi needs at least one sample")
    full = full_mask(n)
    tables = {m: {} for m in range(full)}
    c = None
    for z in z_samples:
        if len(z.factors) != n:
            raise ShapeMismatch(f"sample has {len(z.factors)} factors, expected {n}")
        if z.flip_mask:
            raise NotCanonical("samples must lie in F_n (no flipped factors)")
        alpha = np.array([f_oracle(apply_sigma_mask(z, sub)) for sub in range(full + 1)], dtype=float)
        beta = mobius_accumulate(alpha, n)
        if c is None:
            c = float(beta[full])
        elif abs(beta[full] - c) > tol:
            raise InconsistentOracle(f"UOB totals differ: {c!r} vs {float(beta[full])!r}")
        for m in range(full):
            key = tau_project(z, m)
            value = float(beta[m])
            old = tables[m].setdefault(key, value)
            if abs(old - value) > tol:
                raise InconsistentOracle(
                    f"phi_{mask_indices(m)} at {key!r}: {old!r} vs {value!r}")
    return PhiFamily(n, c, {m: TablePhi(t) for m, t in tables.items()})


@dataclass
class SumReport:
    total: float
    c: float
    residual: float

    def as_dict(self) -> dict:
        return {"sum": self.total, "c": self.c, "abs_residual": self.residual}


def verify_sum(ff, basis: UOB, tol: float = 1e-9) -> SumReport:
    """Sum the frame function over a (validated) UOB and compare with ``c``."""
    ff = _as_ff(ff)
    require_valid(basis, tol)
    total = math.fsum(evaluate(ff, s) for s in basis.states)
    return SumReport(total, ff.c, abs(total - ff.c))


@dataclass
class NonnegReport:
    trials: int
    evaluations: int
    min_value: Optional[float]
    argmin: Optional[ProductState]
    fraction_negative: float
    candidate: bool
    status: str

    def as_dict(self) -> dict:
        from .io import product_state_to_json

        return {
            "trials": self.trials,
            "evaluations": self.evaluations,
            "min_value": self.min_value,
            "argmin": None if self.argmin is None else product_state_to_json(self.argmin),
            "fraction_negative": self.fraction_negative,
            "candidate": self.candidate,
            "status": self.status,
        }


def random_canonical_state(n: int, rng: np.random.Generator) -> ProductState:
    """Random point of ``F_n``: Haar-random qubit states, each canonicalized."""
    factors = []
    for _ in range(n):
        q = canonicalize(vector_to_point(random_qubit_vector(rng)))
        factors.append(FactorState.qubit(q.base, False))
    return ProductState(tuple(factors))


def scan_nonneg(ff, trials: int, rng: np.random.Generator) -> NonnegReport:
    """Search for negative values of ``f``.

    Each trial draws ``z`` in ``F_n`` and evaluates all ``2^n`` images
    ``sigma_J(z)``. The family is reported as a candidate frame function in
    the strict (probability) sense iff ``c == 1`` and nothing negative turns up.
    """
    ff = _as_ff(ff)
    unit = abs(ff.c - 1.0) <= 1e-12
    if trials <= 0:
        return NonnegReport(0, 0, None, None, 0.0, unit, "unsampled")
    full = full_mask(ff.n)
    best, arg, negative, count = math.inf, None, 0, 0
    for _ in range(trials):
        z = random_canonical_state(ff.n, rng)
        for sub in range(full + 1):
            state = apply_sigma_mask(z, sub)
            value = evaluate(ff, state)
            count += 1
            if value < 0:
                negative += 1
            if value < best:
                best, arg = value, state
    candidate = unit and negative == 0
    status = "candidate" if candidate else ("negative" if negative else "c_not_one")
    return NonnegReport(trials, count, best, arg, negative / count, candidate, status)
