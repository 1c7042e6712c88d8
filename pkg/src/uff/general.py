"""
Frame functions on ``k`` qubits times a finite-dimensional tail ``H``.

The phi data become Hermitian operators on ``H``: for ``z`` in ``F^k``, a
flip set ``J`` and a tail state ``u``,

    f(sigma_J(z) ⊗ u) = <u| sum over L ⊆ J of (-1)^|J - L| phi_L(tau_L(z)) |u>

and the sum over any UOB is ``tr phi_full(omega)``. Several tail factors are
flattened into one factor of the product dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import NotHermitian, ShapeMismatch, UnsampledPoint
from .frame import SumReport, _qubit_data, alternating_sum
from .prf import derive_seed, prf_uniforms
from .product import FactorState, ProductState, full_mask, mask_indices
from .uob import UOB, require_valid

HERMITIAN_TOL = 1e-12
MAX_TAIL_DIM = 64


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeMismatch(f"operator must be square, got shape {m.shape}")
        if m.size and np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(m))):
            raise NotHermitian(f"max |A - A^H| = {np.max(np.abs(m - m.conj().T)):.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def __add__(self, other):
        return HermitianOperator(self.matrix + _matrix(other))

    def __sub__(self, other):
        return HermitianOperator(self.matrix - _matrix(other))


def _matrix(a) -> np.ndarray:
    return a.matrix if isinstance(a, HermitianOperator) else np.asarray(a, dtype=complex)


def hermitian_from_uniforms(values: np.ndarray, d: int) -> np.ndarray:
    """Fill a Hermitian matrix from ``d*d`` reals: diagonal, then upper
    real parts, then upper imaginary parts."""
    m = np.diag(values[:d]).astype(complex)
    iu = np.triu_indices(d, 1)
    npair = len(iu[0])
    m[iu] = values[d:d + npair] + 1j * values[d + npair:d + 2 * npair]
    m[(iu[1], iu[0])] = np.conj(m[iu])
    return m


def random_hermitian(d: int, rng: np.random.Generator, psd: bool = False,
                     trace: Optional[float] = None) -> HermitianOperator:
    """``G + G^H`` from a complex Gaussian ``G``.

    ``psd=True`` returns ``G G^H`` instead; ``trace`` rescales (psd) or
    shifts by a multiple of the identity (general) to hit a target trace.
    """
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T if psd else g + g.conj().T
    if trace is not None:
        if psd:
            m = m * (trace / np.trace(m).real)
        else:
            m = m + ((trace - np.trace(m).real) / d) * np.eye(d)
    return HermitianOperator((m + m.conj().T) / 2)


# -- operator phi functions --------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConstantOperatorPhi:
    operator: HermitianOperator
    kind = "constant"

    def __call__(self, coords) -> np.ndarray:
        return self.operator.matrix


@dataclass(frozen=True)
class PrfOperatorPhi:
    """Pseudorandom Hermitian values with entries uniform in ``[-scale, scale)``."""

    seed: int
    d: int
    scale: float = 1.0
    kind = "prf"

    def __call__(self, coords) -> np.ndarray:
        u = prf_uniforms(self.seed, coords, self.d * self.d)
        return hermitian_from_uniforms(self.scale * (2.0 * u - 1.0), self.d)

    def params(self) -> dict:
        return {"scale": self.scale}


@dataclass(frozen=True, eq=False)
class TableOperatorPhi:
    table: Mapping
    kind = "table"

    def __call__(self, coords) -> np.ndarray:
        try:
            return self.table[tuple(coords)]
        except KeyError:
            raise UnsampledPoint(f"no recovered operator at {tuple(coords)!r}") from None


@dataclass(frozen=True, eq=False)
class OperatorPhiFamily:
    """Operator-valued phi data on ``k`` qubits and a ``d``-dimensional tail.

    ``phi`` maps every proper subset mask to a callable returning a ``d x d``
    Hermitian array; ``top`` is the single operator for the full set.
    """

    k: int
    d: int
    phi: Mapping[int, Callable]
    top: HermitianOperator

    def __post_init__(self):
        if self.k < 0 or not 1 <= self.d <= MAX_TAIL_DIM:
            raise ValueError(f"need k >= 0 and 1 <= d <= {MAX_TAIL_DIM}")
        full = full_mask(self.k)
        missing = [mask_indices(m) for m in range(full) if m not in self.phi]
        if missing:
            raise ValueError(f"phi missing for subsets {missing[:4]}")
        if self.top.d != self.d:
            raise ShapeMismatch(f"top operator has dim {self.top.d}, expected {self.d}")

    @property
    def c(self) -> float:
        return self.top.trace


def prf_operator_family(k: int, d: int, seed: int, trace: float = 1.0, scale: float = 1.0) -> OperatorPhiFamily:
    """Pseudorandom family whose full-set operator has the given trace."""
    phi = {m: PrfOperatorPhi(derive_seed(seed, m), d, scale) for m in range(full_mask(k))}
    rng = np.random.default_rng(derive_seed(seed, full_mask(k), 1))
    return OperatorPhiFamily(k, d, phi, random_hermitian(d, rng, trace=trace))


def from_scalar_family(family) -> OperatorPhiFamily:
    """View a scalar family as a ``d = 1`` operator family."""
    phi = {m: (lambda coords, f=f: np.array([[f(coords)]], dtype=complex)) for m, f in family.phi.items()}
    return OperatorPhiFamily(family.n, 1, phi, HermitianOperator([[family.c]]))


# -- evaluation --------------------------------------------------------------

def gleason_eval(a, u) -> float:
    """Quadratic form ``<u|A|u>``."""
    m = _matrix(a)
    amps = u.amps if isinstance(u, FactorState) else np.asarray(u, dtype=complex)
    if m.shape != (amps.size, amps.size):
        raise ShapeMismatch(f"operator {m.shape} vs state of dim {amps.size}")
    if not isinstance(a, HermitianOperator) and np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise NotHermitian("quadratic form of a non-Hermitian matrix")
    value = complex(np.vdot(amps, m @ amps))
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise NotHermitian(f"quadratic form has imaginary part {value.imag:.3e}")
    return value.real


def tail_operator(family: OperatorPhiFamily, z_part: Optional[ProductState]) -> np.ndarray:
    """``A(sigma_J(z)) = sum over L ⊆ J of ± phi_L(tau_L(z))`` as a matrix."""
    if z_part is None or family.k == 0:
        if z_part is not None and len(z_part.factors):
            raise ShapeMismatch("k = 0 family given qubit factors")
        return family.top.matrix
    bases, flips = _qubit_data(family.k, z_part)
    return alternating_sum(family.phi, family.top.matrix, bases, flips, np.zeros((family.d, family.d), complex))


def evaluate_general(family: OperatorPhiFamily, z_part: Optional[ProductState], u) -> float:
    return gleason_eval(tail_operator(family, z_part), u)


def split_state(state: ProductState, k: int, d: int):
    """Split into the qubit part and a flattened tail factor of dimension ``d``.

    A tail of dimension 1 may be absent from ``state``.
    """
    qubits = state.factors[:k]
    tail = state.factors[k:]
    if len(qubits) != k or any(f.dim != 2 for f in qubits):
        raise ShapeMismatch(f"expected {k} leading qubits in signature {state.signature}")
    if not tail:
        if d != 1:
            raise ShapeMismatch(f"missing tail of dim {d}")
        u = FactorState(np.ones(1))
    elif len(tail) == 1:
        u = tail[0]
    else:
        amps = np.ones(1, dtype=complex)
        for f in tail:
            amps = np.kron(amps, f.amps)
        u = FactorState(amps)
    if u.dim != d:
        raise ShapeMismatch(f"tail dim {u.dim} != {d}")
    return (ProductState(qubits) if k else None), u


def evaluate_state(family: OperatorPhiFamily, state: ProductState) -> float:
    z, u = split_state(state, family.k, family.d)
    return evaluate_general(family, z, u)


def verify_general(family: OperatorPhiFamily, basis: UOB, tol: float = 1e-9) -> SumReport:
    """Sum over a UOB of signature ``(2,)*k + tail`` against ``tr phi_full``."""
    sig = tuple(basis.signature)
    if sig[:family.k] != (2,) * family.k or math.prod(sig[family.k:]) != family.d:
        raise ShapeMismatch(f"basis signature {sig} does not fit k={family.k}, d={family.d}")
    require_valid(basis, tol)
    total = math.fsum(evaluate_state(family, s) for s in basis.states)
    c = family.c
    return SumReport(total, c, abs(total - c))


def general_oracle(family: OperatorPhiFamily) -> Callable:
    """Black box ``(qubit part, tail state) -> value`` for a family."""
    return partial(evaluate_general, family)


def restrict_to_tail(f_oracle: Callable, z_part: Optional[ProductState]) -> Callable:
    """The curried oracle ``u -> f(z ⊗ u)``."""
    return lambda u: f_oracle(z_part, u)


def density_oracle(rho, k: int, d: int) -> Callable:
    """Frame function ``<v ⊗ u| rho |v ⊗ u>`` of an operator on the full space.

    Independent of the phi machinery; every such function sums to
    ``tr rho`` over any orthonormal basis.
    """
    rho = _matrix(rho)
    if rho.shape != (2 ** k * d,) * 2:
        raise ShapeMismatch(f"rho has shape {rho.shape}, expected {(2 ** k * d,) * 2}")

    def oracle(z_part, u):
        v = np.ones(1, dtype=complex)
        if z_part is not None:
            for f in z_part.factors:
                v = np.kron(v, f.amps)
        amps = u.amps if isinstance(u, FactorState) else np.asarray(u, dtype=complex)
        v = np.kron(v, amps)
        return float(np.vdot(v, rho @ v).real)

    return oracle
