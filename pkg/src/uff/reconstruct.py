"""
Recover operators from black-box frame-function values.

A quadratic form ``u -> <u|A|u>`` on ``C^d`` is pinned down by its values on
``d^2`` probe states: the basis vectors and the two kinds of two-level
superpositions. Applied to the partial sums of an unentangled frame function
this rebuilds the operator-valued phi data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InconsistentOracle, NotAForm, ShapeMismatch
from .general import (
    HermitianOperator,
    OperatorPhiFamily,
    TableOperatorPhi,
    evaluate_general,
    gleason_eval,
    restrict_to_tail,
)
from .lattice import mobius_accumulate
from .product import FactorState, ProductState, apply_sigma_mask, full_mask, mask_indices, tau_project

FORM_TOL = 1e-6
CONSISTENCY_TOL = 1e-8
_CHECK_SEED = 0x5EED


def tomography_states(d: int) -> list:
    """``e_i``, then ``(e_i + e_j)/√2`` and ``(e_i + i e_j)/√2`` for ``i < j``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    eye = np.eye(d, dtype=complex)
    states = [FactorState(eye[i]) for i in range(d)]
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    s = 1 / math.sqrt(2)
    states += [FactorState(s * (eye[i] + eye[j])) for i, j in pairs]
    states += [FactorState(s * (eye[i] + 1j * eye[j])) for i, j in pairs]
    return states


def _random_states(d: int, count: int, rng: np.random.Generator) -> list:
    g = rng.normal(size=(count, d)) + 1j * rng.normal(size=(count, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return [FactorState(row) for row in g]


def form_residual(a, oracle: Callable, states: Sequence[FactorState]) -> float:
    return max((abs(gleason_eval(a, u) - oracle(u)) for u in states), default=0.0)


def reconstruct_operator(oracle: Callable[[FactorState], float], d: int, check: bool = True,
                         checks: int = 100, rng: Optional[np.random.Generator] = None,
                         tol: float = FORM_TOL) -> HermitianOperator:
    """Closed-form inversion of a quadratic form from the ``d^2`` probes.

    With ``check`` the result is compared with the oracle on ``checks`` fresh
    random states and :class:`NotAForm` is raised if the worst residual
    exceeds ``tol``.
    """
    probes = tomography_states(d)
    values = [float(oracle(u)) for u in probes]
    a = np.zeros((d, d), dtype=complex)
    diag = values[:d]
    a[np.diag_indices(d)] = diag
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    npair = len(pairs)
    for p, (i, j) in enumerate(pairs):
        mean = (diag[i] + diag[j]) / 2
        re = values[d + p] - mean
        im = mean - values[d + npair + p]
        a[i, j] = complex(re, im)
        a[j, i] = complex(re, -im)
    op = HermitianOperator(a)
    if check:
        rng = np.random.default_rng(_CHECK_SEED) if rng is None else rng
        res = form_residual(op, oracle, _random_states(d, checks, rng))
        if res > tol:
            raise NotAForm(f"oracle is not a quadratic form: residual {res:.3e} > {tol:.1e}")
    return op


def reconstruct_operator_lstsq(oracle: Callable[[FactorState], float], d: int, probes: int,
                               rng: np.random.Generator) -> HermitianOperator:
    """Least-squares fit of a Hermitian form from ``probes >= d^2`` random states.

    Cross-check for :func:`reconstruct_operator`; the unknowns are the real
    coordinates of ``A`` in the layout of :func:`hermitian_from_uniforms`.
    """
    if probes < d * d:
        raise ValueError(f"need at least {d * d} probes, got {probes}")
    states = _random_states(d, probes, rng)
    iu = np.triu_indices(d, 1)
    # with w = conj(u_i) u_j and A_ij = x + iy (i < j) the pair contributes 2 Re(w) x - 2 Im(w) y
    rows = []
    for u in states:
        w = np.outer(u.amps.conj(), u.amps)
        cross = w[iu]
        rows.append(np.concatenate([w.diagonal().real, 2 * cross.real, -2 * cross.imag]))
    design = np.array(rows)
    target = np.array([oracle(u) for u in states], dtype=float)
    sol, *_ = np.linalg.lstsq(design, target, rcond=None)
    a = np.diag(sol[:d]).astype(complex)
    npair = len(iu[0])
    a[iu] = sol[d:d + npair] + 1j * sol[d + npair:]
    a[(iu[1], iu[0])] = np.conj(a[iu])
    return HermitianOperator(a)


def reconstruct_phi_operators(f_oracle: Callable, k: int, d: int,
                              z_samples: Optional[Sequence[ProductState]] = None,
                              tol: float = CONSISTENCY_TOL) -> OperatorPhiFamily:
    """Rebuild an operator phi family from ``f_oracle(qubit_part, tail_state)``.

    For each sampled ``z`` the restricted oracle at every flip ``sigma_L(z)``
    is inverted to an operator, and the partial sums over ``L ⊆ J`` (the
    operators behind ``u -> sum f(sigma_L z ⊗ u)``) come from one zeta
    transform; by linearity they are the reconstructions of the partial-sum
    oracles. ``k = 0`` takes no samples and returns the single operator.
    """
    if k == 0:
        top = reconstruct_operator(restrict_to_tail(f_oracle, None), d)
        return OperatorPhiFamily(0, d, {}, top)
    if not z_samples:
        raise ValueError("need at least one qubit sample for k >= 1")
    full = full_mask(k)
    tables = {m: {} for m in range(full)}
    top = None
    for z in z_samples:
        if len(z.factors) != k or any(f.dim != 2 for f in z.factors):
            raise ShapeMismatch(f"sample signature {z.signature} is not {k} qubits")
        if z.flip_mask:
            raise ShapeMismatch("qubit samples must lie in F^k (no flipped factors)")
        alpha = np.array([
            reconstruct_operator(restrict_to_tail(f_oracle, apply_sigma_mask(z, sub)), d).matrix
            for sub in range(full + 1)
        ])
        beta = mobius_accumulate(alpha, k)
        if top is None:
            top = beta[full]
        elif np.linalg.norm(beta[full] - top) > tol:
            raise InconsistentOracle("full-set operators differ between samples")
        for m in range(full):
            key = tau_project(z, m)
            op = (beta[m] + beta[m].conj().T) / 2
            op.setflags(write=False)
            old = tables[m].setdefault(key, op)
            if np.linalg.norm(old - op) > tol:
                raise InconsistentOracle(f"phi_{mask_indices(m)} differs at equal coordinates")
    top = HermitianOperator((top + top.conj().T) / 2)
    return OperatorPhiFamily(k, d, {m: TableOperatorPhi(t) for m, t in tables.items()}, top)


@dataclass
class ReconstructionReport:
    samples: int
    probes: int
    max_residual: float
    per_sample: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"samples": self.samples, "probes": self.probes,
                "max_residual": self.max_residual, "per_sample": list(self.per_sample)}


def reconstruction_residuals(recovered: OperatorPhiFamily, f_oracle: Callable,
                             z_samples: Optional[Sequence[ProductState]], probes: int,
                             rng: np.random.Generator) -> ReconstructionReport:
    """Compare the recovered family with the oracle at fresh tail states.

    Every sampled ``z`` is tested at each flip ``sigma_J(z)`` against
    ``probes`` random tail states.
    """
    k, d = recovered.k, recovered.d
    zs = [None] if k == 0 else list(z_samples)
    per = []
    for z in zs:
        worst = 0.0
        flips = [None] if z is None else [apply_sigma_mask(z, m) for m in range(full_mask(k) + 1)]
        for zj in flips:
            for u in _random_states(d, probes, rng):
                worst = max(worst, abs(evaluate_general(recovered, zj, u) - f_oracle(zj, u)))
        per.append(worst)
    return ReconstructionReport(len(zs), probes, max(per), per)
