"""
Unentangled orthonormal bases (UOBs).

Bases are built from split trees: a node fixes one qubit to ``a`` on the left
branch and to ``sigma(a)`` on the right, and each leaf contributes one
orthonormal basis of the (flattened) non-qubit tail. Splitting always on the
first free qubit gives the generic recursive family
``{a ⊗ B1, â ⊗ B2}``; letting each node pick its own qubit gives UOBs
outside that family once ``n >= 3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InvalidUOB, MalformedTree, ShapeMismatch
from .product import FactorState, ProductState
from .qubit import CanonicalQubit, sample_fundamental

NODE_MARGIN = 1e-6


@dataclass(frozen=True)
class Leaf:
    tail_basis_id: int


@dataclass(frozen=True)
class Node:
    qubit_index: int  # 1-based
    a: CanonicalQubit
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Node]


@dataclass(frozen=True, eq=False)
class SplitTree:
    """Blueprint of a UOB on ``n`` qubits times a tail of dimension ``tail_dim``.

    ``tail_bases[i]`` is a unitary whose columns are the tail basis used by
    leaves with ``tail_basis_id == i``. A tail of dimension 1 contributes no
    factor to the expanded states.
    """

    n: int
    root: TreeNode
    tail_dim: int = 1
    tail_bases: tuple = field(default_factory=lambda: (np.eye(1, dtype=complex),))


@dataclass(frozen=True, eq=False)
class UOB:
    states: tuple
    signature: tuple

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)


@dataclass
class ValidationReport:
    count: int
    expected_count: int
    max_norm_residual: float
    max_offdiag: float
    max_factorwise_overlap: float
    tolerance: float
    passed: bool
    problems: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "expected_count": self.expected_count,
            "max_norm_residual": self.max_norm_residual,
            "max_offdiag": self.max_offdiag,
            "max_factorwise_overlap": self.max_factorwise_overlap,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "problems": list(self.problems),
        }


def make_uob(states: Sequence[ProductState]) -> UOB:
    states = tuple(states)
    if not states:
        raise ShapeMismatch("empty basis")
    sig = states[0].signature
    for s in states:
        if s.signature != sig:
            raise ShapeMismatch(f"mixed signatures {sig} and {s.signature}")
    return UOB(states, sig)


def validate_uob(candidate: UOB, tol: float = 1e-9) -> ValidationReport:
    """Count, norm and pairwise orthogonality checks.

    A pair counts as orthogonal when some factor overlap is at most ``tol``.
    ``max_offdiag`` is the largest full inner product modulus between
    distinct states.
    """
    sig = tuple(candidate.signature)
    expected = math.prod(sig)
    states = candidate.states
    count = len(states)
    problems = []
    if count != expected:
        problems.append(f"count {count} != {expected}")
    if any(s.signature != sig for s in states):
        problems.append("state signatures differ from the basis signature")
        return ValidationReport(count, expected, math.inf, math.inf, math.inf, tol, False, problems)

    full = np.ones((count, count))
    factorwise = np.full((count, count), np.inf)
    norm_res = np.zeros(count)
    for pos in range(len(sig)):
        amps = np.array([s.factors[pos].amps for s in states])
        gram = np.abs(amps.conj() @ amps.T)
        norm_res = np.maximum(norm_res, np.abs(np.diag(gram) - 1.0))
        full *= gram
        factorwise = np.minimum(factorwise, gram)
    off = ~np.eye(count, dtype=bool)
    max_off = float(full[off].max()) if count > 1 else 0.0
    max_fw = float(factorwise[off].max()) if count > 1 else 0.0
    max_norm = float(norm_res.max()) if count else 0.0
    if max_norm > tol:
        problems.append(f"norm residual {max_norm:.3e} > {tol:.1e}")
    if max_fw > tol:
        problems.append(f"non-orthogonal pair, factorwise overlap {max_fw:.3e}")
    return ValidationReport(count, expected, max_norm, max_off, max_fw, tol, not problems, problems)


def require_valid(basis: UOB, tol: float = 1e-9) -> ValidationReport:
    report = validate_uob(basis, tol)
    if not report.passed:
        raise InvalidUOB("; ".join(report.problems))
    return report


# -- generators --------------------------------------------------------------

def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Gaussian matrix."""
    g = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / math.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def _build(n, tail_dim, rng, random_order):
    tail_bases = []

    def leaf():
        if tail_dim == 1:
            basis = np.eye(1, dtype=complex)
        else:
            basis = random_unitary(tail_dim, rng)
        tail_bases.append(basis)
        return Leaf(len(tail_bases) - 1)

    def grow(free):
        if not free:
            return leaf()
        if random_order:
            idx = free[int(rng.integers(len(free)))]
        else:
            idx = free[0]
        a = CanonicalQubit(sample_fundamental(rng, NODE_MARGIN), False)
        rest = [i for i in free if i != idx]
        left = grow(rest)
        right = grow(rest)
        return Node(idx, a, left, right)

    root = grow(list(range(1, n + 1)))
    return SplitTree(n, root, tail_dim, tuple(tail_bases))


def generate_generic(n: int, rng: np.random.Generator) -> SplitTree:
    """Generic recursive UOB tree: split qubit 1, then 2, and so on."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _build(n, 1, rng, random_order=False)


def generate_split(n: int, tail_dims: Sequence[int] = (), rng: Optional[np.random.Generator] = None,
                   fixed_order: bool = False) -> SplitTree:
    """Split tree where every node chooses a random unused qubit.

    Each leaf gets an independent Haar basis of the tail, whose dimension is
    the product of ``tail_dims``. With ``fixed_order=True`` and no tail this
    reproduces :func:`generate_generic` for the same generator state.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if rng is None:
        rng = np.random.default_rng()
    tail_dim = math.prod(tail_dims)
    return _build(n, tail_dim, rng, random_order=not fixed_order)


def expand_tree(tree: SplitTree) -> UOB:
    """Depth-first expansion, left before right, tail vectors in column order."""
    n = tree.n
    states = []
    cache = {}

    def qubit(q):
        if q not in cache:
            cache[q] = FactorState.from_canonical(q)
        return cache[q]

    def walk(node, assigned):
        if isinstance(node, Leaf):
            missing = [i for i in range(1, n + 1) if i not in assigned]
            if missing:
                raise MalformedTree(f"leaf path never splits qubits {missing}")
            qubits = [qubit(assigned[i]) for i in range(1, n + 1)]
            if tree.tail_dim == 1:
                states.append(ProductState(tuple(qubits)))
                return
            basis = tree.tail_bases[node.tail_basis_id]
            for j in range(tree.tail_dim):
                states.append(ProductState(tuple(qubits) + (FactorState(basis[:, j]),)))
            return
        i = node.qubit_index
        if not 1 <= i <= n:
            raise MalformedTree(f"qubit index {i} outside 1..{n}")
        if i in assigned:
            raise MalformedTree(f"qubit {i} split twice on one path")
        if node.a.flipped:
            raise MalformedTree("node points must be unflipped")
        walk(node.left, {**assigned, i: node.a})
        walk(node.right, {**assigned, i: node.a.flip()})

    walk(tree.root, {})
    sig = (2,) * n + ((tree.tail_dim,) if tree.tail_dim > 1 else ())
    return UOB(tuple(states), sig)


def generate_product_basis(dims: Sequence[int], rng: np.random.Generator) -> UOB:
    """Tensor product of independent random bases, one per factor.

    Qubit factors use a pair ``{a, sigma(a)}`` with ``a`` in F.
    """
    per_factor = []
    for d in dims:
        if d < 1:
            raise ValueError(f"dimension {d} < 1")
        if d == 2:
            a = CanonicalQubit(sample_fundamental(rng, NODE_MARGIN), False)
            per_factor.append([FactorState.from_canonical(a), FactorState.from_canonical(a.flip())])
        else:
            u = random_unitary(d, rng)
            per_factor.append([FactorState(u[:, j]) for j in range(d)])
    return _tensor_bases(per_factor, tuple(dims))


def computational_basis(dims: Sequence[int]) -> UOB:
    per_factor = [[FactorState(np.eye(d)[:, j]) for j in range(d)] for d in dims]
    return _tensor_bases(per_factor, tuple(dims))


def _tensor_bases(per_factor, sig):
    states = [()]
    for choices in per_factor:
        states = [s + (f,) for s in states for f in choices]
    return UOB(tuple(ProductState(s) for s in states), sig)


def permute_factors(basis: UOB, perm: Sequence[int]) -> UOB:
    """Reorder tensor factors; ``perm[i]`` is the old index of new factor ``i``."""
    states = tuple(ProductState(tuple(s.factors[p] for p in perm)) for s in basis.states)
    return UOB(states, tuple(basis.signature[p] for p in perm))
