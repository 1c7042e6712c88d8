import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from uff.errors import InvalidUOB, MalformedTree
from uff.product import expand_to_full_vector
from uff.qubit import CanonicalQubit
from uff.uob import (
    UOB,
    Leaf,
    Node,
    SplitTree,
    computational_basis,
    expand_tree,
    generate_generic,
    generate_product_basis,
    generate_split,
    permute_factors,
    require_valid,
    validate_uob,
)

seeds = st.integers(0, 2**32 - 1)


def gram_error(basis):
    """Independent oracle: ``|| V^H V - I ||_max`` on full Kronecker vectors."""
    v = np.stack([expand_to_full_vector(s) for s in basis.states], axis=1)
    return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))


def test_computational_basis_passes():
    rep = validate_uob(computational_basis((2, 2)))
    assert rep.passed and rep.max_offdiag == 0 and rep.count == 4


def test_duplicated_vector_fails():
    b = computational_basis((2, 2))
    dup = UOB(b.states[:3] + (b.states[0],), b.signature)
    rep = validate_uob(dup)
    assert not rep.passed
    assert rep.max_offdiag == pytest.approx(1.0)
    with pytest.raises(InvalidUOB):
        require_valid(dup)


def test_missing_vector_fails():
    b = computational_basis((2, 3))
    rep = validate_uob(UOB(b.states[:-1], b.signature))
    assert not rep.passed
    assert any("count" in p for p in rep.problems)


def test_split_seed_42():
    b = expand_tree(generate_split(4, (), np.random.default_rng(42)))
    rep = validate_uob(b)
    assert rep.passed and rep.max_offdiag <= 1e-12
    assert gram_error(b) <= 1e-12


def test_generic_small_cases():
    t = generate_generic(1, np.random.default_rng(0))
    a = t.root.a
    b = expand_tree(t)
    assert [s.factors[0].canonical for s in b] == [a, a.flip()]

    t = generate_generic(2, np.random.default_rng(1))
    a, b1, b2 = t.root.a, t.root.left.a, t.root.right.a
    got = [tuple(f.canonical for f in s.factors) for s in expand_tree(t)]
    assert got == [(a, b1), (a, b1.flip()), (a.flip(), b2), (a.flip(), b2.flip())]


def test_split_with_tail():
    b = expand_tree(generate_split(2, (3,), np.random.default_rng(3)))
    assert len(b) == 12 and b.signature == (2, 2, 3)
    assert validate_uob(b).passed
    assert gram_error(b) <= 1e-12


def test_split_tail_is_flattened():
    b = expand_tree(generate_split(1, (2, 3), np.random.default_rng(4)))
    assert b.signature == (2, 6)
    assert validate_uob(b).passed


def test_split_n1_is_pair():
    b = expand_tree(generate_split(1, (), np.random.default_rng(9)))
    assert b.states[0].factors[0].canonical.flip() == b.states[1].factors[0].canonical


def test_product_basis():
    b = generate_product_basis((2, 3), np.random.default_rng(0))
    assert len(b) == 6 and validate_uob(b).passed
    b = generate_product_basis((2,), np.random.default_rng(0))
    assert b.states[0].factors[0].canonical.flip() == b.states[1].factors[0].canonical
    c = computational_basis((2, 2))
    np.testing.assert_array_equal(np.stack([expand_to_full_vector(s) for s in c]), np.eye(4))


def test_single_node_tree():
    a = CanonicalQubit(0.25 + 0.5j)
    b = expand_tree(SplitTree(1, Node(1, a, Leaf(0), Leaf(0))))
    assert [s.factors[0].canonical for s in b] == [a, a.flip()]


def test_malformed_trees():
    a = CanonicalQubit(0.1)
    with pytest.raises(MalformedTree):
        expand_tree(SplitTree(2, Node(1, a, Leaf(0), Leaf(0))))
    with pytest.raises(MalformedTree):
        expand_tree(SplitTree(1, Node(1, a, Node(1, a, Leaf(0), Leaf(0)), Leaf(0))))
    with pytest.raises(MalformedTree):
        expand_tree(SplitTree(1, Node(2, a, Leaf(0), Leaf(0))))


@settings(max_examples=50)
@given(seeds, st.integers(1, 5))
def test_generic_equals_fixed_order_split(seed, n):
    g = expand_tree(generate_generic(n, np.random.default_rng(seed)))
    s = expand_tree(generate_split(n, (), np.random.default_rng(seed), fixed_order=True))
    for x, y in zip(g, s):
        assert [f.canonical for f in x.factors] == [f.canonical for f in y.factors]


@settings(max_examples=60)
@given(seeds, st.integers(1, 5), st.sampled_from([(), (2,), (3,)]))
def test_generated_bases_are_orthonormal(seed, n, tail):
    rng = np.random.default_rng(seed)
    for b in (expand_tree(generate_split(n, tail, rng)),
              expand_tree(generate_generic(n, rng)),
              generate_product_basis((2,) * n + tail, rng)):
        rep = validate_uob(b)
        assert rep.passed, rep.problems
        assert gram_error(b) <= 1e-12


def test_thousand_seeds_pass():
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        n = 1 + seed % 4
        assert validate_uob(expand_tree(generate_split(n, (), rng))).passed


@settings(max_examples=30)
@given(seeds, st.permutations([0, 1, 2]))
def test_permutation_invariance(seed, perm):
    b = expand_tree(generate_split(2, (3,), np.random.default_rng(seed)))
    p = permute_factors(b, perm)
    assert p.signature == tuple(b.signature[i] for i in perm)
    assert validate_uob(p).passed

