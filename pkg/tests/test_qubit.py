import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uff.errors import NotUnitNorm
from uff.qubit import (
    INF,
    CanonicalQubit,
    canonicalize,
    in_fundamental_domain,
    point_to_vector,
    sigma_point,
    sigma_vector,
    vector_to_point,
)

s2 = 1 / math.sqrt(2)

finite = st.builds(complex, st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))


def off_circle(margin=1e-9):
    return finite.filter(lambda z: abs(abs(z) - 1.0) > margin)


def interior_bases(margin=1e-9):
    return st.builds(complex, st.floats(-1, 1), st.floats(-1, 1)).filter(lambda z: abs(z) < 1 - margin)


# -- sigma_point --------------------------------------------------------------

def test_sigma_point_zero_is_infinity():
    assert sigma_point(0) is INF
    assert sigma_point(INF) == 0


def test_sigma_point_on_circle_is_negation():
    assert sigma_point(1j) == -1j


def test_sigma_point_two():
    assert sigma_point(2) == -0.5


@given(finite)
def test_sigma_point_involution(z):
    back = sigma_point(sigma_point(z))
    if z == 0:
        assert back == 0
    else:
        assert abs(back - z) <= 4e-16 * abs(z) + 1e-300


# -- sigma_vector -------------------------------------------------------------

def test_sigma_vector_examples():
    np.testing.assert_array_equal(sigma_vector([1, 0]), [0, 1])
    np.testing.assert_array_equal(sigma_vector([0, 1]), [-1, 0])
    np.testing.assert_allclose(sigma_vector([s2, 1j * s2]), [1j * s2, s2], atol=1e-15)


def test_sigma_vector_rejects_non_unit():
    with pytest.raises(NotUnitNorm):
        sigma_vector([1, 1])


@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_sigma_vector_orthogonal_and_squares_to_minus_one(x, y):
    v = np.array([x, y])
    if np.linalg.norm(v) < 1e-3:
        return
    v = v / np.linalg.norm(v)
    w = sigma_vector(v)
    assert abs(np.vdot(v, w)) <= 1e-15
    np.testing.assert_allclose(sigma_vector(w), -v, atol=1e-15)


# -- fundamental domain -------------------------------------------------------

@pytest.mark.parametrize("p, expected", [
    (0, True), (INF, False), (-1j, False), (1j, True), (1, True), (-1, False), (0.3 + 0.1j, True), (2, False),
])
def test_membership(p, expected):
    assert in_fundamental_domain(p) is expected


@given(off_circle())
def test_partition(z):
    assert in_fundamental_domain(z) != in_fundamental_domain(sigma_point(z))


def test_partition_special_points():
    for p in (0, INF, 1, -1, 1j, -1j):
        assert in_fundamental_domain(p) != in_fundamental_domain(sigma_point(p))


# -- canonicalize -------------------------------------------------------------

def test_canonicalize_examples():
    assert canonicalize(0.3 + 0.1j) == CanonicalQubit(0.3 + 0.1j, False)
    assert canonicalize(INF) == CanonicalQubit(0, True)
    assert canonicalize(-1) == CanonicalQubit(1, True)


@given(off_circle())
def test_canonicalize_base_in_domain(z):
    q = canonicalize(z)
    assert in_fundamental_domain(q.base)
    assert q.flipped is not in_fundamental_domain(z)


# -- vectors ------------------------------------------------------------------

def test_point_to_vector_examples():
    np.testing.assert_array_equal(point_to_vector(CanonicalQubit(0, False)), [0, 1])
    np.testing.assert_array_equal(point_to_vector(CanonicalQubit(0, True)), [-1, 0])
    np.testing.assert_allclose(point_to_vector(CanonicalQubit(1, False)), [s2, s2], atol=1e-15)
    assert vector_to_point(point_to_vector(CanonicalQubit(0, True))) is INF


def test_vector_to_point_examples():
    assert vector_to_point([1, 0]) is INF
    assert vector_to_point([s2, s2]) == pytest.approx(1, abs=1e-15)


def test_vector_to_point_phase_invariant():
    v = np.array([0.6, 0.8j])
    phase = cmath.exp(2.1j)
    assert abs(vector_to_point(phase * v) - vector_to_point(v)) <= 1e-12


@given(interior_bases(), st.booleans())
def test_round_trip(base, flipped):
    q = CanonicalQubit(base, flipped)
    v = point_to_vector(q)
    assert abs(np.linalg.norm(v) - 1) <= 1e-12
    back = canonicalize(vector_to_point(v))
    assert back.flipped == flipped
    assert abs(back.base - base) <= 1e-12


@given(interior_bases(), st.booleans())
def test_flip_gives_orthogonal_vector(base, flipped):
    q = CanonicalQubit(base, flipped)
    assert abs(np.vdot(point_to_vector(q), point_to_vector(q.flip()))) <= 1e-12
