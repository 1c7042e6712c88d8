import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uff import io
from uff.errors import FormatError
from uff.frame import PolyPhi, PhiFamily, constant_family, evaluate, prf_family, random_canonical_state, recover_phi
from uff.general import evaluate_general, prf_operator_family
from uff.product import apply_sigma_mask
from uff.qubit import INF, CanonicalQubit
from uff.uob import expand_tree, generate_split, validate_uob

finite = st.builds(complex, st.floats(allow_nan=False, allow_infinity=False),
                   st.floats(allow_nan=False, allow_infinity=False))


def via_text(obj):
    return json.loads(io.dumps(obj))


@given(finite)
def test_point_round_trip(z):
    assert io.point_from_json(via_text(io.point_to_json(z))) == z


def test_infinity_round_trip():
    assert io.point_from_json(via_text(io.point_to_json(INF))) is INF


@given(st.lists(st.integers(1, 20), unique=True))
def test_mask_round_trip(indices):
    m = sum(1 << (i - 1) for i in indices)
    assert io.mask_from_json(via_text(io.mask_to_json(m))) == m


def test_canonical_round_trip():
    q = CanonicalQubit(0.25 - 0.5j, True)
    assert io.canonical_from_json(via_text(io.canonical_to_json(q))) == q


def test_uob_round_trip_is_bit_exact():
    b = expand_tree(generate_split(3, (2,), np.random.default_rng(0)))
    back = io.uob_from_json(via_text(io.uob_to_json(b)))
    assert back.signature == b.signature and validate_uob(back).passed
    for x, y in zip(b, back):
        for fx, fy in zip(x.factors, y.factors):
            np.testing.assert_array_equal(fx.amps, fy.amps)
            assert fx.canonical == fy.canonical


def test_split_tree_round_trip():
    t = generate_split(3, (3,), np.random.default_rng(1))
    back = io.split_tree_from_json(via_text(io.split_tree_to_json(t)))
    for x, y in zip(expand_tree(t), expand_tree(back)):
        for fx, fy in zip(x.factors, y.factors):
            np.testing.assert_array_equal(fx.amps, fy.amps)


def test_phi_family_round_trips():
    rng = np.random.default_rng(2)
    fams = [
        prf_family(3, 5, c=0.5, low=-1, high=2),
        constant_family(2, {0: 0.1, 1: 0.2, 2: 0.3}),
        PhiFamily(1, 1.0, {0: PolyPhi(0.5, ((1.0, -1.0),), (0.25,))}),
    ]
    zs = [random_canonical_state(2, rng)]
    fams.append(recover_phi(lambda s: evaluate(fams[1], s), 2, zs))
    for fam in fams:
        back = io.phi_family_from_json(via_text(io.phi_family_to_json(fam)))
        z = zs[0] if fam.n == 2 else random_canonical_state(fam.n, rng)
        for j in range(1 << fam.n):
            s = apply_sigma_mask(z, j)
            assert evaluate(back, s) == evaluate(fam, s)


def test_operator_family_round_trip():
    fam = prf_operator_family(2, 3, 4, trace=0.5)
    back = io.operator_family_from_json(via_text(io.operator_family_to_json(fam)))
    assert back.c == fam.c
    rng = np.random.default_rng(3)
    z = apply_sigma_mask(random_canonical_state(2, rng), 0b10)
    u = expand_tree(generate_split(1, (3,), rng)).states[0].factors[1]
    assert evaluate_general(back, z, u) == evaluate_general(fam, z, u)


def test_dumps_is_stable():
    obj = io.phi_family_to_json(prf_family(2, 1))
    assert io.dumps(obj) == io.dumps(via_text(obj))
    assert io.dumps(obj).endswith("\n")


# -- diagnostics --------------------------------------------------------------

def test_bad_json_names_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"format": 1\n "n": 2}')
    with pytest.raises(FormatError) as exc:
        io.read_json(p)
    assert "bad.json:2:" in str(exc.value)


def test_unsupported_format(tmp_path):
    p = tmp_path / "f.json"
    p.write_text('{"format": 7}')
    with pytest.raises(FormatError, match="format"):
        io.read_json(p)


def test_missing_file(tmp_path):
    with pytest.raises(FormatError):
        io.read_json(tmp_path / "nope.json")


def test_missing_subset_is_named():
    obj = io.phi_family_to_json(prf_family(2, 1))
    del obj["families"][1]
    with pytest.raises(FormatError) as exc:
        io.phi_family_from_json(obj)
    assert exc.value.path == "$.families" and "[1]" in str(exc.value)


def test_bad_field_type_is_named():
    obj = io.phi_family_to_json(constant_family(1, {0: 0.2}))
    obj["families"][0]["params"]["value"] = "x"
    with pytest.raises(FormatError) as exc:
        io.phi_family_from_json(obj)
    assert "families[0]" in exc.value.path


def test_canonical_must_match_amplitudes():
    b = expand_tree(generate_split(1, (), np.random.default_rng(0)))
    obj = io.uob_to_json(b)
    obj["states"][0]["factors"][0]["canonical"]["flipped"] = True
    with pytest.raises(FormatError):
        io.uob_from_json(obj)


def test_non_hermitian_operator_rejected():
    obj = {"d": 2, "entries": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}
    with pytest.raises(FormatError, match="entries"):
        io.hermitian_from_json(obj)
