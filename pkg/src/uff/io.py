"""
JSON encodings.

Complex numbers are ``[re, im]`` pairs (``{"re", "im"}`` objects for
projective points, with the string ``"inf"`` for infinity) and subsets are
sorted 1-based index arrays. Top-level documents carry ``"format": 1``.
Decoders raise :class:`FormatError` naming the offending path.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FormatError, UFFError
from .frame import ConstantPhi, PhiFamily, PolyPhi, PrfPhi, TablePhi
from .general import (
    ConstantOperatorPhi,
    HermitianOperator,
    OperatorPhiFamily,
    PrfOperatorPhi,
    TableOperatorPhi,
)
from .product import FactorState, ProductState, full_mask, mask_from_indices, mask_indices
from .qubit import INF, CanonicalQubit, point_to_vector
from .uob import UOB, Leaf, Node, SplitTree

FORMAT = 1


# -- scalars -----------------------------------------------------------------

def point_to_json(p):
    if p is INF:
        return "inf"
    p = complex(p)
    return {"re": p.real, "im": p.imag}


def point_from_json(obj, path="$"):
    if obj == "inf":
        return INF
    if not isinstance(obj, dict):
        raise FormatError(path, "expected {'re', 'im'} or 'inf'")
    return complex(_num(obj, "re", path), _num(obj, "im", path))


def _num(obj, key, path):
    if key not in obj:
        raise FormatError(f"{path}.{key}", "missing field")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{path}.{key}", f"expected a number, got {value!r}")
    return float(value)


def _field(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise FormatError(path, "expected an object")
    if key not in obj:
        raise FormatError(f"{path}.{key}", "missing field")
    value = obj[key]
    if kind is not None and (not isinstance(value, kind) or (kind is int and isinstance(value, bool))):
        raise FormatError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}, got {value!r}")
    return value


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(obj, path):
    if (not isinstance(obj, (list, tuple)) or len(obj) != 2
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in obj)):
        raise FormatError(path, f"expected [re, im], got {obj!r}")
    return complex(float(obj[0]), float(obj[1]))


def canonical_to_json(q: CanonicalQubit):
    return {"base": point_to_json(q.base), "flipped": bool(q.flipped)}


def canonical_from_json(obj, path="$"):
    base = point_from_json(_field(obj, "base", path), f"{path}.base")
    if base is INF:
        raise FormatError(f"{path}.base", "canonical base must be finite")
    return CanonicalQubit(base, _field(obj, "flipped", path, bool))


def mask_to_json(mask: int):
    return mask_indices(mask)


def mask_from_json(obj, path="$"):
    if not isinstance(obj, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in obj):
        raise FormatError(path, f"expected a list of 1-based positions, got {obj!r}")
    try:
        return mask_from_indices(obj)
    except ValueError as exc:
        raise FormatError(path, str(exc)) from None


# -- states and bases --------------------------------------------------------

def factor_to_json(f: FactorState):
    out = {"dim": f.dim, "amps": [complex_to_json(a) for a in f.amps]}
    if f.canonical is not None:
        out["canonical"] = canonical_to_json(f.canonical)
    return out


def factor_from_json(obj, path="$"):
    dim = _field(obj, "dim", path, int)
    amps_obj = _field(obj, "amps", path, list)
    if len(amps_obj) != dim:
        raise FormatError(f"{path}.amps", f"expected {dim} amplitudes, got {len(amps_obj)}")
    amps = np.array([complex_from_json(a, f"{path}.amps[{i}]") for i, a in enumerate(amps_obj)])
    canonical = None
    if "canonical" in obj:
        if dim != 2:
            raise FormatError(f"{path}.canonical", "only qubit factors carry canonical data")
        canonical = canonical_from_json(obj["canonical"], f"{path}.canonical")
        # amplitudes and canonical data must describe the same ray
        overlap = abs(np.vdot(point_to_vector(canonical), amps))
        if abs(overlap - 1.0) > 1e-12:
            raise FormatError(f"{path}.canonical", "does not match the amplitudes")
    try:
        return FactorState(amps, canonical)
    except UFFError as exc:
        raise FormatError(path, str(exc)) from None


def product_state_to_json(s: ProductState):
    return {"factors": [factor_to_json(f) for f in s.factors]}


def product_state_from_json(obj, path="$"):
    factors = _field(obj, "factors", path, list)
    if not factors:
        raise FormatError(f"{path}.factors", "empty")
    return ProductState(tuple(factor_from_json(f, f"{path}.factors[{i}]") for i, f in enumerate(factors)))


def uob_to_json(basis: UOB):
    return {"format": FORMAT, "signature": list(basis.signature),
            "states": [product_state_to_json(s) for s in basis.states]}


def uob_from_json(obj, path="$"):
    sig = _field(obj, "signature", path, list)
    states = _field(obj, "states", path, list)
    parsed = tuple(product_state_from_json(s, f"{path}.states[{i}]") for i, s in enumerate(states))
    for i, s in enumerate(parsed):
        if list(s.signature) != sig:
            raise FormatError(f"{path}.states[{i}]", f"signature {list(s.signature)} != {sig}")
    return UOB(parsed, tuple(sig))


def _tree_node_to_json(node):
    if isinstance(node, Leaf):
        return {"leaf": node.tail_basis_id}
    return {"qubit": node.qubit_index, "a": canonical_to_json(node.a),
            "left": _tree_node_to_json(node.left), "right": _tree_node_to_json(node.right)}


def _tree_node_from_json(obj, path):
    if isinstance(obj, dict) and "leaf" in obj:
        return Leaf(_field(obj, "leaf", path, int))
    return Node(_field(obj, "qubit", path, int), canonical_from_json(_field(obj, "a", path), f"{path}.a"),
                _tree_node_from_json(_field(obj, "left", path), f"{path}.left"),
                _tree_node_from_json(_field(obj, "right", path), f"{path}.right"))


def split_tree_to_json(tree: SplitTree):
    return {"format": FORMAT, "n": tree.n, "tail_dim": tree.tail_dim,
            "root": _tree_node_to_json(tree.root),
            "tail_bases": [[[complex_to_json(x) for x in row] for row in b] for b in tree.tail_bases]}


def split_tree_from_json(obj, path="$"):
    n = _field(obj, "n", path, int)
    tail_dim = _field(obj, "tail_dim", path, int)
    bases = []
    for i, b in enumerate(_field(obj, "tail_bases", path, list)):
        rows = [[complex_from_json(x, f"{path}.tail_bases[{i}][{r}][{c}]") for c, x in enumerate(row)]
                for r, row in enumerate(b)]
        bases.append(np.array(rows, dtype=complex).reshape(tail_dim, tail_dim))
    root = _tree_node_from_json(_field(obj, "root", path), f"{path}.root")
    return SplitTree(n, root, tail_dim, tuple(bases))


# -- phi families ------------------------------------------------------------

def _coords_to_json(coords):
    return [point_to_json(z) for z in coords]


def _coords_from_json(obj, path):
    if not isinstance(obj, list):
        raise FormatError(path, "expected a list of points")
    return tuple(point_from_json(p, f"{path}[{i}]") for i, p in enumerate(obj))


def phi_family_to_json(family: PhiFamily):
    entries = []
    for m in range(full_mask(family.n)):
        phi = family.phi[m]
        entry = {"mask": mask_to_json(m), "kind": getattr(phi, "kind", None)}
        if isinstance(phi, PrfPhi):
            entry.update(params=phi.params(), seed=phi.seed)
        elif isinstance(phi, (ConstantPhi, PolyPhi)):
            entry["params"] = phi.params()
        elif isinstance(phi, TablePhi):
            entry["params"] = {"points": [{"coords": _coords_to_json(k), "value": v}
                                          for k, v in phi.table.items()]}
        else:
            raise TypeError(f"phi for {mask_indices(m)} is a caller hook and cannot be serialized")
        entries.append(entry)
    return {"format": FORMAT, "n": family.n, "c": family.c, "families": entries}


def _phi_from_entry(entry, path):
    kind = _field(entry, "kind", path, str)
    params = entry.get("params", {})
    if not isinstance(params, dict):
        raise FormatError(f"{path}.params", "expected an object")
    pp = f"{path}.params"
    if kind == "constant":
        return ConstantPhi(_num(params, "value", pp))
    if kind == "poly":
        linear = tuple(tuple(float(x) for x in pair) for pair in params.get("linear", []))
        quad = tuple(float(x) for x in params.get("quad", []))
        return PolyPhi(float(params.get("const", 0.0)), linear, quad)
    if kind == "prf":
        seed = _field(entry, "seed", path, int)
        return PrfPhi(seed, float(params.get("low", 0.0)), float(params.get("high", 1.0)))
    if kind == "table":
        table = {}
        for i, pt in enumerate(_field(params, "points", pp, list)):
            table[_coords_from_json(_field(pt, "coords", f"{pp}.points[{i}]"), f"{pp}.points[{i}].coords")] = \
                _num(pt, "value", f"{pp}.points[{i}]")
        return TablePhi(table)
    raise FormatError(f"{path}.kind", f"unknown kind {kind!r}")


def _collect_entries(obj, path):
    phi = {}
    for i, entry in enumerate(_field(obj, "families", path, list)):
        ep = f"{path}.families[{i}]"
        mask = mask_from_json(_field(entry, "mask", ep), f"{ep}.mask")
        if mask in phi:
            raise FormatError(f"{ep}.mask", "duplicate subset")
        phi[mask] = (entry, ep)
    return phi


def phi_family_from_json(obj, path="$"):
    n = _field(obj, "n", path, int)
    c = _num(obj, "c", path)
    raw = _collect_entries(obj, path)
    full = full_mask(n)
    for m in range(full):
        if m not in raw:
            raise FormatError(f"{path}.families", f"no entry for subset {mask_indices(m)}")
    extra = [m for m in raw if m > full - 1]
    if extra:
        raise FormatError(raw[extra[0]][1], "subset outside the proper subsets of 1..n")
    return PhiFamily(n, c, {m: _phi_from_entry(e, p) for m, (e, p) in raw.items()})


def hermitian_to_json(a: HermitianOperator):
    return {"d": a.d, "entries": [[complex_to_json(x) for x in row] for row in a.matrix]}


def hermitian_from_json(obj, path="$"):
    d = _field(obj, "d", path, int)
    rows = _field(obj, "entries", path, list)
    if len(rows) != d or any(not isinstance(r, list) or len(r) != d for r in rows):
        raise FormatError(f"{path}.entries", f"expected a {d}x{d} array")
    m = [[complex_from_json(x, f"{path}.entries[{r}][{c}]") for c, x in enumerate(row)]
         for r, row in enumerate(rows)]
    try:
        return HermitianOperator(m)
    except UFFError as exc:
        raise FormatError(f"{path}.entries", str(exc)) from None


def operator_family_to_json(family: OperatorPhiFamily):
    entries = []
    for m in range(full_mask(family.k)):
        phi = family.phi[m]
        entry = {"mask": mask_to_json(m), "kind": getattr(phi, "kind", None)}
        if isinstance(phi, PrfOperatorPhi):
            entry.update(params=phi.params(), seed=phi.seed)
        elif isinstance(phi, ConstantOperatorPhi):
            entry["params"] = {"operator": hermitian_to_json(phi.operator)}
        elif isinstance(phi, TableOperatorPhi):
            entry["params"] = {"points": [{"coords": _coords_to_json(k),
                                           "operator": hermitian_to_json(HermitianOperator(v))}
                                          for k, v in phi.table.items()]}
        else:
            raise TypeError(f"phi for {mask_indices(m)} is a caller hook and cannot be serialized")
        entries.append(entry)
    entries.append({"mask": mask_to_json(full_mask(family.k)), "kind": "constant",
                    "params": {"operator": hermitian_to_json(family.top)}})
    return {"format": FORMAT, "k": family.k, "d": family.d, "families": entries}


def _operator_phi_from_entry(entry, path, d):
    kind = _field(entry, "kind", path, str)
    params = entry.get("params", {})
    pp = f"{path}.params"
    if kind == "constant":
        return ConstantOperatorPhi(hermitian_from_json(_field(params, "operator", pp), f"{pp}.operator"))
    if kind == "prf":
        return PrfOperatorPhi(_field(entry, "seed", path, int), d, float(params.get("scale", 1.0)))
    if kind == "table":
        table = {}
        for i, pt in enumerate(_field(params, "points", pp, list)):
            q = f"{pp}.points[{i}]"
            op = hermitian_from_json(_field(pt, "operator", q), f"{q}.operator").matrix
            table[_coords_from_json(_field(pt, "coords", q), f"{q}.coords")] = op
        return TableOperatorPhi(table)
    raise FormatError(f"{path}.kind", f"unknown kind {kind!r}")


def operator_family_from_json(obj, path="$"):
    k = _field(obj, "k", path, int)
    d = _field(obj, "d", path, int)
    raw = _collect_entries(obj, path)
    full = full_mask(k)
    for m in range(full + 1):
        if m not in raw:
            raise FormatError(f"{path}.families", f"no entry for subset {mask_indices(m)}")
    top_entry, top_path = raw.pop(full)
    top = _operator_phi_from_entry(top_entry, top_path, d)
    if not isinstance(top, ConstantOperatorPhi):
        raise FormatError(f"{top_path}.kind", "the full-set entry must be a constant operator")
    phi = {m: _operator_phi_from_entry(e, p, d) for m, (e, p) in raw.items()}
    try:
        return OperatorPhiFamily(k, d, phi, top.operator)
    except (UFFError, ValueError) as exc:
        raise FormatError(path, str(exc)) from None


# -- files -------------------------------------------------------------------

def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def read_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(str(path), f"cannot read: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    if isinstance(obj, dict) and "format" in obj and obj["format"] != FORMAT:
        raise FormatError(f"{path}.format", f"unsupported format {obj['format']!r}")
    return obj
