"""
Acceptance checks, one function per criterion.

Each check is deterministic in its seed and returns a plain dict with a
``pass`` flag, the measured metric and the tolerance it was held to. Wall
times are deliberately left out so reports are byte-reproducible; the test
suite times the calls itself.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .frame import (
    constant_family,
    evaluate,
    prf_family,
    random_canonical_state,
    recover_phi,
    scan_nonneg,
    uniform_family,
    verify_sum,
)
from .general import gleason_eval, general_oracle, prf_operator_family, random_hermitian, verify_general
from .harness import GENERATORS, make_basis, trial_rng
from .lattice import mobius_accumulate, mobius_invert
from .prf import derive_seed
from .product import apply_sigma_mask, full_mask, mask_from_indices, tau_project
from .qubit import INF, in_fundamental_domain, sigma_point
from .reconstruct import _random_states, reconstruct_operator, reconstruct_phi_operators
from .uob import Node, expand_tree, generate_split

FULL = "full"
QUICK = "quick"

# (criterion -> size knobs) at the two scales
SCALES = {
    FULL: dict(points=100_000, t3_families=50, t3_uobs=50, rt_families=50, rt_pairs=100,
               cor_uobs=50, mix_families=20, mix_uobs=50, tomo_targets=1000, rec_inputs=1000,
               scan_trials=200),
    QUICK: dict(points=5_000, t3_families=4, t3_uobs=4, rt_families=6, rt_pairs=20,
                cor_uobs=6, mix_families=2, mix_uobs=4, tomo_targets=50, rec_inputs=100,
                scan_trials=20),
}


def _result(cid, name, passed, metric, tolerance, **detail):
    return {"id": cid, "name": name, "pass": bool(passed), "metric": metric,
            "tolerance": tolerance, **detail}


def random_projective_points(count: int, rng: np.random.Generator, margin: float = 1e-9) -> list:
    """0, INF, then points with log-uniform modulus in ``[1e-4, 1e4]`` and
    uniform argument, kept ``margin`` away from the unit circle."""
    out = [0j, INF]
    while len(out) < count:
        need = count - len(out)
        r = 10.0 ** rng.uniform(-4, 4, size=need)
        theta = rng.uniform(0, 2 * math.pi, size=need)
        keep = np.abs(r - 1.0) >= margin
        z = r[keep] * np.exp(1j * theta[keep])
        out.extend(complex(w) for w in z)
    return out[:count]


def check_partition(seed: int, scale: str = FULL) -> dict:
    """1. Exactly one of ``p``, ``sigma(p)`` lies in F."""
    n = SCALES[scale]["points"]
    points = random_projective_points(n, np.random.default_rng(derive_seed(seed, 1)))
    good = sum(in_fundamental_domain(p) != in_fundamental_domain(sigma_point(p)) for p in points)
    return _result(1, "fundamental-domain partition", good == n, good / n, 1.0, samples=n)


def check_scalar_sums(seed: int, scale: str = FULL, ns=range(1, 7)) -> dict:
    """2. Scalar UOB sums equal ``c`` for PRF families on every generator."""
    cfg = SCALES[scale]
    tol = 1e-9
    worst = 0.0
    per_n = {}
    for n in ns:
        bases = {g: [make_basis(g, n, 1, trial_rng(derive_seed(seed, 2, n, gi), t))
                     for t in range(cfg["t3_uobs"])]
                 for gi, g in enumerate(GENERATORS)}
        w = 0.0
        for f in range(cfg["t3_families"]):
            fam = prf_family(n, derive_seed(seed, 2, n, 100 + f), c=1.0)
            for g in GENERATORS:
                for b in bases[g]:
                    w = max(w, verify_sum(fam, b, tol).residual)
        per_n[str(n)] = w
        worst = max(worst, w)
    return _result(2, "scalar UOB sums (all generators)", worst <= tol, worst, tol, per_n=per_n)


def naive_accumulate(alpha, n):
    return np.array([sum(alpha[m] for m in range(1 << n) if m & ~j == 0) for j in range(1 << n)])


def naive_invert(beta, n):
    return np.array([sum((-1) ** ((j ^ m).bit_count()) * beta[m] for m in range(1 << n) if m & ~j == 0)
                     for j in range(1 << n)])


def check_roundtrip(seed: int, scale: str = FULL) -> dict:
    """3. Phi recovery reproduces families; lattice transforms match the naive sums."""
    cfg = SCALES[scale]
    rng = np.random.default_rng(derive_seed(seed, 3))
    tol_phi, tol_lat = 1e-10, 1e-12
    phi_err = 0.0
    eval_err = 0.0
    for i in range(cfg["rt_families"]):
        n = 1 + i % 6
        fam = prf_family(n, derive_seed(seed, 3, i))
        nz = max(1, cfg["rt_pairs"] // 10)
        zs = [random_canonical_state(n, rng) for _ in range(nz)]
        rec = recover_phi(lambda s: evaluate(fam, s), n, zs)
        full = full_mask(n)
        phi_err = max(phi_err, abs(rec.c - fam.c))
        for _ in range(cfg["rt_pairs"]):
            z = zs[int(rng.integers(nz))]
            j = int(rng.integers(full + 1))
            if j == full:
                continue
            key = tau_project(z, j)
            phi_err = max(phi_err, abs(rec.phi[j](key) - fam.phi[j](key)))
            s = apply_sigma_mask(z, j)
            eval_err = max(eval_err, abs(evaluate(rec, s) - evaluate(fam, s)))
    lat_err = 0.0
    for n in range(0, 9):
        alpha = rng.uniform(-1, 1, size=1 << n)
        beta = mobius_accumulate(alpha, n)
        lat_err = max(lat_err,
                      np.max(np.abs(beta - naive_accumulate(alpha, n))),
                      np.max(np.abs(mobius_invert(beta, n) - alpha)),
                      np.max(np.abs(mobius_invert(alpha, n) - naive_invert(alpha, n))))
    lat_err = float(lat_err)
    ok = phi_err <= tol_phi and eval_err <= tol_phi and lat_err <= tol_lat
    return _result(3, "phi recovery and Mobius round trip", ok, max(phi_err, eval_err), tol_phi,
                   lattice_error=lat_err, lattice_tolerance=tol_lat)


def is_generic_tree(node, depth=1) -> bool:
    """True iff every node at depth ``i`` splits qubit ``i``."""
    if not isinstance(node, Node):
        return True
    return node.qubit_index == depth and is_generic_tree(node.left, depth + 1) \
        and is_generic_tree(node.right, depth + 1)


def splits_differ(node) -> bool:
    """Some node has children that split different qubits."""
    if not isinstance(node, Node):
        return False
    l, r = node.left, node.right
    if isinstance(l, Node) and isinstance(r, Node) and l.qubit_index != r.qubit_index:
        return True
    return splits_differ(l) or splits_differ(r)


def check_non_generic(seed: int, scale: str = FULL) -> dict:
    """4. UOB sums hold on split trees outside the generic family."""
    cfg = SCALES[scale]
    tol = 1e-10
    worst = 0.0
    used = {}
    for n in (3, 4):
        rng = np.random.default_rng(derive_seed(seed, 4, n))
        trees = []
        while len(trees) < cfg["cor_uobs"]:
            t = generate_split(n, (), rng)
            if splits_differ(t.root):
                trees.append(t)
        used[str(n)] = len(trees)
        for i, t in enumerate(trees):
            fam = prf_family(n, derive_seed(seed, 4, n, i))
            worst = max(worst, verify_sum(fam, expand_tree(t), tol).residual)
    return _result(4, "sums on non-generic split trees", worst <= tol, worst, tol, uobs=used)


def check_mixed(seed: int, scale: str = FULL) -> dict:
    """5. Operator-valued families sum to ``tr phi_full`` on split UOBs."""
    cfg = SCALES[scale]
    tol = 1e-9
    worst = 0.0
    per = {}
    for k, d in itertools.product((1, 2, 3), (1, 3, 4)):
        bases = [make_basis("split", k, d, trial_rng(derive_seed(seed, 5, k, d), t))
                 for t in range(cfg["mix_uobs"])]
        w = 0.0
        for f in range(cfg["mix_families"]):
            fam = prf_operator_family(k, d, derive_seed(seed, 5, k, d, f))
            for b in bases:
                w = max(w, verify_general(fam, b, tol).residual)
        per[f"{k},{d}"] = w
        worst = max(worst, w)
    return _result(5, "operator-valued UOB sums", worst <= tol, worst, tol, per_config=per)


def check_reconstruction(seed: int, scale: str = FULL) -> dict:
    """6. Tomography round trip and full operator-family recovery."""
    cfg = SCALES[scale]
    rng = np.random.default_rng(derive_seed(seed, 6))
    tol_tomo, tol_rec = 1e-9, 1e-8
    tomo = 0.0
    for i in range(cfg["tomo_targets"]):
        d = 1 + i % 8
        a = random_hermitian(d, rng)
        b = reconstruct_operator(lambda u: gleason_eval(a, u), d, rng=rng)
        tomo = max(tomo, float(np.linalg.norm(a.matrix - b.matrix)))
    k, d = 2, 3
    fam = prf_operator_family(k, d, derive_seed(seed, 6, 1))
    oracle = general_oracle(fam)
    zs = [random_canonical_state(k, rng) for _ in range(10)]
    rec = reconstruct_phi_operators(oracle, k, d, zs)
    rec_err = 0.0
    for u in _random_states(d, cfg["rec_inputs"], rng):
        z = apply_sigma_mask(zs[int(rng.integers(len(zs)))], int(rng.integers(1 << k)))
        rec_err = max(rec_err, abs(oracle(z, u) - general_oracle(rec)(z, u)))
    ok = tomo <= tol_tomo and rec_err <= tol_rec
    return _result(6, "operator reconstruction", ok, tomo, tol_tomo,
                   family_error=rec_err, family_tolerance=tol_rec)


def check_nonnegativity(seed: int, scale: str = FULL) -> dict:
    """7. The non-negativity scan flags the violating family and passes the uniform one."""
    trials = SCALES[scale]["scan_trials"]
    rng = np.random.default_rng(derive_seed(seed, 7))
    values = {0: 0.9, mask_from_indices([1]): 0.2, mask_from_indices([2]): 0.2}
    bad = scan_nonneg(constant_family(2, values, c=1.0), trials, rng)
    uniform = {}
    ok = not bad.candidate and math.isclose(bad.min_value, -0.7, abs_tol=1e-12)
    for n in (1, 2, 3):
        rep = scan_nonneg(uniform_family(n), trials, rng)
        uniform[str(n)] = rep.min_value
        ok = ok and rep.candidate and math.isclose(rep.min_value, 2.0 ** -n, abs_tol=1e-15)
    return _result(7, "non-negativity scan", ok, bad.min_value, 0.0,
                   violating_fraction_negative=bad.fraction_negative, uniform_min=uniform)


CHECKS = (check_partition, check_scalar_sums, check_roundtrip, check_non_generic,
          check_mixed, check_reconstruction, check_nonnegativity)


def run_all(seed: int, scale: str = FULL) -> list:
    return [check(seed, scale) for check in CHECKS]
