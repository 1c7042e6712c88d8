"""Repeated UOB-sum verification with optional process fan-out.

Trial ``t`` draws its basis from ``default_rng([seed, t])``, so results do
not depend on how trials are split across workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .frame import verify_sum
from .general import OperatorPhiFamily, verify_general
from .uob import expand_tree, generate_generic, generate_product_basis, generate_split

GENERATORS = ("product", "generic", "split")


def make_basis(generator: str, qubits: int, tail_dim: int, rng: np.random.Generator):
    tail = (tail_dim,) if tail_dim > 1 else ()
    if generator == "product":
        return generate_product_basis((2,) * qubits + tail, rng)
    if generator == "generic":
        if tail:
            return expand_tree(generate_split(qubits, tail, rng, fixed_order=True))
        return expand_tree(generate_generic(qubits, rng))
    if generator == "split":
        return expand_tree(generate_split(qubits, tail, rng))
    raise ValueError(f"unknown generator {generator!r}; choose from {GENERATORS}")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def _residuals(family, generator, trials, seed, tol):
    if isinstance(family, OperatorPhiFamily):
        qubits, tail = family.k, family.d
        check = verify_general
    else:
        qubits, tail = family.n, 1
        check = verify_sum
    out = []
    for t in trials:
        basis = make_basis(generator, qubits, tail, trial_rng(seed, t))
        out.append(check(family, basis, tol).residual)
    return out


def verify_trials(family, generator: str, trials: int, seed: int, tol: float = 1e-9,
                  jobs: int = 1) -> dict:
    """Worst ``|sum f - c|`` over ``trials`` random UOBs from ``generator``."""
    if generator not in GENERATORS:
        raise ValueError(f"unknown generator {generator!r}; choose from {GENERATORS}")
    ids = list(range(trials))
    if jobs > 1 and trials > 1:
        chunks = [ids[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_residuals, [family] * jobs, [generator] * jobs, chunks,
                                  [seed] * jobs, [tol] * jobs))
        residuals = [0.0] * trials
        for chunk, part in zip(chunks, parts):
            for t, r in zip(chunk, part):
                residuals[t] = r
    else:
        residuals = _residuals(family, generator, ids, seed, tol)
    worst = max(residuals, default=0.0)
    return {
        "trials": trials,
        "generator": generator,
        "max_abs_residual": worst,
        "c": family.c,
        "tolerance": tol,
        "pass": worst <= tol,
    }
