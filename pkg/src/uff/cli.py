"""
Command-line front end.

Every run is driven by files and a seed (``--seed``, falling back to the
``UFF_SEED`` environment variable, then 0). Reports are JSON with
``"format": 1`` and echo the configuration that produced them. Exit status
is 0 on pass, 1 on a failed verification and 2 on bad input.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import io
from .acceptance import FULL, QUICK, run_all
from .errors import FormatError, UFFError
from .frame import evaluate, prf_family, random_canonical_state, recover_phi, scan_nonneg, uniform_family
from .general import general_oracle, prf_operator_family
from .harness import GENERATORS, verify_trials
from .product import apply_sigma_mask, full_mask
from .reconstruct import reconstruct_phi_operators, reconstruction_residuals
from .uob import expand_tree, generate_generic, generate_product_basis, generate_split, validate_uob

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("UFF_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"UFF_SEED: not an integer: {env!r}") from None


def _config(args) -> dict:
    skip = {"func"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip}
    cfg["seed"] = _seed(args)
    return cfg


def _emit(args, report: dict):
    text = io.dumps(report)
    if getattr(args, "out", None):
        io.write_json(args.out, report)
    else:
        sys.stdout.write(text)


def _report(args, command: str, **body) -> dict:
    return {"format": io.FORMAT, "command": command, "config": _config(args), **body}


def _load(path, decoder):
    return decoder(io.read_json(path), str(path))


# -- uob ---------------------------------------------------------------------

def cmd_uob_gen(args):
    rng = np.random.default_rng(_seed(args))
    tail = tuple(args.tail or ())
    if args.generator == "product":
        basis = generate_product_basis((2,) * args.n + tail, rng)
        tree = None
    else:
        if args.generator == "generic":
            if tail:
                tree = generate_split(args.n, tail, rng, fixed_order=True)
            else:
                tree = generate_generic(args.n, rng)
        else:
            tree = generate_split(args.n, tail, rng)
        basis = expand_tree(tree)
    doc = io.uob_to_json(basis)
    if args.tree_out and tree is not None:
        io.write_json(args.tree_out, io.split_tree_to_json(tree))
    if args.out:
        io.write_json(args.out, doc)
    else:
        sys.stdout.write(io.dumps(doc))
    return EXIT_PASS


def cmd_uob_validate(args):
    basis = _load(args.basis, io.uob_from_json)
    rep = validate_uob(basis, args.tolerance)
    _emit(args, _report(args, "uob validate", **rep.as_dict()))
    return EXIT_PASS if rep.passed else EXIT_FAIL


# -- scalar frame functions --------------------------------------------------

def _scalar_family(args):
    if args.family:
        fam = _load(args.family, io.phi_family_from_json)
        if getattr(args, "n", None) is not None and args.n != fam.n:
            raise InputError(f"--n {args.n} does not match family n = {fam.n}")
        return fam
    if getattr(args, "n", None) is None:
        raise InputError("give --family or --n")
    return prf_family(args.n, _seed(args))


def cmd_frame_family(args):
    if args.kind == "uniform":
        fam = uniform_family(args.n)
    else:
        fam = prf_family(args.n, _seed(args), c=args.c)
    doc = io.phi_family_to_json(fam)
    if args.out:
        io.write_json(args.out, doc)
    else:
        sys.stdout.write(io.dumps(doc))
    return EXIT_PASS


def _states(path):
    obj = io.read_json(path)
    if isinstance(obj, dict) and "states" in obj:
        return io.uob_from_json(obj, path).states
    return (io.product_state_from_json(obj, path),)


def cmd_frame_eval(args):
    fam = _scalar_family(args)
    states = _states(args.states)
    try:
        values = [evaluate(fam, s) for s in states]
    except UFFError as exc:
        raise InputError(str(exc)) from None
    _emit(args, _report(args, "frame eval", values=values, sum=float(np.sum(values)), c=fam.c))
    return EXIT_PASS


def cmd_frame_verify(args):
    fam = _scalar_family(args)
    rep = verify_trials(fam, args.generator, args.trials, _seed(args), args.tolerance, args.jobs)
    _emit(args, _report(args, "frame verify", n=fam.n, **rep))
    return EXIT_PASS if rep["pass"] else EXIT_FAIL


def cmd_frame_scan(args):
    fam = _scalar_family(args)
    rep = scan_nonneg(fam, args.trials, np.random.default_rng(_seed(args)))
    _emit(args, _report(args, "frame scan-nonneg", n=fam.n, c=fam.c, **rep.as_dict()))
    return EXIT_PASS if rep.candidate else EXIT_FAIL


def cmd_frame_recover(args):
    fam = _scalar_family(args)
    rng = np.random.default_rng(_seed(args))
    zs = [random_canonical_state(fam.n, rng) for _ in range(args.samples)]
    rec = recover_phi(lambda s: evaluate(fam, s), fam.n, zs)
    worst = 0.0
    for z in zs:
        for m in range(full_mask(fam.n) + 1):
            s = apply_sigma_mask(z, m)
            worst = max(worst, abs(evaluate(rec, s) - evaluate(fam, s)))
    doc = io.phi_family_to_json(rec)
    doc["round_trip_residual"] = worst
    doc["tolerance"] = args.tolerance
    if args.out:
        io.write_json(args.out, doc)
    summary = _report(args, "frame recover-phi", n=fam.n, c=rec.c, samples=args.samples,
                      round_trip_residual=worst, tolerance=args.tolerance,
                      **{"pass": worst <= args.tolerance})
    if args.report:
        io.write_json(args.report, summary)
    if not args.out:
        sys.stdout.write(io.dumps(doc))
    return EXIT_PASS if worst <= args.tolerance else EXIT_FAIL


# -- operator-valued ---------------------------------------------------------

def _operator_family(args):
    if args.family:
        fam = _load(args.family, io.operator_family_from_json)
        for name in ("k", "d"):
            given = getattr(args, name, None)
            if given is not None and given != getattr(fam, name):
                raise InputError(f"--{name} {given} does not match family {name} = {getattr(fam, name)}")
        return fam
    if args.k is None or args.d is None:
        raise InputError("give --family or both --k and --d")
    return prf_operator_family(args.k, args.d, _seed(args))


def cmd_general_family(args):
    doc = io.operator_family_to_json(prf_operator_family(args.k, args.d, _seed(args), trace=args.trace))
    if args.out:
        io.write_json(args.out, doc)
    else:
        sys.stdout.write(io.dumps(doc))
    return EXIT_PASS


def cmd_general_verify(args):
    fam = _operator_family(args)
    rep = verify_trials(fam, args.generator, args.trials, _seed(args), args.tolerance, args.jobs)
    _emit(args, _report(args, "general verify", k=fam.k, d=fam.d, **rep))
    return EXIT_PASS if rep["pass"] else EXIT_FAIL


def cmd_reconstruct(args):
    fam = _operator_family(args)
    rng = np.random.default_rng(_seed(args))
    oracle = general_oracle(fam)
    zs = [random_canonical_state(fam.k, rng) for _ in range(args.samples)] if fam.k else None
    rec = reconstruct_phi_operators(oracle, fam.k, fam.d, zs)
    rep = reconstruction_residuals(rec, oracle, zs, args.probes, rng)
    doc = io.operator_family_to_json(rec)
    doc["round_trip_residual"] = rep.max_residual
    doc["tolerance"] = args.tolerance
    doc["report"] = rep.as_dict()
    if args.out:
        io.write_json(args.out, doc)
    else:
        sys.stdout.write(io.dumps(doc))
    return EXIT_PASS if rep.max_residual <= args.tolerance else EXIT_FAIL


# -- selftest ----------------------------------------------------------------

def cmd_selftest(args):
    seed = _seed(args)
    results = run_all(seed, args.scale)
    for r in results:
        status = "PASS" if r["pass"] else "FAIL"
        print(f"[{status}] {r['id']}. {r['name']}: metric={r['metric']!r} tol={r['tolerance']!r}",
              file=sys.stderr)
    ok = all(r["pass"] for r in results)
    _emit(args, _report(args, "selftest", seed=seed, scale=args.scale, criteria=results, **{"pass": ok}))
    return EXIT_PASS if ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------

def _common(p, tolerance=1e-9, out=True):
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $UFF_SEED or 0)")
    p.add_argument("--tolerance", type=float, default=tolerance)
    if out:
        p.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uff", description="Unentangled frame function toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    uob = sub.add_parser("uob", help="generate and validate unentangled orthonormal bases")
    uob_sub = uob.add_subparsers(dest="action", required=True)
    p = uob_sub.add_parser("gen")
    p.add_argument("--n", type=int, required=True, help="number of qubits")
    p.add_argument("--tail", type=int, nargs="*", help="non-qubit tail dimensions")
    p.add_argument("--generator", choices=GENERATORS, default="split")
    p.add_argument("--tree-out", default=None, help="also write the split tree")
    _common(p)
    p.set_defaults(func=cmd_uob_gen)
    p = uob_sub.add_parser("validate")
    p.add_argument("basis")
    _common(p)
    p.set_defaults(func=cmd_uob_validate)

    frame = sub.add_parser("frame", help="scalar frame functions on qubits")
    frame_sub = frame.add_subparsers(dest="action", required=True)
    p = frame_sub.add_parser("family", help="write a built-in phi family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("prf", "uniform"), default="prf")
    p.add_argument("--c", type=float, default=1.0)
    _common(p)
    p.set_defaults(func=cmd_frame_family)
    p = frame_sub.add_parser("eval")
    p.add_argument("--family", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("states", help="a product state or UOB JSON file")
    _common(p)
    p.set_defaults(func=cmd_frame_eval)
    p = frame_sub.add_parser("verify")
    p.add_argument("--family", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--generator", choices=GENERATORS, default="split")
    p.add_argument("--jobs", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_frame_verify)
    p = frame_sub.add_parser("scan-nonneg")
    p.add_argument("--family", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    _common(p)
    p.set_defaults(func=cmd_frame_scan)
    p = frame_sub.add_parser("recover-phi")
    p.add_argument("--family", default=None, help="family whose evaluation is the oracle")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--report", default=None)
    _common(p, tolerance=1e-10)
    p.set_defaults(func=cmd_frame_recover)

    general = sub.add_parser("general", help="qubits times a finite-dimensional tail")
    general_sub = general.add_subparsers(dest="action", required=True)
    p = general_sub.add_parser("family", help="write a pseudorandom operator family")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trace", type=float, default=1.0)
    _common(p)
    p.set_defaults(func=cmd_general_family)
    p = general_sub.add_parser("verify")
    p.add_argument("--family", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--generator", choices=GENERATORS, default="split")
    p.add_argument("--jobs", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_general_verify)

    p = sub.add_parser("reconstruct", help="recover an operator family from its frame function")
    p.add_argument("--family", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--probes", type=int, default=20, help="fresh tail states per sampled input")
    _common(p, tolerance=1e-8)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--scale", choices=(FULL, QUICK), default=FULL)
    _common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, InputError) as exc:
        print(f"uff: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UFFError as exc:
        print(f"uff: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
