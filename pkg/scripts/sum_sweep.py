"""Worst UOB-sum residual of pseudorandom frame functions, per qubit count and generator."""

import argparse

from uff.frame import prf_family, verify_sum
from uff.harness import GENERATORS, make_basis, trial_rng
from uff.prf import derive_seed


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--families", type=int, default=10)
    ap.add_argument("--uobs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>3} " + " ".join(f"{g:>12}" for g in GENERATORS))
    for n in range(1, args.max_n + 1):
        worst = []
        for gi, g in enumerate(GENERATORS):
            w = 0.0
            for f in range(args.families):
                fam = prf_family(n, derive_seed(args.seed, n, f))
                for t in range(args.uobs):
                    basis = make_basis(g, n, 1, trial_rng(derive_seed(args.seed, n, 100 + gi), t))
                    w = max(w, verify_sum(fam, basis).residual)
            worst.append(w)
        print(f"{n:>3} " + " ".join(f"{w:12.2e}" for w in worst))


if __name__ == "__main__":
    main()
