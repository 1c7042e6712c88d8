"""How often is a random phi family a genuine (non-negative) frame function?

Families draw each ``phi_J`` pseudorandomly from ``[0, 2^(|J|-n+1))``, twice
the uniform family's value, with ``c = 1``. The scan looks for negative
values over random points and all their flips.
"""

import argparse

import numpy as np

from uff.frame import PhiFamily, PrfPhi, scan_nonneg
from uff.prf import derive_seed
from uff.product import full_mask, popcount


def family(n, seed):
    phi = {m: PrfPhi(derive_seed(seed, m), 0.0, 2.0 ** (popcount(m) - n + 1)) for m in range(full_mask(n))}
    return PhiFamily(n, 1.0, phi)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    ap.add_argument("--families", type=int, default=200)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>3} {'candidates':>11} {'mean min f':>11}")
    for n in range(1, args.max_n + 1):
        reps = [scan_nonneg(family(n, derive_seed(args.seed, n, i)), args.trials, rng)
                for i in range(args.families)]
        frac = sum(r.candidate for r in reps) / len(reps)
        print(f"{n:>3} {frac:11.3f} {np.mean([r.min_value for r in reps]):11.4f}")


if __name__ == "__main__":
    main()
