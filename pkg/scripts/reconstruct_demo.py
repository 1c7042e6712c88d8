"""Recover operator-valued phi data from a density operator's frame function.

The oracle ``v ⊗ u -> <v ⊗ u| rho |v ⊗ u>`` is built on the full space,
outside the phi machinery. Reconstruction should return positive tail
operators whose full-set trace is ``tr rho = 1``.
"""

import argparse

import numpy as np

from uff.frame import random_canonical_state
from uff.general import density_oracle, random_hermitian, tail_operator
from uff.product import apply_sigma_mask, full_mask
from uff.reconstruct import reconstruct_phi_operators, reconstruction_residuals


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--samples", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    rho = random_hermitian(2 ** args.k * args.d, rng, psd=True, trace=1.0)
    oracle = density_oracle(rho, args.k, args.d)
    zs = [random_canonical_state(args.k, rng) for _ in range(args.samples)]
    rec = reconstruct_phi_operators(oracle, args.k, args.d, zs)
    rep = reconstruction_residuals(rec, oracle, zs, 50, rng)

    lowest = min(float(np.linalg.eigvalsh(tail_operator(rec, apply_sigma_mask(z, j))).min())
                 for z in zs for j in range(full_mask(args.k) + 1))
    print(f"trace of full-set operator : {rec.top.trace:.15f}")
    print(f"worst oracle mismatch      : {rep.max_residual:.2e}")
    print(f"lowest tail eigenvalue     : {lowest:.3e}")


if __name__ == "__main__":
    main()
