#!/usr/bin/env python3
"""Run every inequality and identity check and print a one-line report each.

Equivalent to `jacspec verify` but keeps the raw reports around for
interactive poking (run with python -i).
"""

import argparse

import numpy as np

from jacspec import diagonalize


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--g", type=float, default=0.5)
    ap.add_argument("--smax", type=int, default=20)
    ap.add_argument("--nmax", type=int, default=10**5)
    ap.add_argument("--similarity-n", type=int, default=256)
    args = ap.parse_args()

    reports = [
        diagonalize.check_bessel_bound(
            args.smax, np.logspace(-1.0, 2.0, 200)
        ),
        diagonalize.check_laguerre_bound(1.0, [0, 1], args.nmax),
        diagonalize.check_offset_decay(args.g, 5),
    ]
    for rep in reports:
        status = "SKIP" if rep.note.startswith("skipped") else (
            "PASS" if rep.passed else "FAIL"
        )
        print(f"{status} {rep.lemma_id}: max_ratio={rep.max_ratio:.6f} "
              f"grid={rep.grid_size} violations={len(rep.violations)}")
        if rep.note:
            print(f"     {rep.note}")

    bundle = diagonalize.build_bundle(args.g, args.similarity_n)
    defect = diagonalize.verify_similarity(bundle)
    anti = float(np.max(np.abs(bundle.K + bundle.K.T)))
    print(f"{'PASS' if defect < 1e-10 else 'FAIL'} similarity_defect: {defect:.3e}")
    print(f"{'PASS' if anti == 0.0 else 'FAIL'} k_antisymmetry: {anti!r}")
    return reports, bundle


if __name__ == "__main__":
    main()
