"""Positivity certificates for hit-and-run top-to-random across group sizes.

Usage: python scripts/positivity_report.py [--nmax 6] [--trials 100]
"""
import argparse

from hitrun import positivity_certificate, top_to_random_tuple


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=6)
    ap.add_argument("--trials", type=int, default=100)
    args = ap.parse_args()
    print("n,min_eig,gap,quadratic_min,quadratic_error,factorization_error")
    for n in range(3, args.nmax + 1):
        S = top_to_random_tuple(n)
        c = positivity_certificate(S.group, S, trials=args.trials)
        print(f"{n},{c['min_eig']:.12g},{c['gap']:.12g},{c['quadratic_min']:.12g},"
              f"{c['quadratic_error']:.3g},{c['factorization_error']:.3g}")


if __name__ == "__main__":
    main()
