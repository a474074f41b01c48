"""Single-card d2 cutoff curves for the three start regimes, as CSVs.

Usage: python scripts/cutoff_curves.py [--n 200] [--outdir out]
"""
import argparse
import os

from hitrun.single_card import cutoff_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--outdir", default="out")
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    runs = [
        ("bottom", 1.0),
        ("bottom", 5.0),
        ("middle", 0.5),
        ("top", 2.0),
    ]
    for regime, param in runs:
        rep = cutoff_experiment(args.n, regime, param)
        path = os.path.join(
            args.outdir, f"cutoff_{regime}_{param:g}_n{args.n}.csv"
        )
        with open(path, "w") as fh:
            fh.write("t,d2\n")
            for t, v in zip(rep.times, rep.d2_values):
                fh.write(f"{t},{v:.17g}\n")
        crossing = rep.crossings[1.0]
        print(f"{regime}(param={param:g}): start={rep.start} "
              f"predicted={rep.predicted_time} first_t_below_1={crossing['t']} "
              f"c_at_crossing={crossing['c']} -> {path}")


if __name__ == "__main__":
    main()
