"""Experiment runner: every analysis as a subcommand with reproducible outputs.

Exit codes: 0 ok, 2 invalid config, 3 invariant failure, 4 guard exceeded.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import single_card as sc
from .groups import FiniteGroup, top_to_random_tuple
from .lumping import eigenvalue_histogram, k_card_kernel
from .markov import StateGuardExceeded, distance_curve, kernel_from_measure
from .measures import (
    borel_measure,
    crude_overhand_measure,
    hit_and_run_cyclic,
    hit_and_run_measure,
    hnr_top_to_random,
    packet_description_measure,
    random_to_random_measure,
    uniform_tuple_measure,
)
from .groups import random_to_random_tuple, random_transposition_tuple
from .spectral import (
    comparison_constant,
    dcomp_inequality_check,
    positivity_certificate,
    symmetric_eigenvalues,
    verify_factorization,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INVARIANT = 3
EXIT_GUARD = 4

FULL_GROUP_DEFAULT_N = 6
FULL_GROUP_HEAVY_N = 7
THREE_CARD_DEFAULT_N = 12
THREE_CARD_HEAVY_N = 21


class ConfigError(ValueError):
    pass


def _measure(name: str, n: int, d: int):
    if name == "hnr-ttr":
        return hnr_top_to_random(n)
    if name == "ttr":
        return uniform_tuple_measure(top_to_random_tuple(n))
    if name == "r2r":
        return random_to_random_measure(n)
    if name == "rt":
        return uniform_tuple_measure(random_transposition_tuple(n))
    if name == "hnr-rt":
        return hit_and_run_measure(random_transposition_tuple(n))
    if name == "packet":
        return packet_description_measure(n)
    if name == "overhand":
        return crude_overhand_measure(n)
    if name == "borel":
        return borel_measure(n)
    if name == "cyclic":
        return hit_and_run_cyclic(n, d)
    raise ConfigError(f"unknown measure {name!r}")


def _tuple_for(name: str, n: int, d: int):
    from .groups import cyclic_shift_tuple

    if name == "hnr-ttr":
        return top_to_random_tuple(n)
    if name == "hnr-rt":
        return random_transposition_tuple(n)
    if name == "cyclic":
        return cyclic_shift_tuple(n, d)
    raise ConfigError(f"measure {name!r} is not a hit-and-run measure")


def _check_group_guard(name: str, n: int, heavy: bool) -> None:
    if name == "cyclic":
        return
    limit = FULL_GROUP_HEAVY_N if heavy else FULL_GROUP_DEFAULT_N
    if n > limit:
        raise StateGuardExceeded(
            f"full-group guard: n={n} > {limit}"
            + ("" if heavy else " (use --heavy for n=7)")
        )


class _Output:
    """Writes one artifact file; removes partial output if the command fails."""

    def __init__(self, path: str | None):
        self.path = path
        self.fh = None

    def __enter__(self):
        self.fh = open(self.path, "w") if self.path else sys.stdout
        return self.fh

    def __exit__(self, exc_type, exc, tb):
        if self.path:
            self.fh.close()
            if exc_type is not None and os.path.exists(self.path):
                os.remove(self.path)
        return False


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# --- subcommands -------------------------------------------------------------


def _check_three_card_guard(n: int, k: int, heavy: bool) -> None:
    if k == 3:
        limit = THREE_CARD_HEAVY_N if heavy else THREE_CARD_DEFAULT_N
        if n > limit:
            raise StateGuardExceeded(
                f"3-card guard: n={n} > {limit}" + ("" if heavy else " (use --heavy)")
            )


def cmd_spectrum(args) -> int:
    if not args.k_card:
        _check_group_guard(args.measure, args.n, args.heavy)
    mu = _measure(args.measure, args.n, args.d)
    if args.k_card:
        if mu.group.kind != "symmetric":
            raise ConfigError("--k-card requires a card-shuffling measure")
        _check_three_card_guard(args.n, args.k_card, args.heavy)
        kernel = k_card_kernel(args.n, args.k_card, mu)
    else:
        G = mu.group
        kernel = kernel_from_measure(G, mu)
    if not kernel.is_symmetric():
        raise ConfigError(f"measure {args.measure!r} is not symmetric; no real spectrum")
    report = symmetric_eigenvalues(kernel)
    with _Output(args.out) as fh:
        if args.format == "json":
            json.dump(
                {
                    "eigenvalues": [float(v) for v in report.eigenvalues],
                    "gap": report.gap,
                    "min_eig": report.min_eigenvalue,
                },
                fh,
                indent=2,
            )
            fh.write("\n")
        else:
            fh.write("index,eigenvalue\n")
            for i, v in enumerate(report.eigenvalues):
                fh.write(f"{i},{_fmt(float(v))}\n")
    return EXIT_OK


def cmd_mix(args) -> int:
    _check_group_guard(args.measure, args.n, args.heavy)
    mu = _measure(args.measure, args.n, args.d)
    curve = distance_curve(mu, args.tmax)
    with _Output(args.out) as fh:
        curve.to_csv(fh)
    return EXIT_OK


def _parse_grid(grid: str, n: int):
    starts_part, _, tmax_part = grid.partition(":")
    if starts_part == "all":
        starts = list(range(1, n + 1))
    else:
        starts = [int(s) for s in starts_part.split(",")]
    tmax = int(tmax_part) if tmax_part else 40
    if any(not 1 <= s <= n for s in starts) or tmax < 1:
        raise ConfigError(f"bad grid {grid!r}")
    return starts, tmax


def cmd_single_card(args) -> int:
    starts, tmax = _parse_grid(args.grid, args.n)
    n = args.n
    with _Output(args.out) as fh:
        fh.write("n,start,t,tv_exact,tv_closed,d2_closed,d2_matrix\n")
        for i in starts:
            for t in range(1, tmax + 1):
                tv_exact = sc.tv_single_card(n, t, i)
                try:
                    tv_closed = _fmt(sc.tv_closed_forms(n, t, i))
                except sc.ClosedFormUnavailable:
                    tv_closed = ""
                d2c = math.sqrt(sc.d2_squared_closed(n, t, i))
                d2m = math.sqrt(sc.d2_squared_matrix(n, t, i))
                fh.write(f"{n},{i},{t},{_fmt(tv_exact)},{tv_closed},{_fmt(d2c)},{_fmt(d2m)}\n")
    return EXIT_OK


def cmd_lumped(args) -> int:
    _check_three_card_guard(args.n, args.k, args.heavy)
    mu = _measure(args.measure, args.n, args.d)
    if mu.group.kind != "symmetric":
        raise ConfigError("lumped chains require a card-shuffling measure")
    kernel = k_card_kernel(args.n, args.k, mu)
    report = symmetric_eigenvalues(kernel)
    with _Output(args.out) as fh:
        fh.write("index,eigenvalue\n")
        for i, v in enumerate(report.eigenvalues):
            fh.write(f"{i},{_fmt(float(v))}\n")
    if args.histogram:
        with _Output(args.histogram) as fh:
            fh.write("bin_left,count\n")
            for left, count in eigenvalue_histogram(report.eigenvalues):
                fh.write(f"{_fmt(left)},{count}\n")
    return EXIT_OK


def cmd_positivity(args) -> int:
    _check_group_guard(args.measure, args.n, args.heavy)
    S = _tuple_for(args.measure, args.n, args.d)
    cert = positivity_certificate(S.group, S, trials=args.trials, seed=args.seed)
    n = args.n
    payload = {
        "min_eig": cert["min_eig"],
        "gap": cert["gap"],
        "mult_of_1_minus_1_over_n": cert["spectrum"].count_near(1 - 1 / n),
        "factorization_error": cert["factorization_error"],
        "quadratic_error": cert["quadratic_error"],
        "quadratic_min": cert["quadratic_min"],
    }
    with _Output(args.out) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    if cert["min_eig"] < -1e-10 or cert["factorization_error"] > 1e-12:
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_compare(args) -> int:
    table = comparison_constant(args.n)
    with _Output(args.out) as fh:
        fh.write("k,l,weight,weight_exact\n")
        for (k, l), w in sorted(table["weights"].items()):
            fh.write(f"{k},{l},{_fmt(float(w))},{w}\n")
        fh.write(f"A,,{_fmt(float(table['A']))},{table['A']}\n")
    return EXIT_OK


def cmd_dcomp(args) -> int:
    _check_group_guard("hnr-ttr", args.n, args.heavy)
    ts = [int(s) for s in args.tgrid.split(",")]
    with _Output(args.out) as fh:
        fh.write("t,lhs,rhs,rhs_q_variant\n")
        for t in ts:
            r = dcomp_inequality_check(args.n, t)
            fh.write(f"{t},{_fmt(r['lhs'])},{_fmt(r['rhs'])},{_fmt(r['rhs_q_variant'])}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = run_invariant_suite(heavy=args.heavy)
    ok = all(c["pass"] for c in checks)
    with _Output(args.out) as fh:
        json.dump({"ok": ok, "checks": checks}, fh, indent=2)
        fh.write("\n")
    return EXIT_OK if ok else EXIT_INVARIANT


def run_invariant_suite(heavy: bool = False) -> list:
    """Fast machine-readable pass/fail sweep over every module's invariants."""
    from .groups import Permutation, order
    from .measures import convolve, t_fold

    checks = []

    def add(name, fn):
        try:
            result = bool(fn())
        except Exception:
            result = False
        checks.append({"name": name, "pass": result})

    add("ttr tuple generates S_n (n=4)", lambda: top_to_random_tuple(4).generates())
    add(
        "hit-and-run measures are symmetric (n=3..5)",
        lambda: all(hnr_top_to_random(n).is_symmetric() for n in range(3, 6)),
    )
    add(
        "hnr-ttr support size 1 + n(n-1)/2 (n=3..8)",
        lambda: all(
            len(hnr_top_to_random(n).support) == 1 + n * (n - 1) // 2
            for n in range(3, 9)
        ),
    )
    add(
        "packet description equals hit-and-run (n=3..8)",
        lambda: all(
            packet_description_measure(n) == hnr_top_to_random(n) for n in range(3, 9)
        ),
    )
    add(
        "identity mass equals H_n/n (n=3..8)",
        lambda: all(
            hnr_top_to_random(n).exact(Permutation.identity(n))
            == sum(Fraction(1, i) for i in range(1, n + 1)) / n
            for n in range(3, 9)
        ),
    )

    def evolution_matches_kernel():
        n = 4
        G = FiniteGroup.symmetric(n)
        q = hnr_top_to_random(n)
        kernel = kernel_from_measure(G, q)
        row = np.linalg.matrix_power(kernel.matrix, 3)[G.index(G.identity)]
        mu3 = t_fold(q, 3)
        vec = np.array([float(mu3.exact(g)) for g in G.elements])
        return np.abs(row - vec).max() < 1e-10

    add("kernel powers match convolution powers (n=4)", evolution_matches_kernel)

    def single_card_anchor():
        for n in (4, 5):
            K1 = k_card_kernel(n, 1, hnr_top_to_random(n))
            if np.abs(K1.matrix - sc.build_K(n)).max() > 1e-13:
                return False
        return True

    add("1-card lumping equals closed-form kernel (n=4,5)", single_card_anchor)

    def spectrum_positive():
        for n in (3, 4):
            S = top_to_random_tuple(n)
            cert = positivity_certificate(S.group, S, trials=20)
            if cert["min_eig"] < -1e-10 or cert["factorization_error"] > 1e-12:
                return False
        return True

    add("positivity certificate (n=3,4)", spectrum_positive)

    def single_card_exactness():
        for n in (4, 6):
            K = sc.build_K_exact(n)
            for k, (beta, psi) in enumerate(sc.K_eigenpairs(n)):
                for r in range(n):
                    if sum(K[r][c] * psi[c] for c in range(n)) != beta * psi[r]:
                        return False
        return True

    add("exact eigenpair identity K Psi = beta Psi (n=4,6)", single_card_exactness)

    add(
        "comparison words and weights (n=10)",
        lambda: comparison_constant(10)["A"] <= 8,
    )
    return checks


# --- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hitrun", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, measure=True):
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--d", type=int, default=1, help="dimension for cyclic groups")
        if measure:
            p.add_argument("--measure", default="hnr-ttr")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--heavy", action="store_true")

    p = sub.add_parser("spectrum", help="full-group or lumped spectra")
    common(p)
    p.add_argument("--k-card", type=int, default=0, help="lump onto k-card positions")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("mix", help="distance curves")
    common(p)
    p.add_argument("--tmax", type=int, required=True)
    p.set_defaults(fn=cmd_mix)

    p = sub.add_parser("single-card", help="closed-form single-card suite")
    common(p, measure=False)
    p.add_argument("--grid", default="all:40", help="STARTS:TMAX, e.g. 1,2,5:30")
    p.set_defaults(fn=cmd_single_card)

    p = sub.add_parser("lumped", help="k-card chains and eigenvalue histograms")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--histogram", default=None, help="also write a histogram CSV")
    p.set_defaults(fn=cmd_lumped)

    p = sub.add_parser("positivity", help="non-negative-spectrum certificate")
    common(p)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(fn=cmd_positivity)

    p = sub.add_parser("compare", help="Dirichlet comparison constant table")
    common(p, measure=False)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("dcomp", help="two-sided mixing inequality report")
    common(p, measure=False)
    p.add_argument("--tgrid", default="12,24,36,48,60,72,84,96,108,120")
    p.set_defaults(fn=cmd_dcomp)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--out", default=None)
    p.add_argument("--heavy", action="store_true")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except StateGuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ConfigError, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
