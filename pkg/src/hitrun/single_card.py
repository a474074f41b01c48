"""Closed forms for the single-card chain: kernel, eigenpairs, exact powers,
distances, and cutoff curves.

Everything here has a float path (compensated summation) and, where the
identities involve large cancellations, an exact rational path used to
cross-check it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class ClosedFormUnavailable(ValueError):
    """Requested a closed form outside its validity region."""


# --- kernel and eigenpairs ---------------------------------------------------


def build_K_exact(n: int) -> list:
    """The n x n single-card kernel as exact rationals.

    K(i,j) = (1/n) sum_{k >= max(i,j)} 1/k, plus (i-1)/n on the diagonal.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    tail = [Fraction(0)] * (n + 2)  # tail[m] = (1/n) sum_{k=m}^{n} 1/k
    for m in range(n, 0, -1):
        tail[m] = tail[m + 1] + Fraction(1, n * m)
    K = [[Fraction(0)] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            K[i - 1][j - 1] = tail[max(i, j)]
        K[i - 1][i - 1] += Fraction(i - 1, n)
    return K


def build_K(n: int) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in build_K_exact(n)])


def K_eigenpairs(n: int) -> list:
    """Exact (beta_i, Psi_i) pairs: beta_i = 1 - i/n, Psi_i = (-1/(n-i), ...,
    -1/(n-i), 1, 0, ..., 0) with the -1/(n-i) entry repeated n-i times."""
    pairs = [(Fraction(1), tuple([Fraction(1)] * n))]
    for i in range(1, n):
        psi = [Fraction(-1, n - i)] * (n - i) + [Fraction(1)] + [Fraction(0)] * (i - 1)
        pairs.append((1 - Fraction(i, n), tuple(psi)))
    return pairs


def psi_norm_sq(n: int, i: int) -> Fraction:
    """||Psi_i||^2 under the uniform inner product (1/n) sum."""
    if i == 0:
        return Fraction(1)
    return Fraction(n - i + 1, n * (n - i))


# --- d2 distance from start i ------------------------------------------------


def d2_squared_closed(n: int, t: int, i: int) -> float:
    """Closed form for d2(K^t(i,.), u)^2, three cases in i."""
    if not 1 <= i <= n:
        raise ValueError(f"start {i} out of range 1..{n}")
    if t < 0:
        raise ValueError("t must be >= 0")
    if i == n:
        return (1 - 1 / n) ** (2 * t) * (n - 1)
    if i == 1:
        terms = [
            (1 - k / n) ** (2 * t) * n / ((n - k) * (n - k + 1))
            for k in range(1, n - 1)
        ]
        terms.append((1 / n) ** (2 * t) * n / 2)
    else:
        terms = [
            (1 - k / n) ** (2 * t) * n / ((n - k) * (n - k + 1))
            for k in range(1, n - i + 1)
        ]
        terms.append(((i - 1) / n) ** (2 * t) * n * (i - 1) / i)
    return math.fsum(terms)


def d2_squared_spectral(n: int, t: int, i: int) -> float:
    """Eigen-expansion sum_k beta_k^{2t} Psi_k(i)^2 / ||Psi_k||^2."""
    terms = []
    for k, (beta, psi) in enumerate(K_eigenpairs(n)):
        if k == 0:
            continue
        terms.append(
            float(beta) ** (2 * t) * float(psi[i - 1]) ** 2 / float(psi_norm_sq(n, k))
        )
    return math.fsum(terms)


def d2_squared_matrix(n: int, t: int, i: int) -> float:
    """From the dense matrix power: n * sum_j (K^t(i,j) - 1/n)^2."""
    row = np.linalg.matrix_power(build_K(n), t)[i - 1]
    return n * math.fsum((x - 1 / n) ** 2 for x in row)


def d2_single_card(n: int, t: int, i: int) -> float:
    return math.sqrt(d2_squared_closed(n, t, i))


# --- the B quantity and its brackets ----------------------------------------


def B_quantity_exact(n: int, t: int, i: int) -> Fraction:
    """B(n,t,i) defined by B * (1-1/n)^{2t-1} = (1/n) sum_{k=1}^{n-i} (1-k/n)^{2t-2}.

    Exact: at large t the sum is dominated by its k=1 term and the bracket
    comparisons are below float resolution.
    """
    if n < 4 or t < 1:
        raise ValueError("need n >= 4 and t >= 1")
    s = sum(
        (Fraction(n - k, n) ** (2 * t - 2) for k in range(1, n - i + 1)), Fraction(0)
    )
    return (s / n) / Fraction(n - 1, n) ** (2 * t - 1)


def B_quantity(n: int, t: int, i: int) -> float:
    return float(B_quantity_exact(n, t, i))


def B_bounds_check(n: int, t: int, i: int) -> dict:
    """Bracket check for B(n,t,i).

    Case 1 (2 <= i <= n/2): the upper bound 1/(n-1) + 1/(2t-1) always holds,
    and so do the lower bounds 1/(n-1) and 1/(4(2t-1)) taken separately; their
    sum fails once t is large relative to n (the extra terms beyond k=1 decay
    exponentially), so the additive bracket is reported but only the max-form
    lower bound is asserted by `holds`.
    Case 3 (i <= n-2 generally, with i0 = n-i): [1/(n-1), i0/(n-1)].
    """
    b = B_quantity_exact(n, t, i)
    if 2 <= i <= n // 2:
        lower_additive = Fraction(1, n - 1) + Fraction(1, 4 * (2 * t - 1))
        lower = max(Fraction(1, n - 1), Fraction(1, 4 * (2 * t - 1)))
        upper = Fraction(1, n - 1) + Fraction(1, 2 * t - 1)
        return {
            "case": 1,
            "value": float(b),
            "lower": float(lower),
            "upper": float(upper),
            "lower_additive": float(lower_additive),
            "additive_holds": lower_additive <= b <= upper,
            "holds": lower <= b <= upper,
        }
    if i <= n - 2:
        i0 = n - i
        lower, upper = Fraction(1, n - 1), Fraction(i0, n - 1)
        return {
            "case": 3,
            "value": float(b),
            "lower": float(lower),
            "upper": float(upper),
            "holds": lower <= b <= upper,
        }
    raise ValueError(f"start {i} fits no bracketed case for n={n}")


# --- closed-form rows of K^t -------------------------------------------------


def _tail_sum_exact(n: int, t: int, m: int) -> Fraction:
    """sum_{l=m}^{n-1} l^{t-1} / (l+1)."""
    return sum((Fraction(l ** (t - 1), l + 1) for l in range(m, n)), Fraction(0))


def Kt_entry_exact(n: int, t: int, i: int, j: int) -> Fraction:
    """Entry (i, j) of K^t from the diagonalization, exact."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("indices out of range")
    nt = Fraction(1, n**t)
    base = Fraction(1, n)
    if i == n:
        if j < n:
            return nt * Fraction(-((n - 1) ** t), n) + base
        return nt * Fraction((n - 1) ** (t + 1), n) + base
    if j == n:
        return nt * Fraction(-((n - 1) ** t), n) + base
    if j < i:
        return nt * (Fraction(-((i - 1) ** t), i) + _tail_sum_exact(n, t, i)) + base
    if j == i:
        return nt * (Fraction((i - 1) ** (t + 1), i) + _tail_sum_exact(n, t, i)) + base
    # i < j < n
    return nt * (Fraction(-((j - 1) ** t), j) + _tail_sum_exact(n, t, j)) + base


def Kt_entry(n: int, t: int, i: int, j: int) -> float:
    return float(Kt_entry_exact(n, t, i, j))


# --- total variation ---------------------------------------------------------


def tv_single_card_exact(n: int, t: int, i: int) -> Fraction:
    """Exact TV distance of the closed-form row K^t(i, .) from uniform."""
    if t == 0:
        return Fraction(n - 1, n)
    total = sum(
        (abs(Kt_entry_exact(n, t, i, j) - Fraction(1, n)) for j in range(1, n + 1)),
        Fraction(0),
    )
    return total / 2


def tv_single_card(n: int, t: int, i: int) -> float:
    return float(tv_single_card_exact(n, t, i))


def tv_threshold(n: int) -> float:
    """Time after which the i < n rows settle on (1/n)(1-1/n)^t exactly."""
    return (n - 1) * math.log(n) + (n - 1) / (n - 2)


def tv_closed_forms(n: int, t: int, i: int) -> float:
    """Closed-form TV: (1-1/n)^{t+1} for the bottom start, (1/n)(1-1/n)^t for
    i < n once t has passed the validity threshold."""
    if t < 1:
        raise ClosedFormUnavailable("closed forms require t >= 1")
    if i == n:
        return (1 - 1 / n) ** (t + 1)
    if t >= tv_threshold(n):
        return (1 / n) * (1 - 1 / n) ** t
    raise ClosedFormUnavailable(
        f"no closed form for start {i} < n at t={t} < threshold {tv_threshold(n):.3f}"
    )


# --- cutoff curves -----------------------------------------------------------

CUTOFF_LEVELS = (10.0, 1.0, 0.1)


@dataclass
class CutoffReport:
    n: int
    regime: str
    param: float
    start: int
    times: list
    d2_values: list
    crossings: dict  # level -> {"t": first step at/below level, "c": regime c-value}
    predicted_time: float | None = None


def _predicted_time(n: int, regime: str, param: float, c: float) -> float:
    if regime == "bottom":
        return n / (2 * param) * (math.log(n) + c)
    if regime == "middle":
        return (math.log(n) + c) / (2 * math.log(1 / param))
    raise ValueError(regime)


def _c_of_time(n: int, regime: str, param: float, t: float) -> float:
    if regime == "bottom":
        return 2 * param * t / n - math.log(n)
    if regime == "middle":
        return 2 * math.log(1 / param) * t - math.log(n)
    raise ValueError(regime)


def cutoff_experiment(n: int, regime: str, param: float) -> CutoffReport:
    """d2 curve for one start-position regime, with crossing times.

    regime "bottom": start n - i' (param = i'), predicted time (n/2i')(log n + c).
    regime "top": start i (param = i), no sharp transition; crossing times only.
    regime "middle": start [a n] (param = a in (0,1)), predicted (log n + c)/(2 log 1/a).
    """
    if regime == "bottom":
        i_prime = int(param)
        if not 1 <= i_prime < n:
            raise ValueError("bottom regime needs 1 <= i' < n")
        start = n - i_prime
        t_hi = int(_predicted_time(n, regime, i_prime, 8.0)) + 1
        predicted = _predicted_time(n, regime, i_prime, 0.0)
    elif regime == "middle":
        if not 0 < param < 1:
            raise ValueError("middle regime needs a in (0, 1)")
        start = max(1, int(param * n))
        t_hi = int(_predicted_time(n, regime, param, 10.0)) + 1
        predicted = _predicted_time(n, regime, param, 0.0)
    elif regime == "top":
        start = int(param)
        if not 1 <= start <= n:
            raise ValueError("top regime needs a start in 1..n")
        t_hi = int(10.0 / min(CUTOFF_LEVELS) ** 2) + 1
        predicted = None
    else:
        raise ValueError(f"unknown regime {regime!r}")

    times = list(range(1, t_hi + 1))
    d2s = [math.sqrt(d2_squared_closed(n, t, start)) for t in times]
    crossings = {}
    for level in CUTOFF_LEVELS:
        t_cross = next((t for t, v in zip(times, d2s) if v <= level), None)
        entry = {"t": t_cross, "c": None}
        if t_cross is not None and regime in ("bottom", "middle"):
            entry["c"] = _c_of_time(n, regime, param, t_cross)
        crossings[level] = entry
    return CutoffReport(n, regime, param, start, times, d2s, crossings, predicted)
