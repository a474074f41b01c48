"""Symmetric eigendecomposition, the positivity certificate, and the
Dirichlet-form comparison machinery.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from .groups import (
    FiniteGroup,
    GeneratingTuple,
    Permutation,
    order,
    random_insertion_generator,
    top_to_random_generator,
)
from .markov import Kernel, dirichlet_form, kernel_from_measure
from .measures import (
    GroupMeasure,
    hit_and_run_measure,
    hnr_top_to_random,
    random_to_random_measure,
)

# --- cyclic-sweep rotation eigensolver --------------------------------------


@numba.njit(cache=True)
def _jacobi_sweep_loop(a, v, tol, max_sweeps):  # pragma: no cover - jitted
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if math.sqrt(2.0 * off) <= tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    # final convergence check
    off = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            off += a[i, j] * a[i, j]
    if math.sqrt(2.0 * off) <= tol:
        return max_sweeps
    return -1


class EigensolverError(RuntimeError):
    pass


def jacobi_eigh(matrix: np.ndarray, tol: float = 1e-12, max_sweeps: int = 60):
    """Full spectrum of a dense symmetric matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvectors as columns).
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    v = np.eye(n)
    sweeps = _jacobi_sweep_loop(a, v, tol, max_sweeps)
    if sweeps < 0:
        raise EigensolverError(f"no convergence after {max_sweeps} sweeps")
    vals = np.diag(a).copy()
    idx = np.argsort(vals)
    return vals[idx], v[:, idx]


@dataclass
class SpectralReport:
    """Sorted real spectrum of a reversible chain."""

    eigenvalues: np.ndarray  # sorted descending
    gap: float
    min_eigenvalue: float
    multiplicity_of_one: int

    @classmethod
    def from_eigenvalues(cls, vals, one_tol: float = 1e-8) -> SpectralReport:
        vals = np.sort(np.asarray(vals, dtype=float))[::-1]
        return cls(
            eigenvalues=vals,
            gap=1.0 - (vals[1] if len(vals) > 1 else vals[0]),
            min_eigenvalue=float(vals[-1]),
            multiplicity_of_one=int(np.sum(np.abs(vals - 1.0) <= one_tol)),
        )

    def count_near(self, value: float, tol: float = 1e-8) -> int:
        return int(np.sum(np.abs(self.eigenvalues - value) <= tol))

    def d2_squared(self, t: int) -> float:
        """sum_{i >= 1} beta_i^{2t} (valid for symmetric driving measures)."""
        return math.fsum(float(b) ** (2 * t) for b in self.eigenvalues[1:])


def symmetric_eigenvalues(
    kernel: Kernel | np.ndarray,
    tol: float = 1e-12,
    max_sweeps: int = 60,
    symmetry_tol: float = 1e-10,
) -> SpectralReport:
    m = kernel.matrix if isinstance(kernel, Kernel) else np.asarray(kernel, dtype=float)
    if np.abs(m - m.T).max() > symmetry_tol:
        raise ValueError("matrix is not symmetric")
    vals, _ = jacobi_eigh(m, tol=tol, max_sweeps=max_sweeps)
    return SpectralReport.from_eigenvalues(vals)


# --- the P* R P factorization ------------------------------------------------

MATERIALIZE_LIMIT = 5000  # auxiliary dimension |G| * k


@dataclass
class AuxiliaryFactorization:
    """Operators on functions over G x {1..k}.

    The conditional-averaging operator R averages over the orbit of x under
    the cyclic subgroup generated by the i-th tuple slot; orbits are stored as
    index arrays orbit[i][x, j] = index(x * s_i^j).
    """

    group: FiniteGroup
    generators: tuple
    orders: tuple
    orbits: list  # per slot i: int array of shape (|G|, m_i)

    @property
    def k(self) -> int:
        return len(self.generators)

    @property
    def aux_dim(self) -> int:
        return self.group.size * self.k

    def apply_RP(self, f: np.ndarray) -> np.ndarray:
        """(RPf)(x, i) as an array of shape (|G|, k)."""
        f = np.asarray(f, dtype=float)
        return np.column_stack([f[orb].mean(axis=1) for orb in self.orbits])

    def apply_P(self, f: np.ndarray) -> np.ndarray:
        return np.repeat(np.asarray(f, dtype=float)[:, None], self.k, axis=1)

    def apply_Pstar(self, g: np.ndarray) -> np.ndarray:
        return np.asarray(g, dtype=float).mean(axis=1)

    def aux_inner(self, g1: np.ndarray, g2: np.ndarray) -> float:
        return float(np.sum(g1 * g2)) / (self.k * self.group.size)

    def materialize(self):
        """Dense P, R, P* kernels; only valid below the materialization limit."""
        size, k = self.group.size, self.k
        dim = size * k
        if dim > MATERIALIZE_LIMIT:
            raise ValueError(f"auxiliary dimension {dim} exceeds {MATERIALIZE_LIMIT}")
        P = np.zeros((dim, size))
        for i in range(k):
            P[np.arange(size) * k + i, np.arange(size)] = 1.0
        R = np.zeros((dim, dim))
        for i, orb in enumerate(self.orbits):
            m = orb.shape[1]
            for x in range(size):
                R[x * k + i, orb[x] * k + i] = 1.0 / m
        Pstar = P.T / k
        return P, R, Pstar


def build_factorization(G: FiniteGroup, S: GeneratingTuple) -> AuxiliaryFactorization:
    if S.group != G:
        raise ValueError("tuple group mismatch")
    orders = tuple(order(s) for s in S.elements)
    orbits = []
    for s, m in zip(S.elements, orders):
        orb = np.empty((G.size, m), dtype=np.int64)
        power = G.identity
        for j in range(m):
            orb[:, j] = [G.index(x * power) for x in G.elements]
            power = power * s
        orbits.append(orb)
    return AuxiliaryFactorization(G, tuple(S.elements), orders, orbits)


def verify_factorization(G: FiniteGroup, S: GeneratingTuple) -> float:
    """Max entrywise |P* R P - Q| where Q(x, y) = q_S(x^{-1} y)."""
    fact = build_factorization(G, S)
    Q = kernel_from_measure(G, hit_and_run_measure(S)).matrix
    if fact.aux_dim <= MATERIALIZE_LIMIT:
        P, R, Pstar = fact.materialize()
        composed = Pstar @ (R @ P)
    else:
        composed = np.zeros_like(Q)
        k = fact.k
        xs = np.arange(G.size)
        for orb, m in zip(fact.orbits, fact.orders):
            w = 1.0 / (k * m)
            for j in range(m):
                composed[xs, orb[:, j]] += w
    return float(np.abs(composed - Q).max())


def positivity_certificate(
    G: FiniteGroup, S: GeneratingTuple, trials: int = 100, seed: int = 0
) -> dict:
    """Constructive check that the hit-and-run operator Q is non-negative:
    full spectrum, plus <Qf, f> reproduced as ||RPf||^2_aux on random f."""
    q = hit_and_run_measure(S)
    kernel = kernel_from_measure(G, q)
    report = symmetric_eigenvalues(kernel)
    fact = build_factorization(G, S)
    rng = np.random.default_rng(seed)
    quad_min = math.inf
    quad_err = 0.0
    for _ in range(trials):
        f = rng.standard_normal(G.size)
        qff = float(f @ kernel.matrix @ f) / G.size
        rpf = fact.apply_RP(f)
        norm_sq = fact.aux_inner(rpf, rpf)
        quad_min = min(quad_min, qff)
        quad_err = max(quad_err, abs(qff - norm_sq))
    return {
        "min_eig": report.min_eigenvalue,
        "gap": report.gap,
        "spectrum": report,
        "quadratic_min": quad_min,
        "quadratic_error": quad_err,
        "factorization_error": verify_factorization(G, S),
    }


# --- comparison with random insertions --------------------------------------


def two_factor_word(n: int, i: int, j: int):
    """The pair ((k1, l1), (k2, l2)) with sigma_ij = sigma_k1^l1 * sigma_k2^l2
    (left factor applied first)."""
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"need distinct indices in 1..{n}")
    if i < j:
        return ((j, i), (j - 1, j - i))
    return ((i - 1, j - 1), (i, i - j))


def _check_word(n: int, i: int, j: int) -> None:
    (k1, l1), (k2, l2) = two_factor_word(n, i, j)
    prod = top_to_random_generator(n, k1) ** l1 * top_to_random_generator(n, k2) ** l2
    if prod != random_insertion_generator(n, i, j):
        raise AssertionError(f"word for sigma_{i},{j} does not multiply out (n={n})")


def hnr_ttr_power_masses(n: int) -> dict:
    """Exact q-mass of every element sigma_k^l, without enumerating S_n."""
    masses: dict = {}
    for k in range(1, n + 1):
        sigma = top_to_random_generator(n, k)
        w = Fraction(1, n * k)
        h = Permutation.identity(n)
        for _ in range(k):
            masses[h] = masses.get(h, Fraction(0)) + w
            h = h * sigma
    return masses


def comparison_constant(n: int) -> dict:
    """Weights (1/q(sigma)) sum |sigma_ij| N(sigma, sigma_ij) mu(sigma_ij) per
    generator power, and their maximum A, all in exact rationals.

    Every two-factor word is validated by multiplying it out; a failure is a
    hard error (it would indicate a composition-convention bug).
    """
    if n < 3:
        raise ValueError("n must be >= 3")
    masses = hnr_ttr_power_masses(n)
    slot_weight = Fraction(1, n * n)  # one random-insertion tuple slot
    counts: dict = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            _check_word(n, i, j)
            for k, l in two_factor_word(n, i, j):
                if 1 <= l <= k - 1:  # skip identity factors
                    counts[(k, l)] = counts.get((k, l), Fraction(0)) + 2 * slot_weight
    weights = {}
    for (k, l), total in counts.items():
        q_mass = masses[top_to_random_generator(n, k) ** l]
        weights[(k, l)] = total / q_mass
    A = max(weights.values())
    return {"A": A, "weights": weights}


def sign_representation_eigenvalue(mu: GroupMeasure) -> Fraction:
    """sum_sigma mu(sigma) sign(sigma)."""
    if mu.group.kind != "symmetric":
        raise ValueError("sign representation requires a symmetric-group measure")
    return sum((p * g.sign() for g, p in mu.probs.items()), Fraction(0))


def dirichlet_comparison_check(n: int, trials: int = 100, seed: int = 0) -> dict:
    """E_mu(f, f) <= 8 E_q(f, f) on random f (mu = random insertions, q = hit-and-run
    top-to-random)."""
    q = hnr_top_to_random(n)
    mu = random_to_random_measure(n)
    rng = np.random.default_rng(seed)
    worst = -math.inf
    ok = True
    for _ in range(trials):
        f = rng.standard_normal(q.group.size)
        e_mu = dirichlet_form(mu, f)
        e_q = dirichlet_form(q, f)
        slack = e_mu - 8.0 * e_q
        worst = max(worst, slack)
        if slack > 1e-12:
            ok = False
    return {"ok": ok, "worst_slack": worst}


def dcomp_inequality_check(n: int, t: int) -> dict:
    """Both sides of d2(q^(t), u)^2 <= n! e^{-t/8} + d2(mu^([t/12]), u)^2,
    evaluated by full spectral sums.  The variant with q in the final term is
    reported alongside."""
    G = FiniteGroup.symmetric(n)
    q_spec = symmetric_eigenvalues(kernel_from_measure(G, hnr_top_to_random(n)))
    mu_spec = symmetric_eigenvalues(kernel_from_measure(G, random_to_random_measure(n)))
    lhs = q_spec.d2_squared(t)
    s = t // 12
    rhs_mu = math.factorial(n) * math.exp(-t / 8.0) + mu_spec.d2_squared(s)
    rhs_q = math.factorial(n) * math.exp(-t / 8.0) + q_spec.d2_squared(s)
    return {"lhs": lhs, "rhs": rhs_mu, "rhs_q_variant": rhs_q}
