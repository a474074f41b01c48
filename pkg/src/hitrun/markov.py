"""Kernels, exact distribution evolution, and distances to uniform."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import FiniteGroup
from .measures import GroupMeasure

DEFAULT_STATE_GUARD = 10_000


class StateGuardExceeded(ValueError):
    pass


@dataclass
class Kernel:
    """Dense row-stochastic matrix over an enumerated state space."""

    labels: list
    matrix: np.ndarray

    def __post_init__(self):
        m = self.matrix
        if m.shape != (len(self.labels), len(self.labels)):
            raise ValueError("matrix shape does not match state count")
        if (m < -1e-12).any():
            raise ValueError("negative transition probability")
        rowsums = m.sum(axis=1)
        if np.abs(rowsums - 1.0).max() > 1e-10:
            raise ValueError("rows do not sum to 1")

    @property
    def size(self) -> int:
        return len(self.labels)

    def is_symmetric(self, tol: float = 1e-10) -> bool:
        return np.abs(self.matrix - self.matrix.T).max() <= tol


def _action_index(G: FiniteGroup, g) -> np.ndarray:
    """Index array a with a[x] = index(x * g)."""
    return np.array([G.index(x * g) for x in G.elements], dtype=np.int64)


def kernel_from_measure(
    G: FiniteGroup, mu: GroupMeasure, max_states: int = DEFAULT_STATE_GUARD
) -> Kernel:
    """M(x, y) = mu(x^{-1} y)."""
    if mu.group != G:
        raise ValueError("measure group mismatch")
    if G.size > max_states:
        raise StateGuardExceeded(f"|G| = {G.size} exceeds guard {max_states}")
    m = np.zeros((G.size, G.size))
    xs = np.arange(G.size)
    for g, p in mu.probs.items():
        if p == 0:
            continue
        m[xs, _action_index(G, g)] += float(p)
    return Kernel(list(G.elements), m)


# --- distances to the uniform distribution ----------------------------------


def tv_from_vector(nu: np.ndarray) -> float:
    m = len(nu)
    return 0.5 * math.fsum(abs(v - 1.0 / m) for v in nu)


def d2_from_vector(nu: np.ndarray) -> float:
    m = len(nu)
    return math.sqrt(m * math.fsum((v - 1.0 / m) ** 2 for v in nu))


def dinf_from_vector(nu: np.ndarray) -> float:
    m = len(nu)
    return max(abs(m * v - 1.0) for v in nu)


def _as_vector(nu, G: FiniteGroup | None = None) -> np.ndarray:
    if isinstance(nu, GroupMeasure):
        G = nu.group
        v = np.zeros(G.size)
        for g, p in nu.probs.items():
            v[G.index(g)] = float(p)
        return v
    return np.asarray(nu, dtype=float)


def tv_distance(nu) -> float:
    return tv_from_vector(_as_vector(nu))


def d2_distance(nu) -> float:
    return d2_from_vector(_as_vector(nu))


def dinf_distance(nu) -> float:
    return dinf_from_vector(_as_vector(nu))


# --- distance curves ---------------------------------------------------------

CROSSING_LEVELS = (0.5, 0.25, 1.0 / math.e, 0.01)


@dataclass
class DistanceCurve:
    """Per-step (t, tv, d2, dinf) records for one walk, with metadata."""

    rows: list  # of (t, tv, d2, dinf)
    meta: dict = field(default_factory=dict)

    def column(self, name: str) -> list:
        i = {"t": 0, "tv": 1, "d2": 2, "dinf": 3}[name]
        return [r[i] for r in self.rows]

    def crossing_times(self, column: str = "tv", levels=CROSSING_LEVELS) -> dict:
        """First t at which the column falls to or below each level (None if never)."""
        values = self.column(column)
        times = self.column("t")
        out = {}
        for level in levels:
            out[level] = next(
                (t for t, v in zip(times, values) if v <= level), None
            )
        return out

    def to_csv(self, fh) -> None:
        fh.write("t,tv,d2,dinf\n")
        for t, tv, d2, dinf in self.rows:
            fh.write(f"{t},{tv:.17g},{d2:.17g},{dinf:.17g}\n")


def distance_curve(
    mu: GroupMeasure,
    t_max: int,
    start=None,
    max_states: int = DEFAULT_STATE_GUARD,
) -> DistanceCurve:
    """Evolve nu_{t+1} = nu_t * mu from a point mass and record all three distances.

    The evolution is sparse in the driving measure: one scatter per support
    element per step, so the full |G| x |G| kernel is never materialized.
    """
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    G = mu.group
    if G.size > max_states:
        raise StateGuardExceeded(f"|G| = {G.size} exceeds guard {max_states}")
    if start is None:
        start = G.identity
    nu = np.zeros(G.size)
    nu[G.index(start)] = 1.0
    actions = [(float(p), _action_index(G, g)) for g, p in mu.probs.items() if p > 0]
    rows = [(0, tv_from_vector(nu), d2_from_vector(nu), dinf_from_vector(nu))]
    for t in range(1, t_max + 1):
        new = np.zeros(G.size)
        for p, idx in actions:
            new[idx] += p * nu
        nu = new
        rows.append((t, tv_from_vector(nu), d2_from_vector(nu), dinf_from_vector(nu)))
    return DistanceCurve(rows, {"group": repr(G), "start": start})


def kernel_curve(kernel: Kernel, start_index: int, t_max: int) -> DistanceCurve:
    """Distance curve of K^t(start, .) for an arbitrary kernel (used for lumped chains)."""
    nu = np.zeros(kernel.size)
    nu[start_index] = 1.0
    rows = [(0, tv_from_vector(nu), d2_from_vector(nu), dinf_from_vector(nu))]
    for t in range(1, t_max + 1):
        nu = nu @ kernel.matrix
        rows.append((t, tv_from_vector(nu), d2_from_vector(nu), dinf_from_vector(nu)))
    return DistanceCurve(rows, {"start_index": start_index})


# --- Dirichlet form ----------------------------------------------------------


def dirichlet_form(nu: GroupMeasure, f, g=None) -> float:
    """E_nu(f, g) = (1/2|G|) sum_{x,y} (f(xy) - f(x)) (g(xy) - g(x)) nu(y).

    f and g are arrays indexed by the group enumeration; nu must be symmetric.
    """
    if not nu.is_symmetric():
        raise ValueError("dirichlet_form requires a symmetric measure")
    G = nu.group
    f = np.asarray(f, dtype=float)
    g = f if g is None else np.asarray(g, dtype=float)
    terms = []
    for y, p in nu.probs.items():
        if p == 0:
            continue
        idx = _action_index(G, y)
        terms.append(float(p) * float(np.dot(f[idx] - f, g[idx] - g)))
    return math.fsum(terms) / (2 * G.size)
