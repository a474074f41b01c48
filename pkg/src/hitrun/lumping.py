"""Markov-chain projection (lumping) and the k-card chains."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, Permutation
from .markov import Kernel, StateGuardExceeded
from .measures import GroupMeasure
from .spectral import jacobi_eigh

LUMPABILITY_TOL = 1e-12


class NonLumpableProjection(ValueError):
    pass


@dataclass
class Projection:
    """Surjective map between enumerated state spaces, as an index array."""

    source_labels: list
    target_labels: list
    mapping: np.ndarray  # source index -> target index

    def __post_init__(self):
        self.mapping = np.asarray(self.mapping, dtype=np.int64)
        if len(self.mapping) != len(self.source_labels):
            raise ValueError("mapping length mismatch")
        if set(self.mapping.tolist()) != set(range(len(self.target_labels))):
            raise ValueError("projection is not surjective")


@dataclass
class LumpedChain:
    projection: Projection
    kernel: Kernel
    stationary: np.ndarray  # push-forward of the source stationary measure
    residual: float


def lump(kernel: Kernel, projection: Projection, tol: float = LUMPABILITY_TOL) -> LumpedChain:
    """Project a kernel through a map; fails if the fiber sums depend on more
    than the image of the source state."""
    n_src = kernel.size
    n_tgt = len(projection.target_labels)
    if len(projection.source_labels) != n_src:
        raise ValueError("projection does not cover the kernel's state space")
    # fiber column sums per source state
    sums = np.zeros((n_src, n_tgt))
    for y in range(n_src):
        sums[:, projection.mapping[y]] += kernel.matrix[:, y]
    lumped = np.zeros((n_tgt, n_tgt))
    counts = np.zeros(n_tgt)
    for x in range(n_src):
        xbar = projection.mapping[x]
        if counts[xbar] == 0:
            lumped[xbar] = sums[x]
        counts[xbar] += 1
    residual = 0.0
    for x in range(n_src):
        residual = max(residual, float(np.abs(sums[x] - lumped[projection.mapping[x]]).max()))
    if residual > tol:
        raise NonLumpableProjection(f"lumpability residual {residual:.3e} > {tol:.0e}")
    stationary = counts / n_src  # source stationary is uniform here
    return LumpedChain(projection, Kernel(projection.target_labels, lumped), stationary, residual)


def card_projection(G: FiniteGroup, positions: tuple) -> Projection:
    """Project a deck arrangement to the current positions of the cards that
    started at the given (1-based) positions."""
    n = G.params[0]
    targets = list(itertools.permutations(range(1, n + 1), len(positions)))
    target_index = {t: i for i, t in enumerate(targets)}
    mapping = [
        target_index[tuple(x.apply(p) for p in positions)] for x in G.elements
    ]
    return Projection(list(G.elements), targets, np.array(mapping))


def k_card_kernel(
    n: int, k: int, measure: GroupMeasure, max_states: int = 20_000
) -> Kernel:
    """Kernel on ordered k-tuples of distinct positions, built directly from
    the measure's support: tuple (p1..pk) -> (g(p1)..g(pk)) with weight mu(g)."""
    if k not in (1, 2, 3):
        raise ValueError("k must be 1, 2, or 3")
    states = list(itertools.permutations(range(1, n + 1), k))
    if len(states) > max_states:
        raise StateGuardExceeded(f"{len(states)} tuple states exceed guard {max_states}")
    index = {s: i for i, s in enumerate(states)}
    m = np.zeros((len(states), len(states)))
    xs = np.arange(len(states))
    for g, p in measure.probs.items():
        if p == 0:
            continue
        idx = np.array([index[tuple(g.apply(q) for q in s)] for s in states])
        m[xs, idx] += float(p)
    return Kernel(states, m)


def lifted_eigencheck(
    lumped_kernel: Kernel,
    projection: Projection,
    full_kernel: Kernel,
    tol: float = 1e-9,
) -> bool:
    """Each eigenpair of the lumped chain lifts to an eigenpair of the full
    chain through the projection."""
    vals, vecs = jacobi_eigh(lumped_kernel.matrix)
    Q = full_kernel.matrix
    for idx in range(len(vals)):
        phi = vecs[projection.mapping, idx]
        if np.abs(Q @ phi - vals[idx] * phi).max() > tol:
            return False
    return True


def tv_projection_bound_check(full_curve, lumped_curve, tol: float = 1e-12) -> bool:
    """TV of the full chain dominates TV of any of its lumpings, pointwise in t."""
    full = dict(zip(full_curve.column("t"), full_curve.column("tv")))
    lumped = dict(zip(lumped_curve.column("t"), lumped_curve.column("tv")))
    common = sorted(set(full) & set(lumped))
    if not common:
        raise ValueError("curves share no time points")
    return all(full[t] >= lumped[t] - tol for t in common)


def eigenvalue_histogram(eigenvalues, bin_width: float = 0.01) -> list:
    """(bin_left, count) pairs over [floor(min), 1] with fixed-width bins."""
    lo = min(0.0, math.floor(min(eigenvalues) * 100) / 100)
    edges = np.arange(lo, 1.0 + bin_width, bin_width)
    # clip so values a rounding error outside [lo, 1] land in the edge bins
    values = np.clip(np.asarray(eigenvalues), edges[0], edges[-1])
    counts, _ = np.histogram(values, bins=edges)
    return [(float(edges[i]), int(counts[i])) for i in range(len(counts))]
