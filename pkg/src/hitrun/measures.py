"""Probability measures on finite groups.

Masses are kept as exact rationals so that equality claims (identity masses,
measure coincidences) do not depend on float rounding; float views are
provided for the numerical layers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .groups import (
    CyclicVector,
    FiniteGroup,
    GeneratingTuple,
    Permutation,
    order,
    top_to_random_generator,
    top_to_random_tuple,
)


@dataclass
class GroupMeasure:
    """Sparse probability measure on a finite group, with exact rational masses."""

    group: FiniteGroup
    probs: dict

    def __post_init__(self):
        total = Fraction(0)
        for g, p in self.probs.items():
            if not self.group.contains(g):
                raise ValueError(f"support element {g!r} not in {self.group!r}")
            p = Fraction(p)
            if p < 0:
                raise ValueError(f"negative mass {p} at {g!r}")
            self.probs[g] = p
            total += p
        if total != 1:
            raise ValueError(f"total mass {total} != 1")

    @property
    def support(self) -> list:
        return [g for g, p in self.probs.items() if p > 0]

    def exact(self, g) -> Fraction:
        return self.probs.get(g, Fraction(0))

    def prob(self, g) -> float:
        return float(self.exact(g))

    def is_symmetric(self) -> bool:
        return all(self.exact(g.inverse()) == p for g, p in self.probs.items())

    def __eq__(self, other):
        if not isinstance(other, GroupMeasure) or self.group != other.group:
            return NotImplemented
        support = set(self.support) | set(other.support)
        return all(self.exact(g) == other.exact(g) for g in support)

    def to_json(self) -> str:
        if self.group.kind == "symmetric":
            group = {"kind": "symmetric", "n": self.group.params[0]}
            entries = [
                {"element": list(g.one_line()), "p": float(p)}
                for g, p in sorted(self.probs.items(), key=lambda kv: kv[0].images)
            ]
        else:
            n, d = self.group.params
            group = {"kind": "cyclic_power", "n": n, "d": d}
            entries = [
                {"element": list(g.coords), "p": float(p)}
                for g, p in sorted(self.probs.items(), key=lambda kv: kv[0].coords)
            ]
        return json.dumps({"group": group, "entries": entries}, indent=2)


def delta(group: FiniteGroup, g) -> GroupMeasure:
    return GroupMeasure(group, {g: Fraction(1)})


def uniform_tuple_measure(S: GeneratingTuple) -> GroupMeasure:
    """mu_S: mass 1/k per tuple slot, accumulated over repeated elements."""
    k = len(S)
    probs: dict = {}
    w = Fraction(1, k)
    for g in S.elements:
        probs[g] = probs.get(g, Fraction(0)) + w
    return GroupMeasure(S.group, probs)


def hit_and_run_measure(S: GeneratingTuple) -> GroupMeasure:
    """q_S: pick a slot uniformly, then a uniform power of that generator."""
    k = len(S)
    probs: dict = {}
    for s in S.elements:
        m = order(s)
        w = Fraction(1, k * m)
        h = s.identity_element()
        for _ in range(m):
            probs[h] = probs.get(h, Fraction(0)) + w
            h = h * s
    return GroupMeasure(S.group, probs)


def hnr_top_to_random(n: int) -> GroupMeasure:
    """Hit-and-run version of top-to-random on S_n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return hit_and_run_measure(top_to_random_tuple(n))


def random_to_random_measure(n: int) -> GroupMeasure:
    from .groups import random_to_random_tuple

    return uniform_tuple_measure(random_to_random_tuple(n))


def packet_description_measure(n: int) -> GroupMeasure:
    """Uniform position i in 1..n, uniform packet size j in 1..i, move the top-j
    packet below the card originally at position i (the permutation sigma_i^j)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    G = FiniteGroup.symmetric(n)
    probs: dict = {}
    for i in range(1, n + 1):
        sigma = top_to_random_generator(n, i)
        w = Fraction(1, n * i)
        h = sigma
        for _ in range(i):
            probs[h] = probs.get(h, Fraction(0)) + w
            h = h * sigma
    return GroupMeasure(G, probs)


def crude_overhand_measure(n: int) -> GroupMeasure:
    """Pick a <= b (a uniform in 1..n, b uniform in a..n); with packets
    top = [1,a], middle = [a+1,b], bottom = [b+1,n], reorder to bottom-middle-top."""
    if n < 2:
        raise ValueError("n must be >= 2")
    G = FiniteGroup.symmetric(n)
    probs: dict = {}
    for a in range(1, n + 1):
        w = Fraction(1, n * (n - a + 1))
        for b in range(a, n + 1):
            images = [0] * n
            for p in range(1, a + 1):
                images[p - 1] = p + n - a - 1
            for p in range(a + 1, b + 1):
                images[p - 1] = (n - b) + (p - a) - 1
            for p in range(b + 1, n + 1):
                images[p - 1] = p - b - 1
            g = Permutation(tuple(images))
            probs[g] = probs.get(g, Fraction(0)) + w
    return GroupMeasure(G, probs)


def borel_measure(n: int) -> GroupMeasure:
    """Remove the middle packet at positions a..b (a <= b uniform over the
    n(n+1)/2 pairs) and place it on top."""
    if n < 2:
        raise ValueError("n must be >= 2")
    G = FiniteGroup.symmetric(n)
    probs: dict = {}
    w = Fraction(2, n * (n + 1))
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            size = b - a + 1
            images = [0] * n
            for p in range(1, a):
                images[p - 1] = p + size - 1
            for p in range(a, b + 1):
                images[p - 1] = p - a
            for p in range(b + 1, n + 1):
                images[p - 1] = p - 1
            g = Permutation(tuple(images))
            probs[g] = probs.get(g, Fraction(0)) + w
    return GroupMeasure(G, probs)


def hit_and_run_cyclic(n: int, d: int) -> GroupMeasure:
    from .groups import cyclic_shift_tuple

    return hit_and_run_measure(cyclic_shift_tuple(n, d))


def convolve(a: GroupMeasure, b: GroupMeasure) -> GroupMeasure:
    """(a * b)(x) = sum_y a(y) b(y^{-1} x), support-sparse and exact."""
    if a.group != b.group:
        raise ValueError("group mismatch")
    probs: dict = {}
    for y, py in a.probs.items():
        if py == 0:
            continue
        for z, pz in b.probs.items():
            x = y * z
            probs[x] = probs.get(x, Fraction(0)) + py * pz
    return GroupMeasure(a.group, probs)


def t_fold(a: GroupMeasure, t: int) -> GroupMeasure:
    if t < 0:
        raise ValueError("t must be >= 0")
    result = delta(a.group, a.group.identity)
    for _ in range(t):
        result = convolve(result, a)
    return result
