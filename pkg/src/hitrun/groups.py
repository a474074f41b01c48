"""Finite groups as enumerable structures, plus the shuffle generators.

Two concrete element types are supported: permutations of a deck of n cards
(position maps) and vectors of residues mod n.  Positions are 1-based in all
public constructors and 0-based internally.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Permutation:
    """A bijection on positions, stored 0-based: ``images[p]`` is where position p goes.

    Applying g to a deck d yields d' with d'[g(p)] = d[p].  The product a*b
    means "apply a first, then b", so a walk step is X -> X*g.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError("images must be a bijection on 0..n-1")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(n)))

    @classmethod
    def from_one_line(cls, images_1based) -> Permutation:
        return cls(tuple(i - 1 for i in images_1based))

    def one_line(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in self.images)

    def identity_element(self) -> Permutation:
        return Permutation.identity(self.n)

    def __mul__(self, other: Permutation) -> Permutation:
        if self.n != other.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        return Permutation(tuple(other.images[i] for i in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for p, q in enumerate(self.images):
            inv[q] = p
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def apply(self, position: int) -> int:
        """New position (1-based) of the card currently at `position` (1-based)."""
        return self.images[position - 1] + 1

    def sign(self) -> int:
        seen = [False] * self.n
        sgn = 1
        for start in range(self.n):
            if seen[start]:
                continue
            length = 0
            p = start
            while not seen[p]:
                seen[p] = True
                p = self.images[p]
                length += 1
            if length % 2 == 0:
                sgn = -sgn
        return sgn


@dataclass(frozen=True)
class CyclicVector:
    """Element of (Z/nZ)^d; the group operation is coordinate-wise addition mod n."""

    coords: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        if any(not (0 <= c < self.modulus) for c in self.coords):
            raise ValueError("coordinates must lie in 0..modulus-1")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @classmethod
    def zero(cls, n: int, d: int) -> CyclicVector:
        return cls((0,) * d, n)

    @classmethod
    def unit(cls, n: int, d: int, j: int, value: int = 1) -> CyclicVector:
        """value * e_j in (Z/nZ)^d, with j in 1..d."""
        coords = [0] * d
        coords[j - 1] = value % n
        return cls(tuple(coords), n)

    def identity_element(self) -> CyclicVector:
        return CyclicVector.zero(self.modulus, self.dimension)

    def __mul__(self, other: CyclicVector) -> CyclicVector:
        if self.modulus != other.modulus or self.dimension != other.dimension:
            raise ValueError("group mismatch")
        n = self.modulus
        return CyclicVector(
            tuple((a + b) % n for a, b in zip(self.coords, other.coords)), n
        )

    def inverse(self) -> CyclicVector:
        n = self.modulus
        return CyclicVector(tuple((-a) % n for a in self.coords), n)

    def __pow__(self, k: int) -> CyclicVector:
        n = self.modulus
        return CyclicVector(tuple((a * k) % n for a in self.coords), n)


def order(g) -> int:
    """Least m >= 1 with g^m = identity."""
    e = g.identity_element()
    h = g
    m = 1
    while h != e:
        h = h * g
        m += 1
    return m


_ENUMERATION_GUARD = 500_000


class FiniteGroup:
    """A finite group with a stable lexicographic element enumeration.

    Enumeration is lazy: groups too large to enumerate (e.g. S_100) can still
    be used for element-level work; touching ``elements`` raises if the group
    exceeds the guard.
    """

    def __init__(self, kind: str, params: tuple, size: int, identity, enumerate_fn):
        self.kind = kind
        self.params = params
        self.size = size
        self.identity = identity
        self._enumerate_fn = enumerate_fn
        self._elements = None
        self._index = None

    @classmethod
    def symmetric(cls, n: int) -> FiniteGroup:
        if n < 1:
            raise ValueError("n must be >= 1")

        def enumerate_fn():
            return [Permutation(p) for p in itertools.permutations(range(n))]

        return cls("symmetric", (n,), math.factorial(n), Permutation.identity(n), enumerate_fn)

    @classmethod
    def cyclic_power(cls, n: int, d: int) -> FiniteGroup:
        if n < 1 or d < 1:
            raise ValueError("n and d must be >= 1")

        def enumerate_fn():
            return [CyclicVector(c, n) for c in itertools.product(range(n), repeat=d)]

        return cls("cyclic_power", (n, d), n**d, CyclicVector.zero(n, d), enumerate_fn)

    @property
    def elements(self) -> list:
        if self._elements is None:
            if self.size > _ENUMERATION_GUARD:
                raise ValueError(
                    f"group of size {self.size} exceeds enumeration guard {_ENUMERATION_GUARD}"
                )
            self._elements = self._enumerate_fn()
            self._index = {g: i for i, g in enumerate(self._elements)}
        return self._elements

    def index(self, g) -> int:
        self.elements
        return self._index[g]

    def element(self, i: int):
        return self.elements[i]

    def contains(self, g) -> bool:
        """Structural membership check; never forces enumeration."""
        if self.kind == "symmetric":
            return isinstance(g, Permutation) and g.n == self.params[0]
        return (
            isinstance(g, CyclicVector)
            and g.modulus == self.params[0]
            and g.dimension == self.params[1]
        )

    def __eq__(self, other):
        return (
            isinstance(other, FiniteGroup)
            and self.kind == other.kind
            and self.params == other.params
        )

    def __hash__(self):
        return hash((self.kind, self.params))

    def __repr__(self):
        return f"FiniteGroup({self.kind}{self.params}, size={self.size})"


@dataclass(frozen=True)
class GeneratingTuple:
    """Ordered tuple of group elements (repetitions allowed)."""

    group: FiniteGroup
    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise ValueError("empty generating tuple")
        for g in self.elements:
            if not self.group.contains(g):
                raise ValueError(f"{g!r} does not belong to {self.group!r}")

    def __len__(self) -> int:
        return len(self.elements)

    def generates(self) -> bool:
        """Closure check by breadth-first multiplication; requires an enumerable group."""
        reached = {self.group.identity}
        frontier = [self.group.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in self.elements:
                    y = x * s
                    if y not in reached:
                        reached.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(reached) == self.group.size


# --- shuffle generators on S_n ---------------------------------------------


def top_to_random_generator(n: int, k: int) -> Permutation:
    """The cycle (k, k-1, ..., 2, 1): top card goes to position k."""
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    images = list(range(n))
    images[0] = k - 1
    for p in range(1, k):
        images[p] = p - 1
    return Permutation(tuple(images))


def random_insertion_generator(n: int, i: int, j: int) -> Permutation:
    """Take the card in position i and insert it in position j (the cycle (j,...,i) for i<j)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"indices ({i},{j}) out of range 1..{n}")
    if i == j:
        return Permutation.identity(n)
    if i > j:
        return random_insertion_generator(n, j, i).inverse()
    images = list(range(n))
    images[i - 1] = j - 1
    for p in range(i, j):
        images[p] = p - 1
    return Permutation(tuple(images))


def transposition(n: int, i: int, j: int) -> Permutation:
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"indices ({i},{j}) out of range 1..{n}")
    images = list(range(n))
    images[i - 1], images[j - 1] = j - 1, i - 1
    return Permutation(tuple(images))


def top_to_random_tuple(n: int) -> GeneratingTuple:
    G = FiniteGroup.symmetric(n)
    return GeneratingTuple(G, tuple(top_to_random_generator(n, k) for k in range(1, n + 1)))


def random_to_random_tuple(n: int) -> GeneratingTuple:
    """All n^2 insertions sigma_ij, ordered lexicographically in (i, j)."""
    G = FiniteGroup.symmetric(n)
    elems = tuple(
        random_insertion_generator(n, i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
    )
    return GeneratingTuple(G, elems)


def random_transposition_tuple(n: int) -> GeneratingTuple:
    """All n^2 ordered pairs (i, j) as transpositions; i = j gives the identity."""
    G = FiniteGroup.symmetric(n)
    elems = tuple(
        transposition(n, i, j) for i in range(1, n + 1) for j in range(1, n + 1)
    )
    return GeneratingTuple(G, elems)


def cyclic_shift_tuple(n: int, d: int) -> GeneratingTuple:
    """(0, e_1, -e_1, ..., e_d, -e_d) on (Z/nZ)^d."""
    G = FiniteGroup.cyclic_power(n, d)
    elems = [CyclicVector.zero(n, d)]
    for j in range(1, d + 1):
        elems.append(CyclicVector.unit(n, d, j, 1))
        elems.append(CyclicVector.unit(n, d, j, -1))
    return GeneratingTuple(G, tuple(elems))
