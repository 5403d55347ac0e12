"""Incremental relaxation: exact rejection that drops nested constraints one level at a time.

An element at level ``i`` is a ground object together with constraints
``C_1 ⊇ ... ⊇ C_i`` it satisfies.  ``loosen`` drops the innermost constraint,
keeping the shorter prefix with probability ``lower(i-1) / b(prefix)`` where
``b`` counts the level-``i`` extensions of that prefix.  Uniform input at
level ``i`` gives uniform output at level ``i-1``.  ``relax`` runs the whole
chain down to the ground object with a single draw against the product of the
per-level ratios, which has the same output distribution.

All probabilities are ratios of integers and every draw is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

from .errors import BoundViolation

_INT64_LIMIT = 2**63 - 1


def randbelow(rng: np.random.Generator, n: int) -> int:
    """Uniform integer in ``[0, n)`` for arbitrarily large ``n``."""
    if n <= 0:
        raise ValueError("n must be positive")
    if n <= _INT64_LIMIT:
        return int(rng.integers(n))
    nbits = n.bit_length()
    nbytes = (nbits + 7) // 8
    shift = 8 * nbytes - nbits
    while True:
        x = int.from_bytes(rng.bytes(nbytes), "little") >> shift
        if x < n:
            return x


def bernoulli(rng: np.random.Generator, num: int, den: int) -> bool:
    """True with probability exactly ``num/den`` (0 <= num <= den)."""
    if not 0 <= num <= den or den <= 0:
        raise ValueError(f"invalid probability {num}/{den}")
    if num == den:
        return True
    if num == 0:
        return False
    return randbelow(rng, den) < num


def check_bounds(lowers: Sequence[int], counts: Sequence[int]) -> None:
    for i, (lo, b) in enumerate(zip(lowers, counts)):
        if lo <= 0:
            raise ValueError(f"lower bound at level {i} must be positive, got {lo}")
        if lo > b:
            raise BoundViolation(f"lower bound {lo} exceeds count {b} at level {i}")


def accept_relaxed(rng: np.random.Generator, lowers: Sequence[int], counts: Sequence[int]) -> bool:
    """One draw with probability ``prod(lowers) / prod(counts)``."""
    check_bounds(lowers, counts)
    return bernoulli(rng, math.prod(lowers), math.prod(counts))


# -- generic chains ---------------------------------------------------------


@dataclass(frozen=True)
class ConstraintChain:
    """A ground element with the labels of its constraint sets, outermost first."""

    ground: Hashable
    constraints: tuple = ()

    @property
    def depth(self) -> int:
        return len(self.constraints)

    def prefix(self) -> "ConstraintChain":
        return ConstraintChain(self.ground, self.constraints[:-1])


@dataclass(frozen=True)
class ExtensionCounter:
    """``count(F)`` is the number of one-level extensions of ``F``; ``lower[i]`` bounds it on level ``i``."""

    count: Callable[[ConstraintChain], int]
    lower: Sequence[int]


def loosen_probability(F: ConstraintChain, counter: ExtensionCounter) -> Fraction:
    i = F.depth
    lo = counter.lower[i - 1]
    b = counter.count(F.prefix())
    check_bounds([lo], [b])
    return Fraction(lo, b)


def loosen(F: ConstraintChain, counter: ExtensionCounter, rng) -> ConstraintChain | None:
    """Drop the innermost constraint of ``F``, or return ``None`` on rejection."""
    p = loosen_probability(F, counter)
    return F.prefix() if bernoulli(rng, p.numerator, p.denominator) else None


def _chain_counts(F: ConstraintChain, counter: ExtensionCounter):
    lowers, counts = [], []
    for i in range(F.depth):
        lowers.append(counter.lower[i])
        counts.append(counter.count(ConstraintChain(F.ground, F.constraints[:i])))
    return lowers, counts


def relax_probability(F: ConstraintChain, counter: ExtensionCounter) -> Fraction:
    lowers, counts = _chain_counts(F, counter)
    check_bounds(lowers, counts)
    return Fraction(math.prod(lowers), math.prod(counts))


def iterated_probability(F: ConstraintChain, counter: ExtensionCounter) -> Fraction:
    """Survival probability of repeated ``loosen`` calls, computed level by level."""
    p = Fraction(1)
    while F.depth:
        p *= loosen_probability(F, counter)
        F = F.prefix()
    return p


def relax(F: ConstraintChain, counter: ExtensionCounter, rng):
    """Ground element of ``F`` after a single collapsed acceptance draw, or ``None``."""
    lowers, counts = _chain_counts(F, counter)
    return F.ground if accept_relaxed(rng, lowers, counts) else None


def relax_iterated(F: ConstraintChain, counter: ExtensionCounter, rng):
    while F.depth:
        F = loosen(F, counter, rng)
        if F is None:
            return None
    return F.ground


# -- synthetic nested families for checking uniformity --------------------------


class NestedFamily:
    """A finite family of chains ``(g, C_1, ..., C_k)`` with ``g ∈ C_k ⊆ ... ⊆ C_1``.

    ``sets`` maps constraint labels to frozensets of ground elements; distinct
    labels may carry equal sets.
    """

    def __init__(self, top: Sequence[tuple], sets: Mapping[Hashable, frozenset]):
        self.sets = dict(sets)
        self.top = [ConstraintChain(t[0], tuple(t[1:])) for t in top]
        if not self.top:
            raise ValueError("empty family")
        self.k = self.top[0].depth
        for F in self.top:
            if F.depth != self.k:
                raise ValueError("all top-level chains need the same depth")
            inner = None
            for label in reversed(F.constraints):
                s = self.sets[label]
                if inner is None and F.ground not in s:
                    raise ValueError(f"{F} violates nesting")
                if inner is not None and not inner <= s:
                    raise ValueError(f"{F} violates nesting")
                inner = s
        self.levels: list[set] = [set() for _ in range(self.k + 1)]
        self._ext: dict[ConstraintChain, int] = {}
        for F in set(self.top):
            for i in range(self.k + 1):
                self.levels[i].add(ConstraintChain(F.ground, F.constraints[:i]))
        for i in range(1, self.k + 1):
            for F in self.levels[i]:
                p = F.prefix()
                self._ext[p] = self._ext.get(p, 0) + 1
        self.top = sorted(self.levels[self.k], key=repr)
        self.ground = sorted({F.ground for F in self.top}, key=repr)

    def b(self, F: ConstraintChain) -> int:
        return self._ext.get(F, 0)

    def lower_bounds(self) -> list[int]:
        return [min(self.b(F) for F in self.levels[i]) for i in range(self.k)]

    def counter(self, lower: Sequence[int] | None = None) -> ExtensionCounter:
        return ExtensionCounter(self.b, list(self.lower_bounds() if lower is None else lower))

    def output_distribution(self, probability=relax_probability) -> dict:
        """Exact probability of each ground output given uniform input over the top level."""
        counter = self.counter()
        out = {g: Fraction(0) for g in self.ground}
        w = Fraction(1, len(self.top))
        for F in self.top:
            out[F.ground] += w * probability(F, counter)
        return out


def random_family(rng: np.random.Generator, max_ground: int = 50, depth: int = 3) -> NestedFamily:
    """A random nested family over at most ``max_ground`` elements."""
    while True:
        fam = _try_random_family(rng, max_ground, depth)
        if fam is not None:
            return fam


def _try_random_family(rng, max_ground, depth):
    size = int(rng.integers(4, max_ground + 1))
    ground = list(range(size))
    sets: dict = {}
    pools: list[list] = []
    for level in range(depth):
        pool = []
        for j in range(int(rng.integers(3, 7))):
            if level == 0:
                frac = rng.uniform(0.4, 0.9)
                members = frozenset(g for g in ground if rng.random() < frac)
            else:
                parent = sets[pools[level - 1][int(rng.integers(len(pools[level - 1])))]]
                members = frozenset(g for g in parent if rng.random() < 0.7)
            label = (level, j)
            sets[label] = members
            pool.append(label)
        # a duplicate set under a fresh label exercises multiset semantics
        dup = pool[int(rng.integers(len(pool)))]
        sets[(level, "dup", dup[1])] = sets[dup]
        pool.append((level, "dup", dup[1]))
        pools.append(pool)

    chains = [(g,) for g in ground]
    for level in range(depth):
        nxt = []
        for ch in chains:
            outer = sets[ch[-1]] if len(ch) > 1 else None
            for label in pools[level]:
                s = sets[label]
                if ch[0] in s and (outer is None or s <= outer):
                    nxt.append(ch + (label,))
        chains = nxt
    keep = [c for c in chains if rng.random() < 0.6] or chains[:1]
    return NestedFamily(keep, sets) if keep else None
