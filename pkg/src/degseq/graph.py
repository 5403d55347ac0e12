"""Degree-sequence statistics, graphicality tests and the working multigraph."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InternalInvariantViolation, InvalidDegree, UnbalancedParts


def erdos_gallai(degrees) -> bool:
    """Whether ``degrees`` is realised by some simple graph."""
    d = np.asarray(degrees, dtype=np.int64)
    if d.size == 0:
        return True
    if (d < 0).any() or int(d.sum()) % 2:
        return False
    d = np.sort(d)[::-1]
    n = d.size
    k = np.arange(1, n + 1, dtype=np.int64)
    lhs = np.cumsum(d)
    # c[k-1] = #{i : d_i >= k}; those entries form a prefix of the sorted sequence
    c = np.searchsorted(-d, -k, side="right")
    suffix = np.concatenate(([0], lhs))
    suffix = int(lhs[-1]) - suffix
    cut = np.maximum(k, c)
    rhs = k * (k - 1) + k * np.maximum(0, c - k) + suffix[cut]
    return bool((lhs <= rhs).all())


def gale_ryser(s, t) -> bool:
    """Whether (s, t) is realised by some simple bipartite graph."""
    s = np.asarray(s, dtype=np.int64)
    t = np.asarray(t, dtype=np.int64)
    if (s < 0).any() or (t < 0).any() or int(s.sum()) != int(t.sum()):
        return False
    if s.size == 0 or t.size == 0:
        return int(s.sum()) == 0
    s = np.sort(s)[::-1]
    t = np.sort(t)[::-1]
    k = np.arange(1, s.size + 1, dtype=np.int64)
    c = np.searchsorted(-t, -k, side="right")
    t_prefix = np.concatenate(([0], np.cumsum(t)))
    rhs = k * c + (int(t_prefix[-1]) - t_prefix[c])
    return bool((np.cumsum(s) <= rhs).all())


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple
    n: int
    M: int
    M2: int
    max_degree: int
    graphical: bool

    @property
    def Delta(self) -> int:
        return self.max_degree

    def as_array(self) -> np.ndarray:
        return np.asarray(self.degrees, dtype=np.int64)


def build_degree_sequence(degrees: Iterable[int]) -> DegreeSequence:
    d = np.asarray(list(degrees), dtype=np.int64)
    if (d < 0).any():
        raise InvalidDegree(f"negative degree in {d.tolist()[:20]}")
    M = int(d.sum())
    M2 = int((d * (d - 1)).sum())
    return DegreeSequence(
        degrees=tuple(d.tolist()),
        n=int(d.size),
        M=M,
        M2=M2,
        max_degree=int(d.max()) if d.size else 0,
        graphical=erdos_gallai(d),
    )


@dataclass(frozen=True)
class BipartiteDegreeSequence:
    s: tuple
    t: tuple
    M: int
    S2: int
    T2: int
    max_degree: int
    bigraphical: bool

    @property
    def Delta(self) -> int:
        return self.max_degree

    @property
    def n_x(self) -> int:
        return len(self.s)

    @property
    def n_y(self) -> int:
        return len(self.t)


def build_bipartite_sequence(s: Iterable[int], t: Iterable[int]) -> BipartiteDegreeSequence:
    s = np.asarray(list(s), dtype=np.int64)
    t = np.asarray(list(t), dtype=np.int64)
    if (s < 0).any() or (t < 0).any():
        raise InvalidDegree("negative degree in bipartite sequence")
    if int(s.sum()) != int(t.sum()):
        raise UnbalancedParts(f"part sums differ: {int(s.sum())} != {int(t.sum())}")
    both = np.concatenate((s, t))
    return BipartiteDegreeSequence(
        s=tuple(s.tolist()),
        t=tuple(t.tolist()),
        M=int(s.sum()),
        S2=int((s * (s - 1)).sum()),
        T2=int((t * (t - 1)).sum()),
        max_degree=int(both.max()) if both.size else 0,
        bigraphical=gale_ryser(s, t),
    )


@dataclass(frozen=True)
class MultiplicityProfile:
    m1: int
    m2: int
    has_bad_multiplicity: bool


def profile_pairs(pairs) -> MultiplicityProfile:
    """Profile a bag of vertex pairs (one entry per edge, loops as (v, v))."""
    counts = Counter((u, v) if u <= v else (v, u) for u, v in pairs)
    m1 = m2 = 0
    bad = False
    for (u, v), c in counts.items():
        if u == v:
            m1 += c
            bad |= c >= 2
        elif c == 2:
            m2 += 1
        elif c >= 3:
            bad = True
    return MultiplicityProfile(m1, m2, bad)


class _IndexedSet:
    """Set with O(1) add, remove and uniform choice by index."""

    __slots__ = ("_items", "_pos")

    def __init__(self, items=()):
        self._items = []
        self._pos = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self._pos:
            self._pos[x] = len(self._items)
            self._items.append(x)

    def remove(self, x):
        i = self._pos.pop(x)
        last = self._items.pop()
        if i < len(self._items):
            self._items[i] = last
            self._pos[last] = i

    def __getitem__(self, i):
        return self._items[i]

    def __len__(self):
        return len(self._items)

    def __contains__(self, x):
        return x in self._pos

    def __iter__(self):
        return iter(self._items)


def _csr(n, a, b):
    src = np.concatenate((a, b))
    dst = np.concatenate((b, a))
    order = np.argsort(src, kind="stable")
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst[order]


class Multigraph:
    """Mutable multigraph with loops, edge multiplicities and a cached 2-path count.

    Edges live in a fixed array of *slots*, one per edge (a loop is the slot
    ``(v, v)``).  Picking a uniform slot plus a uniform orientation gives a
    uniform ordered edge, which is how the switching samplers draw candidates.
    Switchings rewrite slots in place so the slot count never changes.

    Adjacency is a per-vertex ``{neighbour: multiplicity}`` dict, built lazily
    from a CSR snapshot the first time a vertex is touched.  Slots of loops and
    of pairs with multiplicity >= 2 are tracked so they can be sampled and
    removed; slots of simple edges are not.

    ``p2`` is the number of simple ordered 2-paths ``uvw`` whose centre has no
    loop, kept per vertex class when ``part`` is given (bipartite graphs).
    """

    def __init__(self, n: int, slots, *, part=None, base=None):
        self.n = int(n)
        slots = np.array(slots, dtype=np.int64).reshape(-1, 2)
        self._slots = slots
        a, b = slots[:, 0], slots[:, 1]
        if slots.size and (slots.min() < 0 or slots.max() >= self.n):
            raise ValueError("edge endpoint out of range")
        deg = np.bincount(a, minlength=self.n) + np.bincount(b, minlength=self.n)
        self.degrees = deg.astype(np.int64)
        if part is None:
            self.part = None
            self._nparts = 1
        else:
            self.part = np.asarray(part, dtype=np.int64)
            self._nparts = int(self.part.max()) + 1 if self.part.size else 1
        if base is None:
            base = _csr(self.n, a, b)
        self._indptr, self._targets = base
        self._rows: list = [None] * self.n

        self._loop_slots: dict[int, list[int]] = {}
        self._multi_slots: dict[tuple, list[int]] = {}
        lo = np.minimum(a, b)
        hi = np.maximum(a, b)
        if slots.shape[0]:
            _, inv, counts = np.unique(lo * self.n + hi, return_inverse=True, return_counts=True)
            special = np.flatnonzero((lo == hi) | (counts[inv.reshape(-1)] >= 2))
        else:
            special = np.empty(0, dtype=np.int64)
        k = self.degrees.copy()
        for s, u, v in zip(special.tolist(), lo[special].tolist(), hi[special].tolist()):
            if u == v:
                self._loop_slots.setdefault(u, []).append(s)
                k[u] -= 2
            else:
                self._multi_slots.setdefault((u, v), []).append(s)
                k[u] -= 1
                k[v] -= 1
        self._k = k
        self._loop_vertices = _IndexedSet(self._loop_slots)
        self._doubles = _IndexedSet(key for key, lst in self._multi_slots.items() if len(lst) == 2)
        self._n_bad = sum(len(lst) >= 3 for lst in self._multi_slots.values()) + sum(
            len(lst) >= 2 for lst in self._loop_slots.values()
        )
        self._simple_edges = int(k.sum()) // 2

        contrib = k * (k - 1)
        if self._loop_slots:
            contrib[np.fromiter(self._loop_slots, dtype=np.int64)] = 0
        if self.part is None:
            self._p2 = [int(contrib.sum())]
        else:
            self._p2 = [int(x) for x in np.bincount(self.part, weights=contrib, minlength=self._nparts)]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], *, part=None) -> "Multigraph":
        edges = [tuple(e) for e in edges]
        return cls(n, np.array(edges, dtype=np.int64).reshape(-1, 2), part=part)

    # -- queries -----------------------------------------------------------

    @property
    def M(self) -> int:
        """Number of ordered edges (twice the number of edges, loops included)."""
        return 2 * self._slots.shape[0]

    @property
    def num_edges(self) -> int:
        return self._slots.shape[0]

    @property
    def m1(self) -> int:
        return sum(len(lst) for lst in self._loop_slots.values())

    @property
    def m2(self) -> int:
        return len(self._doubles)

    @property
    def has_bad_multiplicity(self) -> bool:
        return self._n_bad > 0

    @property
    def p2(self) -> int:
        return sum(self._p2)

    def p2_centred(self, part: int) -> int:
        return self._p2[part]

    @property
    def simple_edge_count(self) -> int:
        return self._simple_edges

    def _row(self, v: int) -> dict:
        row = self._rows[v]
        if row is None:
            row = {}
            for u in self._targets[self._indptr[v] : self._indptr[v + 1]].tolist():
                if u != v:
                    row[u] = row.get(u, 0) + 1
            self._rows[v] = row
        return row

    def mult(self, u: int, v: int) -> int:
        if u == v:
            return len(self._loop_slots.get(u, ()))
        return self._row(u).get(v, 0)

    def neighbors(self, v: int):
        """Vertices joined to ``v`` by at least one non-loop edge."""
        return self._row(v).keys()

    def simple_neighbors(self, v: int) -> list:
        return [u for u, c in self._row(v).items() if c == 1]

    def simple_degree(self, v: int) -> int:
        return int(self._k[v])

    def has_loop(self, v: int) -> bool:
        return v in self._loop_slots

    def part_of(self, v: int) -> int:
        return 0 if self.part is None else int(self.part[v])

    def loop_vertices(self):
        return self._loop_vertices

    def double_pairs(self):
        return self._doubles

    def loop_slot(self, v: int) -> int:
        return self._loop_slots[v][0]

    def multi_slots(self, u: int, v: int) -> list:
        return list(self._multi_slots[(u, v) if u < v else (v, u)])

    def slot(self, i: int) -> tuple:
        return int(self._slots[i, 0]), int(self._slots[i, 1])

    def slots(self) -> np.ndarray:
        return self._slots.copy()

    def profile(self) -> MultiplicityProfile:
        return MultiplicityProfile(self.m1, self.m2, self.has_bad_multiplicity)

    def is_simple(self) -> bool:
        return not self._loop_slots and not self._multi_slots

    def degree_vector(self) -> np.ndarray:
        return self.degrees.copy()

    # -- mutation ----------------------------------------------------------

    def _contrib(self, x: int) -> int:
        if x in self._loop_slots:
            return 0
        k = int(self._k[x])
        return k * (k - 1)

    def _bump_simple(self, x: int, delta: int) -> None:
        before = self._contrib(x)
        self._k[x] += delta
        self._p2[self.part_of(x)] += self._contrib(x) - before

    def _find_slot(self, u: int, v: int, exclude: int) -> int:
        s = self._slots
        hits = np.flatnonzero(((s[:, 0] == u) & (s[:, 1] == v)) | ((s[:, 0] == v) & (s[:, 1] == u)))
        for h in hits.tolist():
            if h != exclude:
                return h
        raise InternalInvariantViolation(f"no slot holds edge {u}-{v}")

    def _detach(self, slot: int) -> None:
        u, v = self.slot(slot)
        if u == v:
            before = self._contrib(u)
            lst = self._loop_slots[u]
            lst.remove(slot)
            if len(lst) == 1:
                self._n_bad -= 1
            elif not lst:
                del self._loop_slots[u]
                self._loop_vertices.remove(u)
            self._p2[self.part_of(u)] += self._contrib(u) - before
            return
        ru, rv = self._row(u), self._row(v)
        c = ru[v]
        if c == 1:
            del ru[v]
            del rv[u]
            self._simple_edges -= 1
            self._bump_simple(u, -1)
            self._bump_simple(v, -1)
            return
        ru[v] = rv[u] = c - 1
        key = (u, v) if u < v else (v, u)
        self._multi_slots[key].remove(slot)
        if c == 2:
            del self._multi_slots[key]
            self._doubles.remove(key)
            self._simple_edges += 1
            self._bump_simple(u, 1)
            self._bump_simple(v, 1)
        elif c == 3:
            self._n_bad -= 1
            self._doubles.add(key)

    def _attach(self, slot: int, u: int, v: int) -> None:
        if u == v:
            before = self._contrib(u)
            lst = self._loop_slots.setdefault(u, [])
            lst.append(slot)
            if len(lst) == 1:
                self._loop_vertices.add(u)
            elif len(lst) == 2:
                self._n_bad += 1
            self._p2[self.part_of(u)] += self._contrib(u) - before
            return
        ru, rv = self._row(u), self._row(v)
        c = ru.get(v, 0)
        ru[v] = rv[u] = c + 1
        key = (u, v) if u < v else (v, u)
        if c == 0:
            self._simple_edges += 1
            self._bump_simple(u, 1)
            self._bump_simple(v, 1)
        elif c == 1:
            # switchings never create multiplicity, so this scan is off the hot path
            self._multi_slots[key] = [self._find_slot(u, v, slot), slot]
            self._doubles.add(key)
            self._simple_edges -= 1
            self._bump_simple(u, -1)
            self._bump_simple(v, -1)
        else:
            self._multi_slots[key].append(slot)
            if c == 2:
                self._doubles.remove(key)
                self._n_bad += 1

    def replace_slot(self, slot: int, u: int, v: int) -> None:
        """Replace the edge held in ``slot`` by the edge ``uv``."""
        self._detach(slot)
        self._slots[slot, 0] = u
        self._slots[slot, 1] = v
        self._attach(slot, u, v)

    def add_edge(self, u: int, v: int) -> None:
        """Append a new edge; changes the degree sequence."""
        slot = self._slots.shape[0]
        self._row(u)
        self._row(v)
        self._slots = np.vstack((self._slots, np.array([[u, v]], dtype=np.int64)))
        self.degrees[u] += 1
        self.degrees[v] += 1
        self._attach(slot, u, v)

    def remove_edge(self, u: int, v: int) -> None:
        """Delete one copy of ``uv``; changes the degree sequence."""
        if self.mult(u, v) == 0:
            raise ValueError(f"no edge {u}-{v}")
        slot = self._find_slot(u, v, -1)
        self._detach(slot)
        last = self._slots.shape[0] - 1
        if slot != last:
            lu, lv = self.slot(last)
            self._slots[slot] = (lu, lv)
            if lu == lv:
                lst = self._loop_slots[lu]
                lst[lst.index(last)] = slot
            else:
                lst = self._multi_slots.get((lu, lv) if lu < lv else (lv, lu))
                if lst is not None:
                    lst[lst.index(last)] = slot
        self._slots = self._slots[:last].copy()
        self.degrees[u] -= 1
        self.degrees[v] -= 1

    def copy(self) -> "Multigraph":
        return Multigraph(self.n, self._slots, part=self.part)

    def edge_key(self) -> tuple:
        """Canonical hashable form: the sorted multiset of ``(min, max)`` pairs."""
        s = np.sort(self._slots, axis=1)
        order = np.lexsort((s[:, 1], s[:, 0]))
        return tuple(map(tuple, s[order].tolist()))


def compute_p2(G: Multigraph, centre_part: int | None = None) -> int:
    """Recount simple ordered 2-paths with a loopless centre, from the raw edge list.

    Deliberately ignores every cache kept by ``G``.
    """
    counts = Counter()
    for u, v in G.slots().tolist():
        counts[(u, v) if u <= v else (v, u)] += 1
    simple = [0] * G.n
    looped = [False] * G.n
    for (u, v), c in counts.items():
        if u == v:
            looped[u] = True
        elif c == 1:
            simple[u] += 1
            simple[v] += 1
    total = 0
    for v in range(G.n):
        if looped[v]:
            continue
        if centre_part is not None and G.part_of(v) != centre_part:
            continue
        total += simple[v] * (simple[v] - 1)
    return total


def update_p2(G: Multigraph, pair: tuple, change: int) -> int:
    """Apply one adjacency change (+1 adds an edge, -1 removes one) and return the new p2."""
    u, v = pair
    if change == 1:
        G.add_edge(u, v)
    elif change == -1:
        G.remove_edge(u, v)
    else:
        raise ValueError("change must be +1 or -1")
    return G.p2


def profile(G: Multigraph) -> MultiplicityProfile:
    return G.profile()


@dataclass(frozen=True)
class SimpleGraph:
    """A finished simple graph on vertices ``0..n-1``."""

    n: int
    edges: np.ndarray = field(repr=False)

    def sorted_edges(self) -> np.ndarray:
        e = np.sort(self.edges, axis=1)
        order = np.lexsort((e[:, 1], e[:, 0]))
        return e[order]

    def key(self) -> tuple:
        return tuple(map(tuple, self.sorted_edges().tolist()))

    def degrees(self) -> np.ndarray:
        e = self.edges
        return np.bincount(e[:, 0], minlength=self.n) + np.bincount(e[:, 1], minlength=self.n)
