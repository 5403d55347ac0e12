"""Brute-force oracles and statistics for checking the generators at small scale.

Nothing here reads the caches kept by ``Multigraph``: every oracle rebuilds
adjacency from the raw edge list and counts straight from the definitions.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from statistics import NormalDist
from typing import Iterable, Sequence

from .errors import InsufficientSamples, TooLargeForOracle
from .graph import Multigraph
from .pairing import Phi0Thresholds
from .switching import PhaseBounds

MAX_ORACLE_N = 14


@dataclass(frozen=True)
class GraphUniverse:
    """Every labelled simple graph realising a degree sequence, keyed by sorted edge tuple."""

    graphs: tuple
    index: dict = field(compare=False, repr=False)

    @classmethod
    def of(cls, graphs: Iterable[tuple]) -> "GraphUniverse":
        graphs = tuple(sorted(set(graphs)))
        return cls(graphs, {g: i for i, g in enumerate(graphs)})

    def __len__(self) -> int:
        return len(self.graphs)

    def __contains__(self, key) -> bool:
        return key in self.index

    def tally(self, keys: Iterable[tuple]) -> list[int]:
        counts = [0] * len(self.graphs)
        for key in keys:
            try:
                counts[self.index[key]] += 1
            except KeyError:
                raise ValueError(f"sample {key} is not in the universe") from None
        return counts


def enumerate_graphs(degrees: Sequence[int]) -> GraphUniverse:
    """All labelled simple graphs with the given degrees, by backtracking.

    Vertex ``i`` picks its neighbours among higher-numbered vertices with
    spare degree, so each graph is produced once with sorted edges.
    """
    d = list(degrees)
    n = len(d)
    if n > MAX_ORACLE_N:
        raise TooLargeForOracle(f"n={n} exceeds {MAX_ORACLE_N}")
    if any(x < 0 for x in d) or sum(d) % 2:
        return GraphUniverse.of(())
    rem = d[:]
    edges: list = []
    out: list = []

    def rec(i):
        while i < n and rem[i] == 0:
            i += 1
        if i == n:
            out.append(tuple(edges))
            return
        need = rem[i]
        cands = [j for j in range(i + 1, n) if rem[j] > 0]
        if need > len(cands):
            return
        rem[i] = 0
        for combo in combinations(cands, need):
            for j in combo:
                rem[j] -= 1
                edges.append((i, j))
            rec(i + 1)
            for j in combo:
                rem[j] += 1
                edges.pop()
        rem[i] = need

    rec(0)
    return GraphUniverse.of(out)


def enumerate_graphs_by_subsets(degrees: Sequence[int]) -> GraphUniverse:
    """Second, independent enumeration: test every edge subset (n <= 6)."""
    n = len(degrees)
    if n > 6:
        raise TooLargeForOracle("subset enumeration is limited to n <= 6")
    pairs = list(combinations(range(n), 2))
    target = list(degrees)
    out = []
    for mask in range(1 << len(pairs)):
        deg = [0] * n
        chosen = []
        for b, (u, v) in enumerate(pairs):
            if mask >> b & 1:
                deg[u] += 1
                deg[v] += 1
                chosen.append((u, v))
        if deg == target:
            out.append(tuple(chosen))
    return GraphUniverse.of(out)


def enumerate_bipartite_graphs(s: Sequence[int], t: Sequence[int]) -> GraphUniverse:
    """All simple bipartite graphs with X degrees ``s`` and Y degrees ``t`` (Y numbered after X)."""
    m, n = len(s), len(t)
    if m + n > MAX_ORACLE_N:
        raise TooLargeForOracle(f"m+n={m + n} exceeds {MAX_ORACLE_N}")
    rem = list(t)
    edges: list = []
    out: list = []

    def rec(i):
        if i == m:
            if not any(rem):
                out.append(tuple(edges))
            return
        for combo in combinations([j for j in range(n) if rem[j] > 0], s[i]):
            for j in combo:
                rem[j] -= 1
                edges.append((i, m + j))
            rec(i + 1)
            for j in combo:
                rem[j] += 1
                edges.pop()

    if sum(s) == sum(t):
        rec(0)
    return GraphUniverse.of(out)


def enumerate_multigraphs(degrees: Sequence[int], max_loops: int, max_doubles: int) -> list[tuple]:
    """Multigraphs with single loops (count <= max_loops), double edges
    (count <= max_doubles) and no higher multiplicity, as sorted edge tuples."""
    d = list(degrees)
    n = len(d)
    if n > MAX_ORACLE_N:
        raise TooLargeForOracle(f"n={n} exceeds {MAX_ORACLE_N}")
    rem = d[:]
    edges: list = []
    out: list = []
    budget = [max_loops, max_doubles]

    def rec(i):
        while i < n and rem[i] == 0:
            i += 1
        if i == n:
            out.append(tuple(sorted(edges)))
            return
        for loop in (0, 1):
            if loop and (rem[i] < 2 or budget[0] == 0):
                continue
            need = rem[i] - 2 * loop
            budget[0] -= loop
            if loop:
                edges.append((i, i))
            _spread(i, i + 1, need, lambda: rec(i + 1))
            if loop:
                edges.pop()
            budget[0] += loop

    def _spread(i, j, need, done):
        if need == 0:
            saved = rem[i]
            rem[i] = 0
            done()
            rem[i] = saved
            return
        if j >= n:
            return
        _spread(i, j + 1, need, done)
        for mult in (1, 2):
            if mult > need or rem[j] < mult or (mult == 2 and budget[1] == 0):
                continue
            rem[j] -= mult
            budget[1] -= mult == 2
            edges.extend([(i, j)] * mult)
            _spread(i, j + 1, need - mult, done)
            del edges[-mult:]
            budget[1] += mult == 2
            rem[j] += mult

    rec(0)
    return out


# -- switching and b oracles ---------------------------------------------------


class _Adjacency:
    def __init__(self, G: Multigraph):
        self.n = G.n
        self.part = [G.part_of(v) for v in range(G.n)]
        self.c = Counter()
        for u, v in G.slots().tolist():
            self.c[(u, v) if u <= v else (v, u)] += 1

    def mult(self, u, v):
        return self.c.get((u, v) if u <= v else (v, u), 0)

    def ordered_single_edges(self):
        return [(u, v) for (a, b), k in self.c.items() if k == 1 and a != b for u, v in ((a, b), (b, a))]


def oracle_count_switchings(G: Multigraph, kind: str) -> int:
    """Number of valid switchings of ``kind`` ("ell", "dee" or "dee_bipartite") on ``G``."""
    A = _Adjacency(G)
    n = A.n
    singles = A.ordered_single_edges()
    count = 0
    if kind == "ell":
        for v2 in range(n):
            if A.mult(v2, v2) != 1:
                continue
            for v1, v4 in singles:
                for v3, v5 in singles:
                    if len({v1, v2, v3, v4, v5}) < 5:
                        continue
                    if A.mult(v1, v2) or A.mult(v2, v3) or A.mult(v4, v5):
                        continue
                    count += 1
        return count
    if kind not in ("dee", "dee_bipartite"):
        raise ValueError(kind)
    for v2 in range(n):
        for v5 in range(n):
            if v2 == v5 or A.mult(v2, v5) != 2:
                continue
            for v1, v4 in singles:
                for v3, v6 in singles:
                    vs = (v1, v2, v3, v4, v5, v6)
                    if len(set(vs)) < 6:
                        continue
                    if A.mult(v1, v2) or A.mult(v2, v3) or A.mult(v4, v5) or A.mult(v5, v6):
                        continue
                    if kind == "dee_bipartite" and [A.part[v] for v in vs] != [1, 0, 1, 0, 1, 0]:
                        continue
                    count += 1
    return count


def oracle_b(G: Multigraph, path: tuple, kind: str, centre_part: int | None = None) -> int:
    """Backward counts straight from their definitions.

    ``path == ()`` gives the level-0 count (simple ordered 2-paths with a
    loopless centre).  Otherwise ``kind="ell"`` counts simple ordered edges
    (x, y) off the path with v1x, v3y non-edges, and ``kind="dee"`` counts
    simple ordered 2-paths (x, y, z) off the path with a1x, a2y, a3z non-edges.
    """
    A = _Adjacency(G)
    n = A.n

    def centre_ok(y):
        return A.mult(y, y) == 0 and (centre_part is None or A.part[y] == centre_part)

    def two_paths():
        for y in range(n):
            if not centre_ok(y):
                continue
            for x in range(n):
                for z in range(n):
                    if len({x, y, z}) == 3 and A.mult(x, y) == 1 and A.mult(y, z) == 1:
                        yield x, y, z

    if not path:
        return sum(1 for _ in two_paths())
    if kind == "ell":
        v1, _, v3 = path
        return sum(
            1
            for x in range(n)
            for y in range(n)
            if x != y
            and A.mult(x, y) == 1
            and x not in path
            and y not in path
            and A.mult(v1, x) == 0
            and A.mult(v3, y) == 0
        )
    if kind == "dee":
        a1, a2, a3 = path
        return sum(
            1
            for x, y, z in two_paths()
            if not ({x, y, z} & set(path))
            and A.mult(a1, x) == 0
            and A.mult(a2, y) == 0
            and A.mult(a3, z) == 0
        )
    raise ValueError(kind)


def simple_two_paths(G: Multigraph, centre_part: int | None = None) -> list[tuple]:
    """Every simple ordered 2-path with a loopless centre, from the raw edge list."""
    A = _Adjacency(G)
    out = []
    for y in range(A.n):
        if A.mult(y, y) or (centre_part is not None and A.part[y] != centre_part):
            continue
        nb = [x for x in range(A.n) if x != y and A.mult(x, y) == 1]
        out.extend((x, y, z) for x in nb for z in nb if x != z)
    return out


# -- chi-square -----------------------------------------------------------------


def wilson_hilferty_critical(df: int, alpha: float) -> float:
    """Upper ``alpha`` quantile of chi-square with ``df`` degrees of freedom (Wilson-Hilferty)."""
    z = NormalDist().inv_cdf(1.0 - alpha)
    h = 2.0 / (9.0 * df)
    return df * (1.0 - h + z * math.sqrt(h)) ** 3


@dataclass(frozen=True)
class ChiSquareReport:
    observed: tuple
    expected: float
    statistic: float
    df: int
    alpha: float
    critical: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "observed": list(self.observed),
            "expected": self.expected,
            "statistic": self.statistic,
            "df": self.df,
            "alpha": self.alpha,
            "critical": self.critical,
            "pass": self.passed,
        }


def chi_square_uniformity(observed: Sequence[int], alpha: float = 0.001) -> ChiSquareReport:
    obs = tuple(int(x) for x in observed)
    if len(obs) < 2:
        raise ValueError("need at least two cells")
    total = sum(obs)
    expected = total / len(obs)
    if expected < 5:
        raise InsufficientSamples(f"expected count {expected:.2f} per cell is below 5")
    stat = float(sum(Fraction((o * len(obs) - total) ** 2, total * len(obs)) for o in obs))
    df = len(obs) - 1
    crit = wilson_hilferty_critical(df, alpha)
    return ChiSquareReport(obs, expected, stat, df, alpha, crit, stat < crit)


# -- exact bounds for tiny sequences ---------------------------------------------


class ExactSmallBounds:
    """Bound provider whose lower bounds are exact minima found by enumeration.

    The fixed formulas only become positive for large sequences, so on inputs
    small enough to enumerate they switch the phases off.  This provider
    enumerates every multigraph at each (loops, doubles) level below the caps
    and takes the true minimum of each backward count, which keeps the phases
    exactly uniform at desk scale.  A 2-path anchor is only counted at level
    0 if it has at least one completion.  A level where some graph has no
    anchor at all gets bound 0, meaning every switching into it is rejected.
    """

    def __init__(self, degrees: Sequence[int], max_loops: int, max_doubles: int):
        self.degrees = tuple(degrees)
        self.thresholds = Phi0Thresholds(Fraction(max_loops), Fraction(max_doubles))
        graphs = enumerate_multigraphs(degrees, max_loops, max_doubles)
        n = len(degrees)
        levels: dict = {}
        for edges in graphs:
            G = Multigraph.from_edges(n, edges)
            levels.setdefault((G.m1, G.m2), []).append(G)
        self.level_sizes = {m: len(gs) for m, gs in levels.items()}
        self._l = {m: self._minima(gs, "ell") for m, gs in levels.items() if m[0] + 1 <= max_loops}
        self._d = {m: self._minima(gs, "dee") for m, gs in levels.items() if m[0] == 0 and m[1] + 1 <= max_doubles}

    @staticmethod
    def _anchor_counts(G: Multigraph, kind: str) -> list[int]:
        counts = (oracle_b(G, p, kind) for p in simple_two_paths(G))
        return [c for c in counts if c > 0]

    def _minima(self, graphs, kind):
        lo0 = lo1 = None
        for G in graphs:
            counts = self._anchor_counts(G, kind)
            lo0 = len(counts) if lo0 is None else min(lo0, len(counts))
            if counts:
                lo1 = min(counts) if lo1 is None else min(lo1, min(counts))
        return lo0, (lo1 or 0)

    def __call__(self, m1: int, m2: int) -> PhaseBounds:
        l0, l1 = self._l.get((m1, m2), (0, 0))
        d0, d1 = self._d.get((m1, m2), (0, 0))
        M = sum(self.degrees)
        return PhaseBounds((m1 + 1) * M * M, l0, l1, 2 * (m2 + 1) * M * M, d0, d1)

    def level0_count_l(self, G: Multigraph) -> int:
        return len(self._anchor_counts(G, "ell"))

    def level0_count_d(self, G: Multigraph) -> int:
        return len(self._anchor_counts(G, "dee"))
