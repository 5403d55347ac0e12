"""Uniform generation of simple bipartite graphs with given part degrees.

Vertices of X are ``0..m-1`` and vertices of Y are ``m..m+n-1``.  A bipartite
pairing has no loops, so only double edges need removing.  The bipartite
d-switching has v2, v4, v6 in X and v1, v3, v5 in Y.  Relaxation anchors the
Y-centred path v4v5v6 first (at most T2 of those) and then the X-centred path
v1v2v3 (at most S2).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GaveUp, NotBigraphical, Restart
from .graph import BipartiteDegreeSequence, Multigraph, SimpleGraph, build_bipartite_sequence
from .incgen import DEFAULT_MAX_RESTARTS, GenerationStats, _as_rng
from .pairing import Pairing, project
from .relaxation import randbelow
from .switching import Anchor, _relax_or_restart, apply_d_switching, b_d_1, d_switching_valid

X, Y = 0, 1


def generate_bipartite_pairing(bds: BipartiteDegreeSequence, rng) -> Pairing:
    """Uniform bijection between the X points and the Y points."""
    M = bds.M
    pairs = np.column_stack((np.arange(M, dtype=np.int64), M + rng.permutation(M)))
    part = np.concatenate((np.full(bds.n_x, X), np.full(bds.n_y, Y))).astype(np.int64)
    return Pairing(bds.s + bds.t, pairs, part=part)


def double_edge_cap(bds: BipartiteDegreeSequence) -> Fraction:
    if bds.M == 0:
        return Fraction(0)
    return Fraction(bds.S2 * bds.T2, bds.M * bds.M)


def bipartite_in_phi0(P: Pairing, bds: BipartiteDegreeSequence) -> bool:
    prof = P.profile
    return not prof.has_bad_multiplicity and prof.m1 == 0 and prof.m2 <= double_edge_cap(bds)


@dataclass(frozen=True)
class BipartiteBounds:
    f_bar_d: int
    b_d0: int
    b_d1: int


def bipartite_phase_bounds(bds: BipartiteDegreeSequence, m2: int) -> BipartiteBounds:
    """Bounds for a graph with ``m2`` double edges; may be non-positive for tiny inputs."""
    M, D = bds.M, bds.max_degree
    return BipartiteBounds(
        f_bar_d=m2 * M * M,
        b_d0=bds.T2 - 4 * m2 * D,
        b_d1=bds.S2 - 4 * m2 * D - 4 * D * D - 3 * D**3,
    )


def _cross_edge(G: Multigraph, slot: int) -> tuple:
    """The edge in ``slot`` as (Y end, X end)."""
    u, v = G.slot(slot)
    return (v, u) if G.part_of(u) == X else (u, v)


def sample_bipartite_d_candidate(G: Multigraph, rng) -> Anchor | None:
    """Uniform draw from the ``m2*M^2`` candidates; ``None`` means f-rejection.

    Part membership fixes every orientation: v2 is the X end of the double
    edge and each sampled edge is read as (Y end, X end).
    """
    doubles = G.double_pairs()
    if not len(doubles):
        raise ValueError("need at least one double edge")
    E = G.num_edges
    r = randbelow(rng, len(doubles) * E * E)
    q, s2 = divmod(r, E)
    di, s1 = divmod(q, E)
    v2, v5 = doubles[di]
    if G.part_of(v2) == Y:
        v2, v5 = v5, v2
    v1, v4 = _cross_edge(G, s1)
    v3, v6 = _cross_edge(G, s2)
    vs = (v1, v2, v3, v4, v5, v6)
    if not d_switching_valid(G, vs):
        return None
    return Anchor("dee", vs, (s1, s2))


def bipartite_no_doubles(G: Multigraph, bds: BipartiteDegreeSequence, rng, stats=None) -> None:
    while G.m2:
        m2 = G.m2
        a = sample_bipartite_d_candidate(G, rng)
        if a is None:
            raise Restart("f")
        apply_d_switching(G, a)
        pb = bipartite_phase_bounds(bds, m2 - 1)
        v4, v5, v6 = a.vertices[3:]
        counts = (G.p2_centred(Y), b_d_1(G, (v4, v5, v6), centre_part=X))
        _relax_or_restart(rng, (pb.b_d0, pb.b_d1), counts)
        if stats is not None:
            stats.switching_steps_d += 1


def inc_bipartite(
    bds: BipartiteDegreeSequence | tuple,
    rng=None,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> tuple[SimpleGraph, GenerationStats]:
    """Draw a uniformly random simple bipartite graph with part degrees (s, t)."""
    if not isinstance(bds, BipartiteDegreeSequence):
        bds = build_bipartite_sequence(*bds)
    if not bds.bigraphical:
        raise NotBigraphical("bipartite degree sequence is not realisable")
    rng = _as_rng(rng)
    stats = GenerationStats()
    start = time.perf_counter()
    n = bds.n_x + bds.n_y
    while True:
        P = generate_bipartite_pairing(bds, rng)
        try:
            if not bipartite_in_phi0(P, bds):
                raise Restart("initial")
            if P.profile.m2 == 0:
                edges = P.vertex_pairs
            else:
                G = project(P)
                bipartite_no_doubles(G, bds, rng, stats)
                edges = G.slots()
        except Restart as r:
            stats.record(r.cause)
            if stats.restarts > max_restarts:
                stats.wall_time = time.perf_counter() - start
                raise GaveUp(f"gave up after {stats.restarts} restarts", stats) from None
            continue
        stats.wall_time = time.perf_counter() - start
        return SimpleGraph(n, edges), stats
