"""Loop and double-edge removal by switchings with incremental-relaxation b-rejection.

An l-switching takes a loop on v2 and single edges v1v4, v3v5 and replaces
them by v1v2, v2v3, v4v5.  A d-switching takes a double edge v2v5 and single
edges v1v4, v3v6 and replaces them by v1v2, v2v3, v4v5, v5v6.  In both cases
the five (six) vertices must be distinct and the edges being created must not
already be present.

f-rejection is implicit: a candidate is drawn uniformly from a space of fixed
size (``m1*M^2`` or ``2*m2*M^2``) and discarded if it is not a valid
switching.  b-rejection relaxes the anchoring of the created graph in two
levels, first the 2-path v1v2v3 and then the rest, with one exact draw.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import InternalInvariantViolation, InvalidAnchor, Restart
from .graph import Multigraph
from .relaxation import accept_relaxed, randbelow


@dataclass(frozen=True)
class Anchor:
    """Vertices of a switching, in definition order, plus the edge slots it rewrites.

    For ``ell`` the slots are (loop on v2, v1v4, v3v5); for ``dee`` they are
    (v1v4, v3v6).  ``sub(1)`` is the first relaxation level (v1, v2, v3).
    """

    kind: str
    vertices: tuple
    slots: tuple

    def sub(self, level: int) -> tuple:
        if level == 0:
            return ()
        if level == 1:
            return self.vertices[:3]
        return self.vertices


@dataclass(frozen=True)
class PhaseBounds:
    f_bar_l: int
    b_l0: int
    b_l1: int
    f_bar_d: int
    b_d0: int
    b_d1: int


def phase_bounds(ds, m1: int, m2: int) -> PhaseBounds:
    """Candidate-space sizes and b lower bounds for a graph with ``m1`` loops and ``m2`` doubles.

    ``ds`` needs ``M``, ``M2`` and ``max_degree``.  When ``22*Delta^3 < M2``
    every lower bound is positive; a non-positive one there is a bug.
    """
    M, M2, D = ds.M, ds.M2, ds.max_degree
    pb = PhaseBounds(
        f_bar_l=m1 * M * M,
        b_l0=M2 - 8 * m2 * D - m1 * D * D,
        b_l1=M - 6 * D * D + 4 * D,
        f_bar_d=2 * m2 * M * M,
        b_d0=M2 - 8 * m2 * D,
        b_d1=M2 - 4 * m2 * (2 * D - 3) - 3 * D**3,
    )
    if 22 * D**3 < M2 and min(pb.b_l0, pb.b_l1, pb.b_d0, pb.b_d1) <= 0:
        raise InternalInvariantViolation(f"non-positive lower bound {pb} for m=({m1},{m2})")
    return pb


class FormulaBounds:
    """Bound provider for the general phases: fixed formulas, P2 as the level-0 count."""

    def __init__(self, ds):
        self.ds = ds

    def __call__(self, m1: int, m2: int) -> PhaseBounds:
        return phase_bounds(self.ds, m1, m2)

    def level0_count_l(self, G: Multigraph) -> int:
        return G.p2

    def level0_count_d(self, G: Multigraph) -> int:
        return G.p2


# -- candidate sampling ---------------------------------------------------


def _ordered_edge(G: Multigraph, r: int) -> tuple:
    u, v = G.slot(r >> 1)
    return (v, u) if r & 1 else (u, v)


def l_switching_valid(G: Multigraph, vs) -> bool:
    v1, v2, v3, v4, v5 = vs
    return (
        len(set(vs)) == 5
        and G.mult(v2, v2) == 1
        and G.mult(v1, v4) == 1
        and G.mult(v3, v5) == 1
        and G.mult(v1, v2) == 0
        and G.mult(v2, v3) == 0
        and G.mult(v4, v5) == 0
    )


def d_switching_valid(G: Multigraph, vs) -> bool:
    v1, v2, v3, v4, v5, v6 = vs
    return (
        len(set(vs)) == 6
        and G.mult(v2, v5) == 2
        and G.mult(v1, v4) == 1
        and G.mult(v3, v6) == 1
        and G.mult(v1, v2) == 0
        and G.mult(v2, v3) == 0
        and G.mult(v4, v5) == 0
        and G.mult(v5, v6) == 0
    )


def sample_l_candidate(G: Multigraph, rng) -> Anchor | None:
    """Uniform draw from the ``m1*M^2`` candidates; ``None`` means f-rejection."""
    loops = G.loop_vertices()
    if not len(loops):
        raise ValueError("sample_l_candidate needs at least one loop")
    M = G.M
    r = randbelow(rng, len(loops) * M * M)
    q, r1 = divmod(r, M)
    li, r2 = divmod(q, M)
    v2 = loops[li]
    v1, v4 = _ordered_edge(G, r1)
    v3, v5 = _ordered_edge(G, r2)
    vs = (v1, v2, v3, v4, v5)
    if not l_switching_valid(G, vs):
        return None
    return Anchor("ell", vs, (G.loop_slot(v2), r1 >> 1, r2 >> 1))


def sample_d_candidate(G: Multigraph, rng) -> Anchor | None:
    """Uniform draw from the ``2*m2*M^2`` candidates; ``None`` means f-rejection."""
    doubles = G.double_pairs()
    if not len(doubles):
        raise ValueError("sample_d_candidate needs at least one double edge")
    if G.m1:
        raise ValueError("sample_d_candidate needs a loopless graph")
    M = G.M
    r = randbelow(rng, 2 * len(doubles) * M * M)
    q, r1 = divmod(r, M)
    q, r2 = divmod(q, M)
    di, flip = divmod(q, 2)
    v2, v5 = doubles[di]
    if flip:
        v2, v5 = v5, v2
    v1, v4 = _ordered_edge(G, r1)
    v3, v6 = _ordered_edge(G, r2)
    vs = (v1, v2, v3, v4, v5, v6)
    if not d_switching_valid(G, vs):
        return None
    return Anchor("dee", vs, (r1 >> 1, r2 >> 1))


# -- applying switchings ----------------------------------------------------


def _check_slot(G: Multigraph, slot: int, u: int, v: int) -> None:
    if sorted(G.slot(slot)) != sorted((u, v)):
        raise InternalInvariantViolation(f"slot {slot} holds {G.slot(slot)}, expected {u}-{v}")


def apply_l_switching(G: Multigraph, a: Anchor) -> None:
    v1, v2, v3, v4, v5 = a.vertices
    if a.kind != "ell" or not l_switching_valid(G, a.vertices):
        raise InternalInvariantViolation(f"{a} is not a valid l-switching here")
    loop_slot, s14, s35 = a.slots
    _check_slot(G, loop_slot, v2, v2)
    _check_slot(G, s14, v1, v4)
    _check_slot(G, s35, v3, v5)
    G.replace_slot(loop_slot, v1, v2)
    G.replace_slot(s14, v2, v3)
    G.replace_slot(s35, v4, v5)


def apply_d_switching(G: Multigraph, a: Anchor) -> None:
    v1, v2, v3, v4, v5, v6 = a.vertices
    if a.kind != "dee" or not d_switching_valid(G, a.vertices):
        raise InternalInvariantViolation(f"{a} is not a valid d-switching here")
    s14, s36 = a.slots
    _check_slot(G, s14, v1, v4)
    _check_slot(G, s36, v3, v6)
    sa, sb = G.multi_slots(v2, v5)
    G.replace_slot(sa, v1, v2)
    G.replace_slot(sb, v2, v3)
    G.replace_slot(s14, v4, v5)
    G.replace_slot(s36, v5, v6)


# -- b quantities -------------------------------------------------------------


def _check_path(G: Multigraph, path) -> None:
    a1, a2, a3 = path
    if len({a1, a2, a3}) != 3 or G.mult(a1, a2) != 1 or G.mult(a2, a3) != 1 or G.has_loop(a2):
        raise InvalidAnchor(f"{path} is not a simple 2-path with a loopless centre")


def b_l_0(G: Multigraph) -> int:
    return G.p2


def b_d_0(G: Multigraph) -> int:
    return G.p2


def b_l_1(G: Multigraph, path) -> int:
    """Simple ordered edges (x, y) avoiding ``path`` with v1x and v3y non-edges.

    Counted as M minus three disjoint kinds of bad ordered edge: non-simple
    ones, simple ones touching the path, and the rest that hit a forbidden
    adjacency.  Only the neighbourhoods of v1 and v3 are visited.
    """
    _check_path(G, path)
    v1, v2, v3 = path
    on_path = set(path)
    non_simple = G.M - 2 * G.simple_edge_count
    inside = sum(G.mult(x, y) == 1 for x, y in ((v1, v2), (v2, v3), (v1, v3)))
    touching = 2 * sum(G.simple_degree(x) for x in path) - 2 * inside

    def away(x):
        return G.simple_degree(x) - sum(G.mult(x, y) == 1 for y in path)

    n1 = [u for u in G.neighbors(v1) if u not in on_path]
    n3 = [w for w in G.neighbors(v3) if w not in on_path]
    n3_set = set(n3)
    both = sum(1 for u in n1 for w in G.simple_neighbors(u) if w in n3_set)
    forbidden = sum(away(u) for u in n1) + sum(away(w) for w in n3) - both
    return G.M - non_simple - touching - forbidden


def b_d_1(G: Multigraph, path, centre_part: int | None = None) -> int:
    """Simple ordered 2-paths (x, y, z) avoiding ``path`` with a1x, a2y, a3z non-edges.

    Starts from the cached 2-path count and subtracts, centre by centre, the
    paths that break a constraint.  Only centres adjacent to the forbidden
    sets contribute a correction, so the work is O(Delta^2).  With
    ``centre_part`` only paths centred in that vertex class are counted.
    """
    _check_path(G, path)
    a1, a2, a3 = path
    on_path = set(path)
    bad_x = on_path.union(G.neighbors(a1))
    bad_y = on_path.union(G.neighbors(a2))
    bad_z = on_path.union(G.neighbors(a3))

    def centre_ok(c):
        return not G.has_loop(c) and (centre_part is None or G.part_of(c) == centre_part)

    total = G.p2 if centre_part is None else G.p2_centred(centre_part)
    for c in bad_y:
        if centre_ok(c):
            k = G.simple_degree(c)
            total -= k * (k - 1)

    # hits_x[c]: simple neighbours of c that may not be x; likewise for z
    hits_x, hits_z, hits_xz = Counter(), Counter(), Counter()
    for x in bad_x:
        hits_x.update(G.simple_neighbors(x))
    for z in bad_z:
        hits_z.update(G.simple_neighbors(z))
    for w in bad_x & bad_z:
        hits_xz.update(G.simple_neighbors(w))
    for c in hits_x.keys() | hits_z.keys():
        if c in bad_y or not centre_ok(c):
            continue
        k = G.simple_degree(c)
        hx, hz = hits_x[c], hits_z[c]
        total -= (hx + hz) * (k - 1) - hx * hz + hits_xz[c]
    return total


# -- phases -------------------------------------------------------------------


def _relax_or_restart(rng, lowers, counts) -> None:
    if min(lowers) <= 0:
        # no usable lower bound: every switching into this level is rejected
        raise Restart("b")
    if not accept_relaxed(rng, lowers, counts):
        raise Restart("b")


def no_loops(G: Multigraph, bounds, rng, stats=None) -> None:
    """Remove every loop, one l-switching per step; raises ``Restart`` on rejection."""
    while G.m1:
        m1, m2 = G.m1, G.m2
        a = sample_l_candidate(G, rng)
        if a is None:
            raise Restart("f")
        apply_l_switching(G, a)
        pb = bounds(m1 - 1, m2)
        counts = (bounds.level0_count_l(G), b_l_1(G, a.sub(1)))
        _relax_or_restart(rng, (pb.b_l0, pb.b_l1), counts)
        if stats is not None:
            stats.switching_steps_l += 1


def no_doubles(G: Multigraph, bounds, rng, stats=None) -> None:
    """Remove every double edge, one d-switching per step; raises ``Restart`` on rejection."""
    while G.m2:
        m2 = G.m2
        a = sample_d_candidate(G, rng)
        if a is None:
            raise Restart("f")
        apply_d_switching(G, a)
        pb = bounds(0, m2 - 1)
        counts = (bounds.level0_count_d(G), b_d_1(G, a.sub(1)))
        _relax_or_restart(rng, (pb.b_d0, pb.b_d1), counts)
        if stats is not None:
            stats.switching_steps_d += 1
