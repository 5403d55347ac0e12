"""Top-level uniform generator for simple graphs with a given degree sequence."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .errors import GaveUp, NotGraphical, Restart
from .graph import DegreeSequence, SimpleGraph, build_degree_sequence
from .pairing import generate_pairing, in_phi0, phi0_thresholds, project
from .switching import FormulaBounds, no_doubles, no_loops

DEFAULT_MAX_RESTARTS = 10**6


@dataclass
class GenerationStats:
    """Restart and switching accounting for one call of a generator.

    Switching steps are counted whenever a step survives b-rejection, even if
    the run restarts later.
    """

    restarts_initial: int = 0
    restarts_f: int = 0
    restarts_b: int = 0
    switching_steps_l: int = 0
    switching_steps_d: int = 0
    wall_time: float = 0.0

    @property
    def restarts(self) -> int:
        return self.restarts_initial + self.restarts_f + self.restarts_b

    @property
    def attempts(self) -> int:
        return 1 + self.restarts

    def record(self, cause: str) -> None:
        name = f"restarts_{cause}"
        setattr(self, name, getattr(self, name) + 1)

    def to_dict(self) -> dict:
        return asdict(self)


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def inc_gen(
    ds: DegreeSequence | list,
    rng=None,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
    *,
    thresholds=None,
    bounds=None,
) -> tuple[SimpleGraph, GenerationStats]:
    """Draw a uniformly random simple graph with degree sequence ``ds``.

    Every rejection restarts from a fresh pairing drawn from the same stream,
    so a given seed always reproduces the same graph.  ``thresholds`` and
    ``bounds`` replace the default loop/double caps and phase bound provider.
    """
    if not isinstance(ds, DegreeSequence):
        ds = build_degree_sequence(ds)
    if not ds.graphical:
        raise NotGraphical(f"degree sequence is not graphical (n={ds.n}, M={ds.M})")
    rng = _as_rng(rng)
    th = phi0_thresholds(ds) if thresholds is None else thresholds
    bounds = FormulaBounds(ds) if bounds is None else bounds
    stats = GenerationStats()
    start = time.perf_counter()
    while True:
        P = generate_pairing(ds, rng)
        try:
            if not in_phi0(P, th):
                raise Restart("initial")
            prof = P.profile
            if prof.m1 == 0 and prof.m2 == 0:
                edges = P.vertex_pairs
            else:
                G = project(P)
                no_loops(G, bounds, rng, stats)
                no_doubles(G, bounds, rng, stats)
                edges = G.slots()
        except Restart as r:
            stats.record(r.cause)
            if stats.restarts > max_restarts:
                stats.wall_time = time.perf_counter() - start
                raise GaveUp(f"gave up after {stats.restarts} restarts", stats) from None
            continue
        stats.wall_time = time.perf_counter() - start
        return SimpleGraph(ds.n, edges), stats
