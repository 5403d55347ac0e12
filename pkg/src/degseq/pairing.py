"""Configuration-model pairings, the initial-rejection test and projection to a multigraph."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import OddDegreeSum
from .graph import DegreeSequence, Multigraph, MultiplicityProfile, profile_pairs

# below this many pairs a Counter beats np.unique
_SMALL = 256


class Pairing:
    """A perfect matching on the points of the configuration model.

    Vertex ``i`` owns the points ``offsets[i] .. offsets[i+1]-1``; ``pairs`` is
    an ``(M/2, 2)`` array of point indices.
    """

    def __init__(self, degrees, pairs, *, part=None):
        self.degrees = np.asarray(degrees, dtype=np.int64)
        self.n = int(self.degrees.size)
        self.offsets = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=self.offsets[1:])
        self.pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        self.part = part

    @property
    def M(self) -> int:
        return int(self.offsets[-1])

    @cached_property
    def vertex_of(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    @cached_property
    def vertex_pairs(self) -> np.ndarray:
        return self.vertex_of[self.pairs]

    def matching(self) -> frozenset:
        return frozenset(frozenset(p) for p in self.pairs.tolist())

    @cached_property
    def profile(self) -> MultiplicityProfile:
        vp = self.vertex_pairs
        if vp.shape[0] <= _SMALL:
            return profile_pairs(vp.tolist())
        a, b = vp[:, 0], vp[:, 1]
        loops = a == b
        m1 = int(loops.sum())
        bad = False
        if m1:
            _, lc = np.unique(a[loops], return_counts=True)
            bad = bool((lc >= 2).any())
        lo = np.minimum(a[~loops], b[~loops])
        hi = np.maximum(a[~loops], b[~loops])
        _, counts = np.unique(lo * self.n + hi, return_counts=True)
        m2 = int((counts == 2).sum())
        bad = bad or bool((counts >= 3).any())
        return MultiplicityProfile(m1, m2, bad)


def generate_pairing(ds: DegreeSequence, rng: np.random.Generator) -> Pairing:
    """Uniform perfect matching: shuffle the points and pair consecutive entries."""
    if ds.M % 2:
        raise OddDegreeSum(f"degree sum {ds.M} is odd")
    return Pairing(ds.degrees, rng.permutation(ds.M).reshape(-1, 2))


@dataclass(frozen=True)
class Phi0Thresholds:
    B1: Fraction
    B2: Fraction


def phi0_thresholds(ds: DegreeSequence) -> Phi0Thresholds:
    if 22 * ds.max_degree**3 < ds.M2:
        b1 = Fraction(ds.M2, ds.M)
        return Phi0Thresholds(b1, b1 * b1)
    return Phi0Thresholds(Fraction(0), Fraction(0))


def in_phi0(P: Pairing, th: Phi0Thresholds) -> bool:
    prof = P.profile
    return not prof.has_bad_multiplicity and prof.m1 <= th.B1 and prof.m2 <= th.B2


def project(P: Pairing) -> Multigraph:
    """The multigraph G(P): bins become vertices, pairs become edges."""
    partner = np.empty(P.M, dtype=np.int64)
    partner[P.pairs[:, 0]] = P.pairs[:, 1]
    partner[P.pairs[:, 1]] = P.pairs[:, 0]
    base = (P.offsets, P.vertex_of[partner])
    return Multigraph(P.n, P.vertex_pairs, part=P.part, base=base)
