"""Shared generators for random small multigraphs and anchors."""

import numpy as np

from degseq.bipartite import bipartite_in_phi0, generate_bipartite_pairing
from degseq.graph import build_bipartite_sequence, build_degree_sequence
from degseq.pairing import generate_pairing, in_phi0, phi0_thresholds, project


def random_degrees(rng, n_lo=5, n_hi=14, d_hi=5):
    n = int(rng.integers(n_lo, n_hi + 1))
    d = rng.integers(1, d_hi + 1, size=n)
    if d.sum() % 2:
        d[int(rng.integers(n))] += 1
    return [int(x) for x in d]


def random_multigraph(rng, **kw):
    ds = build_degree_sequence(random_degrees(rng, **kw))
    return project(generate_pairing(ds, rng))


def capped_multigraph(rng, degrees, tries=10000):
    """A projected pairing that passes the default initial-rejection caps."""
    ds = build_degree_sequence(degrees)
    th = phi0_thresholds(ds)
    for _ in range(tries):
        P = generate_pairing(ds, rng)
        if in_phi0(P, th):
            return project(P)
    raise RuntimeError("no pairing passed the caps")


def random_bipartite(rng, m_hi=7, d_hi=4):
    m = int(rng.integers(2, m_hi + 1))
    n = int(rng.integers(2, m_hi + 1))
    s = rng.integers(1, d_hi + 1, size=m)
    t = np.zeros(n, dtype=np.int64)
    for _ in range(int(s.sum())):
        t[int(rng.integers(n))] += 1
    return build_bipartite_sequence(s.tolist(), t.tolist())


def bipartite_corpus(rng, count):
    """Projected bipartite pairings that pass the double-edge cap."""
    out = []
    while len(out) < count:
        bds = random_bipartite(rng, m_hi=6, d_hi=4)
        P = generate_bipartite_pairing(bds, rng)
        if bipartite_in_phi0(P, bds):
            out.append((bds, project(P)))
    return out
