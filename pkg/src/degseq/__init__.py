"""Exactly uniform random graphs with a prescribed degree sequence."""

from .bipartite import inc_bipartite
from .errors import (
    DegSeqError,
    GaveUp,
    InsufficientSamples,
    InternalInvariantViolation,
    InvalidDegree,
    NotBigraphical,
    NotGraphical,
    OddDegreeSum,
    TooLargeForOracle,
    UnbalancedParts,
)
from .graph import (
    BipartiteDegreeSequence,
    DegreeSequence,
    Multigraph,
    SimpleGraph,
    build_bipartite_sequence,
    build_degree_sequence,
    erdos_gallai,
    gale_ryser,
)
from .incgen import GenerationStats, inc_gen

__all__ = [
    "BipartiteDegreeSequence",
    "DegSeqError",
    "DegreeSequence",
    "GaveUp",
    "GenerationStats",
    "InsufficientSamples",
    "InternalInvariantViolation",
    "InvalidDegree",
    "Multigraph",
    "NotBigraphical",
    "NotGraphical",
    "OddDegreeSum",
    "SimpleGraph",
    "TooLargeForOracle",
    "UnbalancedParts",
    "build_bipartite_sequence",
    "build_degree_sequence",
    "erdos_gallai",
    "gale_ryser",
    "inc_bipartite",
    "inc_gen",
]
