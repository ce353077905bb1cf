"""Tope graphs of oriented matroids, COMs and antipodal partial cubes."""
from .pcube import (
    CapacityError,
    ToGraph,
    cartesian_product,
    construct_A_G,
    construct_Q_minusminus,
    contract,
    convex_hull,
    distance,
    double,
    even_cycle,
    expand,
    hypercube,
    is_antipodal,
    is_partial_cube,
    path_graph,
    rank,
    simplify,
    theta_classes,
)
from .faces import CoVector, Face, classify, compose, enumerate_faces, is_gated, zone_graph
from .canon import CanonicalKey, canonical_key
from .io import parse_topes, read_topes, write_topes

__version__ = "0.1.0"
