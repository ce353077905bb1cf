import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from topecube.enumerate import generate_antipodal  # noqa: E402
from topecube.pcube import (  # noqa: E402
    ToGraph,
    cartesian_product,
    even_cycle,
    expand,
    hypercube,
    path_graph,
    star_tree,
)

# property tests draw from a fixed seed unless overridden (mirrors the CLI --seed default)
settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

CACHE = Path(os.environ.get("TOPECUBE_TEST_CACHE", Path(__file__).resolve().parent.parent / ".topecube-cache"))


@pytest.fixture(scope="session")
def catalog_root():
    CACHE.mkdir(parents=True, exist_ok=True)
    return CACHE


@pytest.fixture(scope="session")
def antipodal_catalog(catalog_root):
    """{n: antipodal classes} for n = 1..6; the n = 6 level takes minutes on first use, then is cached."""
    threads = max(1, min(4, os.cpu_count() or 1))
    return {n: generate_antipodal(n, threads=threads, catalog=catalog_root, resume=True) for n in range(1, 7)}


# ------------------------------------------------------------ fixtures built by hand

C6 = even_cycle(3)
Q3 = hypercube(3)
P3 = ToGraph([0b00, 0b01, 0b11], 2)
K2 = ToGraph([0, 1], 1)


def glue_at_vertex(g1: ToGraph, u: int, g2: ToGraph, v: int) -> ToGraph:
    """Vertex amalgam: g1 with v's word appended, g2 with u's word prepended."""
    words = [a | (v << g1.n) for a in g1.words] + [u | (b << g1.n) for b in g2.words]
    return ToGraph(words, g1.n + g2.n)


def square_on_edge(g: ToGraph, a: int, b: int) -> ToGraph:
    """Attach a 4-cycle along the edge ab (expansion with one side the edge)."""
    return expand(g, g.words, [a, b])


def cellular_fixtures() -> dict:
    """Trees, cycles, prisms and complexes of glued edges, squares and even cycles."""
    c6, c8 = even_cycle(3), even_cycle(4)
    tree = glue_at_vertex(star_tree(3), 0, path_graph(2), 0b11)
    return {
        "path4": path_graph(4),
        "star3": star_tree(3),
        "tree": tree,
        "C4": even_cycle(2),
        "C6": c6,
        "C8": c8,
        "C10": even_cycle(5),
        "Q3": hypercube(3),
        "C6xK2": cartesian_product(c6, K2),
        "C6+C6": glue_at_vertex(c6, 0, c6, 0b111),
        "C6+C8": glue_at_vertex(c6, 0b001, c8, 0),
        "C6+square": square_on_edge(c6, 0b000, 0b001),
        "C8+square+edge": glue_at_vertex(square_on_edge(c8, 0, 1), 0, K2, 1),
    }


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
