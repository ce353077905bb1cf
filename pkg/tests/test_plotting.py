from conftest import C6, Q3
from topecube.corners import corner_peeling
from topecube.euclid import cocircuit_graph, orient
from topecube.mutation import build_mutation_graph
from topecube.plotting import (
    plot_arrangement,
    plot_degree_vs_rank,
    plot_mutation_graph,
    plot_orientation,
    plot_tope_graph,
    zonotope_layout,
)
from topecube.pcube import ToGraph, hypercube
from topecube.realizable import generic_affine

PNG = b"\x89PNG\r\n\x1a\n"


def is_png(p):
    return p.exists() and p.read_bytes()[:8] == PNG


def test_zonotope_layout_is_injective_on_small_oms():
    for g in (C6, Q3, hypercube(4)):
        pos = zonotope_layout(g)
        assert len({tuple(round(c, 9) for c in p) for p in pos.values()}) == len(g)


def test_plots(tmp_path):
    assert is_png(plot_tope_graph(C6, tmp_path / "c6.png", title="hexagon"))
    assert is_png(plot_tope_graph(Q3, tmp_path / "q3.png", peeling=corner_peeling(Q3, "lop")))
    assert is_png(plot_mutation_graph(build_mutation_graph(5, 2), tmp_path / "m.png"))
    p3 = ToGraph([0b00, 0b01, 0b11], 2)
    cg = cocircuit_graph(p3)
    assert is_png(plot_orientation(cg, orient(cg, 0), tmp_path / "o.png"))
    assert is_png(plot_degree_vs_rank([(2, 2), (3, 3), (4, 3)], tmp_path / "d.png"))
    assert is_png(plot_arrangement(generic_affine(4, 2), tmp_path / "a.png"))


def test_plot_creates_parent_dirs(tmp_path):
    out = plot_tope_graph(C6, tmp_path / "a" / "b" / "c6.png")
    assert is_png(out)
