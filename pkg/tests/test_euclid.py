import json

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import C6, K2, P3, Q3, cellular_fixtures, glue_at_vertex, square_on_edge
from topecube.euclid import (
    BACKWARD,
    FORWARD,
    UNDIRECTED,
    MixedOrientation,
    PurityError,
    acyclicity_witness,
    cocircuit_graph,
    cocircuit_graph_json,
    general_position_extensions,
    has_directed_cycle_bruteforce,
    is_euclidean_aom,
    is_euclidean_om,
    is_mandel,
    is_strictly_acyclic,
    line_graph_of_tree_check,
    orient,
)
from topecube.enumerate import generate_antipodal
from topecube.faces import classify
from topecube.pcube import ToGraph, even_cycle, hypercube, is_antipodal, is_partial_cube, restrict, simplify


def halfspaces(g):
    for e in range(g.n):
        for side in (0, 1):
            yield simplify(ToGraph([w for w in g.words if (w >> e & 1) == side], g.n))[0]


def crossed(face, e):
    return face.zero >> e & 1


def side(face, e):
    c = face.covector
    return (c.plus >> e & 1) - (c.minus >> e & 1)


def small_oms():
    return [g for n in range(2, 6) for g in generate_antipodal(n) if "OM" in classify(g)]


def edge_glued():
    """Pure rank-2 COMs whose maximal faces meet along edges."""
    c8 = even_cycle(4)
    return {
        "C6+square": cellular_fixtures()["C6+square"],
        "C8+square": square_on_edge(c8, 0, 1),
        "C8+2squares": square_on_edge(square_on_edge(c8, 0, 1), 28, 30),
        "C6+2squares": square_on_edge(square_on_edge(C6, 0, 1), 14, 15),
    }


# ------------------------------------------------------------ cocircuit graphs

def test_c6_cocircuit_graph_is_a_hexagon():
    cg = cocircuit_graph(C6)
    assert len(cg.nodes) == 6 and all(a.rank == 1 for a in cg.nodes)
    gr = cg.to_networkx()
    assert nx.is_isomorphic(gr, nx.cycle_graph(6))
    # adjacency oracle: two edge-faces meet in exactly one vertex
    for i, a in enumerate(cg.nodes):
        for j in range(i + 1, len(cg.nodes)):
            assert gr.has_edge(i, j) == (len(a.topes & cg.nodes[j].topes) == 1)


def test_q2_cocircuit_graph_is_a_square():
    cg = cocircuit_graph(hypercube(2))
    assert nx.is_isomorphic(cg.to_networkx(), nx.cycle_graph(4))


def test_q3_cocircuit_graph_is_the_octahedron():
    cg = cocircuit_graph(Q3)
    assert len(cg.nodes) == 6 and all(len(a) == 4 for a in cg.nodes)
    gr = cg.to_networkx()
    assert nx.is_isomorphic(gr, nx.octahedral_graph())
    for i, j in gr.edges:
        assert len(cg.nodes[i].topes & cg.nodes[j].topes) == 2


@pytest.mark.parametrize("g", [C6, Q3, even_cycle(4), hypercube(4)])
def test_om_lines_are_even_antipodal_cycles_covering_each_edge_once(g):
    cg = cocircuit_graph(g)
    covered = []
    for line in cg.lines:
        assert line.closed and len(line.nodes) % 2 == 0
        k = len(line.nodes)
        for t in range(k):
            a, b = cg.nodes[line.nodes[t]], cg.nodes[line.nodes[(t + k // 2) % k]]
            assert b.covector == -a.covector
            covered.append(tuple(sorted((line.nodes[t], line.nodes[(t + 1) % k]))))
    assert sorted(covered) == sorted(cg.edges)


def test_pure_com_uses_maximal_faces():
    cg = cocircuit_graph(edge_glued()["C6+square"])
    assert sorted(len(a) for a in cg.nodes) == [4, 6]
    for name, g in edge_glued().items():
        assert all(line_graph_of_tree_check(cocircuit_graph(g)).values()), name


def test_purity_error():
    with pytest.raises(PurityError):
        cocircuit_graph(glue_at_vertex(C6, 0, K2, 0))
    # two hexagons sharing only a vertex: G* is disconnected
    with pytest.raises(PurityError):
        cocircuit_graph(glue_at_vertex(C6, 0, C6, 0b111))


# ------------------------------------------------------------ orientations

def test_orientation_of_p3():
    cg = cocircuit_graph(P3)
    for e in range(2):
        mo = orient(cg, e)
        # arcs run from the minus side of e towards its plus side
        assert len(mo.arcs()) == 1
        a, b = mo.arcs()[0]
        assert side(cg.nodes[a], e) < side(cg.nodes[b], e)


def test_orient_invalid_class():
    with pytest.raises(ValueError):
        orient(cocircuit_graph(P3), 5)


@pytest.mark.parametrize("name", sorted(edge_glued()))
def test_uncrossed_lines_stay_undirected(name):
    g = edge_glued()[name]
    cg = cocircuit_graph(g)
    for e in range(g.n):
        mo = orient(cg, e)
        for zf, group in cg.groups().items():
            nodes = {i for ed in group for i in ed}
            if not any(crossed(cg.nodes[i], e) for i in nodes) or zf >> e & 1:
                assert all(mo.state[ed] == UNDIRECTED for ed in group)


def test_aom_crossed_node_is_unique_per_line():
    affine = [h for om in small_oms() for h in halfspaces(om) if not is_antipodal(h) and h.n >= 2]
    for g in affine:
        cg = cocircuit_graph(g)
        for e in range(g.n):
            for line in cg.lines:
                if line.classes >> e & 1:
                    continue
                assert sum(1 for i in line.nodes if crossed(cg.nodes[i], e)) <= 1


def test_directed_triangle():
    mo = MixedOrientation(0, 3, [(0, 1), (1, 2), (0, 2)], {(0, 1): FORWARD, (1, 2): FORWARD, (0, 2): BACKWARD})
    w = acyclicity_witness(mo)
    assert w is not None and len(w) == 4 and w[0] == w[-1]
    assert not is_strictly_acyclic(mo)
    assert oracles.has_directed_cycle(3, mo.arcs(), mo.undirected())


def test_all_undirected_and_single_arc_trees_are_acyclic():
    edges = [(0, 1), (1, 2), (1, 3)]
    mo = MixedOrientation(0, 4, edges, {ed: UNDIRECTED for ed in edges})
    assert is_strictly_acyclic(mo)
    mo.state[(1, 2)] = FORWARD
    assert is_strictly_acyclic(mo)


@given(st.integers(3, 8).flatmap(lambda k: st.tuples(
    st.just(k),
    st.lists(st.tuples(st.integers(0, k - 1), st.integers(0, k - 1), st.sampled_from([0, 1, 2])),
             max_size=12))))
def test_strict_acyclicity_agrees_with_exhaustive_search(data):
    k, raw = data
    state = {}
    for a, b, s in raw:
        if a != b:
            state[(min(a, b), max(a, b))] = s
    edges = sorted(state)
    mo = MixedOrientation(0, k, edges, state)
    want = oracles.has_directed_cycle(k, mo.arcs(), mo.undirected())
    assert is_strictly_acyclic(mo) == (not want)
    assert has_directed_cycle_bruteforce(mo) == want


def test_orientations_of_halfspaces_agree_with_oracle():
    for g in small_oms():
        for h in halfspaces(g):
            if h.n < 2 or is_antipodal(h):
                continue
            cg = cocircuit_graph(h)
            for e in range(h.n):
                mo = orient(cg, e)
                want = oracles.has_directed_cycle(len(cg.nodes), mo.arcs(), mo.undirected())
                assert is_strictly_acyclic(mo) == (not want)


# ------------------------------------------------------------ Euclidean

def test_rank_two_aoms_are_euclidean():
    for m in range(2, 7):
        for h in halfspaces(even_cycle(m)):
            if "AOM" in classify(h) and h.n >= 2 and len(h) < 2 * m:
                assert is_euclidean_aom(h)
    assert is_euclidean_aom(P3)


def test_cubes_are_euclidean():
    for n in range(1, 5):
        assert is_euclidean_om(hypercube(n))
    assert is_euclidean_om(C6)


def test_euclidean_checks_validate_labels():
    with pytest.raises(ValueError):
        is_euclidean_aom(C6)
    with pytest.raises(ValueError):
        is_euclidean_om(P3)


# ------------------------------------------------------------ extensions and Mandel

def _expansion_by_hand_ok(g, h1):
    """General position of the split (H1, -H1), checked from the maximal proper faces."""
    full = (1 << g.n) - 1
    h2 = {w ^ full for w in h1}
    if set(h1) | h2 != g.vertex_set or not oracles.is_partial_cube(list(h1), g.n):
        return False
    cg = cocircuit_graph(g)
    for a in cg.nodes:
        if not (a.topes <= h1 or a.topes <= h2) or a.topes <= set(h1) & h2:
            return False
    return True


def test_c6_has_six_general_position_extensions():
    exts = list(general_position_extensions(C6))
    assert len(exts) == 6
    # brute force over the 2^3 sign choices on antipodal pairs of cocircuits
    cg = cocircuit_graph(C6)
    reps = [a for a in cg.nodes if a.covector < -a.covector]
    brute = set()
    for mask in range(8):
        h1 = set()
        for t, a in enumerate(reps):
            h1 |= a.topes if mask >> t & 1 else {w ^ 7 for w in a.topes}
        if _expansion_by_hand_ok(C6, frozenset(h1)):
            brute.add(frozenset(h1))
    assert {e.h1 for e in exts} == brute
    for e in exts:
        # four consecutive hexagon vertices
        assert len(e.h1) == 4 and is_partial_cube(restrict(C6, e.h1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cube_extensions_are_vertex_splits(n):
    q = hypercube(n)
    got = {e.h1 for e in general_position_extensions(q)}
    assert got == {q.vertex_set - {v} for v in q.words}
    for e in general_position_extensions(q):
        assert "OM" in classify(e.graph)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_cycle_extensions_are_long_paths(m):
    c = even_cycle(m)
    for e in general_position_extensions(c):
        assert len(e.h1) == m + 1 and is_partial_cube(restrict(c, e.h1))


def test_extension_limit_flags_truncation():
    stats = {}
    out = list(general_position_extensions(Q3, limit=2, stats=stats))
    assert stats["incomplete"] and len(out) <= 2


def test_mandel_small_oms():
    for g in (C6, Q3, even_cycle(4), hypercube(4)):
        res = is_mandel(g)
        assert res and res.verdict == "true"
        side = simplify(restrict(g, res.extension.h1))[0]
        assert is_euclidean_aom(side)


def test_mandel_requires_om():
    with pytest.raises(ValueError):
        is_mandel(P3)


def test_cocircuit_json():
    data = cocircuit_graph_json(cocircuit_graph(C6))
    data = json.loads(json.dumps(data))
    assert data["schema"] == "topecube.cocircuit-graph/1"
    assert len(data["nodes"]) == 6 and len(data["edges"]) == 6
    assert data["orientations"] == {}
    data = cocircuit_graph_json(cocircuit_graph(P3))
    assert set(data["orientations"]) == {"0", "1"}
    assert all(o["strictly_acyclic"] for o in data["orientations"].values())
