import pytest

import oracles
from conftest import C6, K2, P3, Q3
from topecube.faces import (
    CoVector,
    antipodes_of_affine,
    check_FS,
    check_SE,
    classify,
    compose,
    covector_of,
    enumerate_faces,
    face_of,
    face_poset_leq,
    gate_by_search,
    gate_map,
    is_gated,
    maximal_faces,
    se_audit,
    separator,
    zone_graph,
)
from topecube.enumerate import generate_partial_cubes
from topecube.io import format_covectors
from topecube.pcube import (
    ToGraph,
    cartesian_product,
    even_cycle,
    hypercube,
    is_partial_cube,
    path_graph,
    rank,
    str_to_word,
)


def face_signature(f):
    c = f.covector
    return (c.plus, c.minus, c.zero, f.topes)


def oracle_signature(g):
    return sorted(oracles.faces_by_covectors(g.words, g.n), key=lambda t: (t[2], t[0], t[1]))


# ------------------------------------------------------------ enumerate_faces

@pytest.mark.parametrize("g,count", [(Q3, 27), (C6, 13), (ToGraph([5], 3), 1)])
def test_face_counts(g, count):
    faces = enumerate_faces(g)
    assert len(faces) == count
    assert sorted(map(face_signature, faces), key=lambda t: (t[2], t[0], t[1])) == oracle_signature(g)


def test_face_counts_by_rank_q3():
    by_rank = {}
    for f in enumerate_faces(Q3):
        by_rank[f.rank] = by_rank.get(f.rank, 0) + 1
    assert by_rank == {0: 8, 1: 12, 2: 6, 3: 1}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cube_has_3_to_the_n_faces(n):
    assert len(enumerate_faces(hypercube(n))) == 3 ** n


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_even_cycle_face_count(m):
    assert len(enumerate_faces(even_cycle(m))) == 4 * m + 1


@pytest.mark.parametrize("g", [P3, path_graph(3), cartesian_product(C6, K2), even_cycle(4),
                               ToGraph([w for w in range(16) if w not in (0, 15, 1)], 4)])
def test_faces_match_covector_scan(g):
    assert sorted(map(face_signature, enumerate_faces(g)), key=lambda t: (t[2], t[0], t[1])) == oracle_signature(g)


def test_face_invariants():
    for g in (C6, Q3, cartesian_product(C6, K2)):
        for f in enumerate_faces(g):
            c = f.covector
            assert c.plus | c.minus | c.zero == (1 << g.n) - 1
            assert not (c.plus & c.minus or c.plus & c.zero or c.minus & c.zero)
            assert covector_of(f.topes, g.n) == c
            assert all(f.antipode_of(w) in f.topes for w in f.topes)


def test_covector_export_is_sorted():
    text = format_covectors(enumerate_faces(C6))
    lines = text.splitlines()
    assert lines == sorted(lines) and len(lines) == 13
    assert "000" in lines


# ------------------------------------------------------------ sign vector operations

def test_compose_examples():
    x = CoVector.parse("+00")
    y = CoVector.parse("--+")
    assert str(compose(x, y)) == "+-+"
    assert compose(y, y) == y
    assert compose(CoVector.parse("000"), y) == y


def test_compose_width_mismatch():
    with pytest.raises(ValueError):
        compose(CoVector.parse("+0"), CoVector.parse("+00"))


def test_separator():
    assert separator(CoVector.parse("+-0"), CoVector.parse("--+")) == 0b001


# ------------------------------------------------------------ gates

def test_edge_faces_of_c6_are_gated():
    for f in enumerate_faces(C6):
        if f.rank == 1:
            assert is_gated(C6, f)


def test_cube_faces_are_gated():
    for f in enumerate_faces(Q3):
        assert is_gated(Q3, f)


@pytest.mark.parametrize("removed", [(0b111, 0b100), (0b111,), (0b111, 0b000), (0b111, 0b011)])
def test_gate_composition_matches_search_on_punctured_cube(removed):
    # the first graph is not a partial cube: there only the gated verdicts are
    # compared, since the composition word need not be the metric gate
    g = ToGraph([w for w in range(8) if w not in removed], 3)
    pc = is_partial_cube(g)
    assert pc == (removed != (0b111, 0b100))
    for f in enumerate_faces(g):
        gm = gate_map(g, f)
        for v in g.words:
            want = oracles.gate_by_distances(g.words, g.n, f.topes, v)
            assert gate_by_search(g, f, v) == want
            if gm is not None and pc:
                assert gm[v] == want
        assert is_gated(g, f) == all(oracles.gate_by_distances(g.words, g.n, f.topes, v) is not None
                                     for v in g.words)


def test_named_edge_face_in_punctured_cube():
    # the edge {011, 001} inside Q3 minus {111, 100}, in '+-' strings coordinate 0 first
    g = ToGraph([w for w in range(8) if w not in (0b111, 0b100)], 3)
    f = face_of(g, covector_of([0b011, 0b001], 3))
    assert f is not None and f.rank == 1
    expected = all(oracles.gate_by_distances(g.words, 3, f.topes, v) is not None for v in g.words)
    assert is_gated(g, f) == expected


# ------------------------------------------------------------ classification

def test_classify_c6():
    assert {"partial-cube", "COM", "OM", "UOM"} <= classify(C6)
    assert "LOP" not in classify(C6)


def test_classify_q3():
    assert {"COM", "OM", "LOP", "UOM"} <= classify(Q3)


def test_classify_p3():
    labels = classify(P3)
    assert {"COM", "LOP", "AOM", "affine"} <= labels
    assert "OM" not in labels


def test_classify_non_partial_cube():
    assert classify(ToGraph([0, 3], 2)) == {"not-partial-cube"}


def test_classify_non_com_partial_cube():
    # Q4 minus {----, ++++, +---}
    g = ToGraph([w for w in range(16) if w not in (0, 15, 1)], 4)
    labels = classify(g)
    assert "partial-cube" in labels and "COM" not in labels
    gated = all(is_gated(g, f) for f in enumerate_faces(g))
    assert ("COM" in labels) == gated


def test_com_iff_every_face_gated_against_oracle():
    fixtures = [C6, Q3, P3, ToGraph([w for w in range(16) if w not in (0, 15, 1)], 4),
                ToGraph([w for w in range(8) if w not in (0b111, 0b000)], 3)]
    for g in fixtures:
        gated = all(all(oracles.gate_by_distances(g.words, g.n, f[3], v) is not None for v in g.words)
                    for f in oracles.faces_by_covectors(g.words, g.n))
        assert ("COM" in classify(g)) == gated


def test_antipodes_of_affine_examples():
    assert antipodes_of_affine(P3) == {0b00, 0b11}
    assert antipodes_of_affine(C6) == C6.vertex_set
    assert antipodes_of_affine(hypercube(2)) == frozenset(range(4))


# ------------------------------------------------------------ axioms

def test_strong_elimination_examples():
    faces = enumerate_faces(C6)
    x = face_of(C6, covector_of([0b000], 3))
    y = face_of(C6, covector_of([0b111], 3))
    z = check_SE(C6, x, y, 0, faces)
    assert z is not None and z.covector.zero >> 0 & 1
    q2 = hypercube(2)
    x = face_of(q2, covector_of([0b00], 2))
    y = face_of(q2, covector_of([0b11], 2))
    z = check_SE(q2, x, y, 1)
    assert z is not None and z.rank == 1


def test_strong_elimination_precondition():
    x = face_of(C6, covector_of([0b000], 3))
    with pytest.raises(ValueError):
        check_SE(C6, x, x, 0)


def test_axiom_audits_on_small_coms():
    for g in (C6, Q3, P3, cartesian_product(C6, K2), even_cycle(4)):
        faces = enumerate_faces(g)
        assert se_audit(g, faces) is None
        assert check_FS(faces) is None


def test_strong_elimination_fails_off_com():
    g = ToGraph([w for w in range(32) if w not in (31, 0, 1)], 5)
    assert "COM" not in classify(g)
    assert se_audit(g) is not None


def test_se_audit_agrees_with_oracle():
    verdicts = set()
    for n in (2, 3, 4):
        for g in generate_partial_cubes(n):
            ok = se_audit(g) is None
            assert ok == oracles.strong_elimination_holds(g.words, n), g.words
            verdicts.add(ok)
    assert verdicts == {True, False}


# ------------------------------------------------------------ poset and zones

def test_face_poset():
    faces = enumerate_faces(C6)
    vertex = next(f for f in faces if f.rank == 0 and 0 in f.topes)
    edge = next(f for f in faces if f.rank == 1 and 0 in f.topes)
    whole = next(f for f in faces if f.rank == 2)
    assert face_poset_leq(edge, vertex)
    assert all(face_poset_leq(whole, f) for f in faces)
    other = next(f for f in faces if f.rank == 0 and 0 not in f.topes)
    assert not face_poset_leq(vertex, other) and not face_poset_leq(other, vertex)


def test_face_poset_host_mismatch():
    a = enumerate_faces(C6)[0]
    b = enumerate_faces(Q3)[0]
    with pytest.raises(ValueError):
        face_poset_leq(a, b)


def test_maximal_faces_have_full_rank():
    for g in (P3, C6, Q3, cartesian_product(C6, K2), path_graph(4)):
        r = rank(g)
        assert max(f.rank for f in maximal_faces(enumerate_faces(g))) == r


def test_zone_graphs():
    z = zone_graph(Q3, 0b001)
    assert len(z.faces) == 4 and z.graph == hypercube(2)
    z = zone_graph(C6, 0b001)
    assert len(z.faces) == 2 and len(z.graph) == 2 and z.graph.n == 1
    prism = cartesian_product(C6, K2)
    z = zone_graph(prism, 0b1000)
    assert len(z.faces) == 6 and "OM" in classify(z.graph) and rank(z.graph) == 2


def test_zone_graph_empty_class_set_is_the_graph():
    z = zone_graph(C6, 0)
    assert z.graph == C6


def test_zone_graphs_of_coms_are_coms():
    for g in (C6, Q3, cartesian_product(C6, K2), even_cycle(4)):
        for e in range(g.n):
            assert "COM" in classify(zone_graph(g, 1 << e).graph)


def test_parse_covector_strings():
    c = CoVector.parse("+-0")
    assert (c.plus, c.minus, c.zero) == (str_to_word("+--"), 0b010, 0b100)
    assert str(-c) == "-+0"
