"""Simplicial vertices, Theta-Las Vergnas, corners and corner peelings."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import NamedTuple

import networkx as nx

from .faces import Face, classify, enumerate_faces
from .pcube import (
    ToGraph,
    bits,
    expand,
    is_antipodal,
    is_isometric_set,
    is_partial_cube,
    popcount,
    project,
    rank,
    restrict,
)


class PeelingError(RuntimeError):
    """Peeling got stuck; ``residual`` is the graph left over."""

    def __init__(self, msg: str, residual: ToGraph, steps=None):
        super().__init__(msg)
        self.residual = residual
        self.steps = steps or []


@dataclass(frozen=True, eq=False)
class Corner:
    vertices: frozenset
    host_face: Face | None
    chunk: frozenset

    def __len__(self):
        return len(self.vertices)

    def key(self):
        return tuple(sorted(self.vertices))


@dataclass
class PeelingSequence:
    graph: ToGraph
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def replay(self) -> bool:
        """Re-verify every step on the successive residual graphs."""
        current = self.graph
        seen = set()
        for step in self.steps:
            if step.vertices & seen:
                return False
            ok, _ = verify_corner(current, step.vertices)
            if not ok:
                return False
            seen |= step.vertices
            current = restrict(current, current.vertex_set - step.vertices)
        return seen == self.graph.vertex_set


# ------------------------------------------------------------ maximal faces

def maximal_faces(g: ToGraph, faces=None) -> list[Face]:
    if faces is None:
        faces = enumerate_faces(g)
    by_size = sorted(faces, key=len, reverse=True)
    out = []
    for f in by_size:
        if not any(f.topes < h.topes for h in out):
            out.append(f)
    return out


def _membership(g: ToGraph, maxfaces) -> dict:
    count = {w: [] for w in g.words}
    for i, h in enumerate(maxfaces):
        for w in h.topes:
            count[w].append(i)
    return count


def _face_cocircuits(h: Face, faces) -> list[Face]:
    """Maximal proper faces of the face h."""
    inner = [f for f in faces if f.topes < h.topes]
    return [f for f in inner if not any(f.topes < x.topes for x in inner)]


# ------------------------------------------------------------ simplicial vertices

def simplicial_vertices(g: ToGraph, faces=None) -> frozenset:
    """Vertices in a unique maximal face A with degree equal to rank(A)."""
    if faces is None:
        faces = enumerate_faces(g)
    maxf = maximal_faces(g, faces)
    member = _membership(g, maxf)
    out = set()
    for w in g.words:
        if len(member[w]) == 1 and g.degree(w) == maxf[member[w][0]].rank:
            out.add(w)
    return frozenset(out)


def theta_las_vergnas_witness(g: ToGraph) -> dict:
    """Class -> a simplicial vertex incident to one of its edges, or ``None``."""
    simp = simplicial_vertices(g)
    out = {}
    for e in bits(g.support):
        b = 1 << e
        hit = [v for v in sorted(simp) if v ^ b in g.vertex_set]
        out[e] = hit[0] if hit else None
    return out


def theta_las_vergnas(g: ToGraph) -> bool:
    return all(v is not None for v in theta_las_vergnas_witness(g).values())


class DegreeReport(NamedTuple):
    min_degree: int
    rank: int
    holds: bool
    low_degree_rule: bool  # delta <= 2 implies delta == rank


def min_degree_vs_rank(g: ToGraph) -> DegreeReport:
    d, r = g.min_degree(), rank(g)
    return DegreeReport(d, r, d <= r, d > 2 or d == r)


# ------------------------------------------------------------ corners

def _private_host(g: ToGraph, c: frozenset, maxf, member):
    hosts = {i for w in c for i in member[w]}
    if len(hosts) != 1:
        return None
    return maxf[hosts.pop()]


def _chunk_ok(g: ToGraph, h: Face, c: frozenset, faces, cocircuits=None) -> frozenset | None:
    """T = H \\ C if (T, -T) is an expansion of H in general position yielding an OM."""
    t = h.topes - c
    if not t:
        return None
    z = h.zero
    neg = frozenset(w ^ z for w in t)
    if t | neg != h.topes:
        return None
    if not is_isometric_set(t, g.n):
        return None
    both = t & neg
    for a in cocircuits if cocircuits is not None else _face_cocircuits(h, faces):
        in_t, in_neg = a.topes <= t, a.topes <= neg
        if not (in_t or in_neg) or a.topes <= both:
            return None
    coords = bits(z)
    hg = ToGraph(project(h.topes, coords), len(coords))
    ext = expand(hg, project(t, coords), project(neg, coords), check=False)
    if "OM" not in classify(ext):
        return None
    return t


def verify_corner(g: ToGraph, c, faces=None):
    """(True, Corner) if c is a corner of the COM g, else (False, None).

    A corner lies in a unique maximal face H, with none of its vertices in any
    other maximal face, and H \\ C is one side of an expansion of H in general
    position.  In a rank-1 face a corner is a single vertex; a lone remaining
    vertex is accepted as the final step of a peeling.
    """
    c = frozenset(c)
    if not c or not c <= g.vertex_set:
        return False, None
    if faces is None:
        faces = enumerate_faces(g)
    if c == g.vertex_set:
        if len(c) == 1:
            return True, Corner(c, faces[0], frozenset())
        return False, None
    maxf = maximal_faces(g, faces)
    return _verify_in(g, c, faces, maxf, _membership(g, maxf))


def _verify_in(g: ToGraph, c: frozenset, faces, maxf, member, cocircuits=None):
    """verify_corner for a proper nonempty subset, with the maximal faces precomputed.

    ``cocircuits`` maps a host face to its maximal proper faces, filled lazily.
    """
    h = _private_host(g, c, maxf, member)
    if h is None:
        return False, None
    if h.rank == 1:
        if len(c) != 1:
            return False, None
        return True, Corner(c, h, h.topes - c)
    if h.rank == 0:
        return False, None
    if cocircuits is None:
        cocircuits = {}
    if h.covector not in cocircuits:
        cocircuits[h.covector] = _face_cocircuits(h, faces)
    t = _chunk_ok(g, h, c, faces, cocircuits[h.covector])
    if t is None:
        return False, None
    return True, Corner(c, h, t)


def _connected_subsets(adj: dict, allowed: frozenset, budget: int, conflicts=None):
    """Connected subsets of ``allowed`` with at most ``budget`` vertices (each once).

    With ``conflicts`` (vertex -> set of vertices), subsets holding a
    conflicting pair are skipped together with all their supersets.
    """
    conflicts = conflicts or {}
    order = sorted(allowed)
    rank_of = {v: i for i, v in enumerate(order)}
    seen = set()

    def grow(cur, frontier, root):
        yield cur
        if len(cur) == budget:
            return
        for v in sorted(frontier):
            nxt = cur | {v}
            if nxt in seen or not conflicts.get(v, set()).isdisjoint(cur):
                continue
            seen.add(nxt)
            nf = (frontier | {u for u in adj[v] if u in allowed and rank_of[u] > rank_of[root]}) - nxt
            yield from grow(nxt, nf, root)

    for root in order:
        start = frozenset([root])
        seen.add(start)
        front = {u for u in adj[root] if u in allowed and rank_of[u] > rank_of[root]}
        yield from grow(start, front, root)


def _cell_factors(h: Face, faces) -> list[list[int]] | None:
    """Class groups of a face that is a product of edges and even cycles, else ``None``."""
    z = h.zero
    classes = bits(z)
    parent = {e: e for e in classes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in faces:
        if f.topes <= h.topes and popcount(f.zero) >= 3 and f.rank == 2:
            zs = bits(f.zero)
            for e in zs[1:]:
                parent[find(e)] = find(zs[0])
    groups: dict = {}
    for e in classes:
        groups.setdefault(find(e), []).append(e)
    factors = sorted(groups.values())
    total = 1
    for grp in factors:
        proj = set(project(h.topes, grp))
        m = len(grp)
        if m == 1:
            if len(proj) != 2:
                return None
        elif len(proj) != 2 * m:
            return None
        total *= len(proj)
    if total != len(h):
        return None
    return factors


def _factor_corners(h: Face, grp: list[int]) -> list[frozenset]:
    """Corners of one factor, as sets of projected words over ``grp``."""
    proj = sorted(set(project(h.topes, grp)))
    m = len(grp)
    if m == 1:
        return [frozenset([p]) for p in proj]
    # the factor is C_{2m}; its corners are the paths on m - 1 vertices
    cyc = ToGraph(proj, m)
    order = [proj[0]]
    prev = None
    while len(order) < len(proj):
        nxt = [u for u in cyc.neighbors(order[-1]) if u != prev and u not in order]
        if not nxt:
            break
        prev = order[-1]
        order.append(nxt[0])
    k = len(order)
    return [frozenset(order[(s + i) % k] for i in range(m - 1)) for s in range(k)]


def _product_candidates(h: Face, factors) -> list[frozenset]:
    per = [(grp, _factor_corners(h, grp)) for grp in factors]
    out = []
    for choice in product(*[c for _, c in per]):
        sel = frozenset(w for w in h.topes
                        if all(project([w], grp)[0] in d for (grp, _), d in zip(per, choice)))
        out.append(sel)
    return out


class CornerSearch(NamedTuple):
    corners: list
    complete: bool


def find_corners(g: ToGraph, budget: int = 8, rules=("lop", "rank2", "hypercellular", "generic"),
                 faces=None, first_only: bool = False) -> CornerSearch:
    """Corners of a COM found by the structural rules and a bounded generic search.

    ``lop``: single vertices in a unique maximal cube.  ``rank2``: paths of m-1
    vertices in a unique maximal C_{2m}.  ``hypercellular``: products of factor
    corners in cells.  ``generic``: connected subsets of private vertices of a
    maximal face with at most ``budget`` vertices.  ``complete`` is False when
    some maximal face had private vertex sets beyond the budget.
    """
    if faces is None:
        faces = enumerate_faces(g)
    if len(g) == 1:
        return CornerSearch([Corner(g.vertex_set, faces[0], frozenset())], True)
    maxf = maximal_faces(g, faces)
    member = _membership(g, maxf)
    found: dict = {}
    cocircuits: dict = {}
    complete = True

    def consider(c):
        c = frozenset(c)
        if c in found:
            return
        if c == g.vertex_set:
            ok, corner = verify_corner(g, c, faces)
        else:
            ok, corner = _verify_in(g, c, faces, maxf, member, cocircuits)
        if ok:
            found[c] = corner

    def candidates(h, private):
        nonlocal complete
        cube = len(h) == 1 << popcount(h.zero)
        if "lop" in rules and cube:
            yield from ([v] for v in sorted(private))
        if "rank2" in rules and h.rank <= 2:
            if h.rank == 1:
                yield from ([v] for v in sorted(private))
            else:
                yield from (c for c in _product_candidates(h, [bits(h.zero)]) if c <= private)
        if "hypercellular" in rules:
            factors = _cell_factors(h, faces)
            if factors is not None:
                yield from (c for c in _product_candidates(h, factors) if c <= private)
        if "generic" in rules:
            adj = {w: set(g.neighbors(w)) for w in h.topes}
            z = h.zero
            sizes_needed = (len(h) - 2) // 2 if h.rank > 1 else 1
            if len(private) > budget and sizes_needed > budget:
                complete = False
            # a corner holds no pair w, w ^ z and no two vertices u, v with
            # u and v ^ z in a common cocircuit of h; both rules pass to supersets
            conflicts = {w: {w ^ z} for w in h.topes}
            if h.rank > 1:
                if h.covector not in cocircuits:
                    cocircuits[h.covector] = _face_cocircuits(h, faces)
                for a in cocircuits[h.covector]:
                    for u in a.topes:
                        conflicts[u].update(v ^ z for v in a.topes)
            yield from _connected_subsets(adj, private, budget, conflicts)

    for h in maxf:
        private = frozenset(w for w in h.topes if len(member[w]) == 1)
        if not private:
            continue
        for c in candidates(h, private):
            consider(c)
            if first_only and found:
                break
        if first_only and found:
            break
    corners = [found[k] for k in sorted(found, key=lambda s: (len(s), sorted(s)))]
    return CornerSearch(corners, complete)


def corners_by_extensions(g: ToGraph, faces=None, first_only: bool = False) -> list[Corner]:
    """All corners, from the general position extensions of every maximal face."""
    from .euclid import general_position_extensions

    if faces is None:
        faces = enumerate_faces(g)
    if len(g) == 1:
        return [Corner(g.vertex_set, faces[0], frozenset())]
    maxf = maximal_faces(g, faces)
    member = _membership(g, maxf)
    cocircuits: dict = {}
    out = {}
    for h in maxf:
        private = frozenset(w for w in h.topes if len(member[w]) == 1)
        if not private:
            continue
        if h.rank == 1:
            for v in sorted(private):
                out[frozenset([v])] = Corner(frozenset([v]), h, h.topes - {v})
            continue
        coords = bits(h.zero)
        back = {p: w for w, p in zip(h.topes, project(h.topes, coords))}
        hg = h.as_graph()
        for ext in general_position_extensions(hg):
            t = frozenset(back[p] for p in ext.h1)
            c = h.topes - t
            if c <= private and c not in out:
                ok, corner = _verify_in(g, c, faces, maxf, member, cocircuits)
                if ok:
                    out[c] = corner
                    if first_only:
                        return [corner]
    return [out[k] for k in sorted(out, key=lambda s: (len(s), sorted(s)))]


# ------------------------------------------------------------ hypercellular

def is_cell(h: Face, faces) -> bool:
    return _cell_factors(h, faces) is not None


def is_hypercellular(g: ToGraph) -> bool:
    """All faces are cells and the three-cell condition holds in every rank k >= 2."""
    if not is_partial_cube(g):
        return False
    faces = enumerate_faces(g)
    if not all(is_cell(f, faces) for f in faces):
        return False
    by_cov = {f.topes: f for f in faces}
    by_rank: dict = {}
    for f in faces:
        by_rank.setdefault(f.rank, []).append(f)
    for k, cells in by_rank.items():
        if k < 2:
            continue
        for x, y, z in combinations(cells, 3):
            pair_ok = True
            for a, b in ((x, y), (x, z), (y, z)):
                inter = by_cov.get(a.topes & b.topes)
                if inter is None or inter.rank != k - 1:
                    pair_ok = False
                    break
            if not pair_ok:
                continue
            triple = by_cov.get(x.topes & y.topes & z.topes)
            if triple is None or triple.rank != k - 2:
                continue
            union = x.topes | y.topes | z.topes
            if not any(union <= f.topes for f in faces):
                return False
    return True


# ------------------------------------------------------------ peeling

STRATEGIES = ("lop", "rank2", "hypercellular", "generic")


def _block_order(g: ToGraph) -> list[frozenset]:
    """Vertex sets of 2-connected blocks, leaves of the block tree first."""
    gr = nx.Graph()
    gr.add_nodes_from(g.words)
    gr.add_edges_from(g.edges())
    blocks = [frozenset(b) for b in nx.biconnected_components(gr)]
    if not blocks:
        return [g.vertex_set]
    cut = set(nx.articulation_points(gr))

    def leafness(b):
        return len(b & cut)

    return sorted(blocks, key=lambda b: (leafness(b), len(b), sorted(b)))


def _next_corner(g: ToGraph, strategy: str, budget: int):
    faces = enumerate_faces(g)
    if len(g) == 1:
        return Corner(g.vertex_set, faces[0], frozenset())
    if strategy == "lop":
        res = find_corners(g, budget, rules=("lop",), faces=faces, first_only=True)
        return res.corners[0] if res.corners else None
    if strategy == "rank2":
        res = find_corners(g, budget, rules=("rank2",), faces=faces)
        if not res.corners:
            return None
        for block in _block_order(g):
            for c in res.corners:
                if c.vertices <= block:
                    return c
        return res.corners[0]
    if strategy == "hypercellular":
        res = find_corners(g, budget, rules=("hypercellular",), faces=faces, first_only=True)
        return res.corners[0] if res.corners else None
    if strategy == "generic":
        res = find_corners(g, budget, rules=("lop", "rank2", "hypercellular"), faces=faces, first_only=True)
        if res.corners:
            return res.corners[0]
        found = corners_by_extensions(g, faces, first_only=True)
        return found[0] if found else None
    raise ValueError(f"unknown strategy {strategy!r}")


def corner_peeling(g: ToGraph, strategy: str = "generic", budget: int = 8) -> PeelingSequence:
    """Peel corners until nothing is left; raises PeelingError with the stuck residual."""
    if strategy == "rank2" and rank(g) > 2:
        raise ValueError("rank2 strategy needs rank at most 2")
    if strategy == "hypercellular" and not is_hypercellular(g):
        raise ValueError("hypercellular strategy needs a hypercellular graph")
    if strategy == "lop" and "LOP" not in classify(g):
        raise ValueError("lop strategy needs a LOP")
    seq = PeelingSequence(g)
    current = g
    while len(current):
        corner = _next_corner(current, strategy, budget)
        if corner is None:
            raise PeelingError("no corner found", current, seq.steps)
        seq.steps.append(corner)
        current = restrict(current, current.vertex_set - corner.vertices)
    return seq


def corner_descriptor(c: Corner) -> str:
    """Covector-style summary: host face covector and the corner's words."""
    from .pcube import word_to_str

    n = c.host_face.covector.n if c.host_face is not None else 0
    words = ",".join(word_to_str(w, n) for w in sorted(c.vertices))
    host = str(c.host_face.covector) if c.host_face is not None else "-"
    return f"{host}\t{words}"

