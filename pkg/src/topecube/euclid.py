"""Cocircuit graphs, lines and their orientations, Euclidean and Mandel checks."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

import networkx as nx

from .faces import Face, classify, covector_of, enumerate_faces, face_of
from .pcube import ToGraph, expand, full_mask, is_antipodal, is_isometric_set, rank, restrict, simplify


class PurityError(ValueError):
    """The COM is not pure: maximal faces of different ranks or G* disconnected."""


class Line(NamedTuple):
    nodes: tuple  # node indices in path order
    classes: int  # the class set F crossing every consecutive intersection
    closed: bool


@dataclass
class CocircuitGraph:
    host: ToGraph
    rank: int
    antipodal: bool
    nodes: list
    edges: list  # (i, j) with i < j
    edge_zero: dict = field(default_factory=dict)  # (i, j) -> zero set of the intersection
    lines: list = field(default_factory=list)

    def to_networkx(self) -> nx.Graph:
        gr = nx.Graph()
        gr.add_nodes_from(range(len(self.nodes)))
        gr.add_edges_from(self.edges)
        return gr

    def groups(self) -> dict:
        """Edges grouped by the zero set of the intersection."""
        out: dict = {}
        for ed in self.edges:
            out.setdefault(self.edge_zero[ed], []).append(ed)
        return out


def _intersection_face(g: ToGraph, a: Face, b: Face):
    common = a.topes & b.topes
    if not common:
        return None
    return face_of(g, covector_of(common, g.n))


def cocircuit_graph(g: ToGraph, faces=None, check_pure: bool = True) -> CocircuitGraph:
    """G* of an OM (nodes: faces of rank r-1) or of a pure non-antipodal COM (nodes: maximal faces)."""
    if faces is None:
        faces = enumerate_faces(g)
    r = rank(g)
    antipodal = is_antipodal(g)
    if antipodal:
        node_rank = r - 1
        nodes = [f for f in faces if f.rank == node_rank]
    else:
        node_rank = r
        maximal = [f for f in faces if not any(f.topes < h.topes for h in faces)]
        if check_pure and any(f.rank != r for f in maximal):
            raise PurityError("maximal faces of different ranks")
        nodes = [f for f in maximal if f.rank == r]
    edges = []
    edge_zero = {}
    for i, a in enumerate(nodes):
        for j in range(i + 1, len(nodes)):
            x = _intersection_face(g, a, nodes[j])
            if x is not None and x.rank == node_rank - 1:
                edges.append((i, j))
                edge_zero[(i, j)] = x.zero
    cg = CocircuitGraph(g, r, antipodal, nodes, edges, edge_zero)
    if check_pure and not antipodal and len(nodes) > 1:
        if not nx.is_connected(cg.to_networkx()):
            raise PurityError("cocircuit graph is disconnected")
    cg.lines = _decompose_lines(cg)
    return cg


def _decompose_lines(cg: CocircuitGraph) -> list[Line]:
    """Chain G*-edges through each node by pairing antipodal intersections."""
    lines = []
    nodes = cg.nodes
    host = cg.host
    inter = {}
    for (i, j) in cg.edges:
        inter[(i, j)] = nodes[i].topes & nodes[j].topes
    incident: dict = {}
    for ed in cg.edges:
        incident.setdefault(ed[0], []).append(ed)
        incident.setdefault(ed[1], []).append(ed)

    def partner(node, ed):
        """The edge continuing the line through ``node`` after ``ed``."""
        a = nodes[node]
        flipped = frozenset(w ^ a.zero for w in inter[ed])
        for other in incident[node]:
            if other != ed and inter[other] == flipped:
                return other
        return None

    used = set()
    for start in cg.edges:
        if start in used:
            continue
        # walk backwards to an end (or around a cycle)
        ed, node = start, start[0]
        seen = {start}
        closed = False
        while True:
            nxt = partner(node, ed)
            if nxt is None:
                break
            if nxt == start:
                closed = True
                break
            if nxt in seen:
                break
            seen.add(nxt)
            node = nxt[0] if nxt[1] == node else nxt[1]
            ed = nxt
        # ed is the first edge, node its outer endpoint; walk forward
        first_node = node if not closed else start[0]
        first_edge = ed if not closed else start
        seq = [first_node]
        cur_node, cur_edge = first_node, first_edge
        path_edges = []
        while True:
            used.add(cur_edge)
            path_edges.append(cur_edge)
            other = cur_edge[0] if cur_edge[1] == cur_node else cur_edge[1]
            if closed and other == first_node:
                break
            seq.append(other)
            nxt = partner(other, cur_edge)
            if nxt is None or nxt in used:
                break
            cur_node, cur_edge = other, nxt
        lines.append(Line(tuple(seq), cg.edge_zero[start], closed))
    _ = host
    return lines


def line_graph_of_tree_check(cg: CocircuitGraph) -> dict:
    """For each class set F: whether the F-crossed nodes induce the line graph of a tree."""
    out = {}
    gr = cg.to_networkx()
    for zf in cg.groups():
        sel = [i for i, a in enumerate(cg.nodes) if a.zero & zf == zf]
        sub = gr.subgraph(sel)
        if sub.number_of_nodes() == 1:
            out[zf] = True
            continue
        try:
            root = nx.inverse_line_graph(sub)
            out[zf] = nx.is_tree(root)
        except nx.NetworkXError:
            out[zf] = False
    return out


# ------------------------------------------------------------ orientation

UNDIRECTED, FORWARD, BACKWARD = 0, 1, 2


@dataclass
class MixedOrientation:
    """Per-edge state relative to the stored (i, j) order of ``edges``."""

    element: int
    n_nodes: int
    edges: list
    state: dict

    def arcs(self) -> list[tuple[int, int]]:
        out = []
        for (i, j) in self.edges:
            s = self.state[(i, j)]
            if s == FORWARD:
                out.append((i, j))
            elif s == BACKWARD:
                out.append((j, i))
        return out

    def undirected(self) -> list[tuple[int, int]]:
        return [ed for ed in self.edges if self.state[ed] == UNDIRECTED]


def _side(face: Face, e: int) -> int:
    """+1, -1, or 0 if the face is crossed by class e."""
    b = 1 << e
    if face.covector.plus & b:
        return 1
    if face.covector.minus & b:
        return -1
    return 0


def orient(cg: CocircuitGraph, e: int) -> MixedOrientation:
    """Orientation of G* with respect to class e.

    Edges are grouped by the class set F crossing the intersection.  In a group
    with a node crossed by e (and e not in F), edges on the minus side point
    towards that node and edges on the plus side away from it; ties in distance
    and groups without crossed node stay undirected.
    """
    if not 0 <= e < cg.host.n:
        raise ValueError(f"invalid class {e}")
    state = {ed: UNDIRECTED for ed in cg.edges}
    for zf, group in cg.groups().items():
        if zf >> e & 1:
            continue
        adj: dict = {}
        for i, j in group:
            adj.setdefault(i, []).append(j)
            adj.setdefault(j, []).append(i)
        crossed = [i for i in adj if _side(cg.nodes[i], e) == 0]
        if not crossed:
            continue
        dist = {c: 0 for c in crossed}
        q = deque(crossed)
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    q.append(y)
        for i, j in group:
            di, dj = dist.get(i), dist.get(j)
            if di is None or dj is None or di == dj:
                continue
            side = _side(cg.nodes[i], e) or _side(cg.nodes[j], e)
            if side < 0:
                # towards the crossed node
                state[(i, j)] = FORWARD if dj < di else BACKWARD
            else:
                state[(i, j)] = FORWARD if di < dj else BACKWARD
    return MixedOrientation(e, len(cg.nodes), list(cg.edges), state)


def _digraph(mo: MixedOrientation) -> nx.DiGraph:
    d = nx.DiGraph()
    d.add_nodes_from(range(mo.n_nodes))
    d.add_edges_from(mo.arcs())
    for i, j in mo.undirected():
        d.add_edge(i, j)
        d.add_edge(j, i)
    return d


def acyclicity_witness(mo: MixedOrientation):
    """A closed walk through a directed edge (list of nodes), or ``None`` if strictly acyclic."""
    d = _digraph(mo)
    comp = {}
    for k, scc in enumerate(nx.strongly_connected_components(d)):
        for v in scc:
            comp[v] = k
    for i, j in mo.arcs():
        if comp[i] == comp[j]:
            back = nx.shortest_path(d, j, i)
            return [i] + back
    return None


def is_strictly_acyclic(mo: MixedOrientation) -> bool:
    return acyclicity_witness(mo) is None


def has_directed_cycle_bruteforce(mo: MixedOrientation) -> bool:
    """Exhaustive search over simple cycles of the doubled digraph (small graphs only)."""
    arcs = set(mo.arcs())
    d = _digraph(mo)
    for cyc in nx.simple_cycles(d):
        k = len(cyc)
        for t in range(k):
            if (cyc[t], cyc[(t + 1) % k]) in arcs:
                return True
    # two-cycles made of an arc and the same undirected edge cannot occur
    return False


# ------------------------------------------------------------ Euclidean

def _halfspace(g: ToGraph, e: int, positive: bool) -> ToGraph:
    b = 1 << e
    side = [w for w in g.words if bool(w & b) == positive]
    return simplify(ToGraph(side, g.n))[0]


def euclidean_witness(g: ToGraph):
    """(class, cycle) where the orientation of G* is not strictly acyclic, or ``None``."""
    cg = cocircuit_graph(g)
    for e in range(g.n):
        w = acyclicity_witness(orient(cg, e))
        if w is not None:
            return (e, w)
    return None


def is_euclidean_aom(g: ToGraph) -> bool:
    g = simplify(g)[0]
    labels = classify(g)
    if "AOM" not in labels or is_antipodal(g):
        raise ValueError("expected a non-antipodal AOM")
    return euclidean_witness(g) is None


def is_euclidean_om(g: ToGraph) -> bool:
    g = simplify(g)[0]
    if "OM" not in classify(g):
        raise ValueError("expected an OM")
    for e in range(g.n):
        for positive in (True, False):
            if euclidean_witness(_halfspace(g, e, positive)) is not None:
                return False
    return True


# ------------------------------------------------------------ general position extensions

@dataclass
class Extension:
    sigma: dict  # cocircuit covector -> +1 / -1
    h1: frozenset
    h2: frozenset
    graph: ToGraph


def _om_lines(cg: CocircuitGraph) -> list[list[int]]:
    return [list(line.nodes) for line in cg.lines if line.closed]


def general_position_extensions(g: ToGraph, limit: int | None = None, validate: bool = True,
                                stats: dict | None = None) -> Iterator[Extension]:
    """Expansions (H1, -H1) of an OM in general position, each yielding an OM.

    A sign is chosen for every antipodal pair of cocircuits; H1 is the union of
    the positive ones.  Signs are assigned by backtracking, pruning any partial
    assignment with more than two sign changes around some line of G*.  The
    survivors are checked directly: general position, isometric sides and the
    expanded graph being an OM.  ``stats['incomplete']`` records truncation.
    """
    cg = cocircuit_graph(g)
    nodes = cg.nodes
    full = full_mask(g.n)
    index_of = {a.covector: i for i, a in enumerate(nodes)}
    anti = [index_of[-a.covector] for a in nodes]
    reps = [i for i in range(len(nodes)) if i < anti[i]]
    lines = _om_lines(cg)
    node_lines: dict = {}
    for k, ln in enumerate(lines):
        for i in ln:
            node_lines.setdefault(i, []).append(k)
    sigma = [0] * len(nodes)
    if stats is None:
        stats = {}
    stats["incomplete"] = False
    stats["candidates"] = 0

    def changes_ok(k):
        seq = [sigma[i] for i in lines[k] if sigma[i]]
        if len(seq) < 2:
            return True
        c = sum(1 for t in range(len(seq)) if seq[t] != seq[t - 1])
        return c <= 2

    def build():
        h1 = frozenset().union(*(nodes[i].topes for i in range(len(nodes)) if sigma[i] > 0))
        h2 = frozenset(w ^ full for w in h1)
        return h1, h2

    def valid(h1, h2):
        if h1 | h2 != g.vertex_set:
            return False
        for i, a in enumerate(nodes):
            inside = h1 if sigma[i] > 0 else h2
            outside = h2 if sigma[i] > 0 else h1
            if not a.topes <= inside or a.topes <= outside:
                return False
        if not is_isometric_set(h1, g.n):
            return False
        return True

    def dfs(t):
        if limit is not None and stats["candidates"] >= limit:
            stats["incomplete"] = True
            return
        if t == len(reps):
            stats["candidates"] += 1
            h1, h2 = build()
            if not valid(h1, h2):
                return
            h = expand(g, h1, h2, check=False)
            if validate and "OM" not in classify(h):
                return
            yield Extension({nodes[i].covector: sigma[i] for i in range(len(nodes))}, h1, h2, h)
            return
        i = reps[t]
        for s in (1, -1):
            sigma[i], sigma[anti[i]] = s, -s
            if all(changes_ok(k) for k in node_lines.get(i, []) + node_lines.get(anti[i], [])):
                yield from dfs(t + 1)
            sigma[i] = sigma[anti[i]] = 0

    yield from dfs(0)


class MandelResult(NamedTuple):
    verdict: str  # "true", "false-at-limit", "false-exhausted"
    extension: Extension | None

    def __bool__(self):
        return self.verdict == "true"


def is_mandel(g: ToGraph, limit: int = 1 << 20) -> MandelResult:
    """Search general position extensions for one whose sides are Euclidean AOMs."""
    g = simplify(g)[0]
    if "OM" not in classify(g):
        raise ValueError("expected an OM")
    stats: dict = {}
    for ext in general_position_extensions(g, limit=limit, stats=stats):
        side = simplify(restrict(g, ext.h1))[0]
        # the other side is the antipodal image, so one check suffices
        if euclidean_witness(side) is None:
            return MandelResult("true", ext)
    return MandelResult("false-at-limit" if stats.get("incomplete") else "false-exhausted", None)


def cocircuit_graph_json(cg: CocircuitGraph) -> dict:
    """Schema: nodes (covectors), edges (index pairs), lines, per-class orientations."""
    out = {
        "schema": "topecube.cocircuit-graph/1",
        "n": cg.host.n,
        "rank": cg.rank,
        "antipodal": cg.antipodal,
        "nodes": [str(a.covector) for a in cg.nodes],
        "edges": [list(ed) for ed in cg.edges],
        "lines": [{"nodes": list(ln.nodes), "closed": ln.closed} for ln in cg.lines],
        "orientations": {},
    }
    if not cg.antipodal:
        for e in range(cg.host.n):
            mo = orient(cg, e)
            out["orientations"][str(e)] = {
                "arcs": [list(a) for a in mo.arcs()],
                "strictly_acyclic": is_strictly_acyclic(mo),
            }
    return out
