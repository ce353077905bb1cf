"""Mutations of uniform OMs and mutation graphs at three levels of equivalence."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import networkx as nx

from .canon import LEVELS, apply_automorphism, canonical_key
from .faces import classify
from .pcube import ToGraph, full_mask, rank

LABELED_GUARD = 5
LEVEL_GUARD = 7


class NotUOMError(ValueError):
    pass


def mutation_at(g: ToGraph, v: int, r: int | None = None):
    """The mutation at a simplicial vertex v, or ``None`` if v is not simplicial.

    v sits in a convex cube minus one vertex spanned by its r neighbours; v and
    -v are replaced by the missing vertex and its antipode.
    """
    if r is None:
        r = rank(g)
    nbr = g.neighbor_mask(v)
    if bin(nbr).count("1") != r:
        return None
    w = v ^ nbr
    if w in g.vertex_set:
        return None
    full = full_mask(g.n)
    vs = set(g.words)
    vs -= {v, v ^ full}
    vs |= {w, w ^ full}
    return ToGraph(vs, g.n)


def mutations_of(g: ToGraph, check: bool = True) -> list[tuple[int, ToGraph]]:
    """(v, mutated graph) for every simplicial vertex v of a UOM."""
    if check and "UOM" not in classify(g):
        raise NotUOMError("mutations are defined on uniform OMs")
    r = rank(g)
    out = []
    for v in g.words:
        h = mutation_at(g, v, r)
        if h is not None:
            out.append((v, h))
    return out


@dataclass
class MutationGraph:
    level: str
    n: int
    r: int
    nodes: list = field(default_factory=list)  # CanonicalKey, sorted
    edges: set = field(default_factory=set)  # (key bytes, key bytes), sorted pair, loops allowed

    def to_networkx(self) -> nx.Graph:
        gr = nx.Graph()
        gr.add_nodes_from(k.key for k in self.nodes)
        gr.add_edges_from(self.edges)
        return gr

    def edge_list(self) -> list[tuple[str, str]]:
        return sorted((a.hex(), b.hex()) for a, b in self.edges)

    def to_dot(self) -> str:
        names = {k.key: f"c{i}" for i, k in enumerate(self.nodes)}
        lines = [f"graph mutation_{self.level}_{self.n}_{self.r} {{"]
        for k in self.nodes:
            lines.append(f'  {names[k.key]} [label="{len(k.words)}"];')
        for a, b in sorted(self.edges):
            lines.append(f"  {names[a]} -- {names[b]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _orbit_keys(g: ToGraph, level: str) -> set:
    """Keys at ``level`` of every member of the isomorphism class of g."""
    out = set()
    for perm in permutations(range(g.n)):
        moved = ToGraph(apply_automorphism(g.words, g.n, 0, perm), g.n)
        if level == "reorientation":
            out.add(canonical_key(moved, "reorientation"))
        else:
            for flip in range(1 << g.n):
                out.add(canonical_key(ToGraph((w ^ flip for w in moved.words), g.n), "labeled"))
    return out


def build_mutation_graph(n: int, r: int, level: str = "isomorphism", classes=None,
                         threads: int = 1, catalog=None, resume: bool = False) -> MutationGraph:
    """Mutation graph of UOMs of rank r on n elements at the given level."""
    from .enumerate import GuardError, uom_classes

    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    if level == "labeled" and n > LABELED_GUARD:
        raise GuardError(f"labeled mutation graphs are guarded at n <= {LABELED_GUARD}")
    if n > LEVEL_GUARD:
        raise GuardError(f"mutation graphs are guarded at n <= {LEVEL_GUARD}")
    if classes is None:
        classes = uom_classes(n, r, threads=threads, catalog=catalog, resume=resume)
    if level == "isomorphism":
        keys = {canonical_key(g, level) for g in classes}
    else:
        keys = set()
        for g in classes:
            keys |= _orbit_keys(g, level)
    nodes = sorted(keys, key=lambda k: k.key)
    known = {k.key for k in nodes}
    edges = set()
    for k in nodes:
        for _, h in mutations_of(k.graph(), check=False):
            hk = canonical_key(h, level).key
            if hk not in known:
                raise RuntimeError("mutation left the catalogued classes")
            a, b = sorted((k.key, hk))
            edges.add((a, b))
    return MutationGraph(level, n, r, nodes, edges)


def is_connected(mg: MutationGraph):
    """(connected?, components as sorted lists of key hex strings)."""
    gr = mg.to_networkx()
    if gr.number_of_nodes() == 0:
        return True, []
    comps = sorted(sorted(k.hex() for k in comp) for comp in nx.connected_components(gr))
    return len(comps) == 1, comps


def homomorphism_check(fine: MutationGraph, coarse: MutationGraph) -> bool:
    """Whether coarsening classes maps every edge of ``fine`` to an edge or a loop of ``coarse``."""
    order = {lvl: i for i, lvl in enumerate(LEVELS)}
    if (fine.n, fine.r) != (coarse.n, coarse.r):
        raise ValueError("different parameters")
    if order[fine.level] > order[coarse.level]:
        raise ValueError("levels must go from finer to coarser")
    image = {}
    for k in fine.nodes:
        image[k.key] = canonical_key(k.graph(), coarse.level).key
    coarse_nodes = {k.key for k in coarse.nodes}
    if not set(image.values()) <= coarse_nodes:
        return False
    for a, b in fine.edges:
        x, y = sorted((image[a], image[b]))
        if x != y and (x, y) not in coarse.edges:
            return False
    return True
