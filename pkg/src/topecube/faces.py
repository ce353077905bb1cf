"""Antipodal subgraphs (faces), gates and the graph classification of COMs."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from .pcube import (
    ToGraph,
    bits,
    double,
    full_mask,
    is_antipodal,
    is_partial_cube,
    popcount,
    project,
    rank,
    simplify,
)


class CoVector(NamedTuple):
    """Sign vector as three disjoint masks; ``zero`` is the set of crossing classes."""

    plus: int
    minus: int
    zero: int
    n: int

    def __str__(self) -> str:
        out = []
        for e in range(self.n):
            b = 1 << e
            out.append("+" if self.plus & b else "-" if self.minus & b else "0")
        return "".join(out)

    @classmethod
    def parse(cls, s: str) -> "CoVector":
        p = m = z = 0
        for i, ch in enumerate(s):
            if ch == "+":
                p |= 1 << i
            elif ch == "-":
                m |= 1 << i
            elif ch == "0":
                z |= 1 << i
            else:
                raise ValueError(f"bad covector character {ch!r}")
        return cls(p, m, z, len(s))

    def __neg__(self) -> "CoVector":
        return CoVector(self.minus, self.plus, self.zero, self.n)

    @property
    def support(self) -> int:
        return self.plus | self.minus


def compose(x: CoVector, y: CoVector) -> CoVector:
    if x.n != y.n:
        raise ValueError("width mismatch")
    plus = x.plus | (y.plus & x.zero)
    minus = x.minus | (y.minus & x.zero)
    return CoVector(plus, minus, full_mask(x.n) & ~(plus | minus), x.n)


def separator(x: CoVector, y: CoVector) -> int:
    return (x.plus & y.minus) | (x.minus & y.plus)


def covector_of(words, n: int) -> CoVector:
    """X(H) of a vertex set: + / - where all of H agrees, 0 elsewhere."""
    words = list(words)
    every = full_mask(n)
    some = 0
    for w in words:
        every &= w
        some |= w
    plus = every
    minus = full_mask(n) & ~some
    return CoVector(plus, minus, full_mask(n) & ~(plus | minus), n)


def tope_covector(w: int, n: int) -> CoVector:
    return CoVector(w, full_mask(n) & ~w, 0, n)


@dataclass(frozen=True, eq=False)
class Face:
    """An antipodal subgraph of ``host`` together with its covector."""

    covector: CoVector
    topes: frozenset
    host: ToGraph = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, Face) and self.covector == other.covector and self.host == other.host

    def __hash__(self):
        return hash(self.covector)

    def __len__(self):
        return len(self.topes)

    def __str__(self):
        return str(self.covector)

    @property
    def zero(self) -> int:
        return self.covector.zero

    @cached_property
    def rank(self) -> int:
        return rank(self.as_graph())

    def as_graph(self) -> ToGraph:
        """The face as a simple partial cube over its crossing classes."""
        coords = bits(self.zero)
        return ToGraph(project(self.topes, coords), len(coords))

    def antipode_of(self, w: int) -> int:
        return w ^ self.zero

    def sorted_topes(self) -> list[int]:
        return sorted(self.topes)


def enumerate_faces(g: ToGraph) -> list[Face]:
    """All antipodal subgraphs of a partial cube, ordered by zero set then covector.

    For each zero set Z the vertices are grouped by their values off Z; a group
    is a face iff it is closed under flipping all of Z.
    """
    out = []
    n = g.n
    full = full_mask(n)
    support = g.support
    zs = [z for z in range(1 << n) if z & ~support == 0]
    zs.sort(key=lambda z: (popcount(z), z))
    for z in zs:
        keep = full & ~z
        blocks: dict[int, list[int]] = {}
        for w in g.words:
            blocks.setdefault(w & keep, []).append(w)
        for fixed in sorted(blocks):
            block = blocks[fixed]
            if len(block) < (2 if z else 1):
                continue
            bset = frozenset(block)
            if all(w ^ z in bset for w in block):
                cov = CoVector(fixed, keep & ~fixed, z, n)
                out.append(Face(cov, bset, g))
    return out


def face_of(g: ToGraph, cov: CoVector):
    """The face of ``g`` named by ``cov``, or ``None`` if ``cov`` names no face."""
    keep = full_mask(g.n) & ~cov.zero
    block = frozenset(w for w in g.words if w & keep == cov.plus)
    if not block:
        return None
    if any(w ^ cov.zero not in block for w in block):
        return None
    if covector_of(block, g.n) != cov:
        return None
    return Face(cov, block, g)


def gate_word(face: Face, v: int) -> int:
    """The word realizing X(face) o X(v)."""
    return (v & face.zero) | face.covector.plus


def gate_map(g: ToGraph, face: Face):
    """v -> gate of v in ``face`` if the face is gated, else ``None``."""
    vs = g.vertex_set
    out = {}
    for v in g.words:
        u = gate_word(face, v)
        if u not in vs:
            return None
        out[v] = u
    return out


def is_gated(g: ToGraph, face: Face) -> bool:
    return gate_map(g, face) is not None


def gate_by_search(g: ToGraph, face: Face, v: int):
    """Brute-force gate: a vertex of the face lying on a geodesic from v to every face vertex."""
    from .pcube import distance

    for u in sorted(face.topes):
        duv = distance(g, v, u)
        if all(duv + distance(g, u, x) == distance(g, v, x) for x in face.topes):
            return u
    return None


def antipodes_of_affine(g: ToGraph) -> frozenset:
    """Vertices u whose full flip -u is present; then [u, -u] is all of g."""
    full = full_mask(g.n)
    vs = g.vertex_set
    return frozenset(w for w in g.words if w ^ full in vs)


def is_affine(g: ToGraph) -> bool:
    """Whether g is a halfspace of an antipodal partial cube (checked on the double)."""
    if not antipodes_of_affine(g):
        return False
    return is_partial_cube(double(g))


class Classification(NamedTuple):
    labels: frozenset
    faces: tuple

    def __contains__(self, label):
        return label in self.labels


LABELS = ("not-partial-cube", "partial-cube", "COM", "OM", "AOM", "LOP", "UOM", "affine")


def _all_gated(g: ToGraph, faces) -> bool:
    # vectorized is_gated: every composed word X(face) o X(v) must be a vertex
    present = np.zeros(1 << g.n, dtype=bool)
    words = np.fromiter(g.words, dtype=np.int64, count=len(g.words))
    present[words] = True
    for f in faces:
        if not present[(words & f.zero) | f.covector.plus].all():
            return False
    return True


def classify(g: ToGraph) -> frozenset:
    """Multi-label classification: COM, OM, LOP, UOM, affine, AOM on top of partial-cube.

    ``g`` is simplified first; all tests are the graph characterizations:
    COM = all antipodal subgraphs gated, OM = antipodal COM, LOP = all of them
    cubes, UOM = antipodal with all proper ones cubes, affine = the antipodal
    double is a partial cube, AOM = the double is an OM.
    """
    return _classify_cached(g.n, tuple(g.words))


@lru_cache(maxsize=4096)
def _classify_cached(n: int, words: tuple) -> frozenset:
    return classify_full(ToGraph(words, n)).labels


def classify_full(g: ToGraph) -> Classification:
    if not g.words or not is_partial_cube(g):
        return Classification(frozenset({"not-partial-cube"}), ())
    g, _ = simplify(g)
    labels = {"partial-cube"}
    faces = enumerate_faces(g)
    com = _all_gated(g, faces)
    antipodal = is_antipodal(g)
    if com:
        labels.add("COM")
        if antipodal:
            labels.add("OM")
    if all(len(f.topes) == 1 << popcount(f.zero) for f in faces):
        labels.add("LOP")
    if antipodal:
        full_zero = g.support
        if all(len(f.topes) == 1 << popcount(f.zero) for f in faces if f.zero != full_zero):
            labels.add("UOM")
    if antipodes_of_affine(g):
        d = double(g)
        if is_partial_cube(d):
            labels.add("affine")
            dfaces = enumerate_faces(d)
            if _all_gated(d, dfaces):
                labels.add("AOM")
    return Classification(frozenset(labels), tuple(faces))


def is_com(g: ToGraph) -> bool:
    if not is_partial_cube(g):
        return False
    return _all_gated(g, enumerate_faces(g))


def is_om(g: ToGraph) -> bool:
    return is_antipodal(g) and is_com(g)


def check_SE(g: ToGraph, x: Face, y: Face, e: int, faces=None):
    """A face Z witnessing strong elimination for x, y at e, or ``None`` on failure."""
    bit = 1 << e
    if not separator(x.covector, y.covector) & bit:
        raise ValueError(f"coordinate {e} does not separate the two faces")
    xy = compose(x.covector, y.covector)
    sep = separator(x.covector, y.covector)
    free = full_mask(g.n) & ~sep  # coordinates where Z must agree with x o y
    if faces is None:
        faces = enumerate_faces(g)
    for z in faces:
        zc = z.covector
        if not zc.zero & bit:
            continue
        if (zc.plus & free) == (xy.plus & free) and (zc.minus & free) == (xy.minus & free):
            return z
    return None


def check_FS(faces) -> tuple | None:
    """First pair (X, Y) with X o -Y not a face, or ``None``."""
    covs = {f.covector for f in faces}
    for x in faces:
        for y in faces:
            if compose(x.covector, -y.covector) not in covs:
                return (x, y)
    return None


def se_audit(g: ToGraph, faces=None):
    """First failing (x, y, e) of strong elimination over all face pairs, or ``None``.

    A witness Z for (x, y, e) only has to match x o y off the separator, so
    the faces crossed by e are indexed once per separator by their signs there.
    """
    if faces is None:
        faces = enumerate_faces(g)
    full = full_mask(g.n)
    index: dict = {}

    def witnesses(e: int, sep: int) -> set:
        key = (e, sep)
        if key not in index:
            free = full & ~sep
            index[key] = {(f.covector.plus & free, f.covector.minus & free)
                          for f in faces if f.covector.zero >> e & 1}
        return index[key]

    for x in faces:
        for y in faces:
            sep = separator(x.covector, y.covector)
            if not sep:
                continue
            xy = compose(x.covector, y.covector)
            free = full & ~sep
            target = (xy.plus & free, xy.minus & free)
            for e in bits(sep):
                if target not in witnesses(e, sep):
                    return (x, y, e)
    return None


def face_poset_leq(f1: Face, f2: Face) -> bool:
    """Reverse inclusion order: f1 <= f2 iff topes(f2) is contained in topes(f1)."""
    if f1.host != f2.host:
        raise ValueError("faces of different hosts")
    return f2.topes <= f1.topes


def maximal_faces(faces) -> list[Face]:
    out = []
    for f in faces:
        if not any(f is not h and f.topes < h.topes for h in faces):
            out.append(f)
    return out


@dataclass
class ZoneGraph:
    classes: int
    faces: list
    edges: list
    graph: ToGraph
    vertex_of: dict


def zone_graph(g: ToGraph, classes: int, faces=None) -> ZoneGraph:
    """Zone graph for the class set ``classes`` (a coordinate mask).

    Vertices are the minimal faces crossed by every class in the set; two are
    joined when they lie in a common face of one rank more.  ``graph`` is the
    simple tope graph obtained from the covectors off the class set, and
    ``vertex_of`` maps each zone face to its word there.
    """
    if faces is None:
        faces = enumerate_faces(g)
    if classes == 0:
        simple, mapping = simplify(g)
        single = {f.covector: f for f in faces if f.zero == 0}
        verts = [single[CoVector(w, full_mask(g.n) & ~w, 0, g.n)] for w in g.words]
        edges = [(a, b) for i, a in enumerate(verts) for b in verts[i + 1:]
                 if popcount(next(iter(a.topes)) ^ next(iter(b.topes))) == 1]
        return ZoneGraph(0, verts, edges, simple, {f: mapping[next(iter(f.topes))] for f in verts})
    crossed = [f for f in faces if f.zero & classes == classes]
    if not crossed:
        raise ValueError("no face is crossed by all the given classes")
    minimal = [f for f in crossed if not any(h.topes < f.topes for h in crossed)]
    ranks = {f.rank for f in minimal}
    r0 = min(ranks)
    edges = []
    for i, a in enumerate(minimal):
        for b in minimal[i + 1:]:
            union = a.topes | b.topes
            if any(h.rank == r0 + 1 and union <= h.topes for h in crossed):
                edges.append((a, b))
    n = g.n
    rest = full_mask(n) & ~classes
    always_zero = rest
    for f in minimal:
        always_zero &= f.zero
    coords = [e for e in bits(rest) if not always_zero >> e & 1]
    words = {}
    for f in minimal:
        if any(f.zero >> e & 1 for e in coords):
            raise ValueError("zone faces do not share a common zero set")
        w = 0
        for i, e in enumerate(coords):
            if f.covector.plus >> e & 1:
                w |= 1 << i
        words[f] = w
    raw = ToGraph(words.values(), len(coords))
    simple, mapping = simplify(raw)
    return ZoneGraph(classes, minimal, edges, simple, {f: mapping[w] for f, w in words.items()})
