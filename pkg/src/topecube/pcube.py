"""Sign words, tope graphs and the metric toolkit of partial cubes.

A vertex of the hypercube Q_n is stored as a Python int whose bit ``e`` is the
side of the halfspace E_e (set means ``+``).  Coordinates are 0-based.
A :class:`ToGraph` is an immutable, sorted, duplicate free tuple of such words;
adjacency is implicit (Hamming distance one).
"""
from __future__ import annotations

from collections import deque
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple

MAX_WIDTH = 32


class CapacityError(ValueError):
    """Raised when a word width exceeds what a single machine word can hold."""


def popcount(x: int) -> int:
    return x.bit_count()


def bits(mask: int) -> list[int]:
    """Coordinates set in ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def antipode(w: int, n: int) -> int:
    return w ^ full_mask(n)


def word_to_str(w: int, n: int) -> str:
    return "".join("+" if (w >> i) & 1 else "-" for i in range(n))


def str_to_word(s: str) -> int:
    """Parse a word over ``+-`` (or ``10``); character ``i`` is coordinate ``i``."""
    w = 0
    for i, ch in enumerate(s):
        if ch in "+1":
            w |= 1 << i
        elif ch not in "-0":
            raise ValueError(f"bad sign character {ch!r} in {s!r}")
    return w


class ToGraph:
    """A finite set of sign words of fixed width, read as an induced subgraph of Q_n."""

    def __init__(self, words: Iterable[int], n: int):
        if n > MAX_WIDTH:
            raise CapacityError(f"width {n} exceeds {MAX_WIDTH}")
        if n < 0:
            raise ValueError("negative width")
        ws = tuple(sorted(set(words)))
        if ws and (ws[0] < 0 or ws[-1] >> n):
            raise ValueError("word outside the declared width")
        self.n = n
        self.words = ws

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> "ToGraph":
        strings = list(strings)
        if not strings:
            raise ValueError("empty word list")
        n = len(strings[0])
        if any(len(s) != n for s in strings):
            raise ValueError("words of unequal length")
        return cls((str_to_word(s) for s in strings), n)

    def __repr__(self) -> str:
        shown = ",".join(word_to_str(w, self.n) for w in self.words[:8])
        more = "..." if len(self.words) > 8 else ""
        return f"ToGraph(n={self.n}, |V|={len(self.words)}, {{{shown}{more}}})"

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, w) -> bool:
        return w in self.vertex_set

    def __eq__(self, other) -> bool:
        return isinstance(other, ToGraph) and self.n == other.n and self.words == other.words

    def __hash__(self) -> int:
        return hash((self.n, self.words))

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.words)

    @cached_property
    def index(self) -> dict:
        return {w: i for i, w in enumerate(self.words)}

    def to_strings(self) -> list[str]:
        return [word_to_str(w, self.n) for w in self.words]

    def neighbor_mask(self, w: int) -> int:
        """Coordinates ``e`` such that flipping ``e`` in ``w`` stays in the graph."""
        vs = self.vertex_set
        m = 0
        for e in range(self.n):
            if w ^ (1 << e) in vs:
                m |= 1 << e
        return m

    @cached_property
    def _nbr_masks(self) -> tuple:
        return tuple(self.neighbor_mask(w) for w in self.words)

    def neighbors(self, w: int) -> list[int]:
        return [w ^ (1 << e) for e in bits(self._nbr_masks[self.index[w]])]

    def degree(self, w: int) -> int:
        return popcount(self._nbr_masks[self.index[w]])

    def min_degree(self) -> int:
        return min(popcount(m) for m in self._nbr_masks)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for w, m in zip(self.words, self._nbr_masks):
            for e in bits(m):
                u = w ^ (1 << e)
                if w < u:
                    out.append((w, u))
        return out

    @cached_property
    def support(self) -> int:
        """Mask of non-constant coordinates."""
        if not self.words:
            return 0
        agree_and = full_mask(self.n)
        agree_or = 0
        for w in self.words:
            agree_and &= w
            agree_or |= w
        return agree_or & ~agree_and

    @cached_property
    def _distances(self) -> list[list[int]]:
        # all-pairs BFS, computed on first metric query
        idx = self.index
        out = []
        for s in self.words:
            dist = [-1] * len(self.words)
            dist[idx[s]] = 0
            q = deque([s])
            while q:
                x = q.popleft()
                dx = dist[idx[x]]
                for y in self.neighbors(x):
                    j = idx[y]
                    if dist[j] < 0:
                        dist[j] = dx + 1
                        q.append(y)
            out.append(dist)
        return out


def distance(g: ToGraph, u: int, v: int) -> int:
    """Shortest path length inside ``g`` (-1 if disconnected)."""
    if u not in g or v not in g:
        raise KeyError("vertex not in graph")
    return g._distances[g.index[u]][g.index[v]]


def is_connected(g: ToGraph) -> bool:
    if not g.words:
        return True
    if "_distances" in g.__dict__:
        return all(d >= 0 for d in g._distances[0])
    vs = g.vertex_set
    seen = {g.words[0]}
    q = deque(seen)
    while q:
        x = q.popleft()
        for y in g.neighbors(x):
            if y not in seen:
                seen.add(y)
                q.append(y)
    return len(seen) == len(vs)


def partial_cube_violation(g: ToGraph):
    """``None`` if ``g`` is a partial cube, else ``"disconnected"`` or a violating pair.

    Uses the local form of isometry: every pair u != v must have a neighbour of u
    inside ``g`` that is one Hamming step closer to v.
    """
    if not g.words:
        raise ValueError("empty graph")
    if not is_connected(g):
        return "disconnected"
    masks = g._nbr_masks
    words = g.words
    for i, u in enumerate(words):
        mu = masks[i]
        for v in words:
            if v != u and not (u ^ v) & mu:
                return (u, v)
    return None


def is_partial_cube(g: ToGraph) -> bool:
    return partial_cube_violation(g) is None


def is_isometric_set(words: Iterable[int], n: int) -> bool:
    """Whether the induced subgraph of Q_n on ``words`` is isometric (hence connected)."""
    ws = list(words)
    vs = set(ws)
    if not ws:
        return False
    masks = []
    for w in ws:
        m = 0
        for e in range(n):
            if w ^ (1 << e) in vs:
                m |= 1 << e
        masks.append(m)
    for u, mu in zip(ws, masks):
        for v in ws:
            if v != u and not (u ^ v) & mu:
                return False
    return True


class ThetaClass(NamedTuple):
    index: int
    plus: frozenset
    minus: frozenset
    edges: tuple


def theta_classes(g: ToGraph) -> list[ThetaClass]:
    out = []
    for e in range(g.n):
        bit = 1 << e
        plus = frozenset(w for w in g.words if w & bit)
        minus = frozenset(w for w in g.words if not w & bit)
        edges = tuple((w, w | bit) for w in minus if w | bit in plus)
        out.append(ThetaClass(e, plus, minus, edges))
    return out


def delete_coordinate(w: int, e: int) -> int:
    low = w & ((1 << e) - 1)
    return low | ((w >> (e + 1)) << e)


def insert_coordinate(w: int, e: int, value: int) -> int:
    low = w & ((1 << e) - 1)
    return low | (value << e) | ((w >> e) << (e + 1))


def contract(g: ToGraph, e: int) -> ToGraph:
    if not 0 <= e < g.n:
        raise IndexError(f"invalid coordinate {e}")
    return ToGraph((delete_coordinate(w, e) for w in g.words), g.n - 1)


def expand(h: ToGraph, h1: Iterable[int], h2: Iterable[int], check: bool = True) -> ToGraph:
    """Expansion of ``h`` along the cover (h1, h2); the new coordinate is the last one.

    Words of h1 get the new coordinate ``+``, words of h2 get ``-``.
    """
    h1 = frozenset(h1)
    h2 = frozenset(h2)
    if check:
        if h1 | h2 != h.vertex_set:
            raise ValueError("h1 and h2 do not cover the vertex set")
        for side in (h1, h2):
            if not is_isometric_set(side, h.n):
                raise ValueError("expansion side is not isometric")
    if h.n + 1 > MAX_WIDTH:
        raise CapacityError("expansion exceeds maximal width")
    top = 1 << h.n
    return ToGraph([w | top for w in h1] + list(h2), h.n + 1)


def antipode_set(g: ToGraph) -> dict:
    vs = g.vertex_set
    full = full_mask(g.n)
    return {w: (w ^ full if w ^ full in vs else None) for w in g.words}


def is_antipodal(g: ToGraph) -> bool:
    vs = g.vertex_set
    full = full_mask(g.n)
    return all(w ^ full in vs for w in g.words)


def _projection_size(words, mask: int) -> int:
    return len({w & mask for w in words})


def shattered_sets(g: ToGraph) -> list[int]:
    """All coordinate masks shattered by the vertex set, grown level by level.

    Shattering is downward closed, so a set is only tried when all its
    one-smaller subsets were shattered.
    """
    words = g.words
    level = [0]
    found = [0]
    while level:
        seen = set(level)
        nxt = []
        for s in level:
            top = s.bit_length()
            for e in range(top, g.n):
                t = s | (1 << e)
                if all((t ^ (1 << f)) in seen for f in bits(s)):
                    if _projection_size(words, t) == 1 << popcount(t):
                        nxt.append(t)
        found.extend(nxt)
        level = nxt
    return found


def rank(g: ToGraph) -> int:
    """VC dimension of the vertex set, which is the largest cube minor."""
    if not g.words:
        return 0
    return max(popcount(s) for s in shattered_sets(g))


def rank_by_contraction(g: ToGraph) -> int:
    """Rank by exhaustive contraction search; only for small widths."""
    best = 0
    seen = set()
    stack = [g]
    while stack:
        h = stack.pop()
        key = (h.n, h.words)
        if key in seen:
            continue
        seen.add(key)
        if len(h) == 1 << h.n:
            best = max(best, h.n)
            continue
        for e in range(h.n):
            stack.append(contract(h, e))
    return best


def convex_hull(g: ToGraph, s: Iterable[int]) -> frozenset:
    s = list(s)
    if not s:
        return frozenset()
    agree = full_mask(g.n)
    for w in s[1:]:
        agree &= ~(w ^ s[0])
    fixed = s[0] & agree
    return frozenset(w for w in g.words if w & agree == fixed)


def cartesian_product(g1: ToGraph, g2: ToGraph) -> ToGraph:
    if g1.n + g2.n > MAX_WIDTH:
        raise CapacityError("product exceeds maximal width")
    return ToGraph((a | (b << g1.n) for a in g1.words for b in g2.words), g1.n + g2.n)


def simplify(g: ToGraph) -> tuple[ToGraph, dict]:
    """Drop constant coordinates and merge parallel or antiparallel coordinates.

    Returns the simple graph and the vertex map old word -> new word.
    """
    keep = []
    seen_cols = set()
    for e in range(g.n):
        col = tuple((w >> e) & 1 for w in g.words)
        if len(set(col)) < 2:
            continue
        comp = tuple(1 - c for c in col)
        if col in seen_cols or comp in seen_cols:
            continue
        seen_cols.add(col)
        keep.append(e)
    mapping = {}
    for w in g.words:
        nw = 0
        for i, e in enumerate(keep):
            if (w >> e) & 1:
                nw |= 1 << i
        mapping[w] = nw
    return ToGraph(mapping.values(), len(keep)), mapping


def is_simple(g: ToGraph) -> bool:
    return simplify(g)[0].n == g.n


def restrict(g: ToGraph, vertices: Iterable[int]) -> ToGraph:
    """Induced subgraph on a vertex subset, same width."""
    vs = g.vertex_set
    sub = [w for w in vertices if w in vs]
    return ToGraph(sub, g.n)


def project(words: Iterable[int], coords: list[int]) -> list[int]:
    out = []
    for w in words:
        nw = 0
        for i, e in enumerate(coords):
            if (w >> e) & 1:
                nw |= 1 << i
        out.append(nw)
    return out


# ---------------------------------------------------------------- fixtures

def hypercube(n: int) -> ToGraph:
    return ToGraph(range(1 << n), n)


def even_cycle(m: int) -> ToGraph:
    """C_{2m} in Q_m: walk up setting bits 0..m-1, then clear them in order."""
    words = []
    w = 0
    for e in range(m):
        words.append(w)
        w |= 1 << e
    for e in range(m):
        words.append(w)
        w &= ~(1 << e)
    return ToGraph(words, m)


def path_graph(k: int) -> ToGraph:
    """Path with k edges embedded as 0, 1, 11, 111, ... in Q_k."""
    return ToGraph(((1 << i) - 1 for i in range(k + 1)), k)


def star_tree(leaves: int) -> ToGraph:
    return ToGraph([0] + [1 << i for i in range(leaves)], leaves)


def double(g: ToGraph) -> ToGraph:
    """Antipodal doubling: g on the ``+`` side of a new coordinate, -g on the ``-`` side."""
    full = full_mask(g.n)
    top = 1 << g.n
    return ToGraph([w | top for w in g.words] + [w ^ full for w in g.words], g.n + 1)


def construct_A_G(g: ToGraph) -> ToGraph:
    """Antipodal partial cube of width n+3 in which g and -g replace two antipodal Q_n's.

    The three new coordinates are the last ones: g sits at (+,+,+) and -g at (-,-,-).
    """
    n = g.n
    if n + 3 > MAX_WIDTH:
        raise CapacityError("construction exceeds maximal width")
    full = full_mask(n)
    words = []
    for t in range(8):
        if t == 7:
            words.extend(w | (7 << n) for w in g.words)
        elif t == 0:
            words.extend(w ^ full for w in g.words)
        else:
            words.extend(w | (t << n) for w in range(1 << n))
    return ToGraph(words, n + 3)


def construct_Q_minusminus(n: int, i: int, double_it: bool = False) -> ToGraph:
    """Q_n minus a vertex v, its antipode -v and i neighbours of -v (v = all minus)."""
    if not (n >= 4 and 1 <= i < n):
        raise ValueError("need n >= 4 and 1 <= i < n")
    full = full_mask(n)
    removed = {0, full}
    removed.update(full ^ (1 << e) for e in range(i))
    g = ToGraph((w for w in range(1 << n) if w not in removed), n)
    return double(g) if double_it else g


def pairs(iterable):
    return combinations(iterable, 2)
