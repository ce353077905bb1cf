"""Hyperplane arrangements over the rationals, their tope graphs and sweep peelings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from itertools import combinations, product
from pathlib import Path

from .faces import classify
from .pcube import ToGraph, full_mask

Vector = tuple  # of Fractions


class ArrangementError(ValueError):
    pass


class UnsupportedError(ValueError):
    """The peeling sweep needs a simple arrangement inside a bounded polyhedral region."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Hyperplane:
    """{x : normal . x = offset}; the positive side is normal . x > offset."""

    normal: Vector
    offset: Fraction

    @classmethod
    def make(cls, normal, offset=0, positive: str = "+") -> "Hyperplane":
        nv = tuple(_frac(a) for a in normal)
        b = _frac(offset)
        if all(a == 0 for a in nv):
            raise ArrangementError("zero normal vector")
        if positive == "-":
            nv, b = tuple(-a for a in nv), -b
        elif positive != "+":
            raise ArrangementError(f"positive side must be '+' or '-', got {positive!r}")
        return cls(nv, b)

    def value(self, x) -> Fraction:
        return sum(a * xi for a, xi in zip(self.normal, x)) - self.offset

    def normalized(self):
        # scale-free identity used to reject duplicates
        lead = next(a for a in self.normal if a != 0)
        s = abs(lead)
        return tuple(a / s for a in self.normal), self.offset / s


@dataclass
class Arrangement:
    dim: int
    hyperplanes: list
    region: list = field(default_factory=list)  # Hyperplanes; inside means value > 0

    def __post_init__(self):
        seen = set()
        for h in self.hyperplanes:
            if len(h.normal) != self.dim:
                raise ArrangementError("normal of wrong dimension")
            key = h.normalized()
            neg = (tuple(-a for a in key[0]), -key[1])
            if key in seen or neg in seen:
                raise ArrangementError("duplicate hyperplane")
            seen.add(key)
        for h in self.region:
            if len(h.normal) != self.dim:
                raise ArrangementError("region constraint of wrong dimension")
        if len(self.hyperplanes) > 32:
            raise ArrangementError("at most 32 hyperplanes")

    @property
    def n(self) -> int:
        return len(self.hyperplanes)

    def is_central(self) -> bool:
        return all(h.offset == 0 for h in self.hyperplanes)

    def sign_word(self, x) -> int | None:
        """Tope word of a point, ``None`` if it lies on a hyperplane."""
        w = 0
        for e, h in enumerate(self.hyperplanes):
            v = h.value(x)
            if v == 0:
                return None
            if v > 0:
                w |= 1 << e
        return w

    def in_region(self, x) -> bool:
        return all(h.value(x) > 0 for h in self.region)


# ------------------------------------------------------------ exact feasibility

def feasible(rows, dim: int) -> bool:
    """Whether a system of rows (a, b, strict) meaning a . x > b (or >= b) has a solution.

    The system is homogenized with a new variable t > 0 and solved by
    Fourier-Motzkin elimination over primitive integer rows: a combination
    of two rows is strict when either one is, and the system is infeasible
    exactly when a strict 0 > 0 appears.
    """
    cur = _dedupe_rows([(list(a) + [-_frac(b)], strict) for a, b, strict in rows]
                       + [([Fraction(0)] * dim + [Fraction(1)], True)])
    live = set(range(dim + 1))
    while live:
        # eliminate the variable producing the fewest new rows
        def cost(j):
            p = sum(1 for r, _ in cur if r[j] > 0)
            q = sum(1 for r, _ in cur if r[j] < 0)
            return p * q - p - q
        j = min(live, key=cost)
        live.discard(j)
        pos, neg, new = [], [], []
        for r in cur:
            (pos if r[0][j] > 0 else neg if r[0][j] < 0 else new).append(r)
        for p, ps in pos:
            for q, qs in neg:
                cp, cq = -q[j], p[j]
                new.append(([cp * x + cq * y for x, y in zip(p, q)], ps or qs))
        cur = _dedupe_rows(new)
        for r, strict in cur:
            if strict and not any(r):
                return False
    return True


def strictly_feasible(rows, dim: int) -> bool:
    """Whether {x : a . x > b for all (a, b) in rows} is nonempty."""
    return feasible([(a, b, True) for a, b in rows], dim)


def _dedupe_rows(rows):
    out = {}
    for r, strict in rows:
        if any(isinstance(x, Fraction) for x in r):
            den = lcm(*(x.denominator for x in r)) if r else 1
            r = [int(x * den) for x in r]
        g = gcd(*r)
        key = tuple(x // g for x in r) if g else tuple(r)
        out[key] = out.get(key, False) or strict
    return [(list(k), st) for k, st in out.items()]


def _chamber_rows(arr: Arrangement, w: int):
    rows = []
    for e, h in enumerate(arr.hyperplanes):
        if w >> e & 1:
            rows.append((h.normal, h.offset))
        else:
            rows.append((tuple(-a for a in h.normal), -h.offset))
    for h in arr.region:
        rows.append((h.normal, h.offset))
    return rows


def _chamber_test(args):
    arr, w = args
    return strictly_feasible(_chamber_rows(arr, w), arr.dim)


def tope_graph_of(arr: Arrangement, threads: int = 1) -> ToGraph:
    """Chambers of the arrangement inside the region, one word per chamber."""
    if arr.region and not strictly_feasible([(h.normal, h.offset) for h in arr.region], arr.dim):
        raise ArrangementError("empty region")
    cands = range(1 << arr.n)
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(threads) as ex:
            ok = list(ex.map(_chamber_test, ((arr, w) for w in cands), chunksize=64))
    else:
        ok = [_chamber_test((arr, w)) for w in cands]
    words = [w for w, good in zip(cands, ok) if good]
    if not words:
        raise ArrangementError("no chamber")
    return ToGraph(words, arr.n)


def classify_realizable(arr: Arrangement) -> frozenset:
    """Labels read off the arrangement, cross-checked against the graph classification."""
    g = tope_graph_of(arr)
    graph_labels = classify(g)
    labels = {"COM"}
    if not arr.region:
        labels.add("AOM")
        if arr.is_central():
            labels.add("OM")
    coordinate = all(sum(1 for a in h.normal if a != 0) == 1 for h in arr.hyperplanes)
    if coordinate and len({tuple(a != 0 for a in h.normal) for h in arr.hyperplanes}) == arr.n:
        labels.add("LOP")
    for lab in labels:
        if lab not in graph_labels:
            raise AssertionError(f"arrangement label {lab} not confirmed by the tope graph")
    return frozenset(labels)


# ------------------------------------------------------------ independent oracle

def _solve(rows: list[tuple[Vector, Fraction]], dim: int):
    """Unique solution of a square linear system over the rationals, else ``None``."""
    m = [list(a) + [b] for a, b in rows]
    k = len(m)
    piv_row = 0
    for col in range(dim):
        p = next((i for i in range(piv_row, k) if m[i][col] != 0), None)
        if p is None:
            return None
        m[piv_row], m[p] = m[p], m[piv_row]
        pv = m[piv_row][col]
        m[piv_row] = [a / pv for a in m[piv_row]]
        for i in range(k):
            if i != piv_row and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[piv_row])]
        piv_row += 1
    return tuple(m[i][dim] for i in range(dim))


def arrangement_vertices(arr: Arrangement, extra=()) -> list[Vector]:
    """Intersection points of d independent hyperplanes (from the arrangement and ``extra``)."""
    planes = list(arr.hyperplanes) + list(extra)
    pts = set()
    for combo in combinations(planes, arr.dim):
        x = _solve([(h.normal, h.offset) for h in combo], arr.dim)
        if x is not None:
            pts.add(x)
    return sorted(pts)


def sample_point_chambers(arr: Arrangement) -> set:
    """Chamber words found by stepping off every vertex into each of its local cones.

    Works for simple arrangements whose normals span the space, where every
    chamber is pointed and has a vertex.  At a vertex p lying on exactly d
    hyperplanes with normal matrix A, the direction u solving A u = s enters
    the local chamber with sign pattern s; the step length stays below the
    distance to every other hyperplane.  Independent of the elimination code.
    """
    d = arr.dim
    found = set()
    for p in arrangement_vertices(arr):
        on = [h for h in arr.hyperplanes if h.value(p) == 0]
        off = [h for h in arr.hyperplanes if h.value(p) != 0]
        if len(on) != d:
            raise UnsupportedError("sample-point oracle needs a simple arrangement")
        for signs in product((1, -1), repeat=d):
            u = _solve([(h.normal, Fraction(s)) for h, s in zip(on, signs)], d)
            eps = Fraction(1)
            for h in off:
                rate = abs(sum(a * x for a, x in zip(h.normal, u)))
                if rate:
                    eps = min(eps, abs(h.value(p)) / (2 * rate))
            x = tuple(pc + eps * uc for pc, uc in zip(p, u))
            if arr.in_region(x):
                found.add(arr.sign_word(x))
    return found


def chamber_count_formula(m: int, d: int) -> int:
    from math import comb

    return sum(comb(m, i) for i in range(d + 1))


# ------------------------------------------------------------ peeling by sweeping

def is_simple_arrangement(arr: Arrangement) -> bool:
    """Every d hyperplanes meet in one point and no d + 1 share a point."""
    d = arr.dim
    for combo in combinations(arr.hyperplanes, d):
        if _solve([(h.normal, h.offset) for h in combo], d) is None:
            return False
    for combo in combinations(arr.hyperplanes, d + 1):
        x = _solve([(h.normal, h.offset) for h in combo[:d]], d)
        if combo[d].value(x) == 0:
            return False
    return True


def region_bounded(arr: Arrangement) -> bool:
    """Whether the closed region has no recession direction."""
    d = arr.dim
    for i in range(d):
        for sgn in (1, -1):
            unit = tuple(Fraction(sgn) if j == i else Fraction(0) for j in range(d))
            rows = [(h.normal, Fraction(0), False) for h in arr.region]
            rows.append((unit, Fraction(0), True))
            if feasible(rows, d):
                return False
    return True


def _sweep_functional(arr: Arrangement) -> tuple:
    """Inward normal of the first region halfspace, tilted so that distinct points get distinct values."""
    o = arr.region[0]
    pts = arrangement_vertices(arr, extra=arr.region)
    for k in range(1, 200):
        tilt = tuple(a + Fraction(1, (10 * k) ** (i + 2)) for i, a in enumerate(o.normal))
        vals = [sum(a * x for a, x in zip(tilt, p)) for p in pts]
        if len(set(vals)) == len(vals):
            return tilt
    raise UnsupportedError("could not separate the arrangement vertices")


def chamber_tops(arr: Arrangement, g: ToGraph | None = None) -> dict:
    """For each chamber word, the largest sweep value over its closure in the region."""
    if g is None:
        g = tope_graph_of(arr)
    f = _sweep_functional(arr)
    pts = [p for p in arrangement_vertices(arr, extra=arr.region)
           if all(h.value(p) >= 0 for h in arr.region)]
    vals = {p: sum(a * x for a, x in zip(f, p)) for p in pts}
    signs = {}
    for p in pts:
        plus = zero = 0
        for e, h in enumerate(arr.hyperplanes):
            v = h.value(p)
            if v > 0:
                plus |= 1 << e
            elif v == 0:
                zero |= 1 << e
        signs[p] = (plus, zero)
    tops = {}
    for w in g.words:
        best = None
        for p in pts:
            plus, zero = signs[p]
            if (w & ~zero) == plus and (best is None or vals[p] > best):
                best = vals[p]
        if best is None:
            raise UnsupportedError("chamber without a vertex; region must be bounded")
        tops[w] = best
    return tops


def realizable_corner_peeling(arr: Arrangement):
    """Peel the tope graph by pushing the first region halfspace through the region.

    The moving halfspace is the first region constraint, slightly tilted so
    that the 0-dimensional cells (arrangement vertices and vertices on region
    walls) are met one at a time.  When the sweep passes a cell, the chambers
    whose closure ends there drop out; those chambers form one step.  Every
    step is checked with ``verify_corner`` against the current graph.
    """
    from .corners import PeelingSequence, verify_corner
    from .pcube import restrict

    if not arr.region:
        raise UnsupportedError("peeling needs a region bounded by halfspaces")
    if not is_simple_arrangement(arr):
        raise UnsupportedError("peeling is implemented for simple arrangements only")
    if not region_bounded(arr):
        raise UnsupportedError("peeling needs a bounded region")
    g = tope_graph_of(arr)
    tops = chamber_tops(arr, g)
    groups = {}
    for w, t in tops.items():
        groups.setdefault(t, set()).add(w)
    seq = PeelingSequence(g)
    current = g
    remaining = set(g.words)
    for t in sorted(groups):
        moved = groups[t]
        ok, corner = verify_corner(current, moved)
        if not ok:
            raise UnsupportedError("sweep step did not cut a corner; region walls may not be generic")
        seq.steps.append(corner)
        remaining -= moved
        if remaining:
            current = restrict(current, remaining)
    return seq


# ------------------------------------------------------------ file format

def load_arrangement(path) -> Arrangement:
    data = json.loads(Path(path).read_text())
    return arrangement_from_json(data)


def arrangement_from_json(data: dict) -> Arrangement:
    dim = int(data["dim"])
    hs = [Hyperplane.make([Fraction(a) for a in h["normal"]], Fraction(h.get("offset", "0")),
                          h.get("positive", "+")) for h in data["hyperplanes"]]
    region = [Hyperplane.make([Fraction(a) for a in h["normal"]], Fraction(h.get("offset", "0")),
                              h.get("positive", "+")) for h in data.get("region", [])]
    return Arrangement(dim, hs, region)


def arrangement_to_json(arr: Arrangement) -> dict:
    def enc(h):
        return {"normal": [str(a) for a in h.normal], "offset": str(h.offset), "positive": "+"}

    return {"dim": arr.dim, "hyperplanes": [enc(h) for h in arr.hyperplanes],
            "region": [enc(h) for h in arr.region]}


# ------------------------------------------------------------ fixtures

def central_lines(m: int) -> Arrangement:
    """m lines through the origin of the plane with distinct slopes."""
    hs = [Hyperplane.make((Fraction(1), Fraction(k)), 0) for k in range(m)]
    return Arrangement(2, hs)


def generic_affine(m: int, d: int) -> Arrangement:
    """m hyperplanes in general position (moment-curve normals, distinct offsets)."""
    hs = []
    for k in range(m):
        t = Fraction(k + 1)
        normal = tuple(t ** (i + 1) for i in range(d - 1)) + (Fraction(1),)
        hs.append(Hyperplane.make(normal, Fraction(k * k + 1, k + 2)))
    return Arrangement(d, hs)


def coordinate_box(d: int, half: int = 10) -> Arrangement:
    """Coordinate hyperplanes inside a box slightly tilted so that its walls are generic."""
    hs = [Hyperplane.make(tuple(Fraction(int(i == j)) for j in range(d)), 0) for i in range(d)]
    region = []
    for i in range(d):
        for s in (1, -1):
            normal = tuple(Fraction(-s if i == j else 0) + (Fraction(1, 97 * (j + 2)) if j != i else 0)
                           for j in range(d))
            region.append(Hyperplane(normal, Fraction(-half) + Fraction(i + 1, 13) * s))
    return Arrangement(d, hs, region)


def full_mask_of(arr: Arrangement) -> int:
    return full_mask(arr.n)
