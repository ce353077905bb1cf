"""Isomorph-free generation of partial cubes, antipodal partial cubes, OMs and UOMs."""
from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .canon import canonical_key
from .faces import classify, is_affine, is_com
from .pcube import (
    ToGraph,
    double,
    expand,
    full_mask,
    hypercube,
    is_antipodal,
    is_partial_cube,
    is_simple,
    rank,
)

log = logging.getLogger(__name__)

PARTIAL_CUBE_GUARD = 6
ANTIPODAL_GUARD = 7
MAX_SUBSET_VERTICES = 24


class GuardError(RuntimeError):
    """A requested size exceeds a hard guard."""


# ------------------------------------------------------------ isometric subsets

def _geodesic_masks(g: ToGraph) -> np.ndarray:
    """P[u, v] = index mask of neighbours of u that are one step closer to v."""
    k = len(g)
    idx = g.index
    out = np.zeros((k, k), dtype=np.uint64)
    for i, u in enumerate(g.words):
        nbrs = [(u ^ y, idx[y]) for y in g.neighbors(u)]
        for j, v in enumerate(g.words):
            if i == j:
                continue
            diff = u ^ v
            m = 0
            for flip, t in nbrs:
                if flip & diff:
                    m |= 1 << t
            out[i, j] = m
    return out


def isometric_mask_filter(g: ToGraph, masks: np.ndarray, geo=None) -> np.ndarray:
    """Boolean array: which index masks induce isometric subgraphs of the partial cube g.

    A subset H is isometric iff every u != v in H has a neighbour in H one step
    closer to v.  Empty masks are rejected.
    """
    if geo is None:
        geo = _geodesic_masks(g)
    masks = np.asarray(masks, dtype=np.uint64)
    k = len(g)
    one = np.uint64(1)
    good = masks != 0
    member = [((masks >> np.uint64(i)) & one).astype(bool) for i in range(k)]
    for i in range(k):
        mi = member[i] & good
        if not mi.any():
            continue
        for j in range(k):
            if i == j:
                continue
            both = mi & member[j]
            bad = both & ((masks & geo[i, j]) == 0)
            if bad.any():
                good &= ~bad
    return good


def isometric_subsets(g: ToGraph) -> list[int]:
    """All nonempty isometric vertex subsets as index masks (bit i = g.words[i])."""
    k = len(g)
    if k > MAX_SUBSET_VERTICES:
        raise GuardError(f"subset enumeration over {k} vertices is not supported")
    geo = _geodesic_masks(g)
    out = []
    chunk = 1 << 20
    total = 1 << k
    for start in range(1, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.uint64)
        ok = isometric_mask_filter(g, masks, geo)
        out.extend(int(m) for m in masks[ok])
    return out


def _edge_index_pairs(g: ToGraph) -> list[tuple[int, int]]:
    idx = g.index
    return [(idx[a], idx[b]) for a, b in g.edges()]


def expansion_pairs(g: ToGraph) -> Iterator[tuple[frozenset, frozenset]]:
    """All isometric covers (H1, H2) of g defining a connected expansion, H1 <= H2 as masks."""
    subs = isometric_subsets(g)
    k = len(g)
    allm = (1 << k) - 1
    arr = np.array(subs, dtype=np.uint64)
    edges = _edge_index_pairs(g)
    words = g.words
    for a in subs:
        need = np.uint64(allm & ~a)
        cands = arr[((arr & need) == need) & (arr >= np.uint64(a)) & ((arr & np.uint64(a)) != 0)]
        for b in cands:
            b = int(b)
            only1, only2 = a & ~b, b & ~a
            if any((only1 >> i & 1 and only2 >> j & 1) or (only2 >> i & 1 and only1 >> j & 1)
                   for i, j in edges):
                continue
            yield (frozenset(words[i] for i in range(k) if a >> i & 1),
                   frozenset(words[i] for i in range(k) if b >> i & 1))


def antipodal_expansion_sides(g: ToGraph) -> Iterator[frozenset]:
    """Sides H1 of all antipodal expansions (H1, -H1) of an antipodal partial cube.

    Encoded by S1 = H1 \\ -H1: S1 meets no antipodal pair twice, has no edge to
    -S1, leaves a common part, and V \\ -S1 is isometric.
    """
    full = full_mask(g.n)
    vs = g.vertex_set
    reps = [w for w in g.words if w < w ^ full]
    nbr_flips = {w: [w ^ (1 << e) for e in range(g.n) if w ^ (1 << e) in vs] for w in g.words}
    found: list[frozenset] = []

    def dfs(i, s1):
        if i == len(reps):
            if len(s1) < len(reps):
                found.append(frozenset(s1))
            return
        dfs(i + 1, s1)
        u = reps[i]
        for x in (u, u ^ full):
            if all((y ^ full) not in s1 for y in nbr_flips[x]):
                s1.add(x)
                dfs(i + 1, s1)
                s1.discard(x)

    dfs(0, set())
    idx = g.index
    k = len(g)
    allm = (1 << k) - 1
    masks = []
    for s1 in found:
        neg = 0
        for x in s1:
            neg |= 1 << idx[x ^ full]
        masks.append(allm & ~neg)
    if not masks:
        return
    arr = np.array(masks, dtype=np.uint64)
    ok = isometric_mask_filter(g, arr)
    for m, good in zip(masks, ok):
        if good:
            yield frozenset(g.words[i] for i in range(k) if m >> i & 1)


def antipodal_expansions(g: ToGraph) -> Iterator[ToGraph]:
    full = full_mask(g.n)
    for h1 in antipodal_expansion_sides(g):
        h2 = frozenset(w ^ full for w in h1)
        yield expand(g, h1, h2, check=False)


def all_expansions(g: ToGraph) -> Iterator[ToGraph]:
    for h1, h2 in expansion_pairs(g):
        yield expand(g, h1, h2, check=False)


# ------------------------------------------------------------ dedup helpers

def _dedupe(graphs: Iterable[ToGraph], keep: Callable[[ToGraph], bool] | None = None) -> dict:
    out = {}
    for h in graphs:
        if keep is not None and not keep(h):
            continue
        key = canonical_key(h, "isomorphism")
        if key.key not in out:
            out[key.key] = key.graph()
    return out


def _sorted_classes(classes: dict) -> list[ToGraph]:
    return [classes[k] for k in sorted(classes)]


def _expand_parent_antipodal(g: ToGraph) -> dict:
    return _dedupe(antipodal_expansions(g))


def _expand_parent_general(g: ToGraph) -> dict:
    return _dedupe(all_expansions(g))


def _expand_parent_affine(g: ToGraph) -> dict:
    return _dedupe(all_expansions(g), keep=is_affine)


def _run_parents(fn, parents: list[ToGraph], threads: int) -> dict:
    merged: dict = {}
    if threads > 1 and len(parents) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(fn, parents))
    else:
        results = [fn(p) for p in parents]
    for res in results:
        for k in res:
            merged.setdefault(k, res[k])
    return merged


# ------------------------------------------------------------ generation

def generate_partial_cubes(n: int, threads: int = 1) -> list[ToGraph]:
    """One simple partial cube per isomorphism class of isometric dimension n."""
    if n > PARTIAL_CUBE_GUARD:
        raise GuardError(f"partial cube generation is guarded at n <= {PARTIAL_CUBE_GUARD}")
    if n < 0:
        raise ValueError("negative dimension")
    level = [ToGraph([0], 0)]
    for _ in range(n):
        level = _sorted_classes(_run_parents(_expand_parent_general, level, threads))
    return level


def generate_affine(n: int, threads: int = 1) -> list[ToGraph]:
    """Affine partial cubes of dimension n, grown by expansions of affine ones.

    Contracting a class of an antipodal graph keeps it antipodal, so halfspaces
    of antipodal graphs are closed under contraction and every affine graph of
    dimension n expands one of dimension n - 1.
    """
    if n > ANTIPODAL_GUARD - 1:
        raise GuardError("affine generation is guarded")
    level = [ToGraph([0], 0)]
    for _ in range(n):
        level = _sorted_classes(_run_parents(_expand_parent_affine, level, threads))
    return level


def antipodal_from_affine(n: int, threads: int = 1) -> list[ToGraph]:
    """Antipodal classes of dimension n as doubles of affine classes of dimension n - 1."""
    if n < 1:
        raise ValueError("antipodal dimension must be positive")
    return _sorted_classes(_dedupe(double(h) for h in generate_affine(n - 1, threads)))


def generate_antipodal(n: int, threads: int = 1, catalog=None, resume: bool = False) -> list[ToGraph]:
    """One antipodal partial cube per isomorphism class of isometric dimension n.

    Every antipodal graph of dimension n arises from an antipodal graph of
    dimension n - 1 by an antipodal expansion (H1, -H1), so levels are grown
    one at a time from K_2.  With a catalog, finished levels are reused.
    """
    if n > ANTIPODAL_GUARD:
        raise GuardError(f"antipodal generation is guarded at n <= {ANTIPODAL_GUARD}")
    if n < 1:
        raise ValueError("antipodal dimension must be positive")
    cat = Catalog(catalog) if catalog is not None else None
    if cat is not None and resume and cat.has(n, "antipodal"):
        return cat.load(n, "antipodal")
    start = 1
    level = [ToGraph([0, 1], 1)]
    if cat is not None and resume:
        for k in range(n - 1, 1, -1):
            if cat.has(k, "antipodal"):
                level, start = cat.load(k, "antipodal"), k
                break
    for k in range(start + 1, n + 1):
        level = _sorted_classes(_run_parents(_expand_parent_antipodal, level, threads))
        log.info("antipodal n=%d: %d classes", k, len(level))
        if cat is not None:
            cat.store(k, "antipodal", level)
    return level


PREDICATES = {
    "antipodal": is_antipodal,
    "partial-cube": is_partial_cube,
    "OM": lambda g: "OM" in classify(g),
    "UOM": lambda g: "UOM" in classify(g),
    "COM": is_com,
    "LOP": lambda g: "LOP" in classify(g),
    "affine": is_affine,
}


def parse_predicate(spec: str) -> Callable[[ToGraph], bool]:
    """Predicates like ``OM``, ``UOM``, ``rank=3`` or ``UOM,rank=3`` (conjunction)."""
    tests = []
    for part in spec.split(","):
        part = part.strip()
        if part.startswith("rank="):
            r = int(part[5:])
            tests.append(lambda g, r=r: rank(g) == r)
        elif part in PREDICATES:
            tests.append(PREDICATES[part])
        else:
            raise ValueError(f"unknown predicate {part!r}")
    return lambda g: all(t(g) for t in tests)


def filter_class(stream: Iterable[ToGraph], predicate) -> list[ToGraph]:
    if isinstance(predicate, str):
        predicate = parse_predicate(predicate)
    return [g for g in stream if predicate(g)]


def uom_classes(n: int, r: int, threads: int = 1, catalog=None, resume: bool = False) -> list[ToGraph]:
    """Isomorphism classes of uniform OMs of rank r on n elements.

    Uniform OMs of rank r < n are single-element extensions in general position
    of uniform OMs on n - 1 elements, so they are grown from Q_r by general
    position expansions.
    """
    from .euclid import general_position_extensions

    if not 1 <= r <= n:
        return []
    cat = Catalog(catalog) if catalog is not None else None
    tag = f"UOM-r{r}"
    if cat is not None and resume and cat.has(n, tag):
        return cat.load(n, tag)
    if r == n:
        level = [hypercube(n)]
    else:
        parents = uom_classes(n - 1, r, threads, catalog, resume)
        found: dict = {}
        for p in parents:
            for ext in general_position_extensions(p):
                h = ext.graph
                if "UOM" in classify(h) and rank(h) == r:
                    key = canonical_key(h)
                    found.setdefault(key.key, key.graph())
        level = _sorted_classes(found)
    if cat is not None:
        cat.store(n, tag, level)
    return level


# ------------------------------------------------------------ brute force oracle

def brute_force_classes(n: int, predicate=None) -> list[ToGraph]:
    """Filter all vertex subsets of Q_n; n <= 4 (2^16 subsets)."""
    if n > 4:
        raise GuardError("brute force over subsets of Q_n needs n <= 4")
    q = hypercube(n)
    masks = np.arange(1, 1 << (1 << n), dtype=np.uint64)
    ok = isometric_mask_filter(q, masks)
    found: dict = {}
    for m in masks[ok]:
        m = int(m)
        g = ToGraph([w for w in range(1 << n) if m >> w & 1], n)
        if not is_simple(g):
            continue
        if predicate is not None and not predicate(g):
            continue
        key = canonical_key(g)
        found.setdefault(key.key, key.graph())
    return _sorted_classes(found)


# ------------------------------------------------------------ catalog

def default_catalog_root() -> Path:
    return Path(os.environ.get("TOPECUBE_CATALOG", "catalog"))


class Catalog:
    """``root/n=<k>/<tag>/<class-key>.topes`` plus ``root/manifest.json``."""

    def __init__(self, root=None):
        self.root = Path(root) if root is not None else default_catalog_root()

    @property
    def manifest_path(self) -> Path:
        return self.root / "manifest.json"

    def manifest(self) -> dict:
        if self.manifest_path.exists():
            return json.loads(self.manifest_path.read_text())
        return {}

    def _write_manifest(self, data: dict) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = self.manifest_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(data, indent=2, sort_keys=True))
        tmp.replace(self.manifest_path)

    def directory(self, n: int, tag: str) -> Path:
        return self.root / f"n={n}" / tag

    @staticmethod
    def file_stem(key_hex: str) -> str:
        # long keys (n = 7 and up) overflow filesystem name limits
        if len(key_hex) <= 160:
            return key_hex
        return "sha256-" + hashlib.sha256(key_hex.encode()).hexdigest()

    def has(self, n: int, tag: str) -> bool:
        return f"n={n}/{tag}" in self.manifest()

    def store(self, n: int, tag: str, graphs: list[ToGraph]) -> None:
        from .io import write_topes

        d = self.directory(n, tag)
        d.mkdir(parents=True, exist_ok=True)
        for g in graphs:
            write_topes(d / f"{self.file_stem(canonical_key(g).hex())}.topes", g)
        data = self.manifest()
        data[f"n={n}/{tag}"] = len(graphs)
        self._write_manifest(data)

    def load(self, n: int, tag: str) -> list[ToGraph]:
        from .io import read_topes

        d = self.directory(n, tag)
        paths = sorted(d.glob("*.topes"))
        graphs = [read_topes(p) for p in paths]
        if any(p.stem.startswith("sha256-") for p in paths):
            # digest names do not sort like keys; restore the generation order
            graphs.sort(key=lambda g: canonical_key(g).key)
        return graphs

    def record_count(self, n: int, name: str, count: int) -> None:
        data = self.manifest()
        data[f"n={n}/{name}"] = count
        self._write_manifest(data)
