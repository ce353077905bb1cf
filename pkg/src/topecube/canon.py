"""Canonical keys of embedded tope graphs at the labeled, reorientation and isomorphism levels."""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import NamedTuple

import numpy as np

from .pcube import ToGraph, popcount

LEVELS = ("labeled", "reorientation", "isomorphism")


class CanonicalKey(NamedTuple):
    level: str
    n: int
    words: tuple

    @property
    def key(self) -> bytes:
        width = 1 if self.n <= 8 else 2 if self.n <= 16 else 4
        body = b"".join(w.to_bytes(width, "big") for w in self.words)
        return bytes([self.n]) + body

    def hex(self) -> str:
        return self.key.hex()

    def graph(self) -> ToGraph:
        return ToGraph(self.words, self.n)


def _lexmin_rows(arr: np.ndarray) -> np.ndarray:
    """Lexicographically smallest row of a 2-d integer array."""
    rows = arr
    for j in range(arr.shape[1]):
        col = rows[:, j]
        rows = rows[col == col.min()]
        if len(rows) == 1:
            break
    return rows[0]


@lru_cache(maxsize=None)
def _perm_table(n: int):
    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _origin_signature(g: ToGraph, f: int) -> tuple:
    # isomorphism invariant of the pair (g, f): degree and distance profile
    prof = [0] * (g.n + 1)
    for w in g.words:
        prof[popcount(w ^ f)] += 1
    return (g.degree(f), tuple(prof))


def _coordinate_invariant(words, f: int, e: int) -> int:
    # size of the halfspace of class e that contains the origin f
    b = 1 << e
    side = f & b
    return sum(1 for w in words if w & b == side)


def _allowed_perms(words, f: int, n: int) -> np.ndarray:
    """Permutations listing coordinates by decreasing origin-side halfspace size.

    Only ties are permuted freely; the ordering is determined by invariants, so
    the restricted minimum is still a class invariant.
    """
    inv = [_coordinate_invariant(words, f, e) for e in range(n)]
    perms = _perm_table(n)
    vals = np.array(inv, dtype=np.int64)[perms]
    ok = np.all(vals[:, :-1] >= vals[:, 1:], axis=1) if n > 1 else np.ones(len(perms), bool)
    return perms[ok]


def _iso_words(g: ToGraph) -> tuple:
    n = g.n
    if n == 0:
        return tuple(g.words)
    if len(g) == 1 << n:
        return tuple(range(1 << n))
    words = np.array(g.words, dtype=np.int64)
    sigs = {f: _origin_signature(g, f) for f in g.words}
    best_sig = min(sigs.values())
    origins = [f for f in g.words if sigs[f] == best_sig]
    shifts = np.arange(n, dtype=np.int64)
    best = None
    for f in origins:
        perms = _allowed_perms(g.words, f, n)
        flipped = words ^ f
        bitmat = (flipped[:, None] >> shifts[None, :]) & 1  # (|V|, n)
        # new coordinate i takes old coordinate perm[i]
        for start in range(0, len(perms), 4096):
            chunk = perms[start:start + 4096]
            moved = bitmat[:, chunk]  # (|V|, P, n)
            vals = (moved << shifts[None, None, :]).sum(axis=2).T  # (P, |V|)
            vals.sort(axis=1)
            cand = _lexmin_rows(vals)
            if best is None or tuple(cand) < best:
                best = tuple(int(x) for x in cand)
    return best


def canonical_words(g: ToGraph, level: str = "isomorphism") -> tuple:
    if level == "labeled":
        return tuple(g.words)
    if level == "reorientation":
        if not g.words:
            return ()
        return min(tuple(sorted(w ^ f for w in g.words)) for f in g.words)
    if level == "isomorphism":
        return _iso_words(g)
    raise ValueError(f"unknown level {level!r}")


def canonical_key(g: ToGraph, level: str = "isomorphism") -> CanonicalKey:
    return CanonicalKey(level, g.n, canonical_words(g, level))


def canonical_form(g: ToGraph, level: str = "isomorphism") -> ToGraph:
    return ToGraph(canonical_words(g, level), g.n)


def apply_automorphism(words, n: int, flip: int, perm) -> list[int]:
    """Image under w -> permuted(w ^ flip); new coordinate i is old coordinate perm[i]."""
    out = []
    for w in words:
        x = w ^ flip
        y = 0
        for i, e in enumerate(perm):
            if x >> e & 1:
                y |= 1 << i
        out.append(y)
    return out


def brute_force_iso_words(g: ToGraph) -> tuple:
    """Lex-min sorted word list over all of Aut(Q_n); for small n only."""
    best = None
    for perm in permutations(range(g.n)):
        for flip in range(1 << g.n):
            cand = tuple(sorted(apply_automorphism(g.words, g.n, flip, perm)))
            if best is None or cand < best:
                best = cand
    return best
