"""Strings (non-revisiting walks) on the doubled A_n quiver and oriented paths.

Vertices are 1..n and the edge between i and i+1 can be walked forward
(i -> i+1) or backward (i+1 -> i). A string is stored by its support
``[lo, hi]`` and one direction per edge, read in absolute terms, so a walk and
its reversal have the same representation and equality is plain tuple
equality. Text form: ``"2"`` for a simple, ``"1>2<3"`` for the string that
goes 1 -> 2 and then 3 -> 2 (``>`` is forward, ``<`` backward).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, total_ordering
from typing import Iterable, Sequence

import numpy as np

from .errors import (CrossValidationError, InjectivityError, NotDescentError,
                     ParseError)


@total_ordering
@dataclass(frozen=True)
class StringBrick:
    lo: int
    hi: int
    dirs: tuple[bool, ...] = ()  # dirs[k] is edge (lo+k, lo+k+1); True = forward

    def __post_init__(self):
        if not (1 <= self.lo <= self.hi):
            raise ValueError(f"bad support [{self.lo}, {self.hi}]")
        if len(self.dirs) != self.hi - self.lo:
            raise ValueError("need exactly one direction per edge of the support")
        object.__setattr__(self, "dirs", tuple(bool(d) for d in self.dirs))

    @classmethod
    def simple(cls, i: int) -> "StringBrick":
        return cls(i, i, ())

    @classmethod
    def parse(cls, text: str) -> "StringBrick":
        'reads "3", "S3" or "1>2<3"'
        s = text.strip()
        if re.fullmatch(r"S?\d+", s):
            return cls.simple(int(s.lstrip("S")))
        parts = re.split(r"([<>])", s)
        try:
            verts = [int(p) for p in parts[::2]]
        except ValueError:
            raise ParseError(f"cannot read string {text!r}") from None
        if any(b != a + 1 for a, b in zip(verts, verts[1:])):
            raise ParseError(f"vertices must increase by one in {text!r}")
        return cls(verts[0], verts[-1], tuple(sym == ">" for sym in parts[1::2]))

    def __str__(self):
        if self.lo == self.hi:
            return f"S{self.lo}"
        out = [str(self.lo)]
        for k, d in enumerate(self.dirs):
            out.append(">" if d else "<")
            out.append(str(self.lo + k + 1))
        return "".join(out)

    def text(self) -> str:
        'like str() but simples are written as the bare vertex'
        return str(self.lo) if self.lo == self.hi else str(self)

    @property
    def length(self) -> int:
        'number of vertices (the dimension of the string module)'
        return self.hi - self.lo + 1

    @property
    def support(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def sort_key(self):
        return (self.hi - self.lo, self.lo, tuple(not d for d in self.dirs))

    def __lt__(self, other):
        if not isinstance(other, StringBrick):
            return NotImplemented
        return self.sort_key < other.sort_key

    def walk(self) -> list[int]:
        """Vertex sequence of one of the two walks (the one starting from a source end)."""
        seq = list(self.support)
        return seq if not self.dirs or self.dirs[0] else seq[::-1]

    def edge(self, i: int) -> bool | None:
        'direction of edge (i, i+1) if it lies in the support'
        if self.lo <= i < self.hi:
            return self.dirs[i - self.lo]
        return None

    def substring(self, lo: int, hi: int) -> "StringBrick":
        return StringBrick(lo, hi, self.dirs[lo - self.lo:hi - self.lo])

    def substrings(self) -> list["StringBrick"]:
        return [self.substring(a, b) for a in self.support for b in range(a, self.hi + 1)]

    def is_path(self) -> bool:
        return len(set(self.dirs)) <= 1


def substring_leq(u: StringBrick, w: StringBrick) -> bool:
    'u occurs in w as a consecutive piece with the same edge directions'
    return (w.lo <= u.lo and u.hi <= w.hi
            and w.dirs[u.lo - w.lo:u.hi - w.lo] == u.dirs)


def string_count(n: int) -> int:
    return sum((n - e) * 2 ** e for e in range(n))


def enumerate_strings(n: int) -> list[StringBrick]:
    if n < 1:
        raise ValueError("n must be at least 1")
    out = []
    for e in range(n):
        for lo in range(1, n - e + 1):
            for bits in range(2 ** e):
                # most significant bit is the first edge; forward first
                dirs = tuple(not (bits >> (e - 1 - k) & 1) for k in range(e))
                out.append(StringBrick(lo, lo + e, dirs))
    return out


def brick_label(sigma: Sequence[int], ell: int) -> StringBrick:
    """Label of the weak-order arrow ``sigma -> sigma s_ell`` (positions 1-based).

    The support is ``[sigma(ell+1), sigma(ell) - 1]``; the edge ``(k-1, k)`` is
    walked forward exactly when ``k`` sits among the first ``ell`` entries.
    """
    sigma = tuple(sigma)
    if not 1 <= ell < len(sigma):
        raise NotDescentError(f"position {ell} out of range for {sigma}")
    big, small = sigma[ell - 1], sigma[ell]
    if big < small:
        raise NotDescentError(f"{''.join(map(str, sigma))} has no descent at {ell}")
    left = set(sigma[:ell])
    return StringBrick(small, big - 1, tuple(k in left for k in range(small + 1, big)))


@total_ordering
@dataclass(frozen=True)
class OrientedPath:
    """A path that walks every edge in one direction, from ``start`` to ``end``."""
    start: int
    end: int

    @property
    def trivial(self) -> bool:
        return self.start == self.end

    @property
    def forward(self) -> bool:
        return self.start < self.end

    @property
    def lo(self) -> int:
        return min(self.start, self.end)

    @property
    def hi(self) -> int:
        return max(self.start, self.end)

    @cached_property
    def string(self) -> StringBrick:
        return StringBrick(self.lo, self.hi, (self.forward,) * (self.hi - self.lo))

    def __str__(self):
        if self.trivial:
            return f"e{self.start}"
        step = 1 if self.forward else -1
        return "->".join(str(v) for v in range(self.start, self.end + step, step))

    @classmethod
    def parse(cls, text: str) -> "OrientedPath":
        'reads "e2", "x1" (1->2), "y2" (2->1) or "3->2->1"'
        s = text.strip()
        m = re.fullmatch(r"([exy])(\d+)", s)
        if m:
            kind, i = m.group(1), int(m.group(2))
            return cls(i, {"e": i, "x": i + 1, "y": i - 1}[kind])
        try:
            verts = [int(v) for v in s.split("->")]
        except ValueError:
            raise ParseError(f"cannot read path {text!r}") from None
        if len(verts) < 2 or any(abs(b - a) != 1 for a, b in zip(verts, verts[1:])) \
                or len({b - a for a, b in zip(verts, verts[1:])}) != 1:
            raise ParseError(f"not an oriented path: {text!r}")
        return cls(verts[0], verts[-1])

    @property
    def sort_key(self):
        return (self.hi - self.lo, self.lo, not self.forward)

    def __lt__(self, other):
        if not isinstance(other, OrientedPath):
            return NotImplemented
        return self.sort_key < other.sort_key


def enumerate_paths(n: int) -> list[OrientedPath]:
    out = [OrientedPath(i, i) for i in range(1, n + 1)]
    out += [OrientedPath(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return sorted(out)


def path_leq(p: OrientedPath, q: OrientedPath) -> bool:
    'subpath order'
    return substring_leq(p.string, q.string)


def path_acts_nonzero(p: OrientedPath, w: StringBrick) -> bool:
    return substring_leq(p.string, w)


@dataclass(frozen=True)
class BrickPoset:
    """Strings ordered by forcing: ``forces[a, b]`` iff string a is a substring of b."""
    strings: tuple[StringBrick, ...]
    forces: np.ndarray

    @cached_property
    def hasse(self) -> list[tuple[StringBrick, StringBrick]]:
        F = self.forces.copy()
        np.fill_diagonal(F, False)
        between = (F.astype(np.int32) @ F.astype(np.int32)) > 0
        return [(self.strings[a], self.strings[b]) for a, b in np.argwhere(F & ~between)]


def substring_matrix(strings: Sequence[StringBrick]) -> np.ndarray:
    return np.array([[substring_leq(u, w) for w in strings] for u in strings], dtype=bool)


def brick_forcing_poset(n: int, cross_validate: bool | None = None) -> BrickPoset:
    """Forcing order on strings; checked against the labelled weak order when n <= 4."""
    strings = tuple(enumerate_strings(n))
    poset = BrickPoset(strings, substring_matrix(strings))
    if cross_validate is None:
        cross_validate = n <= 4
    if cross_validate:
        diff = forcing_vs_substring(n)
        if diff:
            raise CrossValidationError("forcing order vs substring order", diff)
    return poset


def forcing_vs_substring(n: int) -> list:
    """Pairs (u, w, forcing, substring) where the weak-order forcing and substring order disagree."""
    from .congruence import label_forcing
    from .weak_order import build_weak_order

    labels, G = label_forcing(build_weak_order(n))
    S = substring_matrix(labels)
    return [(str(labels[a]), str(labels[b]), bool(G[a, b]), bool(S[a, b]))
            for a, b in np.argwhere(G != S)]


def hit_strings(strings: Iterable[StringBrick], generators: Iterable[OrientedPath]) -> set:
    gens = list(generators)
    return {w for w in strings if any(path_acts_nonzero(p, w) for p in gens)}


def up_closure(paths: Iterable[OrientedPath], n: int) -> frozenset:
    paths = list(paths)
    return frozenset(q for q in enumerate_paths(n) if any(path_leq(p, q) for p in paths))


def ideal_congruence(n: int, generators: Iterable[OrientedPath], weak=None):
    """Congruence of the weak order contracting the arrows whose label contains a generator.

    Raises NotExactlyRealizableError if contracting those arrows forces an
    arrow whose label contains no generator.
    """
    from .congruence import label_congruence
    from .weak_order import build_weak_order

    W = build_weak_order(n) if weak is None else weak
    gens = list(generators)
    for p in gens:
        if not (1 <= p.lo and p.hi <= n):
            raise ValueError(f"path {p} does not live on A_{n}")
    labels = W.label_set
    hit = hit_strings(labels, gens)
    if hit != hit_strings(labels, up_closure(gens, n)):
        raise CrossValidationError("up-closing the generators changed the contracted strings", gens)
    return label_congruence(W, hit)


def path_ideals(n: int) -> list[frozenset]:
    """Every subset of the paths that is closed upward in the subpath order."""
    paths = enumerate_paths(n)
    above = {p: [q for q in paths if q != p and path_leq(p, q)] for p in paths}
    # decide longer paths first so that "everything above is in" is known
    order = sorted(paths, key=lambda p: -(p.hi - p.lo))
    out = []

    def rec(t, chosen):
        if t == len(order):
            out.append(frozenset(chosen))
            return
        p = order[t]
        rec(t + 1, chosen)
        if all(q in chosen for q in above[p]):
            chosen.add(p)
            rec(t + 1, chosen)
            chosen.discard(p)

    rec(0, set())
    return out


@dataclass(frozen=True)
class AlgebraicCount:
    count: int
    congruences: dict  # contracted-arrow key -> ideal


def count_algebraic_congruences(n: int, weak=None) -> AlgebraicCount:
    """Map every up-closed set of paths to its congruence and check they are all different."""
    from .weak_order import build_weak_order

    W = build_weak_order(n) if weak is None else weak
    seen = {}
    for ideal in path_ideals(n):
        theta = ideal_congruence(n, ideal, W)
        if theta.key in seen:
            raise InjectivityError(sorted(map(str, seen[theta.key])), sorted(map(str, ideal)))
        seen[theta.key] = ideal
    return AlgebraicCount(len(seen), seen)


def uniserial_of_double_ji(d) -> OrientedPath:
    'the path from i to j attached to d_{i,j}'
    return OrientedPath(d.i, d.j)

