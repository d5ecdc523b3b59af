"""Right weak order on S_{n+1}, labelled by strings of the doubled A_n quiver.

Convention: permutations are one-line words and right multiplication by the
generator ``s_l`` swaps the entries in positions ``l`` and ``l+1``, so
``123 . s2 = 132`` and ``132 . s1 = 312``. The arrows of the Hasse quiver are
``sigma -> sigma s_l`` for every descent ``sigma(l) > sigma(l+1)``. Element
indices are lexicographic ranks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

from .congruence import Congruence, congruence_closure
from .errors import CrossValidationError, SizeLimitError
from .poset_core import LabelledHasse, build_from_covers, join_irreducibles
from .typea_bricks import brick_label

#: largest rank built without force=True (S_7 has 5040 elements)
MAX_RANK = 6


@dataclass(frozen=True, order=True)
class Permutation:
    oneline: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "oneline", tuple(int(v) for v in self.oneline))
        if sorted(self.oneline) != list(range(1, len(self.oneline) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.oneline)}: {self.oneline}")

    @classmethod
    def parse(cls, text: "str | Sequence[int] | Permutation") -> "Permutation":
        'accepts "2413", "2,4,1,3", a sequence, or a Permutation'
        if isinstance(text, Permutation):
            return text
        if isinstance(text, str):
            s = text.strip()
            vals = s.split(",") if "," in s else list(s)
            return cls(tuple(int(v) for v in vals))
        return cls(tuple(text))

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(1, size + 1)))

    @classmethod
    def from_word(cls, size: int, word: Iterable[int]) -> "Permutation":
        'product s_{w1} s_{w2} ... evaluated left to right'
        p = cls.identity(size)
        for g in word:
            p = p.swap(g)
        return p

    def __len__(self):
        return len(self.oneline)

    def __str__(self):
        if len(self.oneline) <= 9:
            return "".join(map(str, self.oneline))
        return ",".join(map(str, self.oneline))

    def __call__(self, i: int) -> int:
        return self.oneline[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        'composition: (self * other)(i) = self(other(i))'
        return Permutation(tuple(self.oneline[v - 1] for v in other.oneline))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.oneline)
        for pos, v in enumerate(self.oneline, 1):
            inv[v - 1] = pos
        return Permutation(tuple(inv))

    def swap(self, ell: int) -> "Permutation":
        'right multiplication by s_ell'
        w = list(self.oneline)
        w[ell - 1], w[ell] = w[ell], w[ell - 1]
        return Permutation(tuple(w))

    @cached_property
    def descents(self) -> tuple[int, ...]:
        w = self.oneline
        return tuple(l for l in range(1, len(w)) if w[l - 1] > w[l])

    @cached_property
    def inversions(self) -> frozenset:
        'value pairs (a, b), a < b, with b written before a'
        w = self.oneline
        return frozenset((w[j], w[i]) for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])

    @property
    def length(self) -> int:
        return len(self.inversions)

    def inversion_mask(self) -> int:
        size = len(self.oneline)
        return sum(1 << ((a - 1) * size + (b - 1)) for a, b in self.inversions)


@dataclass(frozen=True, eq=False)
class WeakOrder(LabelledHasse):
    """Labelled weak order; ``perms[x]`` is the permutation at element x."""
    n: int = 0
    perms: tuple[Permutation, ...] = ()
    descent_of: dict = field(default_factory=dict)  # arrow -> descent position

    @cached_property
    def index(self) -> dict:
        return {p: k for k, p in enumerate(self.perms)}

    def element(self, perm) -> int:
        return self.index[Permutation.parse(perm)]

    def arrow(self, upper, lower) -> tuple[int, int]:
        return (self.element(upper), self.element(lower))

    def perm_arrow(self, cover) -> tuple[Permutation, Permutation]:
        return self.perms[cover[0]], self.perms[cover[1]]

    @property
    def identity(self) -> int:
        return 0

    @property
    def longest(self) -> int:
        return len(self.perms) - 1


def _check_rank(n: int, force: bool):
    if n < 1:
        raise ValueError("rank must be at least 1")
    if n > MAX_RANK and not force:
        raise SizeLimitError(f"rank {n} exceeds {MAX_RANK}; pass force=True")


@lru_cache(maxsize=8)
def build_weak_order(n: int, force: bool = False, verify: bool | None = None) -> WeakOrder:
    """Weak order on S_{n+1} with every arrow labelled by :func:`brick_label`.

    ``verify`` (default: n <= 5) re-derives the order from inversion sets and
    compares it with the closure of the arrows.
    """
    _check_rank(n, force)
    perms = [Permutation(p) for p in permutations(range(1, n + 2))]
    index = {p: k for k, p in enumerate(perms)}
    covers, labels, descent_of = [], {}, {}
    for k, p in enumerate(perms):
        for ell in p.descents:
            c = (k, index[p.swap(ell)])
            covers.append(c)
            labels[c] = brick_label(p.oneline, ell)
            descent_of[c] = ell
    L = build_from_covers(len(perms), covers, [str(p) for p in perms])
    if verify is None:
        verify = n <= 5
    if verify:
        bad = _inversion_order_mismatch(L, perms)
        if bad is not None:
            raise CrossValidationError("weak order vs inversion-set containment", bad)
    return WeakOrder(L, labels, {}, n, tuple(perms), descent_of)


def _inversion_order_mismatch(L, perms):
    masks = [p.inversion_mask() for p in perms]
    for x, mx in enumerate(masks):
        row = np.fromiter(((mx & ~my) == 0 for my in masks), dtype=bool, count=len(masks))
        if not np.array_equal(row, L.leq[x]):
            y = int(np.flatnonzero(row != L.leq[x])[0])
            return (str(perms[x]), str(perms[y]))
    return None


def join_irreducible_profile(sigma) -> int | None:
    'the descent position of sigma if it has exactly one descent'
    d = Permutation.parse(sigma).descents
    return d[0] if len(d) == 1 else None


@dataclass(frozen=True, order=True)
class DoubleJI:
    """The element d_{i,j}: s_i s_{i+1} ... s_j when i <= j, s_i s_{i-1} ... s_j when i >= j."""
    n: int
    i: int
    j: int

    def word(self) -> list[int]:
        step = 1 if self.j >= self.i else -1
        return list(range(self.i, self.j + step, step))

    @cached_property
    def permutation(self) -> Permutation:
        return Permutation.from_word(self.n + 1, self.word())

    def __str__(self):
        return f"d{self.i},{self.j}"

    def arrow(self, W: WeakOrder) -> tuple[int, int]:
        'the unique arrow leaving d_{i,j}'
        x = W.element(self.permutation)
        (y,) = W.lattice.lower_covers[x]
        return (x, y)


def double_join_irreducibles(n: int, W: WeakOrder | None = None) -> list[DoubleJI]:
    """All n^2 elements d_{i,j}, each checked to be doubly join-irreducible in the lattice."""
    W = build_weak_order(n) if W is None else W
    L = W.lattice
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d = DoubleJI(n, i, j)
            x = W.element(d.permutation)
            low = L.lower_covers[x]
            if len(low) != 1 or not (low[0] == L.bottom or len(L.lower_covers[low[0]]) == 1):
                raise CrossValidationError("not doubly join-irreducible", str(d.permutation))
            out.append(d)
    return out


def all_double_join_irreducibles(W: WeakOrder) -> list[int]:
    'elements whose unique lower cover is join-irreducible or the bottom (brute force)'
    L = W.lattice
    return [x for x in join_irreducibles(L)
            if L.lower_covers[x][0] == L.bottom or len(L.lower_covers[L.lower_covers[x][0]]) == 1]


def d_pattern_at(sigma, ell: int, i: int, j: int, window: bool = False) -> bool:
    """Is the descent at position ``ell`` a d_{i,j}-pattern?

    Literal reading: for i <= j the values i+1..j all occur in positions
    before ``ell``; for i >= j the values j+1..i all occur after ``ell + 1``.
    ``window=True`` also asks ``sigma(ell+1) <= min(i, j) < max(i, j) < sigma(ell)``,
    i.e. that the arrow's label covers the support of the path from i to j.
    """
    w = Permutation.parse(sigma).oneline
    if not w[ell - 1] > w[ell]:
        return False
    if window and not (w[ell] <= min(i, j) and w[ell - 1] > max(i, j)):
        return False
    ok = True
    if i <= j:
        ok &= set(range(i + 1, j + 1)) <= set(w[:ell - 1])
    if i >= j:
        ok &= set(range(j + 1, i + 1)) <= set(w[ell + 1:])
    return ok


def d_pattern_contains(sigma, i: int, j: int, window: bool = False) -> bool:
    p = Permutation.parse(sigma)
    return any(d_pattern_at(p, ell, i, j, window) for ell in p.descents)


@dataclass(frozen=True)
class PatternQuotient:
    """Pattern-rule prediction next to the congruence generated by D."""
    avoiders: tuple[int, ...]
    flagged: frozenset
    congruence: Congruence
    missing_bottoms: tuple[int, ...]  # bottoms of con(D) that contain a pattern
    extra_avoiders: tuple[int, ...]  # avoiders that are not bottoms
    flagged_not_contracted: tuple
    contracted_not_flagged: tuple

    @property
    def agrees(self) -> bool:
        return not (self.missing_bottoms or self.extra_avoiders
                    or self.flagged_not_contracted or self.contracted_not_flagged)

    def diff(self, W: WeakOrder) -> dict:
        name = lambda x: str(W.perms[x])
        arrows = lambda cs: [f"{name(u)}->{name(v)}" for u, v in cs]
        return {
            "bottoms_with_pattern": [name(x) for x in self.missing_bottoms],
            "avoiders_not_bottoms": [name(x) for x in self.extra_avoiders],
            "flagged_not_contracted": arrows(self.flagged_not_contracted),
            "contracted_not_flagged": arrows(self.contracted_not_flagged),
        }


def pattern_quotient(n: int, D: Iterable[DoubleJI], strict: bool = False,
                     W: WeakOrder | None = None, window: bool = False) -> PatternQuotient:
    """Avoiders of the d-patterns in D and pattern-flagged arrows, compared with con(D).

    With ``strict`` a disagreement raises CrossValidationError; otherwise it is
    returned in the result for reporting.
    """
    W = build_weak_order(n) if W is None else W
    D = list(D)
    avoiders = tuple(x for x, p in enumerate(W.perms)
                     if not any(d_pattern_contains(p, d.i, d.j, window) for d in D))
    flagged = frozenset(c for c in W.lattice.covers
                        if any(d_pattern_at(W.perms[c[0]], W.descent_of[c], d.i, d.j, window) for d in D))
    theta = congruence_closure(W.lattice, [d.arrow(W) for d in D])
    bottoms = set(theta.bottoms)
    res = PatternQuotient(
        avoiders, flagged, theta,
        tuple(sorted(bottoms - set(avoiders))),
        tuple(sorted(set(avoiders) - bottoms)),
        tuple(sorted(flagged - theta.contracted)),
        tuple(sorted(theta.contracted - flagged)),
    )
    if strict and not res.agrees:
        raise CrossValidationError(f"d-pattern rule vs con(D) for D={[str(d) for d in D]}", res.diff(W))
    return res


def longest_element_map(W: WeakOrder) -> np.ndarray:
    'x -> index of perms[x] * w0 (reverses the one-line word)'
    return np.array([W.index[Permutation(p.oneline[::-1])] for p in W.perms])
