"""Finite lattices given by their Hasse quiver.

Elements are the integers ``0..N-1``. A cover ``(u, v)`` is an arrow
``u -> v`` of the Hasse quiver, i.e. ``u`` covers ``v``. The order relation is
kept as a read-only boolean matrix ``leq`` with ``leq[x, y]`` iff ``x <= y``,
and joins/meets are tabulated once at construction, so every lattice
operation afterwards is a table lookup.
"""
from __future__ import annotations

import graphlib
import os
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import (CycleError, NotComparableError, NotLatticeError,
                     NotReducedError, SizeLimitError)

Cover = tuple[int, int]

#: default bound for the cubic-time checks; override with TORSLAT_SIZE_LIMIT
DEFAULT_SIZE_LIMIT = 5040


def size_limit() -> int:
    return int(os.environ.get("TORSLAT_SIZE_LIMIT", DEFAULT_SIZE_LIMIT))


def check_size(n: int, what: str, force: bool = False, limit: int | None = None) -> None:
    limit = size_limit() if limit is None else limit
    if n > limit and not force:
        raise SizeLimitError(
            f"{what} refuses {n} elements (limit {limit}); pass force=True "
            "or raise TORSLAT_SIZE_LIMIT")


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a structural check. Truthy iff the check passed."""
    ok: bool
    witness: Any = None
    detail: Any = None

    def __bool__(self) -> bool:
        return self.ok


class FiniteLattice:
    """Immutable finite lattice. Build instances with :func:`build_from_covers`."""

    def __init__(self, n, covers, names, leq, order, join_table, meet_table):
        self.n_elements = n
        self.covers: tuple[Cover, ...] = covers
        self.names: tuple[str, ...] = names
        self.leq: np.ndarray = leq
        self.order: tuple[int, ...] = order  # a linear extension, bottom first
        self.join_table: np.ndarray = join_table
        self.meet_table: np.ndarray = meet_table
        lower = [[] for _ in range(n)]
        upper = [[] for _ in range(n)]
        for u, v in covers:
            lower[u].append(v)
            upper[v].append(u)
        self.lower_covers = tuple(tuple(sorted(x)) for x in lower)
        self.upper_covers = tuple(tuple(sorted(x)) for x in upper)
        self.cover_index = {c: i for i, c in enumerate(covers)}

    def __len__(self):
        return self.n_elements

    def __repr__(self):
        return f"FiniteLattice(n={self.n_elements}, covers={len(self.covers)})"

    @cached_property
    def bottom(self) -> int:
        return self.order[0]

    @cached_property
    def top(self) -> int:
        return self.order[-1]

    @cached_property
    def cover_array(self) -> np.ndarray:
        'covers as an (m, 2) int array, rows in cover-index order'
        return np.array(self.covers, dtype=np.int64).reshape(-1, 2)

    def index(self, name: str) -> int:
        return self._name_index[name]

    @cached_property
    def _name_index(self):
        return {nm: i for i, nm in enumerate(self.names)}

    def le(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y])

    def join(self, x: int, y: int) -> int:
        return int(self.join_table[x, y])

    def meet(self, x: int, y: int) -> int:
        return int(self.meet_table[x, y])

    def join_set(self, elements: Iterable[int]) -> int:
        acc = self.bottom
        for x in elements:
            acc = int(self.join_table[acc, x])
        return acc

    def meet_set(self, elements: Iterable[int]) -> int:
        acc = self.top
        for x in elements:
            acc = int(self.meet_table[acc, x])
        return acc

    def dual(self) -> "FiniteLattice":
        'order-dual lattice, materialized by reversing every cover'
        covers = tuple(sorted((v, u) for u, v in self.covers))
        leq = self.leq.T.copy()
        leq.setflags(write=False)
        return FiniteLattice(self.n_elements, covers, self.names, leq,
                             tuple(reversed(self.order)), self.meet_table, self.join_table)

    def up_set(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.leq[x])

    def down_set(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.leq[:, x])


def _linear_extension(n: int, lower: Sequence[Sequence[int]]) -> list[int]:
    sorter = graphlib.TopologicalSorter({x: lower[x] for x in range(n)})
    try:
        return list(sorter.static_order())
    except graphlib.CycleError as exc:
        raise CycleError(exc.args[1]) from None


def _bound_table(leq: np.ndarray, ups: Sequence[Sequence[int]], order_desc: Sequence[int],
                 kind: str) -> np.ndarray:
    """Tabulate joins (or meets, on the dual data) by descending from the top.

    If ``y`` is not below ``x`` then ``x v y`` lies above some upper cover ``x'``
    of ``x``, so it is the least of the joins ``x' v y``. If those candidates have
    no least element, ``x`` and ``y`` have no join at all.
    """
    n = leq.shape[0]
    dtype = np.int16 if n < 2 ** 15 else np.int32
    table = np.full((n, n), -1, dtype=dtype)
    for x in order_desc:
        row = np.full(n, -1, dtype=np.int64)
        below = leq[:, x]
        row[below] = x
        todo = ~below
        if todo.any():
            if not ups[x]:
                y = int(np.flatnonzero(todo)[0])
                raise NotLatticeError((x, y), kind)
            cands = table[list(ups[x])][:, todo].astype(np.int64)  # (deg, k)
            if (cands < 0).any():
                # missing bound further up propagates
                col = int(np.flatnonzero((cands < 0).any(axis=0))[0])
                raise NotLatticeError((x, int(np.flatnonzero(todo)[col])), kind)
            deg = cands.shape[0]
            least = np.full(cands.shape[1], -1, dtype=np.int64)
            for k in range(deg - 1, -1, -1):
                ok = np.ones(cands.shape[1], dtype=bool)
                for l in range(deg):
                    if l != k:
                        ok &= leq[cands[k], cands[l]]
                least[ok] = cands[k][ok]
            if (least < 0).any():
                col = int(np.flatnonzero(least < 0)[0])
                y = int(np.flatnonzero(todo)[col])
                raise NotLatticeError((x, y), kind, sorted(set(cands[:, col].tolist())))
            row[todo] = least
        table[x] = row
    table.setflags(write=False)
    return table


def build_from_covers(n: int, covers: Iterable[Sequence[int]],
                      names: Sequence[str] | None = None) -> FiniteLattice:
    """Validate a Hasse quiver and return the lattice it describes.

    Raises CycleError, NotReducedError or NotLatticeError with a witness when
    the arrows do not form the Hasse quiver of a lattice.
    """
    if n < 1:
        raise ValueError("a lattice needs at least one element")
    cover_list = [(int(u), int(v)) for u, v in covers]
    seen = set()
    for u, v in cover_list:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"cover {(u, v)} references an element outside 0..{n - 1}")
        if u == v:
            raise CycleError([u, u])
        if (u, v) in seen:
            raise ValueError(f"duplicate cover {(u, v)}")
        seen.add((u, v))
    if names is None:
        names = [str(i) for i in range(n)]
    names = tuple(str(s) for s in names)
    if len(names) != n:
        raise ValueError(f"expected {n} names, got {len(names)}")

    lower = [[] for _ in range(n)]
    upper = [[] for _ in range(n)]
    for u, v in cover_list:
        lower[u].append(v)
        upper[v].append(u)
    order = _linear_extension(n, lower)

    down = np.zeros((n, n), dtype=bool)
    for x in order:
        down[x, x] = True
        for v in lower[x]:
            down[x] |= down[v]
    leq = np.ascontiguousarray(down.T)  # leq[y, x] iff y <= x
    leq.setflags(write=False)

    for u in range(n):
        ls = lower[u]
        if len(ls) > 1:
            sub = leq[np.ix_(ls, ls)].copy()
            np.fill_diagonal(sub, False)
            if sub.any():
                i, j = map(int, np.argwhere(sub)[0])
                raise NotReducedError((u, ls[i]), ls[j])

    join_table = _bound_table(leq, upper, order[::-1], "join")
    meet_table = _bound_table(np.ascontiguousarray(leq.T), lower, order, "meet")
    return FiniteLattice(n, tuple(sorted(cover_list)), names, leq, tuple(order),
                         join_table, meet_table)


def from_leq(leq: np.ndarray, names: Sequence[str] | None = None) -> FiniteLattice:
    'lattice from a full order matrix; covers are recovered by transitive reduction'
    leq = np.asarray(leq, dtype=bool)
    lt = leq.copy()
    np.fill_diagonal(lt, False)
    between = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
    cov = lt & ~between
    covers = [(int(u), int(v)) for v, u in np.argwhere(cov)]
    return build_from_covers(leq.shape[0], covers, names)


def join_irreducibles(L: FiniteLattice) -> list[int]:
    return [x for x in range(L.n_elements) if len(L.lower_covers[x]) == 1]


def meet_irreducibles(L: FiniteLattice) -> list[int]:
    return [x for x in range(L.n_elements) if len(L.upper_covers[x]) == 1]


def j_star(L: FiniteLattice, j: int) -> int:
    (low,) = L.lower_covers[j]
    return low


def m_star(L: FiniteLattice, m: int) -> int:
    (up,) = L.upper_covers[m]
    return up


def interval(L: FiniteLattice, x: int, y: int) -> tuple[FiniteLattice, list[int]]:
    """The interval ``[x, y]`` as a lattice, plus the map new index -> old index."""
    if not L.leq[x, y]:
        raise NotComparableError(f"{x} is not below {y}")
    members = np.flatnonzero(L.leq[x] & L.leq[:, y]).tolist()
    pos = {e: i for i, e in enumerate(members)}
    covers = [(pos[u], pos[v]) for u, v in L.covers if u in pos and v in pos]
    sub = build_from_covers(len(members), covers, [L.names[e] for e in members])
    return sub, members


def is_semidistributive(L: FiniteLattice, force: bool = False) -> CheckResult:
    """Brute-force meet- and join-semidistributivity over all triples.

    Witness on failure: ``(kind, x, y, z)`` with ``x^y = x^z`` but
    ``x^(y v z) != x^y`` for kind ``"meet"`` (dually for ``"join"``).
    """
    check_size(L.n_elements, "is_semidistributive", force)
    J = L.join_table.astype(np.int64)
    M = L.meet_table.astype(np.int64)
    for kind, inner, outer in (("meet", M, J), ("join", J, M)):
        for x in range(L.n_elements):
            r = inner[x]
            same = r[:, None] == r[None, :]
            bad = same & (r[outer] != r[:, None])
            if bad.any():
                y, z = map(int, np.argwhere(bad)[0])
                return CheckResult(False, (kind, x, y, z))
    return CheckResult(True)


@dataclass(frozen=True, order=True)
class Polygon:
    """An interval whose interior is two disjoint nonempty chains.

    ``left`` and ``right`` list the interior chains from the top down.
    """
    bottom: int
    top: int
    left: tuple[int, ...]
    right: tuple[int, ...]

    def side_paths(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return ((self.top, *self.left, self.bottom), (self.top, *self.right, self.bottom))

    def arrows(self) -> list[Cover]:
        out = []
        for path in self.side_paths():
            out.extend(zip(path, path[1:]))
        return out

    @property
    def size(self) -> int:
        return len(self.left) + len(self.right) + 2


def as_polygon(L: FiniteLattice, x: int, y: int) -> Polygon | None:
    'the interval [x, y] as a Polygon, or None if it is not one'
    if x == y or not L.leq[x, y]:
        return None
    inside = L.leq[x] & L.leq[:, y]
    ups = [u for u in L.upper_covers[x] if inside[u]]
    lows = [v for v in L.lower_covers[y] if inside[v]]
    if len(ups) != 2 or len(lows) != 2:
        return None
    chains = []
    seen = set()
    for start in lows:
        chain = []
        cur = start
        while cur != x:
            if cur in seen or cur == y:
                return None
            seen.add(cur)
            chain.append(cur)
            nxt_up = [u for u in L.upper_covers[cur] if inside[u]]
            nxt = [v for v in L.lower_covers[cur] if inside[v]]
            if len(nxt_up) != 1 or len(nxt) != 1:
                return None
            cur = nxt[0]
        if not chain:
            return None
        chains.append(tuple(chain))
    if len(seen) != int(inside.sum()) - 2:
        return None
    left, right = sorted(chains)
    return Polygon(x, y, left, right)


def _polygon_candidates(L: FiniteLattice):
    for x in range(L.n_elements):
        for y1, y2 in combinations(L.upper_covers[x], 2):
            yield (x, L.join(y1, y2)), ("upper", x, y1, y2)
        for x1, x2 in combinations(L.lower_covers[x], 2):
            yield (L.meet(x1, x2), x), ("lower", x, x1, x2)


def polygons(L: FiniteLattice) -> list[Polygon]:
    found = {}
    for (lo, hi), _ in _polygon_candidates(L):
        if (lo, hi) not in found:
            found[(lo, hi)] = as_polygon(L, lo, hi)
    return sorted(p for p in found.values() if p is not None)


def is_polygonal(L: FiniteLattice) -> CheckResult:
    """Both polygon conditions for every pair of arrows sharing an endpoint.

    Witness on failure: ``(kind, x, a, b)`` naming the two arrows at ``x``.
    """
    cache = {}
    for key, why in _polygon_candidates(L):
        if key not in cache:
            cache[key] = as_polygon(L, *key)
        if cache[key] is None:
            return CheckResult(False, why, key)
    return CheckResult(True, detail=len(cache))


def hasse_degree(L: FiniteLattice, x: int) -> int:
    return len(L.lower_covers[x]) + len(L.upper_covers[x])


def is_hasse_regular(L: FiniteLattice) -> CheckResult:
    """``detail`` holds the common degree; ``witness`` the degree histogram otherwise."""
    degrees = [hasse_degree(L, x) for x in range(L.n_elements)]
    if len(set(degrees)) == 1:
        return CheckResult(True, detail=degrees[0])
    hist = {}
    for d in degrees:
        hist[d] = hist.get(d, 0) + 1
    return CheckResult(False, witness=dict(sorted(hist.items())), detail=degrees)


@dataclass(frozen=True, eq=False)
class LabelledHasse:
    """A lattice whose Hasse arrows each carry one label.

    ``label_attrs`` maps a label to a set of flags, e.g. ``"survives_I"``.
    """
    lattice: FiniteLattice
    labels: Mapping[Cover, Hashable]
    label_attrs: Mapping[Hashable, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        covers = set(self.lattice.covers)
        missing = covers - set(self.labels)
        extra = set(self.labels) - covers
        if missing or extra:
            raise ValueError(f"labels must cover every arrow exactly "
                             f"(missing {sorted(missing)[:5]}, not arrows {sorted(extra)[:5]})")

    def label(self, cover: Cover) -> Hashable:
        return self.labels[cover]

    @cached_property
    def label_set(self) -> list:
        return sorted(set(self.labels.values()), key=_label_key)

    @cached_property
    def arrows_by_label(self) -> dict:
        out = {}
        for c in self.lattice.covers:
            out.setdefault(self.labels[c], []).append(c)
        return out

    def labels_with(self, attr: str) -> set:
        return {lab for lab, flags in self.label_attrs.items() if attr in flags}


def _label_key(label):
    # labels may mix types only across lattices, never within one
    return (type(label).__name__, label)


def is_lattice(n: int, covers: Iterable[Sequence[int]]) -> CheckResult:
    'non-raising variant of build_from_covers for quick screening'
    try:
        build_from_covers(n, covers)
    except (CycleError, NotReducedError, NotLatticeError) as exc:
        return CheckResult(False, exc)
    return CheckResult(True)


def chain(k: int) -> FiniteLattice:
    'chain 0 < 1 < ... < k-1'
    return build_from_covers(k, [(i + 1, i) for i in range(k - 1)])


def boolean_lattice(rank: int) -> FiniteLattice:
    'subsets of a rank-element set, element = bitmask'
    n = 1 << rank
    covers = [(s, s & ~(1 << b)) for s in range(n) for b in range(rank) if s >> b & 1]
    names = ["{" + ",".join(str(b + 1) for b in range(rank) if s >> b & 1) + "}" for s in range(n)]
    return build_from_covers(n, covers, names)


def m3() -> FiniteLattice:
    'the diamond M3: bottom 0, atoms 1,2,3, top 4'
    return build_from_covers(5, [(1, 0), (2, 0), (3, 0), (4, 1), (4, 2), (4, 3)])


def isomorphism(A: FiniteLattice, B: FiniteLattice, labels_a: Mapping | None = None,
                labels_b: Mapping | None = None) -> dict | None:
    """An isomorphism of Hasse quivers A -> B (label-preserving if labels are given)."""
    import networkx as nx
    from networkx.algorithms.isomorphism import DiGraphMatcher

    if A.n_elements != B.n_elements or len(A.covers) != len(B.covers):
        return None
    ga, gb = nx.DiGraph(), nx.DiGraph()
    ga.add_nodes_from(range(A.n_elements))
    gb.add_nodes_from(range(B.n_elements))
    for G, L, labs in ((ga, A, labels_a), (gb, B, labels_b)):
        for c in L.covers:
            G.add_edge(*c, label=None if labs is None else str(labs[c]))
    if labels_a is None or labels_b is None:
        matcher = DiGraphMatcher(ga, gb)
    else:
        matcher = DiGraphMatcher(ga, gb, edge_match=lambda e, f: e["label"] == f["label"])
    if matcher.is_isomorphic():
        return dict(matcher.mapping)
    return None
