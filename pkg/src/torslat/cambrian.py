"""Cambrian and biCambrian congruences of the weak order on S_{n+1}.

An orientation of the A_n diagram is stored as an integer with one bit per
edge: bit ``i-1`` describes the edge between i and i+1, and a set bit means
the arrow points ``i <- i+1``. Written as a binary string the last character
is the edge (1, 2), so for n = 3 the string ``"10"`` is ``1 -> 2 <- 3``.
The Coxeter element puts ``s_i`` before ``s_j`` whenever ``i <- j``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .congruence import Congruence, congruence_closure, is_congruence, label_congruence
from .errors import CrossValidationError, ParseError
from .poset_core import CheckResult, FiniteLattice
from .typea_bricks import StringBrick
from .weak_order import Permutation, WeakOrder, build_weak_order


@dataclass(frozen=True)
class Orientation:
    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.bits < 2 ** (self.n - 1):
            raise ValueError(f"bits {self.bits} do not describe an orientation of A_{self.n}")

    @classmethod
    def parse(cls, n: int, text: str) -> "Orientation":
        s = text.strip()
        if len(s) != n - 1 or set(s) - {"0", "1"}:
            raise ParseError(f"orientation of A_{n} needs {n - 1} binary digits, got {text!r}")
        return cls(n, int(s, 2) if s else 0)

    @classmethod
    def from_coxeter_word(cls, n: int, word) -> "Orientation":
        word = list(word)
        if sorted(word) != list(range(1, n + 1)):
            raise ValueError(f"{word} is not a Coxeter element of A_{n}")
        pos = {g: k for k, g in enumerate(word)}
        return cls(n, sum(1 << (i - 1) for i in range(1, n) if pos[i] < pos[i + 1]))

    @classmethod
    def all(cls, n: int) -> list["Orientation"]:
        return [cls(n, b) for b in range(2 ** (n - 1))]

    @classmethod
    def linear(cls, n: int) -> "Orientation":
        'the orientation of c = s_1 s_2 ... s_n'
        return cls(n, 2 ** (n - 1) - 1)

    @classmethod
    def bipartite_with_sink(cls, n: int, first_is_sink: bool = True) -> "Orientation":
        bits = sum(1 << (i - 1) for i in range(1, n) if (i % 2 == 1) == first_is_sink)
        return cls(n, bits)

    def __str__(self):
        return format(self.bits, f"0{self.n - 1}b") if self.n > 1 else ""

    def points_down(self, i: int) -> bool:
        'is the edge (i, i+1) oriented i <- i+1?'
        return bool(self.bits >> (i - 1) & 1)

    def arrows(self) -> list[tuple[int, int]]:
        '(tail, head) for each arrow of Q'
        return [(i + 1, i) if self.points_down(i) else (i, i + 1) for i in range(1, self.n)]

    def reverse(self) -> "Orientation":
        return Orientation(self.n, (2 ** (self.n - 1) - 1) ^ self.bits)

    @property
    def bipartite(self) -> bool:
        return all(self.points_down(i) != self.points_down(i + 1) for i in range(1, self.n - 1))

    @cached_property
    def coxeter_word(self) -> tuple[int, ...]:
        'a reduced word for c (smallest available generator first)'
        before = {i: set() for i in range(1, self.n + 1)}
        for tail, head in self.arrows():
            before[tail].add(head)  # s_head comes before s_tail
        ready = [i for i in before if not before[i]]
        heapq.heapify(ready)
        word, done = [], set()
        while ready:
            g = heapq.heappop(ready)
            word.append(g)
            done.add(g)
            for h in before:
                if h not in done and h not in ready and before[h] <= done:
                    heapq.heappush(ready, h)
        return tuple(word)

    def coxeter_text(self) -> str:
        return "".join(f"s{g}" for g in self.coxeter_word)

    def edge_along(self, i: int, forward: bool) -> bool:
        'does walking edge (i, i+1) in the given direction follow the arrow of Q?'
        return forward != self.points_down(i)


def cambrian_generators(n: int, Q: Orientation, W: WeakOrder | None = None) -> list[tuple[int, int]]:
    'arrows s_j s_i -> s_j of the weak order, one for each arrow j -> i of Q'
    W = build_weak_order(n) if W is None else W
    out = []
    for j, i in Q.arrows():
        upper = Permutation.from_word(n + 1, [j, i])
        lower = Permutation.from_word(n + 1, [j])
        out.append(W.arrow(upper, lower))
    return out


def along_count(Q: Orientation, w: StringBrick) -> tuple[int, int]:
    '(edges of w walked along Q, edges walked against Q)'
    along = sum(Q.edge_along(w.lo + k, d) for k, d in enumerate(w.dirs))
    return along, len(w.dirs) - along


def cambrian_contracted_strings(W: WeakOrder, Q: Orientation) -> set:
    'strings that walk at least one edge in the direction of its arrow in Q'
    return {w for w in W.label_set if along_count(Q, w)[0] > 0}


def cambrian_congruence(n: int, Q: Orientation, W: WeakOrder | None = None) -> Congruence:
    """con of the Cambrian generators, checked against the string rule."""
    W = build_weak_order(n) if W is None else W
    theta = congruence_closure(W.lattice, cambrian_generators(n, Q, W))
    by_strings = label_congruence(W, cambrian_contracted_strings(W, Q))
    if theta != by_strings:
        diff = sorted(f"{W.perms[u]}->{W.perms[v]}" for u, v in theta.contracted ^ by_strings.contracted)
        raise CrossValidationError(f"Cambrian congruence for {Q.coxeter_text()}", diff)
    return theta


def _length_up(p: Permutation, g: int) -> bool:
    return p(g) < p(g + 1)


def sortable_by_definition(n: int, Q: Orientation) -> set[Permutation]:
    """Elements with a reduced word c_{K1} c_{K2} ... for nested nonempty subsets K1 >= K2 >= ...

    c_K is the subword of the fixed word for c using the letters in K.
    """
    c = Q.coxeter_word
    start = Permutation.identity(n + 1)
    found = {start}
    seen = set()
    stack = [(start, frozenset(c))]
    while stack:
        p, allowed = stack.pop()
        if (p, allowed) in seen:
            continue
        seen.add((p, allowed))
        letters = [g for g in c if g in allowed]
        for mask in range(1, 2 ** len(letters)):
            K = [g for k, g in enumerate(letters) if mask >> k & 1]
            q = p
            for g in K:
                if not _length_up(q, g):
                    break
                q = q.swap(g)
            else:
                found.add(q)
                stack.append((q, frozenset(K)))
    return found


def is_sublattice(L: FiniteLattice, subset) -> CheckResult:
    """Closure under the ambient join and meet. Witness ``(op, x, y)``."""
    members = np.zeros(L.n_elements, dtype=bool)
    members[list(subset)] = True
    idx = np.flatnonzero(members)
    for op, T in (("meet", L.meet_table), ("join", L.join_table)):
        sub = T[np.ix_(idx, idx)]
        bad = np.argwhere(~members[sub])
        if bad.size:
            a, b = bad[0]
            return CheckResult(False, (op, int(idx[a]), int(idx[b])))
    return CheckResult(True)


def sortable_bottoms(n: int, Q: Orientation, W: WeakOrder | None = None) -> list[Permutation]:
    """Class bottoms of the Cambrian congruence, checked against the sortable oracle."""
    W = build_weak_order(n) if W is None else W
    theta = cambrian_congruence(n, Q, W)
    bottoms = {W.perms[x] for x in theta.bottoms}
    oracle = sortable_by_definition(n, Q)
    if bottoms != oracle:
        raise CrossValidationError(
            f"sortable elements for {Q.coxeter_text()}",
            {"bottoms_only": sorted(map(str, bottoms - oracle)),
             "sortable_only": sorted(map(str, oracle - bottoms))})
    return sorted(bottoms)


def verify_sublattice(n: int, Q: Orientation, W: WeakOrder | None = None) -> CheckResult:
    W = build_weak_order(n) if W is None else W
    return is_sublattice(W.lattice, [W.index[p] for p in sortable_bottoms(n, Q, W)])


def bicambrian_contracted_strings(W: WeakOrder, Q: Orientation) -> set:
    'strings walking some edge along Q and some edge against Q'
    return {w for w in W.label_set if min(along_count(Q, w)) > 0}


def short_loewy_strings(W: WeakOrder) -> set:
    'strings whose directions alternate, i.e. no path of length 2 inside'
    return {w for w in W.label_set if all(a != b for a, b in zip(w.dirs, w.dirs[1:]))}


def bicambrian(n: int, Q: Orientation, W: WeakOrder | None = None) -> Congruence:
    """Meet of the Cambrian congruences for Q and its reverse.

    For bipartite Q the result is also computed from the strings that contain
    a path of length 2 and the two are compared.
    """
    W = build_weak_order(n) if W is None else W
    theta = cambrian_congruence(n, Q, W).meet(cambrian_congruence(n, Q.reverse(), W))
    ok = is_congruence(W.lattice, theta.class_of)
    if not ok:
        raise CrossValidationError("meet of congruences is not a congruence", ok.witness)
    if Q.bipartite:
        doomed = set(W.label_set) - short_loewy_strings(W)
        by_strings = label_congruence(W, doomed)
        if by_strings != theta:
            diff = sorted(f"{W.perms[u]}->{W.perms[v]}" for u, v in theta.contracted ^ by_strings.contracted)
            raise CrossValidationError(f"biCambrian congruence for {Q.coxeter_text()}", diff)
    return theta
