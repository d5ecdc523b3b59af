"""Lattice congruences on finite lattices.

A congruence is stored as a class-id array over the elements; the class id
of ``x`` is the least element of its class (so ids double as ``pi_down``).
Because a congruence of a finite lattice is determined by the Hasse arrows it
contracts, comparisons and hashing go through the contracted-arrow mask.
"""
from __future__ import annotations

import weakref
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import (CrossValidationError, NotExactlyRealizableError,
                     NotPolygonalError, SizeLimitError)
from .poset_core import (CheckResult, FiniteLattice, LabelledHasse, check_size,
                         from_leq, is_polygonal, is_semidistributive,
                         join_irreducibles, meet_irreducibles, polygons)


class Congruence:
    """A congruence of ``lattice`` given by class ids (class minima)."""

    def __init__(self, lattice: FiniteLattice, class_of: np.ndarray, seeds=()):
        self.lattice = lattice
        class_of = np.asarray(class_of, dtype=np.int64)
        class_of.setflags(write=False)
        self.class_of = class_of
        self.non_cover_seeds = tuple(seeds)  # seed pairs that were not arrows

    @classmethod
    def from_partition(cls, lattice: FiniteLattice, partition) -> "Congruence":
        """Accepts a block list or a per-element label sequence; does not validate."""
        return cls(lattice, _canonical_ids(lattice, _partition_labels(lattice, partition)))

    @classmethod
    def trivial(cls, lattice: FiniteLattice) -> "Congruence":
        return cls(lattice, np.arange(lattice.n_elements))

    @classmethod
    def full(cls, lattice: FiniteLattice) -> "Congruence":
        return cls(lattice, np.full(lattice.n_elements, lattice.bottom))

    @cached_property
    def contracted_mask(self) -> np.ndarray:
        cov = self.lattice.cover_array
        mask = self.class_of[cov[:, 0]] == self.class_of[cov[:, 1]]
        mask.setflags(write=False)
        return mask

    @cached_property
    def contracted(self) -> frozenset:
        covers = self.lattice.covers
        return frozenset(covers[i] for i in np.flatnonzero(self.contracted_mask))

    @cached_property
    def key(self) -> bytes:
        return np.packbits(self.contracted_mask).tobytes()

    @cached_property
    def classes(self) -> list[tuple[int, ...]]:
        blocks = {}
        for x, c in enumerate(self.class_of.tolist()):
            blocks.setdefault(c, []).append(x)
        return [tuple(b) for _, b in sorted(blocks.items())]

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def pi_down(self) -> np.ndarray:
        return self.class_of

    @cached_property
    def pi_up(self) -> np.ndarray:
        L = self.lattice
        up = np.empty(L.n_elements, dtype=np.int64)
        for block in self.classes:
            top = L.join_set(block)
            up[list(block)] = top
        up.setflags(write=False)
        return up

    @cached_property
    def bottoms(self) -> list[int]:
        return sorted(set(self.class_of.tolist()))

    def equivalent(self, x: int, y: int) -> bool:
        return bool(self.class_of[x] == self.class_of[y])

    def is_contracted(self, cover) -> bool:
        return bool(self.contracted_mask[self.lattice.cover_index[tuple(cover)]])

    def __eq__(self, other):
        if not isinstance(other, Congruence):
            return NotImplemented
        return self.lattice is other.lattice and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __le__(self, other: "Congruence") -> bool:
        'refinement: every arrow contracted here is contracted by other'
        return bool(np.all(other.contracted_mask[self.contracted_mask]))

    def __repr__(self):
        return (f"Congruence({self.n_classes} classes, "
                f"{int(self.contracted_mask.sum())}/{len(self.lattice.covers)} arrows contracted)")

    def meet(self, other: "Congruence") -> "Congruence":
        'common refinement, i.e. intersection of the two relations'
        pairs = self.class_of * self.lattice.n_elements + other.class_of
        _, labels = np.unique(pairs, return_inverse=True)
        return Congruence(self.lattice, _canonical_ids(self.lattice, labels))

    def join(self, other: "Congruence") -> "Congruence":
        seeds = [self.lattice.covers[i] for i in np.flatnonzero(other.contracted_mask)]
        return congruence_closure(self.lattice, seeds, start=self)


def _partition_labels(L: FiniteLattice, partition) -> np.ndarray:
    if isinstance(partition, np.ndarray) or (
            len(partition) == L.n_elements and all(np.isscalar(p) for p in partition)):
        labels = np.asarray(partition)
        if labels.shape != (L.n_elements,):
            raise ValueError("label array must have one entry per element")
        _, inv = np.unique(labels, return_inverse=True)
        return inv
    labels = np.full(L.n_elements, -1, dtype=np.int64)
    for b, block in enumerate(partition):
        for x in block:
            if labels[x] != -1:
                raise ValueError(f"element {x} lies in two blocks")
            labels[x] = b
    if (labels < 0).any():
        raise ValueError(f"element {int(np.flatnonzero(labels < 0)[0])} is in no block")
    return labels


def _canonical_ids(L: FiniteLattice, labels: np.ndarray) -> np.ndarray:
    'relabel each block by its smallest element in the order (falls back to a meet)'
    labels = np.asarray(labels)
    ids = np.empty(L.n_elements, dtype=np.int64)
    for lab in np.unique(labels):
        members = np.flatnonzero(labels == lab)
        ids[members] = L.meet_set(members.tolist())
    return ids


def congruence_closure(L: FiniteLattice, seed_pairs: Iterable[Sequence[int]],
                       start: Congruence | None = None) -> Congruence:
    """The least congruence identifying every seed pair (and refining nothing in ``start``).

    Worklist fixed point: every merge ``a ~ b`` queues the check that
    ``a v z ~ b v z`` and ``a ^ z ~ b ^ z`` for all ``z``. Checking the pairs that
    were actually merged suffices, since they generate the equivalence.
    """
    n = L.n_elements
    J, M = L.join_table, L.meet_table
    lab = np.arange(n) if start is None else start.class_of.copy()
    lab = np.array(lab, dtype=np.int64)
    work = []
    odd = []

    def merge(a, b):
        la, lb = lab[a], lab[b]
        if la != lb:
            lab[lab == lb] = la
            work.append((a, b))

    for a, b in seed_pairs:
        a, b = int(a), int(b)
        if (a, b) not in L.cover_index:
            odd.append((a, b))
        merge(a, b)
    while work:
        a, b = work.pop()
        for T in (J, M):
            ra, rb = T[a], T[b]
            for z in np.flatnonzero(lab[ra] != lab[rb]):
                merge(int(ra[z]), int(rb[z]))
    return Congruence(L, _canonical_ids(L, lab), odd)


def is_congruence(L: FiniteLattice, partition) -> CheckResult:
    """Meet/join compatibility. Witness ``(x, y, z, op)`` with x ~ y but x op z !~ y op z."""
    lab = _partition_labels(L, partition)
    first = {}
    for x in range(L.n_elements):
        first.setdefault(int(lab[x]), x)
    for x in range(L.n_elements):
        r = first[int(lab[x])]
        if r == x:
            continue
        for op, T in (("join", L.join_table), ("meet", L.meet_table)):
            bad = np.flatnonzero(lab[T[r]] != lab[T[x]])
            if bad.size:
                return CheckResult(False, (r, x, int(bad[0]), op))
    return CheckResult(True)


def classes_are_intervals(theta: Congruence) -> CheckResult:
    L = theta.lattice
    for block in theta.classes:
        lo, hi = theta.pi_down[block[0]], theta.pi_up[block[0]]
        span = np.flatnonzero(L.leq[lo] & L.leq[:, hi]).tolist()
        if span != list(block):
            return CheckResult(False, (int(lo), int(hi), block))
    return CheckResult(True)


_principal_cache: "weakref.WeakKeyDictionary[FiniteLattice, list]" = weakref.WeakKeyDictionary()


def principal_congruences(L: FiniteLattice) -> list[Congruence]:
    'con(q) for every arrow q, in cover-index order (memoised per lattice)'
    cached = _principal_cache.get(L)
    if cached is None:
        cached = [congruence_closure(L, [c]) for c in L.covers]
        _principal_cache[L] = cached
    return cached


def forcing(L: FiniteLattice) -> np.ndarray:
    """``F[q, r]`` iff arrow q forces arrow r (indices into ``L.covers``)."""
    F = np.array([theta.contracted_mask for theta in principal_congruences(L)], dtype=bool)
    return F.reshape(len(L.covers), len(L.covers))


def _preorder_classes(F: np.ndarray) -> list[tuple[int, ...]]:
    equiv = F & F.T
    seen = np.zeros(F.shape[0], dtype=bool)
    out = []
    for q in range(F.shape[0]):
        if not seen[q]:
            members = np.flatnonzero(equiv[q])
            seen[members] = True
            out.append(tuple(members.tolist()))
    return out


def forcing_classes(L: FiniteLattice) -> list[frozenset]:
    'partition of the arrows into mutually forcing classes'
    return [frozenset(L.covers[i] for i in block) for block in _preorder_classes(forcing(L))]


def transitive_closure(adj: np.ndarray) -> np.ndarray:
    'reflexive-transitive closure of a boolean adjacency matrix'
    R = adj.astype(bool) | np.eye(adj.shape[0], dtype=bool)
    while True:
        nxt = (R.astype(np.int32) @ R.astype(np.int32)) > 0
        if np.array_equal(nxt, R):
            return R
        R = nxt


def polygon_forcing(L: FiniteLattice) -> np.ndarray:
    """Forcing computed locally from polygons, same indexing as :func:`forcing`.

    In each polygon the top arrow of one side and the bottom arrow of the other
    side force each other, and both top arrows force every arrow of the two
    sides that is neither a top nor a bottom arrow.
    """
    check = is_polygonal(L)
    if not check:
        raise NotPolygonalError(f"not polygonal at {check.witness}")
    idx = L.cover_index
    adj = np.zeros((len(L.covers), len(L.covers)), dtype=bool)
    for P in polygons(L):
        left, right = P.side_paths()
        tl, bl = idx[left[0], left[1]], idx[left[-2], left[-1]]
        tr, br = idx[right[0], right[1]], idx[right[-2], right[-1]]
        adj[tl, br] = adj[br, tl] = True
        adj[tr, bl] = adj[bl, tr] = True
        for path in (left, right):
            for u, v in zip(path[1:-2], path[2:-1]):
                adj[tl, idx[u, v]] = adj[tr, idx[u, v]] = True
    return transitive_closure(adj)


@dataclass(frozen=True)
class QuotientLattice:
    """``L / theta`` realised on the class minima.

    ``section[k]`` is the original element standing for quotient element k,
    ``project[x]`` the quotient element of x.
    """
    lattice: FiniteLattice
    congruence: Congruence
    section: tuple[int, ...]
    project: np.ndarray

    @property
    def pi_down(self) -> np.ndarray:
        return self.congruence.pi_down

    @property
    def pi_up(self) -> np.ndarray:
        return self.congruence.pi_up

    def check_morphism(self) -> CheckResult:
        'the projection preserves joins and meets (exhaustive over pairs)'
        P = self.project
        L, Q = self.congruence.lattice, self.lattice
        for op, T, QT in (("join", L.join_table, Q.join_table), ("meet", L.meet_table, Q.meet_table)):
            lhs = P[T]
            rhs = QT[P[:, None], P[None, :]]
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                x, y = map(int, bad[0])
                return CheckResult(False, (op, x, y))
        return CheckResult(True)


def quotient(L: FiniteLattice, theta: Congruence, check: bool = True) -> QuotientLattice:
    section = tuple(theta.bottoms)
    pos = {x: k for k, x in enumerate(section)}
    project = np.array([pos[c] for c in theta.class_of.tolist()], dtype=np.int64)
    project.setflags(write=False)
    sub = L.leq[np.ix_(section, section)]
    Q = from_leq(sub, [L.names[x] for x in section])
    result = QuotientLattice(Q, theta, section, project)
    if check:
        ok = result.check_morphism()
        if not ok:
            raise CrossValidationError("quotient projection is not a lattice morphism", ok.witness)
    return result


def labelled_quotient(LH: LabelledHasse, theta: Congruence) -> tuple[QuotientLattice, LabelledHasse]:
    """Quotient with each arrow labelled by the uncontracted arrows of L lying over it.

    Raises CrossValidationError if the arrows over one quotient arrow disagree.
    """
    L = LH.lattice
    quo = quotient(L, theta)
    P = quo.project
    seen = {}
    for u, v in L.covers:
        a, b = int(P[u]), int(P[v])
        if a != b:
            seen.setdefault((a, b), set()).add(LH.labels[u, v])
    labels = {}
    for c in quo.lattice.covers:
        labs = seen.get(c, set())
        if len(labs) != 1:
            raise CrossValidationError("quotient arrow labels", {"arrow": c, "labels": sorted(labs, key=repr)})
        labels[c] = next(iter(labs))
    attrs = {lab: LH.label_attrs.get(lab, frozenset()) for lab in set(labels.values())}
    return quo, LabelledHasse(quo.lattice, labels, attrs)


def _enumerate_upsets(F: np.ndarray, limit: int | None = None) -> list[np.ndarray]:
    """All arrow sets closed under forcing, built class by class.

    Classes are visited so that everything a class forces is decided first, so
    a class may be added exactly when all classes it forces are already in.
    """
    blocks = _preorder_classes(F)
    reps = [b[0] for b in blocks]
    k = len(blocks)
    forces = [[j for j in range(k) if j != i and F[reps[i], reps[j]]] for i in range(k)]
    order = sorted(range(k), key=lambda i: len(forces[i]))  # forced sets grow strictly
    out = []
    chosen = np.zeros(k, dtype=bool)

    def rec(t):
        if limit is not None and len(out) > limit:
            raise SizeLimitError(f"more than {limit} congruences")
        if t == k:
            mask = np.zeros(F.shape[0], dtype=bool)
            for i in np.flatnonzero(chosen):
                mask[list(blocks[i])] = True
            out.append(mask)
            return
        i = order[t]
        rec(t + 1)
        if all(chosen[j] for j in forces[i]):
            chosen[i] = True
            rec(t + 1)
            chosen[i] = False

    rec(0)
    return out


def enumerate_congruences(L: FiniteLattice, method: str = "auto", force: bool = False,
                          max_count: int | None = 200_000) -> list[Congruence]:
    """All congruences of L, sorted by contracted-arrow mask.

    ``method="ideals"`` lists forcing-closed arrow sets (valid for congruence
    uniform lattices); ``"closure"`` joins principal congruences until nothing
    new appears. ``"auto"`` picks ideals when L is congruence uniform.
    """
    check_size(L.n_elements, "enumerate_congruences", force, limit=None)
    if method == "auto":
        method = "ideals" if is_congruence_uniform(L, force=force) else "closure"
    if method == "ideals":
        result = []
        for mask in _enumerate_upsets(forcing(L), max_count):
            seeds = [L.covers[i] for i in np.flatnonzero(mask)]
            theta = congruence_closure(L, seeds)
            if not np.array_equal(theta.contracted_mask, mask):
                raise CrossValidationError("forcing-closed set is not a congruence",
                                           sorted(seeds))
            result.append(theta)
    elif method == "closure":
        principal = principal_congruences(L)
        found = {Congruence.trivial(L).key: Congruence.trivial(L)}
        frontier = list(found.values())
        while frontier:
            nxt = []
            for theta in frontier:
                for i, p in enumerate(principal):
                    if theta.contracted_mask[i]:
                        continue
                    joined = theta.join(p)
                    if joined.key not in found:
                        found[joined.key] = joined
                        nxt.append(joined)
                        if max_count is not None and len(found) > max_count:
                            raise SizeLimitError(f"more than {max_count} congruences")
            frontier = nxt
        result = list(found.values())
    else:
        raise ValueError(f"unknown method {method!r}")
    result.sort(key=lambda t: tuple(np.flatnonzero(t.contracted_mask)))
    return result


@dataclass(frozen=True)
class UniformityReport:
    semidistributive: CheckResult
    ji_collisions: list
    mi_collisions: list

    @property
    def ok(self) -> bool:
        return bool(self.semidistributive) and not self.ji_collisions and not self.mi_collisions


def _collisions(items):
    seen, clashes = {}, []
    for x, key in items:
        if key in seen:
            clashes.append((seen[key], x))
        else:
            seen[key] = x
    return clashes


def is_congruence_uniform(L: FiniteLattice, force: bool = False) -> CheckResult:
    """Injectivity of j -> con(j -> j_*) and m -> con(m^* -> m), plus semidistributivity.

    ``detail`` is a UniformityReport; ``witness`` the first colliding pair.
    """
    principal = principal_congruences(L)
    idx = L.cover_index
    ji = [(j, principal[idx[j, L.lower_covers[j][0]]].key) for j in join_irreducibles(L)]
    mi = [(m, principal[idx[L.upper_covers[m][0], m]].key) for m in meet_irreducibles(L)]
    report = UniformityReport(is_semidistributive(L, force), _collisions(ji), _collisions(mi))
    witness = (report.ji_collisions or report.mi_collisions or [None])[0]
    if witness is None and not report.semidistributive:
        witness = report.semidistributive.witness
    return CheckResult(report.ok, witness, report)


@dataclass(frozen=True)
class AlgebraicQuotient:
    congruence: Congruence
    quotient: QuotientLattice
    labelled: LabelledHasse


def label_congruence(LH: LabelledHasse, contracted_labels: Iterable[Hashable]) -> Congruence:
    """con of the arrows carrying the given labels, checked to contract nothing else."""
    doomed = set(contracted_labels)
    L = LH.lattice
    theta = congruence_closure(L, [c for c in L.covers if LH.labels[c] in doomed])
    spilled = {LH.labels[c] for c in theta.contracted} - doomed
    if spilled:
        raise NotExactlyRealizableError(spilled, theta)
    return theta


def algebraic_quotient(LH: LabelledHasse, surviving: Iterable[Hashable]) -> AlgebraicQuotient:
    """Contract exactly the arrows whose label does not survive.

    Raises NotExactlyRealizableError when the generated congruence also
    contracts an arrow carrying a surviving label.
    """
    surviving = set(surviving)
    unknown = surviving - set(LH.label_set)
    if unknown:
        raise ValueError(f"unknown labels {sorted(unknown, key=repr)}")
    theta = label_congruence(LH, set(LH.label_set) - surviving)
    quo, lab = labelled_quotient(LH, theta)
    return AlgebraicQuotient(theta, quo, lab)


def label_forcing_consistency(LH: LabelledHasse) -> CheckResult:
    """Arrows share a label iff they force each other.

    Witness: two arrows that are forcing equivalent with different labels, or
    equally labelled but not forcing equivalent.
    """
    L = LH.lattice
    F = forcing(L)
    equiv = F & F.T
    labs = [LH.labels[c] for c in L.covers]
    codes = {lab: k for k, lab in enumerate(dict.fromkeys(labs))}
    code = np.array([codes[lab] for lab in labs])
    same = code[:, None] == code[None, :]
    bad = np.argwhere(same != equiv)
    if bad.size:
        q, r = map(int, bad[0])
        kind = "same label, not forcing equivalent" if same[q, r] else "forcing equivalent, different labels"
        return CheckResult(False, (L.covers[q], L.covers[r], kind))
    return CheckResult(True)


def label_forcing(LH: LabelledHasse) -> tuple[list, np.ndarray]:
    """Forcing pushed to labels: ``G[a, b]`` iff some a-arrow forces some b-arrow."""
    L = LH.lattice
    labels = LH.label_set
    pos = {lab: k for k, lab in enumerate(labels)}
    code = np.array([pos[LH.labels[c]] for c in L.covers])
    F = forcing(L)
    G = np.zeros((len(labels), len(labels)), dtype=bool)
    for q, r in np.argwhere(F):
        G[code[q], code[r]] = True
    return labels, G


@dataclass(frozen=True)
class BoundaryReport:
    bottom: Counter
    top: Counter
    coincide: bool
    maximal: bool
    non_maximal: tuple

    @property
    def ok(self) -> bool:
        return self.coincide and self.maximal


def boundary_labels(LH: LabelledHasse) -> BoundaryReport:
    """Labels on arrows at the bottom and at the top, and whether they are forcing-maximal."""
    L = LH.lattice
    bottom = Counter(LH.labels[u, L.bottom] for u in L.upper_covers[L.bottom])
    top = Counter(LH.labels[L.top, v] for v in L.lower_covers[L.top])
    labels, G = label_forcing(LH)
    pos = {lab: k for k, lab in enumerate(labels)}
    non_max = []
    for lab in sorted(set(bottom) | set(top), key=repr):
        k = pos[lab]
        forced_by = np.flatnonzero(G[:, k])
        if any(j != k for j in forced_by):
            non_max.append(lab)
    return BoundaryReport(bottom, top, set(bottom) == set(top), not non_max, tuple(non_max))
