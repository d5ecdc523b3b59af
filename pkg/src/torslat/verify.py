"""Checks of the engine against the bundled fixtures (used by ``torslat fixtures verify``)."""
from __future__ import annotations

from dataclasses import dataclass, field

from .cambrian import Orientation, bicambrian, cambrian_congruence
from .congruence import algebraic_quotient, congruence_closure, quotient
from .errors import NotExactlyRealizableError
from .lattice_io import load_forcing_quiver, read_document
from .poset_core import hasse_degree, is_hasse_regular, isomorphism
from .typea_bricks import brick_forcing_poset
from .weak_order import build_weak_order


@dataclass
class Outcome:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)


def _named_arrows(L, covers):
    return {(L.names[u], L.names[v]) for u, v in covers}


def weak_order_figure() -> Outcome:
    W = build_weak_order(3)
    fix = read_document("weak_s4").lattice
    iso = isomorphism(W.lattice, fix) is not None
    same_names = _named_arrows(W.lattice, W.lattice.covers) == _named_arrows(fix, fix.covers)
    return Outcome("weak order on S4", iso and same_names,
                   {"isomorphic": iso, "same_named_arrows": same_names})


def cambrian_figure() -> Outcome:
    W = build_weak_order(3)
    left = read_document("cambrian_s4_contracted")
    right = read_document("cambrian_s4_quotient").lattice
    theta = cambrian_congruence(3, Orientation.parse(3, "10"), W)
    Q = quotient(W.lattice, theta).lattice
    contracted = _named_arrows(W.lattice, theta.contracted)
    doubled = _named_arrows(left.lattice, left.highlight)
    same_quotient = _named_arrows(Q, Q.covers) == _named_arrows(right, right.covers)
    ok = contracted == doubled and same_quotient and isomorphism(Q, right) is not None
    return Outcome("Cambrian congruence of s2 s1 s3", ok,
                   {"contracted": len(contracted), "doubled_in_fixture": len(doubled),
                    "quotient_size": Q.n_elements,
                    "contracted_only": sorted(contracted - doubled),
                    "doubled_only": sorted(doubled - contracted)})


def three_vertex_quotient() -> Outcome:
    left = read_document("tors_three_vertex")
    right = read_document("tors_three_vertex_factor").labelled
    LH = left.labelled
    aq = algebraic_quotient(LH, {"Sa", "Sb", "Sc", "ab", "bc"})
    iso = isomorphism(aq.labelled.lattice, right.lattice, aq.labelled.labels, right.labels) is not None
    highlighted = aq.congruence.contracted == left.highlight
    try:
        algebraic_quotient(LH, set(LH.label_set) - {"cb"})
        spill = None
    except NotExactlyRealizableError as exc:
        spill = exc.spilled
    ok = iso and highlighted and spill == ["acb"]
    return Outcome("factor algebra quotient", ok,
                   {"quotient_size": aq.quotient.lattice.n_elements, "labelled_isomorphic": iso,
                    "contracted_matches_highlight": highlighted, "spill_without_cb": spill})


def brick_forcing_figure() -> Outcome:
    fq = load_forcing_quiver("brick_forcing_a3")
    name = {s: k for k, s in fq.strings.items()}
    P = brick_forcing_poset(3)
    computed = {(name[u], name[v]) for u, v in P.hasse}
    ok = computed == set(fq.arrows) and set(name) == set(P.strings)
    return Outcome("brick forcing quiver for n = 3", ok,
                   {"arrows": len(computed), "computed_only": sorted(computed - fq.arrows),
                    "fixture_only": sorted(fq.arrows - computed)})


def non_regular_quotients() -> Outcome:
    W = build_weak_order(3)
    a, b = W.arrow("2413", "2143"), W.arrow("3412", "3142")
    found = {}
    for tag, seeds in (("2413->2143", [a]), ("3412->3142", [b]), ("both", [a, b])):
        Q = quotient(W.lattice, congruence_closure(W.lattice, seeds)).lattice
        found[tag] = [Q.names[x] for x in range(Q.n_elements) if hasse_degree(Q, x) == 4]
    return Outcome("quotients with a degree 4 vertex", all(found.values()), found)


def bicambrian_pair() -> Outcome:
    W = build_weak_order(3)
    res = {}
    for tag, Q in (("bipartite", Orientation.parse(3, "10")), ("linear", Orientation.linear(3))):
        r = is_hasse_regular(quotient(W.lattice, bicambrian(3, Q, W)).lattice)
        res[tag] = {"regular": r.ok, "degree": r.detail if r.ok else None,
                    "degrees": None if r.ok else r.witness}
    ok = res["bipartite"]["regular"] and res["bipartite"]["degree"] == 3 and not res["linear"]["regular"]
    return Outcome("biCambrian regularity pair", ok, res)


ALL_CHECKS = (weak_order_figure, cambrian_figure, three_vertex_quotient,
              brick_forcing_figure, non_regular_quotients, bicambrian_pair)


def verify_fixtures() -> list[Outcome]:
    return [check() for check in ALL_CHECKS]
