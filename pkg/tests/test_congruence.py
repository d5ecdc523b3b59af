import random

import numpy as np
import pytest

import oracles
from torslat.congruence import (Congruence, algebraic_quotient, boundary_labels, classes_are_intervals,
                                congruence_closure, enumerate_congruences, forcing, forcing_classes,
                                is_congruence, is_congruence_uniform, label_forcing,
                                label_forcing_consistency, labelled_quotient, polygon_forcing,
                                principal_congruences, quotient)
from torslat.errors import NotExactlyRealizableError, NotPolygonalError
from torslat.lattice_io import read_document
from torslat.poset_core import (LabelledHasse, boolean_lattice, build_from_covers, chain,
                                is_semidistributive, isomorphism, m3, polygons)


@pytest.fixture(scope="module")
def three_vertex():
    return read_document("tors_three_vertex")


def test_closure_trivial_and_full(s4):
    L = s4.lattice
    assert congruence_closure(L, []).n_classes == L.n_elements
    assert congruence_closure(L, [(L.top, L.bottom)]).n_classes == 1
    assert congruence_closure(L, [(L.top, L.bottom)]).non_cover_seeds == ((L.top, L.bottom),)


def test_closure_matches_brute_force(s3):
    L = s3.lattice
    for c in L.covers:
        theta = congruence_closure(L, [c])
        rel = oracles.closure_brute(L.n_elements, L.join, L.meet, [c])
        assert {(x, y) for x in range(6) for y in range(6) if theta.equivalent(x, y)} == rel


def test_closure_matches_brute_force_pairs(s4, seed):
    L = s4.lattice
    rng = random.Random(seed)
    for _ in range(4):
        seeds = rng.sample(L.covers, 2)
        theta = congruence_closure(L, seeds)
        rel = oracles.closure_brute(L.n_elements, L.join, L.meet, seeds)
        assert {(x, y) for x in range(24) for y in range(24) if theta.equivalent(x, y)} == rel


def test_cambrian_seed_figure(s4):
    theta = congruence_closure(s4.lattice, [s4.arrow("2314", "2134"), s4.arrow("1423", "1243")])
    doc = read_document("cambrian_s4_contracted")
    assert theta.n_classes == 14
    assert {(s4.lattice.names[u], s4.lattice.names[v]) for u, v in theta.contracted} == \
        {(doc.lattice.names[u], doc.lattice.names[v]) for u, v in doc.highlight}


def test_is_congruence_cases():
    L = boolean_lattice(2)
    assert is_congruence(L, [[0], [1], [2], [3]])
    assert is_congruence(L, [[0, 1, 2, 3]])
    res = is_congruence(L, [[0], [1, 2], [3]])
    assert not res
    x, y, z, op = res.witness
    T = L.join_table if op == "join" else L.meet_table
    assert {x, y} == {1, 2} and T[x, z] != T[y, z]


def test_is_congruence_accepts_label_arrays():
    L = boolean_lattice(2)
    assert is_congruence(L, np.array([0, 0, 2, 2]))


def test_is_congruence_matches_brute(s3):
    L = s3.lattice
    count = 0
    for blocks in oracles.set_partitions(range(L.n_elements)):
        ok = oracles.is_congruence_brute(L.n_elements, L.join, L.meet, blocks)
        assert bool(is_congruence(L, blocks)) == ok
        count += ok
    assert count == 7
    assert len(enumerate_congruences(L)) == 7


def test_forcing_chain_and_square():
    F = forcing(chain(4))
    assert np.array_equal(F, np.eye(3, dtype=bool))
    L = boolean_lattice(2)
    F = forcing(L)
    idx = L.cover_index
    assert F[idx[1, 0], idx[3, 2]] and F[idx[3, 2], idx[1, 0]]
    assert not F[idx[1, 0], idx[2, 0]]
    assert len(forcing_classes(L)) == 2


def test_three_vertex_forcing(three_vertex):
    LH = three_vertex.labelled
    labels, G = label_forcing(LH)
    pos = {lab: k for k, lab in enumerate(labels)}
    forced_by_cb = {labels[k] for k in np.flatnonzero(G[pos["cb"]])}
    assert forced_by_cb == {"cb", "acb"}
    assert {labels[k] for k in np.flatnonzero(G[pos["acb"]])} == {"acb"}


def test_polygon_forcing_square():
    L = boolean_lattice(2)
    P = polygon_forcing(L)
    assert np.array_equal(P, forcing(L))
    assert len(forcing_classes(L)) == 2


def test_polygon_forcing_hexagon(s3):
    L = s3.lattice
    P = polygon_forcing(L)
    (hexagon,) = polygons(L)
    left, right = hexagon.side_paths()
    idx = L.cover_index
    tl, tr = idx[left[0], left[1]], idx[right[0], right[1]]
    bl, br = idx[left[-2], left[-1]], idx[right[-2], right[-1]]
    ml, mr = idx[left[1], left[2]], idx[right[1], right[2]]
    assert P[tl, br] and P[br, tl] and P[tr, bl] and P[bl, tr]
    for top in (tl, tr):
        assert P[top, ml] and P[top, mr]
    assert not P[ml, tl] and not P[ml, mr]


def test_polygon_forcing_needs_polygonal():
    with pytest.raises(NotPolygonalError):
        polygon_forcing(m3())


def test_polygon_forcing_equals_forcing(s4, s5):
    for W in (s4, s5):
        assert np.array_equal(polygon_forcing(W.lattice), forcing(W.lattice))


def test_quotient_trivial_full(s4):
    L = s4.lattice
    q = quotient(L, Congruence.trivial(L))
    assert isomorphism(q.lattice, L) is not None
    q = quotient(L, Congruence.full(L))
    assert q.lattice.n_elements == 1


def test_quotient_cambrian_matches_fixture(s4):
    theta = congruence_closure(s4.lattice, [s4.arrow("2314", "2134"), s4.arrow("1423", "1243")])
    Q = quotient(s4.lattice, theta).lattice
    right = read_document("cambrian_s4_quotient").lattice
    named = lambda L: {(L.names[u], L.names[v]) for u, v in L.covers}
    assert named(Q) == named(right)


def test_enumerate_small_lattices():
    assert len(enumerate_congruences(chain(4))) == 8
    assert len(enumerate_congruences(boolean_lattice(2))) == 4
    assert len(enumerate_congruences(m3(), method="closure")) == 2


def test_enumerate_routes_agree(s4):
    fast = enumerate_congruences(s4.lattice, method="ideals")
    slow = enumerate_congruences(s4.lattice, method="closure")
    assert [t.key for t in fast] == [t.key for t in slow]
    assert len(fast) == 60


def test_enumerated_are_congruences_with_interval_classes(s4):
    for theta in enumerate_congruences(s4.lattice):
        assert is_congruence(s4.lattice, theta.class_of)
        assert classes_are_intervals(theta)


def test_closure_idempotent(s4, seed):
    L = s4.lattice
    rng = random.Random(seed)
    for _ in range(10):
        seeds = rng.sample(L.covers, rng.randint(1, 3))
        theta = congruence_closure(L, seeds)
        assert set(seeds) <= theta.contracted
        assert congruence_closure(L, theta.contracted) == theta


def test_quotients_stay_semidistributive(s3, s4, seed):
    for theta in enumerate_congruences(s3.lattice):
        assert is_semidistributive(quotient(s3.lattice, theta).lattice)
    rng = random.Random(seed)
    thetas = enumerate_congruences(s4.lattice)
    for theta in rng.sample(thetas, 15):
        assert is_semidistributive(quotient(s4.lattice, theta).lattice)


def test_projection_is_morphism(s5, seed):
    rng = random.Random(seed)
    L = s5.lattice
    for _ in range(3):
        theta = congruence_closure(L, rng.sample(L.covers, 2))
        q = quotient(L, theta)
        assert q.check_morphism()
        # pi_up realises the same quotient from the top ends of the classes
        up = theta.pi_up
        for x in range(0, L.n_elements, 7):
            for y in range(0, L.n_elements, 5):
                assert up[L.meet(x, y)] == up[L.meet(int(up[x]), int(up[y]))]
                assert up[L.join(x, y)] == up[L.join(int(up[x]), int(up[y]))]


def test_uniformity(s4):
    assert is_congruence_uniform(chain(3))
    assert is_congruence_uniform(s4.lattice)
    res = is_congruence_uniform(m3())
    assert not res and res.detail.ji_collisions


def test_meet_join_of_congruences(s4):
    L = s4.lattice
    a = congruence_closure(L, [s4.arrow("2413", "2143")])
    b = congruence_closure(L, [s4.arrow("3412", "3142")])
    m, j = a.meet(b), a.join(b)
    assert m <= a and m <= b and a <= j and b <= j
    assert is_congruence(L, m.class_of)
    assert np.array_equal(m.contracted_mask, a.contracted_mask & b.contracted_mask)
    assert j == congruence_closure(L, list(a.contracted | b.contracted))


def test_algebraic_quotient_trivial(three_vertex):
    LH = three_vertex.labelled
    aq = algebraic_quotient(LH, LH.label_set)
    assert aq.congruence == Congruence.trivial(LH.lattice)


def test_algebraic_quotient_three_vertex(three_vertex):
    LH = three_vertex.labelled
    right = read_document("tors_three_vertex_factor").labelled
    aq = algebraic_quotient(LH, {"Sa", "Sb", "Sc", "ab", "bc"})
    assert aq.quotient.lattice.n_elements == 12
    assert isomorphism(aq.labelled.lattice, right.lattice, aq.labelled.labels, right.labels) is not None
    assert aq.congruence.contracted == three_vertex.highlight


def test_algebraic_quotient_spill(three_vertex):
    LH = three_vertex.labelled
    with pytest.raises(NotExactlyRealizableError) as exc:
        algebraic_quotient(LH, set(LH.label_set) - {"cb"})
    assert exc.value.spilled == ["acb"]


def test_label_consistency(s3, three_vertex):
    assert label_forcing_consistency(s3)
    assert label_forcing_consistency(three_vertex.labelled)
    L = boolean_lattice(2)
    res = label_forcing_consistency(LabelledHasse(L, {c: "same" for c in L.covers}))
    assert not res and res.witness[2] == "same label, not forcing equivalent"


def test_labelled_quotient_keeps_labels(s4):
    theta = congruence_closure(s4.lattice, [s4.arrow("2413", "2143")])
    _, LQ = labelled_quotient(s4, theta)
    assert set(LQ.label_set) <= set(s4.label_set)
    assert len(LQ.label_set) == len(s4.label_set) - 1


def test_boundary_labels(s4, three_vertex):
    rep = boundary_labels(s4)
    assert {str(b) for b in rep.bottom} == {"S1", "S2", "S3"} and rep.ok
    rep = boundary_labels(LabelledHasse(chain(2), {(1, 0): "only"}))
    assert rep.ok and set(rep.top) == {"only"}
    rep = boundary_labels(three_vertex.labelled)
    assert set(rep.bottom) == set(rep.top) == {"Sa", "Sb", "Sc"} and rep.ok


def test_polygon_label_pairs(s5):
    'top and bottom arrows of every polygon carry the same two labels, matched diagonally'
    L = s5.lattice
    for P in polygons(L):
        left, right = P.side_paths()
        assert s5.labels[left[0], left[1]] == s5.labels[right[-2], right[-1]]
        assert s5.labels[right[0], right[1]] == s5.labels[left[-2], left[-1]]


def test_principal_cache_reused(s4):
    assert principal_congruences(s4.lattice) is principal_congruences(s4.lattice)


def test_from_partition_roundtrip(s4):
    theta = congruence_closure(s4.lattice, [s4.arrow("2413", "2143")])
    again = Congruence.from_partition(s4.lattice, theta.classes)
    assert again == theta


def test_non_lattice_partition_rejected():
    L = build_from_covers(3, [(1, 0), (2, 1)])
    with pytest.raises(ValueError):
        Congruence.from_partition(L, [[0, 1]])
