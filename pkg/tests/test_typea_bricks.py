import pytest
from hypothesis import given, strategies as st

import oracles
from torslat.cambrian import Orientation, cambrian_congruence
from torslat.congruence import Congruence, congruence_closure
from torslat.errors import NotDescentError, ParseError
from torslat.lattice_io import load_forcing_quiver
from torslat.typea_bricks import (OrientedPath, StringBrick, brick_forcing_poset, brick_label,
                                  count_algebraic_congruences, enumerate_paths, enumerate_strings,
                                  forcing_vs_substring, ideal_congruence, path_acts_nonzero,
                                  path_ideals, path_leq, string_count, substring_leq,
                                  uniserial_of_double_ji, up_closure)
from torslat.weak_order import DoubleJI, double_join_irreducibles

S = StringBrick.parse


def test_parse_and_print():
    assert str(S("1>2<3")) == "1>2<3"
    assert S("2") == S("S2") == StringBrick.simple(2)
    assert S("1>2").walk() == [1, 2] and S("1<2").walk() == [2, 1]
    with pytest.raises(ParseError):
        S("1>3")


def test_reversal_is_the_same_string():
    # the walk 3 -> 2 <- 1 read backwards is 1 -> 2 <- 3
    assert StringBrick(1, 3, (True, False)) == S("1>2<3")
    assert len({S("1>2<3"), StringBrick(1, 3, (True, False))}) == 1


@pytest.mark.parametrize("n,count", [(1, 1), (2, 4), (3, 11), (4, 26), (5, 57)])
def test_counts(n, count):
    strings = enumerate_strings(n)
    assert len(strings) == len(set(strings)) == count == string_count(n) == 2 ** (n + 1) - (n + 2)


def test_rank_two_strings():
    assert {str(s) for s in enumerate_strings(2)} == {"S1", "S2", "1>2", "1<2"}


def test_brick_label_examples():
    assert brick_label((2, 1, 3), 1) == S("1")
    assert brick_label((2, 3, 1), 2) == S("1>2")
    assert brick_label((3, 1, 2), 1) == S("1<2")
    with pytest.raises(NotDescentError):
        brick_label((1, 2, 3), 1)


def test_substring_order():
    assert substring_leq(S("1>2"), S("1>2"))
    assert substring_leq(S("2"), S("1>2")) and not substring_leq(S("3"), S("1>2"))
    assert substring_leq(S("2<3"), S("1>2<3")) and not substring_leq(S("2>3"), S("1>2<3"))


@given(st.sampled_from(enumerate_strings(4)), st.sampled_from(enumerate_strings(4)),
       st.sampled_from(enumerate_strings(4)))
def test_substring_is_partial_order(u, v, w):
    assert substring_leq(u, u)
    if substring_leq(u, v) and substring_leq(v, u):
        assert u == v
    if substring_leq(u, v) and substring_leq(v, w):
        assert substring_leq(u, w)


def test_forcing_fixture_quiver():
    fq = load_forcing_quiver("brick_forcing_a3")
    name = {s: k for k, s in fq.strings.items()}
    P = brick_forcing_poset(3)
    assert len(P.strings) == 11
    assert {(name[u], name[v]) for u, v in P.hasse} == set(fq.arrows)


def test_forcing_small():
    assert len(brick_forcing_poset(1).strings) == 1 and brick_forcing_poset(1).hasse == []
    P = brick_forcing_poset(2)
    assert {(str(u), str(v)) for u, v in P.hasse} == {
        ("S1", "1>2"), ("S1", "1<2"), ("S2", "1>2"), ("S2", "1<2")}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_forcing_equals_substring(n):
    assert forcing_vs_substring(n) == []


def test_paths():
    assert [str(p) for p in enumerate_paths(1)] == ["e1"]
    assert {str(p) for p in enumerate_paths(2)} == {"e1", "e2", "1->2", "2->1"}
    assert len(enumerate_paths(3)) == 9
    assert OrientedPath.parse("x1") == OrientedPath(1, 2)
    assert OrientedPath.parse("y2") == OrientedPath(2, 1)
    assert OrientedPath.parse("3->2->1") == OrientedPath(3, 1)
    assert path_leq(OrientedPath(2, 2), OrientedPath(1, 3))
    assert not path_leq(OrientedPath(2, 1), OrientedPath(1, 3))


def test_path_action():
    assert path_acts_nonzero(OrientedPath(2, 2), S("1>2"))
    assert path_acts_nonzero(OrientedPath(1, 2), S("1>2"))
    assert not path_acts_nonzero(OrientedPath(2, 1), S("1>2"))
    assert path_acts_nonzero(OrientedPath(1, 2), S("1>2<3"))


def test_ideal_congruence_extremes(s4):
    L = s4.lattice
    assert ideal_congruence(3, [], s4) == Congruence.trivial(L)
    assert ideal_congruence(3, [OrientedPath(i, i) for i in (1, 2, 3)], s4) == Congruence.full(L)


def test_ideal_congruence_is_cambrian(s4):
    theta = ideal_congruence(3, [OrientedPath(2, 1), OrientedPath(3, 2)], s4)
    assert theta.n_classes == 14
    assert theta == cambrian_congruence(3, Orientation.linear(3), s4)


def test_single_path_contracts_superstrings(s4):
    for p in enumerate_paths(3):
        theta = ideal_congruence(3, [p], s4)
        labels = {s4.labels[c] for c in theta.contracted}
        assert labels == {w for w in s4.label_set if substring_leq(p.string, w)}
        assert all(w in labels for u in labels for w in s4.label_set if substring_leq(u, w))


def test_up_closure_is_harmless(s4):
    gens = [OrientedPath(2, 2)]
    assert ideal_congruence(3, gens, s4) == ideal_congruence(3, up_closure(gens, 3), s4)


@pytest.mark.parametrize("n,count", [(1, 2), (2, 7), (3, 38)])
def test_algebraic_counts(n, count):
    paths = enumerate_paths(n)
    brute = oracles.upsets_brute(paths, path_leq)
    assert set(path_ideals(n)) == set(brute)
    assert count_algebraic_congruences(n).count == len(brute) == count


def test_uniserials():
    assert uniserial_of_double_ji(DoubleJI(3, 1, 1)) == OrientedPath(1, 1)
    assert str(uniserial_of_double_ji(DoubleJI(3, 1, 3))) == "1->2->3"
    assert str(uniserial_of_double_ji(DoubleJI(3, 3, 1))) == "3->2->1"


def test_uniserial_matches_principal(s4):
    for d in double_join_irreducibles(3, s4):
        assert ideal_congruence(3, [uniserial_of_double_ji(d)], s4) == \
            congruence_closure(s4.lattice, [d.arrow(s4)])
