from fractions import Fraction
from math import gcd

import pytest

from bipolar.linkform import (
    LinkingGroup,
    Metabolizer,
    brute_force_metabolizers,
    direct_sum,
    split_group,
    split_metabolizer,
    structured_metabolizers,
)
from oracles import isotropic_subgroups, squarefree


def subgroup_set(mets):
    return {h.elements for h in mets}


def test_form_is_symmetric_bilinear_nonsingular():
    g = LinkingGroup(15, 2)
    elems = list(g.elements())
    for u in elems[::7]:
        for v in elems[::11]:
            assert g.form(u, v) == g.form(v, u)
            w = ((u[0] + v[0]) % 15, (u[1] + v[1]) % 15)
            assert g.form(w, (1, 3)) == (g.form(u, (1, 3)) + g.form(v, (1, 3))) % 1
    for u in elems:
        if u != (0, 0):
            assert any(g.form(u, v) != 0 for v in [(1, 0), (0, 1)])
    assert g.order == 225


def test_form_values_are_reduced():
    g = LinkingGroup(5)
    assert g.form((1, 2), (1, 2)) == 0
    assert g.form((1, 0), (2, 0)) == Fraction(2, 5)


def test_structured_examples():
    assert [h.slope for h in structured_metabolizers(5)] == [2, 3]
    assert [h.slope for h in structured_metabolizers(65)] == [8, 18, 47, 57]
    assert structured_metabolizers(3) == []
    with pytest.raises(ValueError):
        structured_metabolizers(9)


def test_brute_force_small_examples():
    assert subgroup_set(brute_force_metabolizers(LinkingGroup(5))) == subgroup_set(structured_metabolizers(5))
    trivial = brute_force_metabolizers(LinkingGroup(1))
    assert len(trivial) == 1 and trivial[0].elements == {(0, 0)}
    nine = brute_force_metabolizers(LinkingGroup(9))
    # no cyclic ones since -1 is not a square mod 9; the 3-torsion subgroup remains
    assert [h.slope for h in nine] == [None]
    assert nine[0].elements == {(3 * s % 9, 3 * t % 9) for s in range(3) for t in range(3)}


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_metabolizers(LinkingGroup(201))


@pytest.mark.parametrize("m", [1, 3, 5, 9, 13, 15, 17, 25, 27])
def test_brute_force_against_pair_closure_oracle(m):
    assert subgroup_set(brute_force_metabolizers(LinkingGroup(m))) == isotropic_subgroups(m)


@pytest.mark.parametrize("m", [m for m in range(1, 60, 2) if squarefree(m)])
@pytest.mark.parametrize("a", [1, 2])
def test_structured_equals_brute_force(m, a):
    if gcd(a, m) != 1:
        return
    g = LinkingGroup(m, a)
    brute = brute_force_metabolizers(g)
    assert subgroup_set(brute) == subgroup_set(structured_metabolizers(m))
    for h in brute:
        assert h.order == m
        assert all(g.form(u, v) == 0 for u in h.elements for v in h.elements)


def test_metabolizer_set_independent_of_unit():
    for m in (13, 25, 45):
        sets = [subgroup_set(brute_force_metabolizers(LinkingGroup(m, a))) for a in range(1, m) if gcd(a, m) == 1]
        assert all(s == sets[0] for s in sets)


def test_split_example():
    met = Metabolizer(65, ((1, 8),))
    first, second = split_metabolizer(5, 13, met)
    assert first.slope == 3 and second.slope == 8
    g5, g13 = split_group(LinkingGroup(65), 5, 13)
    assert first.is_isotropic(g5) and second.is_isotropic(g13)
    assert direct_sum(first, second).same_subgroup(met)


def test_split_rejects_common_factor():
    with pytest.raises(ValueError):
        split_metabolizer(5, 5, Metabolizer(25, ((1, 7),)))


@pytest.mark.parametrize("m1, m2", [(3, 5), (5, 13), (5, 17), (9, 5), (3, 25)])
def test_split_reconstructs_every_metabolizer(m1, m2):
    g = LinkingGroup(m1 * m2)
    g1, g2 = split_group(g, m1, m2)
    for met in brute_force_metabolizers(g):
        a, b = split_metabolizer(m1, m2, met)
        assert a.order == m1 and b.order == m2
        assert a.is_isotropic(g1) and b.is_isotropic(g2)
        assert direct_sum(a, b).same_subgroup(met)


@pytest.mark.parametrize("m1, m2", [(m1, m2) for m1 in range(1, 21, 2) for m2 in range(m1 + 2, 21, 2) if gcd(m1, m2) == 1 and m1 * m2 <= 200])
def test_split_is_bijection_by_count(m1, m2):
    n = len(brute_force_metabolizers(LinkingGroup(m1 * m2)))
    assert n == len(brute_force_metabolizers(LinkingGroup(m1))) * len(brute_force_metabolizers(LinkingGroup(m2)))
