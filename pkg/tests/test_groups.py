from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from configlike.groups import (GroupError, GroupSubset, IGVector, act_on_subset, act_on_tuple,
                               fixed_subsets, group_from_descriptor, make_cyclic, make_p_torus,
                               orbit_tuple, permute_coordinates, project_to_IG)

from conftest import GROUPS


def test_trivial_group():
    G = make_cyclic(1)
    assert G.order == 1 and G.mult == ((0,),) and G.is_group()


def test_cyclic_three_inverses():
    assert tuple(make_cyclic(3).inverses) == (0, 2, 1)


def test_cyclic_prime_orders():
    G = make_cyclic(5)
    assert [G.element_order(g) for g in range(1, 5)] == [5, 5, 5, 5]


def test_klein_four_is_all_involutions():
    G = make_p_torus(2, 2)
    assert G.order == 4
    assert all(G.element_order(g) == 2 for g in range(1, 4))


def test_p_torus_rank_one_is_cyclic():
    assert make_p_torus(3, 1).mult == make_cyclic(3).mult


def test_exponent_p():
    G = make_p_torus(3, 2)
    assert G.order == 9
    assert max(G.element_order(g) for g in G.elements) == 3


def test_non_prime_torus_rejected():
    with pytest.raises(GroupError):
        make_p_torus(4, 2)


@pytest.mark.parametrize("G", GROUPS, ids=lambda G: G.label)
def test_constructed_tables_are_groups(G):
    assert G.axiom_violations() == []


def test_scenario_descriptors():
    assert group_from_descriptor({"kind": "cyclic", "q": 5}).mult == make_cyclic(5).mult
    assert group_from_descriptor({"kind": "p_torus", "p": 3, "n": 2}).mult == make_p_torus(3, 2).mult
    with pytest.raises(GroupError):
        group_from_descriptor({"kind": "dihedral", "q": 4})


def test_rotation_of_z3_tuple(z3):
    a, b, c = Fraction(1), Fraction(2), Fraction(5)
    phi = orbit_tuple(z3, [a, b, c])
    assert act_on_tuple(1, phi).scalars() == [c, a, b]
    assert act_on_tuple(0, phi) == phi
    assert act_on_tuple(2, act_on_tuple(1, phi)) == phi


def test_subset_translation():
    G = make_cyclic(4)
    M = GroupSubset(G, frozenset({0, 1}))
    assert act_on_subset(0, M) == M
    assert act_on_subset(2, M).members == {2, 3}


def test_project_to_ig_examples():
    assert project_to_IG([1, 1, 1]).coefficients == (0, 0, 0)
    assert project_to_IG([1, 0, 0]).coefficients == (Fraction(2, 3), Fraction(-1, 3), Fraction(-1, 3))


def test_ig_rejects_nonzero_sum():
    with pytest.raises(GroupError):
        IGVector((Fraction(1), Fraction(0)))


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(st.sampled_from(GROUPS), st.data())
def test_action_axioms(G, data):
    vals = data.draw(st.lists(rationals, min_size=G.order, max_size=G.order))
    phi = orbit_tuple(G, vals)
    g = data.draw(st.integers(0, G.order - 1))
    h = data.draw(st.integers(0, G.order - 1))
    assert act_on_tuple(G.identity, phi) == phi
    assert act_on_tuple(g, act_on_tuple(h, phi)) == act_on_tuple(G.mul(g, h), phi)


@given(st.sampled_from(GROUPS), st.data())
def test_projection_commutes_with_permutation(G, data):
    v = data.draw(st.lists(rationals, min_size=G.order, max_size=G.order))
    g = data.draw(st.integers(0, G.order - 1))
    lhs = project_to_IG(permute_coordinates(G, g, v)).coefficients
    rhs = permute_coordinates(G, g, project_to_IG(v).coefficients)
    assert lhs == rhs


@given(st.lists(rationals, min_size=1, max_size=8))
def test_projection_idempotent(v):
    once = project_to_IG(v).coefficients
    assert project_to_IG(once).coefficients == once


@pytest.mark.parametrize("G", [g for g in GROUPS if g.order > 1], ids=lambda G: G.label)
def test_binomial_sets_have_no_fixed_points(G):
    for m in range(1, G.order):
        assert fixed_subsets(G, m) == []
