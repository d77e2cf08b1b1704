import numpy as np
import pytest

from configlike.actions import (ActionError, action_from_spec, antipodal, complex_roots, ig_basis,
                                ig_permutation, permutation, user_supplied)
from configlike.groups import make_cyclic, make_p_torus

from conftest import GROUPS


@pytest.mark.parametrize("G", [g for g in GROUPS if g.order > 1], ids=lambda G: G.label)
def test_permutation_reps_are_homomorphisms(G):
    assert permutation(G).violations() == []
    assert ig_permutation(G).violations() == []


@pytest.mark.parametrize("q", [2, 3, 5, 6])
def test_complex_roots(q):
    rep = complex_roots(make_cyclic(q), 4)
    assert rep.violations() == []
    assert rep.is_free_on_sphere()


def test_complex_roots_needs_cyclic():
    with pytest.raises(ActionError):
        complex_roots(make_p_torus(2, 2), 4)


def test_antipodal_is_free():
    rep = antipodal(3)
    assert rep.violations() == [] and rep.is_free_on_sphere()
    assert not rep.has_fixed_points_on_sphere()


def test_permutation_fixes_the_diagonal():
    rep = permutation(make_cyclic(3))
    assert rep.has_fixed_points_on_sphere()
    assert not rep.is_free_on_sphere()


def test_ig_restriction_has_no_global_fixed_vector():
    rep = ig_permutation(make_cyclic(5))
    assert not rep.has_fixed_points_on_sphere()
    assert rep.is_free_on_sphere()  # prime order: the regular rep minus trivial is free


def test_ig_basis_orthonormal():
    B = ig_basis(6)
    assert np.allclose(B.T @ B, np.eye(5))
    assert np.allclose(B.sum(axis=0), 0)


def test_permutation_matches_coordinate_rule():
    G = make_cyclic(4)
    rep = permutation(G)
    x = np.arange(4.0)
    for g in G.elements:
        assert np.allclose(rep.matrices[g] @ x, rep.apply(g, x))
        assert np.allclose(rep.apply(g, x), [x[G.mul(G.inv(g), h)] for h in G.elements])


def test_user_supplied_validation():
    G = make_cyclic(2)
    assert user_supplied(G, [np.eye(2), -np.eye(2)]).kind == "user"
    with pytest.raises(ActionError):
        user_supplied(G, [np.eye(2), 2 * np.eye(2)])


def test_spec_errors():
    with pytest.raises(ActionError):
        action_from_spec("antipodal", make_cyclic(3), 3)
    with pytest.raises(ActionError):
        action_from_spec("permutation", make_cyclic(3), 4)
    with pytest.raises(ActionError):
        action_from_spec("nope", make_cyclic(3), 3)
