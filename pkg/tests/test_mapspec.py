import math
import pickle
from fractions import Fraction

import pytest

from configlike.mapspec import MapSpec, MapSpecError, mapspec_from_dict


def test_polynomial_evaluation():
    f = mapspec_from_dict({"expr": "x1 + x2^2", "m": 1})
    assert f((0.5, 2.0, 0.0)) == (4.5,)


def test_exact_on_fractions():
    f = mapspec_from_dict({"expr": "x1*x2 - 3*x1^2", "m": 1})
    assert f((Fraction(1, 3), Fraction(2))) == (Fraction(1, 3),)


def test_vector_map_and_split():
    f = mapspec_from_dict({"expr": ["x1", "sin(x2)", "max(x1, x2)"], "m": 3})
    f1, h = f.split()
    assert f1((1.0, 0.0)) == 1.0
    assert h((1.0, 0.0)) == (0.0, 1.0)


def test_builtins():
    lin = mapspec_from_dict({"builtin": "linear", "u": [0.6, 0.8]})
    assert lin((1.0, 1.0)) == (pytest.approx(1.4),)
    coord = mapspec_from_dict({"builtin": "coordinate", "index": 2})
    assert coord((3, 4, 5)) == (4,)


def test_constants():
    assert mapspec_from_dict({"expr": "cos(pi*x1)"})((1.0,))[0] == pytest.approx(-1.0)
    assert mapspec_from_dict({"expr": "exp(0)"})((0.0,)) == (1.0,)


@pytest.mark.parametrize("bad", ["__import__('os')", "x1.real", "open('f')", "[x1]", "x1 if x1 else 0",
                                 "lambda: 0", "x1 < 2", "y1 + 1", "'s'"])
def test_rejects_unsafe_syntax(bad):
    with pytest.raises(MapSpecError):
        mapspec_from_dict({"expr": bad, "m": 1})


def test_arity_mismatch():
    with pytest.raises(MapSpecError):
        mapspec_from_dict({"expr": ["x1", "x2"], "m": 1})


def test_pickles_after_use():
    f = mapspec_from_dict({"expr": "x1^3", "m": 1})
    f((2.0,))
    g = pickle.loads(pickle.dumps(f))
    assert g((2.0,)) == (8.0,)


def test_round_trip_dict():
    for d in ({"expr": "x1", "m": 1}, {"expr": ["x1", "x2"], "m": 2}, {"builtin": "coordinate", "index": 1}):
        assert mapspec_from_dict(mapspec_from_dict(d).to_dict()).to_dict() == mapspec_from_dict(d).to_dict()
