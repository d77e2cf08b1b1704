from fractions import Fraction

import pytest
from hypothesis import settings

from configlike.groups import make_cyclic, make_p_torus

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


GROUPS = [make_cyclic(q) for q in range(1, 9)] + [make_p_torus(2, 2), make_p_torus(2, 3),
                                                    make_p_torus(3, 2)]


@pytest.fixture
def z3():
    return make_cyclic(3)


def frac_list(xs):
    return [Fraction(x) for x in xs]
