import random

import pytest
from gmpy2 import mpq

from taublocks.scalars import ParameterPoint


def rational(rng, bound=9, den=12):
    num = rng.randint(-bound, bound)
    return mpq(num if num != 0 else 1, rng.randint(2, den))


def generic_point(rng, symbols, bound=9):
    """Random small-denominator rationals; nonzero by construction."""
    return ParameterPoint({s: rational(rng, bound) for s in symbols})


@pytest.fixture
def rng():
    return random.Random(20240811)
