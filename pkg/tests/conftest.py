import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src")))

from blockconj import fixtures  # noqa: E402
from blockconj.tools.number_field import FieldElem, MinPoly  # noqa: E402


@pytest.fixture
def quadratic():
    return fixtures.quadratic_pair()


@pytest.fixture
def quadratic_f():
    return MinPoly.from_coeffs(fixtures.QUADRATIC_F)


@pytest.fixture
def beta(quadratic_f):
    return FieldElem.beta(quadratic_f)


@pytest.fixture
def inverse():
    return fixtures.inverse_pair()


@pytest.fixture
def cubic():
    return fixtures.cubic_pair()
