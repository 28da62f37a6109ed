from fractions import Fraction
from math import pi

import numpy as np
import pytest

from gma import GmaCoefficients
from spectra import HermitianMatrix
from torus import PotentialField, TorusGrid


@pytest.fixture
def grid2():
    return TorusGrid(2, 12)


@pytest.fixture
def grid1():
    return TorusGrid(1, 16)


@pytest.fixture
def identity2():
    return HermitianMatrix.identity(2)


@pytest.fixture
def desk_coeffs():
    """n = 2, c_1 = 1 and the forced c_0 = 2 of the chi = 2I scenario"""
    return GmaCoefficients(2, (1.0,), 2.0)


@pytest.fixture
def cosine_potential():
    def build(grid: TorusGrid, amplitude: float = 0.05, axis: int = 0) -> PotentialField:
        return PotentialField.from_function(grid, lambda x, y: amplitude * np.cos(2 * pi * x[axis]))
    return build


@pytest.fixture
def exact():
    def build(*values):
        return np.array([Fraction(v) for v in values], dtype=object)
    return build
