import numpy as np
import pytest

from lgallee.equilibria import degenerate_point, triple_point_params
from lgallee.model import ScaledParams

M_REF, LAM_REF = 0.1, 0.2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def ref_point():
    return degenerate_point(M_REF, LAM_REF)


@pytest.fixture
def ref_s1(ref_point):
    x1 = ref_point.x1
    return x1 * (2 * ref_point.a1 * x1 + LAM_REF)


@pytest.fixture
def triple(ref_point):
    """Parameters at the reference triple point for a chosen ``s``."""
    def make(s):
        return triple_point_params(M_REF, LAM_REF, s)
    return make


@pytest.fixture
def generic_params():
    return ScaledParams(m=0.1, lam=0.2, a=1.0, h=0.01, s=0.5)
