import numpy as np
import pytest

from meixner import DiscreteSpace, make_params

LAMBDAS = (0.0, 1.0, 2.0, 3.0)


@pytest.fixture(params=LAMBDAS, ids=lambda v: f"lam{v:g}")
def params(request):
    return make_params(request.param)


@pytest.fixture
def space3():
    return DiscreteSpace(np.array([0.5, 1.0, 2.0]))
