import numpy as np
import pytest

from gztoda.core import HBar


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture(params=[1.0, 0.37], ids=["hbar=1", "hbar=0.37"])
def hbar(request):
    return HBar(request.param)
