import os

import numpy as np
import pytest

from dsdirac.common import ODESpec, QuadratureSpec
from dsdirac.settings import ALL_ENVIRONS


@pytest.fixture(autouse=True)
def clean_settings():
    saved = dict(os.environ)
    yield
    for environ in ALL_ENVIRONS:
        environ.reset()
    os.environ.clear()
    os.environ.update(saved)


@pytest.fixture
def q():
    return QuadratureSpec()


@pytest.fixture
def ode():
    return ODESpec()


@pytest.fixture
def rng():
    return np.random.default_rng(20181017)
