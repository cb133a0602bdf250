from __future__ import annotations

import numpy as np
import pytest

from ldmcap import builtin_iris


@pytest.fixture(scope="session")
def iris():
    return builtin_iris()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
