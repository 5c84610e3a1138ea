import numpy as np
import pytest

from cosserat_defects import RodSpec, make_blob, make_nick

L = 150e-6


@pytest.fixture
def rod():
    return RodSpec(L)


@pytest.fixture
def shallow_nick(rod):
    # 1.5 um deep, 50 um back from the free end
    return make_nick(rod, 100e-6, depth=1.5e-6)


@pytest.fixture
def shallow_blob(rod):
    return make_blob(rod, 100e-6, depth=1.5e-6)


@pytest.fixture
def dof_scale():
    """Rotations multiplied by L so matrix blocks are comparable."""
    d = np.r_[np.ones(3), np.full(3, 1.0 / L)]
    return np.r_[d, d]


def random_q(rng, translation=1e-8, rotation=1e-4):
    s = np.r_[np.full(3, translation), np.full(3, rotation)]
    return rng.normal(size=12) * np.r_[s, s]
