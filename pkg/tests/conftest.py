import numpy as np
import pytest
from hypothesis import settings

from multitime.fock_space import ModelParams
from multitime.scenario import random_state
from multitime.spinor_dirac import LatticeGrid

settings.register_profile("repo", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("repo")

G11 = (2 ** -0.5, 2 ** -0.5)


def make_params(L=4, M=1, N=1, m_x=1.0, m_y=0.5, g=G11, **kw):
    return ModelParams(LatticeGrid(L, 1.0), m_x, m_y, g, M, N, **kw)


@pytest.fixture
def dense():
    return make_params()


@pytest.fixture
def desk():
    return make_params(L=6, M=1, N=2)


@pytest.fixture
def dense_state(dense):
    return random_state(dense, 11)


@pytest.fixture
def desk_state(desk):
    return random_state(desk, 5)


def rand_vec(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)
