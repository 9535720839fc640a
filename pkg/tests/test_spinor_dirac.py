import numpy as np
import pytest

from multitime.spinor_dirac import (LatticeGrid, SpinorField, dirac_rep, free_step, green_function,
                                    pauli_jordan, walk_generator, walk_matrix)
from scipy.linalg import expm

G11 = np.array([1, 1]) / np.sqrt(2)

# G(3, x) for m_y = 0.5, g = (1,1)/sqrt2, from a hand-iterated light-cone recursion
G3_FROZEN = {
    -3: [-0.261085129662089j, 0.477913124168157],
    -1: [-0.142631456395588 - 0.183165209903133j, -0.285262912791176 - 0.261085129662089j],
    1: [-0.285262912791176 - 0.261085129662089j, -0.142631456395588 - 0.183165209903133j],
    3: [0.477913124168157, -0.261085129662089j],
}
# g^dag (G(t,x) - G(-t,-x)) from the same recursion run forward and backward
PJ_FROZEN = {(2, 0): -0.8414709848078964j, (4, 0): -0.26123757771531303j,
             (3, 1): -0.6282648553019899j, (2, 2): -0.4207354924039482j, (1, 0): 0j}


def anticomm(a, b):
    return a @ b + b @ a


@pytest.mark.parametrize("d", [1, 3])
def test_dirac_algebra(d):
    rep = dirac_rep(d)
    mats = list(rep.alpha) + [rep.beta]
    n = rep.dim
    for i, a in enumerate(mats):
        assert np.allclose(a @ a, np.eye(n))
        assert np.allclose(a, a.conj().T)
        for b in mats[i + 1:]:
            assert np.allclose(anticomm(a, b), 0)


def test_beta_eigenvalues():
    w = np.linalg.eigvalsh(dirac_rep(1).beta)
    assert np.allclose(sorted(w), [-1, 1])


def test_grid_validation():
    with pytest.raises(ValueError):
        LatticeGrid(3, 1.0)
    with pytest.raises(NotImplementedError):
        LatticeGrid(6, 1.0, d=3)


def test_massless_delta_splits():
    L = 8
    v = np.zeros((L, 2), complex)
    v[0] = [1, 1]
    f = free_step(SpinorField(v, LatticeGrid(L, 1.0)), 0.0)
    nz = {i for i in range(L) if np.abs(f.values[i]).max() > 0}
    assert nz == {1, L - 1}
    assert f.values[1, 1] == 0 and f.values[L - 1, 0] == 0


def test_forward_backward_inverse():
    rng = np.random.default_rng(0)
    g = LatticeGrid(7, 1.0)
    f = SpinorField(rng.normal(size=(7, 2)) + 1j * rng.normal(size=(7, 2)), g)
    back = free_step(free_step(f, 0.8), 0.8, "backward")
    assert np.abs(back.values - f.values).max() < 1e-14


def test_causal_support_and_norm():
    L = 16
    v = np.zeros((L, 2), complex)
    v[0] = [0.6, 0.8j]
    f = SpinorField(v, LatticeGrid(L, 1.0))
    for _ in range(5):
        f = free_step(f, 0.5)
    dist = np.minimum(np.arange(L), L - np.arange(L))
    assert np.abs(f.values[dist > 5]).max() == 0
    assert abs(f.norm() - 1.0) < 1e-12


def test_walk_generator_exponentiates_to_walk():
    W = walk_matrix(6, 0.7, 1.0)
    h = walk_generator(6, 0.7, 1.0)
    assert np.allclose(h, h.conj().T)
    assert np.abs(expm(-1j * h) - W).max() < 1e-12


def test_green_frozen_values():
    G = green_function(G11, 0.5, 3)
    for x, v in G3_FROZEN.items():
        assert np.abs(G.at(3, x) - np.array(v)).max() < 1e-14
    for x in (-2, 0, 2):
        assert np.abs(G.at(3, x)).max() == 0


def test_green_initial_slice_and_cone():
    G = green_function(G11, 0.5, 6)
    assert np.allclose(G.at(0, 0), G11)
    for t in range(7):
        for x in range(-G.X, G.X + 1):
            if abs(x) > t:
                assert np.abs(G.at(t, x)).max() == 0


def test_green_massless_on_cone_boundary():
    G = green_function([1, 0], 0.0, 5)
    for t in range(1, 6):
        for x in range(-G.X, G.X + 1):
            if abs(x) != t:
                assert np.abs(G.at(t, x)).max() == 0


def test_green_beyond_horizon_raises():
    with pytest.raises(ValueError):
        green_function(G11, 0.5, 2).at(3, 0)


def test_pauli_jordan_frozen():
    pj = pauli_jordan(0.5, G11, 4)
    for k, v in PJ_FROZEN.items():
        assert abs(pj.at(*k) - v) < 1e-14


@pytest.mark.parametrize("m,g", [(0.0, G11), (0.5, [1, 0]), (0.5, [1, 1j])])
def test_pauli_jordan_vanishes_without_witness(m, g):
    g = np.asarray(g, complex)
    pj = pauli_jordan(m, g / np.linalg.norm(g), 6)
    assert np.abs(pj.proxy).max() <= 1e-14
