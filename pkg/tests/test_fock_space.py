import itertools
from math import comb

import numpy as np
import pytest

from conftest import make_params, rand_vec
from multitime.fock_space import (Basis, BasisCapError, FockVector, ModelParams, car_ccr_check,
                                  enumerate_basis, exchange_defect, inner, ladder, symmetrize,
                                  to_occupation, to_tensor)
from multitime.model import get_model
from multitime.scenario import random_state
from multitime.spinor_dirac import LatticeGrid


def brute_count(K, M, N):
    xs = sum(1 for m in range(M + 1) for _ in itertools.combinations(range(K), m))
    ys = sum(1 for n in range(N + 1) for _ in itertools.combinations_with_replacement(range(K), n))
    return xs * ys


@pytest.mark.parametrize("K,M,N,expect", [(4, 0, 0, 1), (4, 1, 0, 5), (8, 1, 1, 81)])
def test_basis_counts(K, M, N, expect):
    b = Basis(K, M, N)
    assert b.dim == expect == brute_count(K, M, N)


def test_basis_sector_dims():
    b = Basis(8, 2, 2)
    for M in range(3):
        for N in range(3):
            assert b.sector_dim(M, N) == comb(8, M) * comb(8 + N - 1, N)


def test_basis_index_roundtrip():
    b = Basis(8, 2, 2)
    for k in range(b.dim):
        xs, ys = b.state(k)
        assert b.index(xs, ys) == k


def test_basis_cap():
    p = make_params(L=6, M=2, N=3, basis_cap=500)
    with pytest.raises(BasisCapError):
        enumerate_basis(p)


def test_tensor_roundtrip_and_norm(dense):
    rng = np.random.default_rng(1)
    v = rand_vec(rng, enumerate_basis(dense).dim)
    f = to_tensor(v, dense)
    assert np.abs(to_occupation(f) - v).max() < 1e-14
    assert abs(f.norm() - 1) < 1e-13
    assert exchange_defect(f) < 1e-15


def test_tensor_normalization_with_spacing():
    p = ModelParams(LatticeGrid(4, 0.5), 1.0, 0.5, (1, 0), 2, 2)
    f = random_state(p, 2)
    assert abs(inner(f, f) - 1) < 1e-12


def test_inner_products(dense):
    vac = FockVector.vacuum(dense)
    assert inner(vac, vac) == 1
    u, v = random_state(dense, 1), random_state(dense, 2)
    assert abs(inner(u, v) - np.conj(inner(v, u))) < 1e-15
    b = enumerate_basis(dense)
    e = np.eye(b.dim)
    assert abs(inner(to_tensor(e[3], dense), to_tensor(e[40], dense))) == 0


def test_annihilate_vacuum(dense):
    vac = FockVector.vacuum(dense)
    for sp_ in "xy":
        out = ladder("annihilate", sp_, 1, 0, vac)
        assert out.max_abs() == 0


def test_number_operator_on_vacuum(dense):
    vac = FockVector.vacuum(dense)
    tot = FockVector.zeros(dense)
    for x in range(dense.L):
        for r in (0, 1):
            tot = tot + ladder("create", "x", x, r, ladder("annihilate", "x", x, r, vac))
    assert tot.max_abs() == 0


def test_boson_annihilation_on_one_particle(dense):
    f = FockVector.zeros(dense)
    f.sectors[(0, 1)][2 * 2 + 1] = 0.7 - 0.2j
    out = ladder("annihilate", "y", 2, 1, f)
    assert abs(out.sectors[(0, 0)][()] - (0.7 - 0.2j)) < 1e-15


def test_creation_leak_at_cap(dense):
    f = FockVector.zeros(dense)
    f.sectors[(0, 1)][0] = 1.0
    out = ladder("create", "y", 1, 0, f)
    assert out.leak > 0.5
    assert out.max_abs() == 0


def test_symmetrize_kills_symmetric_x():
    p = make_params(M=2, N=0)
    f = FockVector.zeros(p)
    rng = np.random.default_rng(0)
    A = rng.normal(size=(8, 8))
    f.sectors[(2, 0)] = (A + A.T).astype(complex)
    assert symmetrize(f).max_abs() < 1e-15


def test_symmetrize_idempotent():
    p = make_params(M=2, N=2)
    f = random_state(p, 0)
    s = symmetrize(f)
    assert (s - f).max_abs() < 1e-14


def test_symmetrize_random_tensor_matches_permutation_oracle():
    p = make_params(M=2, N=2)
    rng = np.random.default_rng(3)
    f = FockVector.zeros(p)
    T = rng.normal(size=(8,) * 4) + 1j * rng.normal(size=(8,) * 4)
    f.sectors[(2, 2)] = T
    s = symmetrize(f).sectors[(2, 2)]
    # explicit permutation sum
    o = (T - T.transpose(1, 0, 2, 3) + T.transpose(0, 1, 3, 2) - T.transpose(1, 0, 3, 2)) / 4
    assert np.abs(s - o).max() < 1e-14
    assert np.abs(s + s.transpose(1, 0, 2, 3)).max() < 1e-14
    assert np.abs(s - s.transpose(0, 1, 3, 2)).max() < 1e-14


@pytest.mark.parametrize("a", [1.0, 0.5])
def test_car_ccr(a):
    p = ModelParams(LatticeGrid(4, a), 1.0, 0.5, (1, 0), 2, 2)
    r = car_ccr_check(p)
    assert r.passed
    assert max(r.car_max, r.ccr_max, r.cross_max) < 1e-12


def test_car_one_particle_block_value():
    p = ModelParams(LatticeGrid(4, 0.5), 1.0, 0.5, (1, 0), 1, 1)
    f = FockVector.zeros(p)
    f.sectors[(1, 0)][3] = 1.0
    # a a^dag + a^dag a at equal slots acting on the vacuum gives 1/a^d
    vac = FockVector.vacuum(p)
    out = ladder("annihilate", "x", 1, 1, ladder("create", "x", 1, 1, vac))
    assert abs(out.sectors[(0, 0)][()] - 1 / 0.5) < 1e-14


def test_json_roundtrip(desk_state):
    g = FockVector.from_json(desk_state.to_json())
    assert (g - desk_state).max_abs() == 0
    assert g.params == desk_state.params


def test_params_hash_changes_with_g(dense):
    assert dense.hash() != dense.replace(g=(1.0, 0.0)).hash()
    assert dense.hash() == make_params().hash()


def test_interaction_matrix_element():
    p = ModelParams(LatticeGrid(4, 0.5), 1.0, 0.5, (0.3, 0.4j), 1, 1)
    f = FockVector.zeros(p)
    f.sectors[(1, 0)][2] = 1.0
    out = to_tensor(get_model(p).H_int @ to_occupation(f), p)
    arr = out.sectors[(1, 1)].reshape(8, 8)
    expect = np.zeros((8, 8), complex)
    expect[2, 2], expect[2, 3] = 0.3 / 0.5, 0.4j / 0.5
    assert np.abs(arr - expect).max() < 1e-14


def test_hamiltonian_vacuum_and_decoupling(dense):
    m = get_model(dense)
    b = m.basis
    vac = np.zeros(b.dim)
    vac[b.index((), ())] = 1
    assert np.abs((m.H_free + m.H_int) @ vac).max() == 0
    m0 = get_model(dense.replace(g=(0.0, 0.0)))
    assert m0.H_int.count_nonzero() == 0
    H = (m.H_free + m.H_int).toarray()
    assert np.abs(H - H.conj().T).max() < 1e-13
