import numpy as np
import pytest

from conftest import make_params
from multitime import hypersurface as hs
from multitime import single_time as st
from multitime.fock_space import FockVector, to_occupation
from multitime.scenario import random_state
from multitime.spinor_dirac import walk_matrix


def test_make_surface_validation():
    assert hs.make_surface([2, 2, 2, 2]).is_flat()
    assert hs.make_surface([0, 1, 0, 1]).tau == (0, 1, 0, 1)
    with pytest.raises(ValueError, match="sites 0,1"):
        hs.make_surface([0, 2, 0, 0])
    with pytest.raises(ValueError):
        hs.make_surface([0, 0, 0])
    with pytest.raises(ValueError):
        hs.make_surface([0, -1, 0, 0])


def test_vacuum_stays_vacuum(dense):
    s = hs.SurfaceState.initial(FockVector.vacuum(dense))
    s = hs.local_update(s, 2)
    assert abs(s.vec[0] - 1) < 1e-15 and np.abs(s.vec[1:]).max() == 0


def test_g0_local_update_is_free_move():
    p = make_params(g=(0.0, 0.0))
    s = hs.SurfaceState.initial(random_state(p, 0))
    a = hs.local_update(s, 1)
    b = hs.local_update(s, 1, interaction=False)
    assert np.abs(a.vec - b.vec).max() < 1e-15


@pytest.mark.parametrize("schedule,seed", [("canonical", None), ("reverse", None), ("random", 4)])
def test_raise_all_equals_trotter_step(dense, dense_state, schedule, seed):
    s = hs.surface_evolve(hs.SurfaceState.initial(dense_state), [1] * 4, schedule, seed)
    ref = st.evolve_occ(dense, to_occupation(dense_state), 1)
    assert np.abs(s.vec - ref).max() < 1e-10


def test_flat_to_flat_matches_evolve(desk, desk_state):
    s = hs.surface_evolve(hs.SurfaceState.initial(desk_state), [4] * 6)
    ref = st.evolve_occ(desk, to_occupation(desk_state), 4)
    assert np.abs(s.vec - ref).max() < 1e-10


def test_up_down_identity(desk_state):
    s = hs.SurfaceState.initial(desk_state)
    back = hs.local_update(hs.local_update(s, 3, "up"), 3, "down")
    assert np.abs(back.vec - s.vec).max() < 1e-12


def test_illegal_moves(dense_state):
    s = hs.SurfaceState.initial(dense_state)
    with pytest.raises(hs.DeformationError):
        hs.local_update(s, 0, "down")
    s = hs.local_update(s, 0)
    with pytest.raises(hs.DeformationError):
        hs.local_update(s, 0, "up")


def test_target_equals_source(dense_state):
    s = hs.SurfaceState.initial(dense_state)
    assert hs.surface_evolve(s, s.surface).vec is s.vec


def test_free_roundtrip(desk_state):
    s = hs.SurfaceState.initial(desk_state)
    there = hs.free_surface_evolve(s, hs.make_surface([1, 2, 1, 2, 2, 1]))
    back = hs.free_surface_evolve(there, hs.flat_surface(6, 0))
    assert np.abs(back.vec - s.vec).max() < 1e-12


def test_one_particle_sector_is_walk():
    p = make_params(L=5, M=1, N=0)
    f = FockVector.zeros(p)
    rng = np.random.default_rng(2)
    v = rng.normal(size=10) + 0j
    f.sectors[(1, 0)] = v / np.linalg.norm(v)
    s = hs.surface_evolve(hs.SurfaceState.initial(f), [2] * 5, "random", 1)
    ref = np.linalg.matrix_power(walk_matrix(5, 1.0, 1.0), 2) @ f.sectors[(1, 0)]
    assert np.abs(s.psi.sectors[(1, 0)] - ref).max() < 1e-14


def test_born_density(dense, dense_state):
    s = hs.surface_evolve(hs.SurfaceState.initial(dense_state), [1, 0, 1, 0])
    tab = hs.density_table(s)
    assert all((v >= 0).all() for v in tab.values())
    total = sum(v.sum() for v in tab.values())
    assert abs(total - (1 - s.leak)) < 1e-12
    vac = hs.SurfaceState.initial(FockVector.vacuum(dense))
    assert hs.born_density(vac, [], []) == 1.0
