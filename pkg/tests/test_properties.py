import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st_

from conftest import make_params
from multitime import hypersurface as hs
from multitime import multitime_engine as me
from multitime import single_time as st
from multitime.fock_space import FockVector, enumerate_basis, exchange_defect, inner, symmetrize, to_occupation
from multitime.scenario import random_state
from multitime.spinor_dirac import LatticeGrid, SpinorField, free_step

DENSE = make_params()
DESK = make_params(L=6, M=1, N=2)
PERM = make_params(M=2, N=2)
seeds = st_.integers(0, 2 ** 31 - 1)


def lipschitz(L, top=3):
    steps = st_.lists(st_.sampled_from([-1, 0, 1]), min_size=L - 1, max_size=L - 1)

    def build(args):
        h0, ds = args
        h = [h0]
        for d in ds:
            h.append(h[-1] + d)
        lo = min(h)
        h = [v - lo for v in h]
        return h
    return st_.tuples(st_.integers(0, top), steps).map(build).filter(
        lambda h: abs(h[0] - h[-1]) <= 1)


@given(seeds, st_.floats(0, 3), st_.integers(4, 12))
def test_walk_unitary_and_invertible(seed, m, L):
    rng = np.random.default_rng(seed)
    f = SpinorField(rng.normal(size=(L, 2)) + 1j * rng.normal(size=(L, 2)), LatticeGrid(L, 1.0))
    g = free_step(f, m)
    assert abs(g.norm() - f.norm()) < 1e-12
    assert np.abs(free_step(g, m, "backward").values - f.values).max() < 1e-13


@given(seeds)
def test_symmetrize_properties(seed):
    rng = np.random.default_rng(seed)
    f = FockVector.zeros(PERM)
    for k, arr in f.sectors.items():
        f.sectors[k] = rng.normal(size=arr.shape) + 1j * rng.normal(size=arr.shape)
    s = symmetrize(f)
    assert exchange_defect(s) < 1e-14
    assert (symmetrize(s) - s).max_abs() < 1e-14
    x = s.sectors[(2, 2)]
    assert np.abs(x + x.transpose(1, 0, 2, 3)).max() < 1e-14
    assert np.abs(x - x.transpose(0, 1, 3, 2)).max() < 1e-14


@given(seeds, seeds)
def test_inner_hermitian(s1, s2):
    u, v = random_state(DESK, s1), random_state(DESK, s2)
    assert abs(inner(u, v) - np.conj(inner(v, u))) < 1e-14


@given(lipschitz(6))
def test_valid_surfaces_accepted(h):
    s = hs.make_surface(h)
    assert s.tau == tuple(h)


@given(lipschitz(6), st_.integers(0, 5))
def test_jump_rejected(h, i):
    h = list(h)
    h[i] += 2
    assume(any(abs(h[i] - h[j]) > 1 for j in ((i - 1) % 6, (i + 1) % 6)))
    try:
        hs.make_surface(h)
    except ValueError:
        return
    raise AssertionError("accepted a non-spacelike surface")


@given(lipschitz(4, 2), seeds, seeds)
def test_path_independence_any_surface(h, seed, sched_seed):
    s0 = hs.SurfaceState.initial(random_state(DENSE, seed))
    a = hs.surface_evolve(s0, h)
    b = hs.surface_evolve(s0, h, "random", sched_seed)
    c = hs.surface_evolve(hs.surface_evolve(s0, [max(h) + 1] * 4), h, "random", sched_seed)
    assert np.abs(a.vec - b.vec).max() < 1e-10
    assert np.abs(a.vec - c.vec).max() < 1e-10


@given(seeds, st_.integers(0, 3), st_.sampled_from(["up", "down"]), lipschitz(4, 2))
def test_local_update_inverse_and_unitary(seed, i, d, h):
    s = hs.SurfaceState.initial(random_state(DENSE, seed))
    s = hs.surface_evolve(s, h)
    surf = s.surface
    assume(surf.can_raise(i) if d == "up" else surf.can_lower(i))
    t = hs.local_update(s, i, d)
    assert abs(t.norm() - s.norm()) < 1e-12
    back = hs.local_update(t, i, "down" if d == "up" else "up")
    assert np.abs(back.vec - s.vec).max() < 1e-12


@given(seeds, st_.integers(0, 3), st_.integers(0, 3), st_.integers(0, 3), st_.integers(0, 1))
def test_phi_exchange_signs(seed, s1, s2, s3, t):
    cfg = me.SpacetimeConfig(((s1, t), (s2, t)), ((s3, t), ((s3 + 2) % 4, t)))
    assume(s1 != s2)
    e = me.Engine(random_state(PERM, seed % 50))
    ph = e.phi(cfg)
    sx = me.SpacetimeConfig(cfg.x[::-1], cfg.y)
    sy = me.SpacetimeConfig(cfg.x, cfg.y[::-1])
    assert np.abs(e.phi(sx) + ph.transpose(1, 0, 2, 3)).max() < 1e-12
    assert np.abs(e.phi(sy) - ph.transpose(0, 1, 3, 2)).max() < 1e-12


@given(st_.lists(st_.integers(0, 7), min_size=0, max_size=2), st_.lists(st_.integers(0, 7), max_size=2),
       st_.integers(0, 3))
def test_domain_contains_itself_and_grows(xs, ys, t):
    Nt = me.domain_of_dependence(xs, ys, t, 8)
    assert Nt.contains(xs, ys)
    N2 = me.domain_of_dependence(xs, ys, t + 1, 8)
    for X in ([(v + 1) % 8 for v in xs], xs):
        for Y in ([(v + t) % 8 for v in ys], ys):
            if Nt.contains(X, Y):
                assert N2.contains(X, Y)


@given(seeds, st_.integers(0, 5), st_.integers(1, 2))
def test_local_perturbation_stays_in_cone(seed, r0, t):
    b = enumerate_basis(DESK)
    rng = np.random.default_rng(seed)
    v = to_occupation(random_state(DESK, seed % 100))
    touch = np.array([r0 in {q // 2 for q in sum(b.state(k), ())} for k in range(b.dim)])
    w = v + touch * (rng.normal(size=b.dim) + 0j) * 0.1
    a, c = st.evolve_occ(DESK, v, t), st.evolve_occ(DESK, w, t)
    for k in range(b.dim):
        sites = {q // 2 for q in sum(b.state(k), ())}
        if all(me.ring_dist(s, r0, 6) > t for s in sites):
            assert abs(a[k] - c[k]) <= 1e-14
