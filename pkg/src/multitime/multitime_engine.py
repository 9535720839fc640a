"""Multi-time wave function phi on spacelike lattice configurations.

phi(q) is read off the surface state on the minimal surface through q, where
every point of q is a local maximum.  Also here: the partial Hamiltonians as
stencil operators, the independent per-family tensor route, the domain of
dependence and the inconsistency witness."""
import itertools
from dataclasses import dataclass, field
from math import sqrt

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .fock_space import FockVector, amplitude, to_occupation
from .hypersurface import Hypersurface, SurfaceState, make_surface, surface_evolve
from .model import get_model
from .spinor_dirac import green_backward, green_function, pauli_jordan, rotation_matrix, walk_axis, walk_generator


class ConfigError(ValueError):
    pass


def ring_dist(i, j, L):
    d = abs(int(i) - int(j)) % L
    return min(d, L - d)


@dataclass(frozen=True)
class SpacetimeConfig:
    """x and y points as (site, t) pairs; order is the argument order of phi."""
    x: tuple = ()
    y: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "x", tuple((int(s), int(t)) for s, t in self.x))
        object.__setattr__(self, "y", tuple((int(s), int(t)) for s, t in self.y))

    @property
    def M(self):
        return len(self.x)

    @property
    def N(self):
        return len(self.y)

    @property
    def points(self):
        return self.x + self.y

    def with_x(self, j, pt):
        x = list(self.x)
        x[j] = pt
        return SpacetimeConfig(tuple(x), self.y)

    def with_y(self, k, pt):
        y = list(self.y)
        y[k] = pt
        return SpacetimeConfig(self.x, tuple(y))

    def add_y(self, pt):
        return SpacetimeConfig(self.x, self.y + (pt,))

    def drop_y(self, k):
        return SpacetimeConfig(self.x, self.y[:k] + self.y[k + 1:])

    def to_json(self):
        return {"x": [list(p) for p in self.x], "y": [list(p) for p in self.y]}


def is_spacelike(config, L):
    """(ok, witness): pairwise spacelike or coincident; witness is a bad pair."""
    pts = config.points
    for a, b in itertools.combinations(range(len(pts)), 2):
        (s1, t1), (s2, t2) = pts[a], pts[b]
        if (s1 % L, t1) == (s2 % L, t2):
            continue
        if abs(t1 - t2) >= ring_dist(s1, s2, L):
            return False, (pts[a], pts[b])
    return True, None


def is_collision(config):
    pts = [(s, t) for s, t in config.points]
    return len(set(pts)) < len(pts)


def minimal_surface(config, L):
    if not config.points:
        return Hypersurface((0,) * L)
    tau = []
    for i in range(L):
        tau.append(max(0, max(t - ring_dist(i, s, L) for s, t in config.points)))
    return make_surface(tau, L)


def _contains(surface, config, L):
    for s, t in config.points:
        if surface.tau[s % L] != t or not surface.local_max(s % L):
            return False
    return True


class Engine:
    """Evaluates phi for one initial state, caching surface states."""

    def __init__(self, psi0, schedule="canonical"):
        self.psi0 = psi0
        self.params = psi0.params
        self.model = get_model(self.params)
        self.schedule = schedule
        self.base = SurfaceState.initial(psi0)
        self._states = {}

    def state_on(self, surface):
        st = self._states.get(surface.tau)
        if st is None:
            st = surface_evolve(self.base, surface, self.schedule)
            if len(self._states) > 256:
                self._states.clear()
            self._states[surface.tau] = st
        return st

    def phi(self, config, surface=None):
        L = self.params.L
        ok, w = is_spacelike(config, L)
        if not ok:
            raise ConfigError(f"configuration not spacelike: {w}")
        if config.M > self.params.M_max or config.N > self.params.N_max:
            return np.zeros((2,) * (config.M + config.N), dtype=complex)
        if any(t < 0 for _, t in config.points):
            raise ConfigError("negative times are not supported")
        surf = minimal_surface(config, L) if surface is None else surface
        if not _contains(surf, config, L):
            raise ConfigError("surface does not contain the configuration at local maxima")
        st = self.state_on(surf)
        return read_phi(st, config)


def read_phi(state, config):
    p = state.params
    b = get_model(p).basis
    M, N = config.M, config.N
    out = np.zeros((2,) * (M + N), dtype=complex)
    L = p.L
    for spins in itertools.product((0, 1), repeat=M + N):
        xs = [2 * (s % L) + r for (s, _), r in zip(config.x, spins[:M])]
        ys = [2 * (s % L) + r for (s, _), r in zip(config.y, spins[M:])]
        out[spins] = amplitude(state.vec, b, p, xs, ys)
    return out


def eval_phi(config, psi0, surface=None, schedule="canonical"):
    return Engine(psi0, schedule).phi(config, surface)


# ---------------------------------------------------------------------------
# partial Hamiltonians


def green_value(params, dt_steps, dx):
    """G(t, x) for signed integer t on the unwrapped lattice."""
    T = abs(int(dt_steps))
    if abs(dx) > T:
        return np.zeros(2, dtype=complex)
    G = (green_function if dt_steps >= 0 else green_backward)(params.gvec, params.m_y, T, params.a)
    return G.at(T, int(dx))


def _signed_sep(s_to, s_from, L):
    d = (int(s_to) - int(s_from)) % L
    return d if d <= L // 2 else d - L


@dataclass
class PhiStencil:
    config: SpacetimeConfig
    engine: Engine
    free: str = "walk"
    _memo: dict = field(default_factory=dict)

    def phi(self, cfg):
        key = (cfg.x, cfg.y)
        v = self._memo.get(key)
        if v is None:
            v = self.engine.phi(cfg)
            self._memo[key] = v
        return v

    @property
    def params(self):
        return self.engine.params


def make_stencil(config, psi0_or_engine, free="walk"):
    eng = psi0_or_engine if isinstance(psi0_or_engine, Engine) else Engine(psi0_or_engine)
    return PhiStencil(config, eng, free)


def _free_part(st, axis, moved):
    """i/dt (walk from the slot's neighbours - phi) along one slot axis."""
    p = st.params
    L = p.L
    cfg = st.config
    M = cfg.M
    species = "x" if axis < M else "y"
    k = axis if axis < M else axis - M
    site, t = cfg.points[axis]
    mass = p.m_x if species == "x" else p.m_y
    phi0 = st.phi(cfg)
    if st.free == "walk":
        A = st.phi(moved(k, ((site - 1) % L, t)))
        B = st.phi(moved(k, ((site + 1) % L, t)))
        R = rotation_matrix(mass, p.dt)
        ap = np.take(A, 0, axis=axis)
        bm = np.take(B, 1, axis=axis)
        new = np.stack([R[0, 0] * ap + R[0, 1] * bm, R[1, 0] * ap + R[1, 1] * bm], axis=axis)
        return 1j / p.dt * (new - phi0)
    if st.free == "generator":
        h = walk_generator(L, mass, p.dt)
        acc = np.zeros_like(phi0)
        for j in range(L):
            P = st.phi(moved(k, (j, t)))
            for r in (0, 1):
                for rr in (0, 1):
                    c = h[2 * site + r, 2 * j + rr]
                    if c == 0:
                        continue
                    sl = [slice(None)] * phi0.ndim
                    sl[axis] = r
                    acc[tuple(sl)] += c * np.take(P, rr, axis=axis)
        return acc
    raise ValueError(f"unknown free mode {st.free!r}")


def _creation(st, j):
    cfg = st.config
    p = st.params
    N = cfg.N
    if N + 1 > p.N_max:
        return np.zeros((2,) * (cfg.M + N), dtype=complex)
    big = st.phi(cfg.add_y(cfg.x[j]))
    return sqrt(N + 1) * np.tensordot(big, p.gvec.conj(), axes=([cfg.M + N], [0]))


def _annihilation_term(st, j, k):
    """(1/sqrt N) G_{s_k}(y_k - x_j) phi_{hat s_k}(x, y minus y_k)."""
    cfg = st.config
    p = st.params
    N = cfg.N
    (sy, ty), (sx, tx) = cfg.y[k], cfg.x[j]
    G = green_value(p, ty - tx, _signed_sep(sy, sx, p.L))
    if not np.any(G):
        return np.zeros((2,) * (cfg.M + N), dtype=complex)
    small = st.phi(cfg.drop_y(k))
    t = np.multiply.outer(small, G)  # new axis last
    return np.moveaxis(t, -1, cfg.M + k) / sqrt(N)


def _check_single(st, which):
    cfg = st.config
    sp, idx = which
    pt = cfg.x[idx] if sp == "x" else cfg.y[idx]
    others = [q for n, q in enumerate(cfg.points) if n != (idx if sp == "x" else cfg.M + idx)]
    if pt in others:
        raise ConfigError(f"slot {which} sits on a collision; use apply_joint")


def apply_partial_hamiltonian(which, st, check_collision=True):
    """H_{x_j} phi or H_{y_k} phi at the stencil's configuration."""
    sp, idx = which
    cfg = st.config
    if check_collision:
        _check_single(st, which)
    if sp == "x":
        out = _free_part(st, idx, lambda k, pt: cfg.with_x(k, pt))
        out = out + _creation(st, idx)
        for k in range(cfg.N):
            out = out + _annihilation_term(st, idx, k)
        return out
    if sp == "y":
        return _free_part(st, cfg.M + idx, lambda k, pt: cfg.with_y(k, pt))
    raise ValueError(f"bad slot {which!r}")


def apply_alt_split(which, st, check_collision=True):
    """Partial Hamiltonians with the G-term attached to the y slots."""
    sp, idx = which
    cfg = st.config
    if check_collision:
        _check_single(st, which)
    if sp == "x":
        return _free_part(st, idx, lambda k, pt: cfg.with_x(k, pt)) + _creation(st, idx)
    if sp == "y":
        out = _free_part(st, cfg.M + idx, lambda k, pt: cfg.with_y(k, pt))
        for j in range(cfg.M):
            out = out + _annihilation_term(st, j, idx)
        return out
    raise ValueError(f"bad slot {which!r}")


def apply_joint(slots, st, split="standard"):
    """Directional derivative rule: sum of the partial Hamiltonians of slots."""
    f = apply_partial_hamiltonian if split == "standard" else apply_alt_split
    return sum(f(w, st, check_collision=False) for w in slots)


def interaction_part(slots, st, split="standard"):
    """Interaction terms only (free parts dropped) of apply_joint."""
    cfg = st.config
    out = np.zeros((2,) * (cfg.M + cfg.N), dtype=complex)
    for species, idx in slots:
        if species == "x":
            out = out + _creation(st, idx)
            if split == "standard":
                for k in range(cfg.N):
                    out = out + _annihilation_term(st, idx, k)
        elif split != "standard":
            for j in range(cfg.M):
                out = out + _annihilation_term(st, j, idx)
    return out


def site_interaction_value(engine, config, site):
    """(h_site psi_Sigma)(q) on the minimal surface through q."""
    surf = minimal_surface(config, engine.params.L)
    st = engine.state_on(surf)
    m = engine.model
    t = surf.tau[site]
    v = m.site_h(site, t) @ st.vec
    tmp = SurfaceState(surf, v, engine.params)
    return read_phi(tmp, config)


# ---------------------------------------------------------------------------
# per-family tensor route


@dataclass
class MixedSlice:
    """Frozen family (M1 x's, N1 y's at t=0) and a live family (M2 x's plus
    any y's it creates) at time t2.  data[N2] has axes
    x_frozen, x_live, y_frozen, y_live, each a slot index."""
    params: object
    M1: int
    N1: int
    M2: int
    t2: int
    data: dict

    def value(self, x1, x2, y1, y2):
        return self.data[len(y2)][tuple(x1) + tuple(x2) + tuple(y1) + tuple(y2)]


def mixed_slice(psi0, M1, N1, M2):
    p = psi0.params
    data = {}
    for N2 in range(p.N_max - N1 + 1):
        data[N2] = psi0.sectors[(M1 + M2, N1 + N2)].copy()
    return MixedSlice(p, M1, N1, M2, 0, data)


_GEN = {}


def _family_generator(p, M1, N1, M2):
    """Sparse interaction generator h of the live family on its own axes."""
    key = (p.hash(), M1, N1, M2)
    if key in _GEN:
        return _GEN[key]
    K = p.K
    g = p.gvec
    a = p.a ** p.grid.d
    nmax = p.N_max - N1
    dims = [K ** (M2 + n) for n in range(nmax + 1)]
    offs = np.concatenate([[0], np.cumsum(dims)])
    Dt = int(offs[-1])
    H = sp.lil_matrix((Dt, Dt), dtype=complex)
    site_of = np.arange(K) // 2
    xs = list(itertools.product(range(K), repeat=M2))
    for n in range(nmax):
        # creation from sector n+1 into n, annihilation from n into n+1 (adjoint)
        Ntot = N1 + n
        for ix, xt in enumerate(xs):
            for iy, yt in enumerate(itertools.product(range(K), repeat=n)):
                row = offs[n] + ix * K ** n + iy
                for j in range(M2):
                    for s in (0, 1):
                        q = 2 * site_of[xt[j]] + s
                        col = offs[n + 1] + (ix * K ** n + iy) * K + q
                        H[row, col] += sqrt(Ntot + 1) * g[s].conjugate()
        # b^dag part: sum over live y positions k of delta(site) g/a
        for ix, xt in enumerate(xs):
            xsites = [site_of[v] for v in xt]
            for iy, yt in enumerate(itertools.product(range(K), repeat=n + 1)):
                row = offs[n + 1] + ix * K ** (n + 1) + iy
                for k in range(n + 1):
                    q = yt[k]
                    mult = sum(1 for sx in xsites if sx == site_of[q])
                    if not mult:
                        continue
                    rest = yt[:k] + yt[k + 1:]
                    r_iy = 0
                    for v in rest:
                        r_iy = r_iy * K + v
                    col = offs[n] + ix * K ** n + r_iy
                    H[row, col] += mult * g[q % 2] / a / sqrt(Ntot + 1)
    _GEN[key] = (H.tocsr(), offs, dims)
    return _GEN[key]


def family_step(sl):
    """Advance the live family by one dt: walk on its axes, then the exact
    exponential of its interaction.  Cross-family Green terms vanish on
    spacelike configurations and are dropped."""
    p = sl.params
    if p.A0 is not None:
        raise NotImplementedError("family route does not support external potentials")
    M1, N1, M2 = sl.M1, sl.N1, sl.M2
    K = p.K
    new = {}
    for N2, arr in sl.data.items():
        live = list(range(M1, M1 + M2)) + list(range(M1 + M2 + N1, M1 + M2 + N1 + N2))
        for ax in live:
            mass = p.m_x if ax < M1 + M2 else p.m_y
            arr = walk_axis(arr, ax, p.L, mass, p.dt)
        new[N2] = arr
    H, offs, dims = _family_generator(p, M1, N1, M2)
    nf = M1 + N1
    B = K ** nf
    stack = np.zeros((B, int(offs[-1])), dtype=complex)
    for N2, arr in new.items():
        # order axes: frozen (x1, y1) then live (x2, y2)
        perm = list(range(M1)) + list(range(M1 + M2, M1 + M2 + N1)) + \
            list(range(M1, M1 + M2)) + list(range(M1 + M2 + N1, M1 + M2 + N1 + N2))
        stack[:, offs[N2]:offs[N2 + 1]] = np.transpose(arr, perm).reshape(B, -1)
    stack = expm_multiply(-1j * p.dt * H, stack.T).T
    out = {}
    for N2 in new:
        n = M1 + M2 + N1 + N2
        shp = (K,) * n
        perm = list(range(M1)) + list(range(M1 + M2, M1 + M2 + N1)) + \
            list(range(M1, M1 + M2)) + list(range(M1 + M2 + N1, n))
        arr = stack[:, offs[N2]:offs[N2 + 1]].reshape(shp)
        out[N2] = np.transpose(arr, np.argsort(perm))
    return MixedSlice(p, M1, N1, M2, sl.t2 + 1, out)


def family_evolve(psi0, M1, N1, M2, steps):
    sl = mixed_slice(psi0, M1, N1, M2)
    for _ in range(steps):
        sl = family_step(sl)
    return sl


# ---------------------------------------------------------------------------
# domain of dependence


@dataclass
class NtSet:
    """Initial (t=0) configurations that can influence phi at q after t steps."""
    xsites: tuple
    ysites: tuple
    t: int
    L: int

    def contains(self, X, Y):
        L, t = self.L, self.t
        if len(X) != len(self.xsites):
            return False
        if not _perfect_match(list(X), list(self.xsites), t, L):
            return False
        # y's not within t of some initial x must map to distinct initial y's
        req = [v for v in Y if not any(ring_dist(v, x, L) <= t for x in self.xsites)]
        return _injective_match(req, list(self.ysites), t, L)


def _perfect_match(A, B, t, L):
    if len(A) != len(B):
        return False
    return _injective_match(A, B, t, L)


def _injective_match(A, B, t, L):
    if len(A) > len(B):
        return False
    for perm in itertools.permutations(range(len(B)), len(A)):
        if all(ring_dist(A[i], B[perm[i]], L) <= t for i in range(len(A))):
            return True
    return False


def domain_of_dependence(xsites, ysites, t, L):
    if t < 0:
        raise ValueError("t must be non-negative")
    return NtSet(tuple(int(v) for v in xsites), tuple(int(v) for v in ysites), int(t), int(L))


# ---------------------------------------------------------------------------
# inconsistency witness


def consistency_commutator(p1, p2, m_y, g, horizon=8, a=1.0):
    """sum_s g_s^* (G_s(p1 - p2) - G_s(p2 - p1)) for points (t, x) on the
    unwrapped lattice; equals the x_i/x_j consistency commutator."""
    dt = int(p1[0]) - int(p2[0])
    dx = int(p1[1]) - int(p2[1])
    if abs(dt) > horizon:
        raise ValueError(f"time separation {dt} exceeds horizon {horizon}")
    pj = pauli_jordan(m_y, g, max(abs(dt), 1), a)
    return complex(pj.at(dt, dx))


__all__ = ["SpacetimeConfig", "is_spacelike", "minimal_surface", "Engine", "eval_phi",
           "PhiStencil", "make_stencil", "apply_partial_hamiltonian", "apply_alt_split",
           "apply_joint", "interaction_part", "site_interaction_value", "MixedSlice",
           "mixed_slice", "family_step", "family_evolve", "NtSet", "domain_of_dependence",
           "consistency_commutator", "ConfigError", "FockVector", "to_occupation"]
