"""Lattice hypersurfaces (integer height functions) and the tent-move
evolution of surface states.

Slot convention on a non-flat surface: a site lying one step below a
neighbour keeps, in its spinor slot facing that neighbour, the component the
neighbour emitted towards it.  At local maxima both slots hold the field at
the vertex itself, so amplitudes of configurations made of local-max vertices
are the wave function values there.
"""
from dataclasses import dataclass, field

import numpy as np

from .fock_space import FockVector, enumerate_basis, to_occupation, to_tensor
from .model import get_model


class DeformationError(ValueError):
    pass


@dataclass(frozen=True)
class Hypersurface:
    tau: tuple

    @property
    def L(self):
        return len(self.tau)

    def arr(self):
        return np.array(self.tau, dtype=np.int64)

    def is_flat(self):
        return len(set(self.tau)) == 1

    def local_max(self, i):
        L = self.L
        t = self.tau[i]
        return self.tau[(i - 1) % L] <= t and self.tau[(i + 1) % L] <= t

    def can_raise(self, i):
        L = self.L
        t = self.tau[i]
        return all(t <= self.tau[j] <= t + 1 for j in ((i - 1) % L, (i + 1) % L))

    def can_lower(self, i):
        L = self.L
        t = self.tau[i]
        return t >= 1 and all(t - 1 <= self.tau[j] <= t for j in ((i - 1) % L, (i + 1) % L))

    def raised(self, i, step=1):
        tau = list(self.tau)
        tau[i] += step
        return Hypersurface(tuple(tau))


def make_surface(heights, L=None):
    h = [int(v) for v in heights]
    if any(int(v) != v for v in heights):
        raise ValueError("surface heights must be integers")
    if L is not None and len(h) != L:
        raise ValueError(f"surface has {len(h)} sites, lattice has {L}")
    if len(h) < 4:
        raise ValueError("surface needs at least 4 sites")
    if min(h) < 0:
        raise ValueError("surface heights must be >= 0")
    for i in range(len(h)):
        j = (i + 1) % len(h)
        if abs(h[i] - h[j]) > 1:
            raise ValueError(f"surface not spacelike: sites {i},{j} heights {h[i]},{h[j]}")
    return Hypersurface(tuple(h))


def flat_surface(L, t=0):
    return Hypersurface((int(t),) * L)


@dataclass
class SurfaceState:
    surface: Hypersurface
    vec: np.ndarray
    params: object
    leak: float = 0.0
    moves: int = 0
    history: list = field(default_factory=list)

    @classmethod
    def initial(cls, psi0, t=0):
        """Place a FockVector on the flat surface at height t."""
        v = to_occupation(psi0)
        return cls(flat_surface(psi0.params.L, t), v, psi0.params, psi0.leak)

    @property
    def psi(self):
        out = to_tensor(self.vec, self.params)
        out.leak = self.leak
        return out

    def norm(self):
        return float(np.linalg.norm(self.vec))


def _flags(tau, i, t):
    L = len(tau)
    return tau[(i - 1) % L] == t, tau[(i + 1) % L] == t


def _up_matrix(m, tau, i, interaction):
    t = tau[i]
    fl, fr = _flags(tau, i, t)
    U = m.micro(i, fl, fr)
    if interaction:
        U = m.site_factor(i, t) @ U
    return U


def local_update(state, site, direction="up", interaction=True):
    s = state.surface
    i = int(site)
    if not 0 <= i < s.L:
        raise DeformationError(f"site {i} outside lattice")
    m = get_model(state.params)
    n0 = np.linalg.norm(state.vec)
    if direction == "up":
        if not s.can_raise(i):
            raise DeformationError(f"cannot raise site {i}: heights {s.tau}")
        v = _up_matrix(m, s.tau, i, interaction) @ state.vec
        new = s.raised(i, 1)
    elif direction == "down":
        if not s.can_lower(i):
            raise DeformationError(f"cannot lower site {i}: heights {s.tau}")
        new = s.raised(i, -1)
        U = _up_matrix(m, new.tau, i, interaction)
        v = U.conj().T @ state.vec
    else:
        raise ValueError(f"bad direction {direction!r}")
    leak = state.leak + abs(n0 ** 2 - np.linalg.norm(v) ** 2)
    return SurfaceState(new, v, state.params, leak, state.moves + 1, state.history)


def schedule_moves(start, target, schedule="canonical", seed=None):
    """List of (site, direction) deforming start into target."""
    if start.L != target.L:
        raise DeformationError("surfaces live on different lattices")
    rng = np.random.default_rng(seed)
    tau = list(start.tau)
    tgt = list(target.tau)
    up = [max(a, b) for a, b in zip(tau, tgt)]
    moves = []
    L = len(tau)

    def pick(cands, key):
        if schedule == "canonical":
            return min(cands, key=lambda i: (key(i), i))
        if schedule == "reverse":
            return min(cands, key=lambda i: (key(i), -i))
        if schedule == "random":
            return cands[rng.integers(len(cands))]
        raise ValueError(f"unknown schedule {schedule!r}")

    while True:
        need = [i for i in range(L) if tau[i] < up[i]]
        if not need:
            break
        surf = Hypersurface(tuple(tau))
        cands = [i for i in need if surf.can_raise(i)]
        if schedule != "random":
            low = min(tau[i] for i in need)
            cands = [i for i in cands if tau[i] == low]
        i = pick(cands, lambda i: tau[i])
        tau[i] += 1
        moves.append((i, "up"))
    while True:
        need = [i for i in range(L) if tau[i] > tgt[i]]
        if not need:
            break
        surf = Hypersurface(tuple(tau))
        cands = [i for i in need if surf.can_lower(i)]
        if schedule != "random":
            high = max(tau[i] for i in need)
            cands = [i for i in cands if tau[i] == high]
        i = pick(cands, lambda i: -tau[i])
        tau[i] -= 1
        moves.append((i, "down"))
    return moves


def surface_evolve(state, target, schedule="canonical", seed=None, interaction=True):
    if isinstance(target, (list, tuple, np.ndarray)):
        target = make_surface(target, state.params.L)
    for i, d in schedule_moves(state.surface, target, schedule, seed):
        state = local_update(state, i, d, interaction)
    return state


def free_surface_evolve(state, target, schedule="canonical", seed=None):
    return surface_evolve(state, target, schedule, seed, interaction=False)


def born_density(state, xsites, ysites):
    """Probability density of x-sites/y-sites on the surface, summed over spins.

    Normal vectors are axis aligned on the lattice, so gamma^mu n_mu gamma^0 = I."""
    psi = state.psi if isinstance(state, SurfaceState) else state
    M, N = len(xsites), len(ysites)
    arr = psi.sectors.get((M, N))
    if arr is None:
        return 0.0
    L = psi.params.L
    if M + N == 0:
        return float(abs(arr[()]) ** 2)
    a = arr.reshape((L, 2) * (M + N))
    idx = []
    for s in list(xsites) + list(ysites):
        idx += [int(s), slice(None)]
    return float(np.sum(np.abs(a[tuple(idx)]) ** 2))


def density_table(state):
    """Per-sector arrays rho[(M, N)] over ordered site configurations."""
    psi = state.psi if isinstance(state, SurfaceState) else state
    L = psi.params.L
    out = {}
    for (M, N), arr in psi.sectors.items():
        n = M + N
        a = np.abs(arr.reshape((L, 2) * n)) ** 2
        out[(M, N)] = a.sum(axis=tuple(range(1, 2 * n, 2))) if n else a
    return out


__all__ = ["Hypersurface", "SurfaceState", "make_surface", "flat_surface", "local_update",
           "surface_evolve", "free_surface_evolve", "schedule_moves", "born_density",
           "density_table", "DeformationError", "FockVector", "enumerate_basis"]
