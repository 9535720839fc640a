"""Dirac matrices, the lattice spinor walk, the lattice Green function and the
Pauli-Jordan proxy used by the consistency witness."""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import schur

from . import _kernels


@dataclass(frozen=True)
class DiracRep:
    d: int
    alpha: tuple
    beta: np.ndarray

    @property
    def gamma0(self):
        return self.beta

    @property
    def dim(self):
        return self.beta.shape[0]


def dirac_rep(d):
    """alpha_k and beta for spatial dimension d (1 or 3)."""
    if d == 1:
        alpha = (np.diag([1.0, -1.0]).astype(complex),)
        beta = np.array([[0, 1], [1, 0]], dtype=complex)
        return DiracRep(1, alpha, beta)
    if d == 3:
        sig = [np.array([[0, 1], [1, 0]], dtype=complex),
               np.array([[0, -1j], [1j, 0]], dtype=complex),
               np.array([[1, 0], [0, -1]], dtype=complex)]
        z = np.zeros((2, 2), dtype=complex)
        alpha = tuple(np.block([[z, s], [s, z]]) for s in sig)
        beta = np.diag([1, 1, -1, -1]).astype(complex)
        return DiracRep(3, alpha, beta)
    raise ValueError(f"unsupported spatial dimension d={d}")


@dataclass(frozen=True)
class LatticeGrid:
    L: int
    a: float = 1.0
    d: int = 1
    dt: float = None

    def __post_init__(self):
        if self.dt is None:
            object.__setattr__(self, "dt", float(self.a))
        if self.d != 1:
            raise NotImplementedError("only d=1 lattices are implemented")
        if int(self.L) != self.L or self.L < 4:
            raise ValueError(f"L must be an integer >= 4, got {self.L}")
        if not self.a > 0:
            raise ValueError("lattice spacing a must be positive")
        if not np.isclose(self.dt, self.a, rtol=0, atol=1e-12 * self.a):
            raise ValueError("the causal walk needs dt == a")

    @property
    def dim_spin(self):
        return 2

    @property
    def n_slots(self):
        return 2 * self.L


@dataclass
class SpinorField:
    values: np.ndarray  # (L, 2)
    grid: LatticeGrid

    def norm(self):
        return float(np.sqrt(self.grid.a ** self.grid.d * np.sum(np.abs(self.values) ** 2)))


def rotation(mass, dt):
    """R = exp(-i m beta dt) for beta = sigma_1, as (c, s)."""
    return np.cos(mass * dt), np.sin(mass * dt)


def rotation_matrix(mass, dt):
    c, s = rotation(mass, dt)
    return np.array([[c, -1j * s], [-1j * s, c]])


def free_step(field, mass, direction="forward"):
    if direction not in ("forward", "backward"):
        raise ValueError(f"bad direction {direction!r}")
    v = np.asarray(field.values)
    if v.shape != (field.grid.L, 2):
        raise ValueError(f"field shape {v.shape} does not match grid")
    c, s = rotation(mass, field.grid.dt)
    out = _kernels.walk(v[None], c, s, direction == "forward")[0]
    return SpinorField(out, field.grid)


def walk_axis(T, axis, L, mass, dt, forward=True):
    """Apply the walk to one slot axis (length 2L) of a tensor."""
    c, s = rotation(mass, dt)
    T = np.moveaxis(np.asarray(T, dtype=complex), axis, -1)
    sh = T.shape
    out = _kernels.walk(T.reshape(-1, L, 2), c, s, forward)
    return np.moveaxis(out.reshape(sh), -1, axis)


def walk_matrix(L, mass, dt):
    """Single-particle walk unitary on slots (index = 2*site + spin)."""
    K = 2 * L
    c, s = rotation(mass, dt)
    cols = _kernels.walk(np.eye(K, dtype=complex).reshape(K, L, 2), c, s, True)
    return cols.reshape(K, K).T.copy()


def walk_generator(L, mass, dt):
    """Hermitian h with exp(-i dt h) equal to the walk unitary."""
    W = walk_matrix(L, mass, dt)
    T, Z = schur(W, output="complex")
    ph = np.angle(np.diag(T))
    h = (Z * (-ph / dt)) @ Z.conj().T
    return 0.5 * (h + h.conj().T)


@dataclass
class GreenFn:
    """G(t, x) for t = 0..T on an unwrapped window x in [-X, X]."""
    values: np.ndarray  # (T+1, 2X+1, 2)
    X: int
    a: float

    @property
    def T(self):
        return self.values.shape[0] - 1

    def at(self, t, x):
        if t < 0 or t > self.T:
            raise ValueError(f"time {t} outside Green-function horizon {self.T}")
        if abs(x) > self.X:
            return np.zeros(2, dtype=complex)
        return self.values[t, x + self.X]


def _window(T):
    X = T + 1
    return X, 2 * X + 3


def green_function(g, m_y, T, a=1.0):
    """Forward lattice evolution of g * delta / a^d from the origin."""
    g = np.asarray(g, dtype=complex).reshape(2)
    X, Lw = _window(T)
    grid = LatticeGrid(Lw, a)
    v = np.zeros((Lw, 2), dtype=complex)
    o = X + 1
    v[o] = g / a
    out = np.empty((T + 1, 2 * X + 1, 2), dtype=complex)
    f = SpinorField(v, grid)
    for t in range(T + 1):
        out[t] = f.values[o - X:o + X + 1]
        if t < T:
            f = free_step(f, m_y)
    return GreenFn(out, X, a)


def green_backward(g, m_y, T, a=1.0):
    """G(-t, x) for t = 0..T by exact backward evolution."""
    g = np.asarray(g, dtype=complex).reshape(2)
    X, Lw = _window(T)
    grid = LatticeGrid(Lw, a)
    v = np.zeros((Lw, 2), dtype=complex)
    o = X + 1
    v[o] = g / a
    out = np.empty((T + 1, 2 * X + 1, 2), dtype=complex)
    f = SpinorField(v, grid)
    for t in range(T + 1):
        out[t] = f.values[o - X:o + X + 1]
        if t < T:
            f = free_step(f, m_y, "backward")
    return GreenFn(out, X, a)


@dataclass
class PauliJordan:
    """Lattice proxy g^dag (G(t,x) - G(-t,-x)), t in [-T, T], x in [-X, X]."""
    proxy: np.ndarray  # (2T+1, 2X+1)
    T: int
    X: int
    delta: object = None  # continuum Delta is not available on the lattice
    note: str = "lattice proxy"

    def at(self, t, x):
        if abs(t) > self.T:
            raise ValueError(f"time separation {t} exceeds horizon {self.T}")
        if abs(x) > self.X:
            return 0.0j
        return self.proxy[t + self.T, x + self.X]


def pauli_jordan(m_y, g, T, a=1.0):
    g = np.asarray(g, dtype=complex).reshape(2)
    Gf = green_function(g, m_y, T, a)
    Gb = green_backward(g, m_y, T, a)
    X = Gf.X
    P = np.zeros((2 * T + 1, 2 * X + 1), dtype=complex)
    for t in range(-T, T + 1):
        for x in range(-X, X + 1):
            gp = Gf.at(t, x) if t >= 0 else Gb.at(-t, x)
            gm = Gb.at(t, -x) if t >= 0 else Gf.at(-t, -x)
            P[t + T, x + X] = g.conj() @ (gp - gm)
    return PauliJordan(P, T, X)
