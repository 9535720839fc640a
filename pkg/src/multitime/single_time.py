"""Single-time Schroedinger evolution: causal Trotter steps and a dense
eigendecomposition oracle, plus Heisenberg-picture fields."""
from dataclasses import dataclass
from math import factorial

import numpy as np
import scipy.sparse as sp

from .fock_space import FockVector, to_occupation, to_tensor
from .model import blockwise_expm, get_model

DENSE_CAP = 4000


class DenseCapError(ValueError):
    pass


@dataclass
class HamiltonianParts:
    H_free: sp.csr_matrix
    H_int: sp.csr_matrix
    model: object

    @property
    def H(self):
        return self.H_free + self.H_int

    @property
    def basis(self):
        return self.model.basis


def build_hamiltonian(params):
    m = get_model(params)
    return HamiltonianParts(m.H_free, m.H_int, m)


def _check_dense(m):
    if m.dim > DENSE_CAP:
        raise DenseCapError(f"dense oracle needs dim <= {DENSE_CAP}, got {m.dim}")


_EIG = {}


def _eig(m, t):
    key = (m.params.hash(), t if m.params.A0 is not None else None)
    e = _EIG.get(key)
    if e is None:
        _check_dense(m)
        H = m.hamiltonian(t).toarray()
        w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
        e = (w, V)
        if len(_EIG) > 16:
            _EIG.clear()
        _EIG[key] = e
    return e


def dense_propagator(params, duration, t=0):
    """exp(-i H duration) as a dense matrix (static potential slice t)."""
    w, V = _eig(get_model(params), t)
    return (V * np.exp(-1j * w * duration)) @ V.conj().T


def evolve_occ(params, vec, steps, method="trotter", t0=0):
    """Evolve an occupation vector by integer steps of dt."""
    m = get_model(params)
    v = np.asarray(vec, dtype=complex)
    if method == "trotter":
        for n in range(t0, t0 + steps):
            v = m.trotter_step(n) @ v
        return v
    if method == "dense":
        if params.A0 is None:
            w, V = _eig(m, 0)
            return V @ (np.exp(-1j * w * steps * params.dt) * (V.conj().T @ v))
        for n in range(t0, t0 + steps):
            w, V = _eig(m, n)
            v = V @ (np.exp(-1j * w * params.dt) * (V.conj().T @ v))
        return v
    raise ValueError(f"unknown method {method!r}")


def evolve(state, steps, method="trotter", t0=0):
    """Evolve a FockVector; leak accumulates the norm defect."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    p = state.params
    v0 = to_occupation(state)
    n0 = np.linalg.norm(v0)
    v = evolve_occ(p, v0, steps, method, t0)
    out = to_tensor(v, p)
    out.leak = state.leak + abs(n0 ** 2 - np.linalg.norm(v) ** 2)
    return out


def trotter_refinement(params, vec, steps, levels=(1, 2, 4, 8, 16)):
    """Error of the split-step evolution against the dense oracle at fixed
    physical time steps*dt, refining the splitting step tau = dt/r."""
    m = get_model(params)
    ref = evolve_occ(params, vec, steps, "dense")
    from scipy.linalg import expm
    _check_dense(m)
    Hf = m.H_free.toarray()
    out = []
    for r in levels:
        tau = params.dt / r
        F = expm(-1j * tau * Hf)
        Kt = sp.identity(m.dim, dtype=complex, format="csr")
        for i in range(params.L):
            Kt = blockwise_expm(m.site_coupling(i), tau) @ Kt
        v = np.asarray(vec, dtype=complex)
        for _ in range(steps * r):
            v = Kt @ (F @ v)
        out.append((r, float(np.linalg.norm(v - ref))))
    return out


# ---------------------------------------------------------------------------
# Heisenberg picture


def propagator(params, n, method="trotter"):
    """Dense U(n dt) for the chosen evolution."""
    m = get_model(params)
    _check_dense(m)
    if method == "dense" and params.A0 is None:
        return dense_propagator(params, n * params.dt)
    U = np.eye(m.dim, dtype=complex)
    for k in range(n):
        S = m.trotter_step(k).toarray() if method == "trotter" else dense_propagator(params, params.dt, k)
        U = S @ U
    return U


def heisenberg_op(base, n, params, method="trotter"):
    """U(n)^dag base U(n) as a dense matrix."""
    U = propagator(params, n, method)
    B = base.toarray() if sp.issparse(base) else np.asarray(base)
    return U.conj().T @ B @ U


def lattice_ladder(params, species, site, spin, create=False):
    """Physical lattice ladder matrix a^{-d/2} A (or its adjoint)."""
    m = get_model(params)
    A, B = m.ladders
    op = (A if species == "x" else B)[2 * site + spin]
    op = params.a ** (-params.grid.d / 2) * op
    return op.conj().T if create else op


def field_correlation(points, psi0, variant="ab", method="trotter"):
    """(-1)^{M(M-1)/2}/sqrt(M!N!) <0| prod a(x_j) prod b(y_k) |psi0>.

    points: sequence of (species, site, t, spin) with all x before all y;
    t is an integer step count.  variant 'phi' uses a + a^dag."""
    p = psi0.params
    if variant not in ("ab", "phi"):
        raise ValueError(f"unknown variant {variant!r}")
    sp_ = [q[0] for q in points]
    if "x" in sp_ and "y" in sp_ and sp_.index("y") < len(sp_) - sp_[::-1].index("x") - 1:
        raise ValueError("x points must precede y points")
    M, N = sp_.count("x"), sp_.count("y")
    m = get_model(p)
    v = to_occupation(psi0)
    cache = {}
    for species, site, t, spin in reversed(points):
        if t not in cache:
            cache[t] = propagator(p, t, method)
        U = cache[t]
        op = lattice_ladder(p, species, site, spin)
        if variant == "phi":
            op = op + op.conj().T
        v = U.conj().T @ (op @ (U @ v))
    vac = np.zeros(m.dim, dtype=complex)
    vac[m.basis.index((), ())] = 1.0
    return (-1) ** (M * (M - 1) // 2) / np.sqrt(factorial(M) * factorial(N)) * np.vdot(vac, v)


def evolve_state(psi0, steps, method="trotter"):
    """Convenience wrapper used by the CLI."""
    return evolve(psi0, steps, method)


__all__ = ["build_hamiltonian", "evolve", "evolve_occ", "heisenberg_op", "field_correlation",
           "trotter_refinement", "propagator", "dense_propagator", "HamiltonianParts",
           "DenseCapError", "FockVector"]
