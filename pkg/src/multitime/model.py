"""Cached many-body operators for one ModelParams: the second-quantized walk,
site-local interaction factors, tent-move micro steps and the dense
Hamiltonian.  Shared by single_time, hypersurface and multitime_engine."""
import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from . import _kernels
from .fock_space import enumerate_basis, ladder_matrices
from .spinor_dirac import rotation_matrix, walk_generator, walk_matrix


def blockwise_expm(h, tau):
    """exp(-i tau h) for sparse Hermitian h, exact per connected block."""
    h = sp.csr_matrix(h)
    D = h.shape[0]
    pat = (abs(h) + sp.identity(D)).tocsr()
    nc, lab = connected_components(pat, directed=False)
    order = np.argsort(lab, kind="stable")
    sizes = np.bincount(lab, minlength=nc)
    starts = np.concatenate([[0], np.cumsum(sizes)])
    rows, cols, vals = [], [], []
    hd = h.diagonal()
    for s in np.unique(sizes):
        comps = np.nonzero(sizes == s)[0]
        idx = np.stack([order[starts[c]:starts[c] + s] for c in comps])  # (n, s)
        if s == 1:
            rows.append(idx[:, 0])
            cols.append(idx[:, 0])
            vals.append(np.exp(-1j * tau * hd[idx[:, 0]]))
            continue
        blk = np.stack([h[ix][:, ix].toarray() for ix in idx])
        w, V = np.linalg.eigh(blk)
        U = np.einsum("nij,nj,nkj->nik", V, np.exp(-1j * tau * w), V.conj())
        rows.append(np.repeat(idx, s, axis=1).ravel())
        cols.append(np.tile(idx, (1, s)).ravel())
        vals.append(U.ravel())
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                         shape=(D, D))


def micro_matrix(L, mass, dt, i, fl, fr):
    """Single-particle free micro step of a tent move at site i.

    fl/fr: left/right neighbour sits at the same height as i before the raise."""
    K = 2 * L
    l, r = (i - 1) % L, (i + 1) % L
    R = rotation_matrix(mass, dt)
    U = np.eye(K, dtype=complex)
    ip, im = 2 * i, 2 * i + 1
    lp, rm = 2 * l, 2 * r + 1
    src_p = lp if fl else im
    src_m = rm if fr else ip
    U[ip, :] = 0
    U[im, :] = 0
    if fl:
        U[lp, :] = 0
        U[lp, im] = 1
    if fr:
        U[rm, :] = 0
        U[rm, ip] = 1
    U[ip, src_p] += R[0, 0]
    U[ip, src_m] += R[0, 1]
    U[im, src_p] += R[1, 0]
    U[im, src_m] += R[1, 1]
    return U


class Model:
    def __init__(self, params):
        self.params = params
        self.basis = enumerate_basis(params)
        self.dim = self.basis.dim
        self._c = {}

    def _get(self, key, fn):
        v = self._c.get(key)
        if v is None:
            v = fn()
            self._c[key] = v
        return v

    # one-body pieces
    @property
    def ladders(self):
        return self._get("ladders", lambda: ladder_matrices(self.basis))

    def gamma(self, Ux, Uy):
        r, c, v = _kernels.gamma_coo(self.basis, Ux, Uy)
        return sp.csr_matrix((v, (r, c)), shape=(self.dim, self.dim))

    @property
    def free_step(self):
        p = self.params
        return self._get("free", lambda: self.gamma(walk_matrix(p.L, p.m_x, p.dt),
                                                    walk_matrix(p.L, p.m_y, p.dt)))

    def one_body(self, hx, hy):
        A, B = self.ladders
        K = self.params.K
        H = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        for ops, h in ((A, hx), (B, hy)):
            for pp in range(K):
                for q in range(K):
                    if h[pp, q] != 0:
                        H = H + h[pp, q] * (ops[pp].conj().T @ ops[q])
        return H

    @property
    def H_free(self):
        p = self.params

        def f():
            H = self.one_body(walk_generator(p.L, p.m_x, p.dt), walk_generator(p.L, p.m_y, p.dt))
            return 0.5 * (H + H.conj().T)
        return self._get("H_free", f)

    # interaction
    def site_number(self, i):
        A, _ = self.ladders
        return self._get(("nx", i), lambda: A[2 * i].conj().T @ A[2 * i] + A[2 * i + 1].conj().T @ A[2 * i + 1])

    def site_boson_number(self, i):
        _, B = self.ladders
        return self._get(("ny", i), lambda: B[2 * i].conj().T @ B[2 * i] + B[2 * i + 1].conj().T @ B[2 * i + 1])

    def site_coupling(self, i):
        """a^{-d/2} n_x(i) (g^* b(i) + g b^dag(i)), unit-normalized ladders."""
        def f():
            p = self.params
            _, B = self.ladders
            g = p.gvec
            bg = g[0].conjugate() * B[2 * i] + g[1].conjugate() * B[2 * i + 1]
            h = p.a ** (-p.grid.d / 2) * (self.site_number(i) @ (bg + bg.conj().T))
            return sp.csr_matrix(0.5 * (h + h.conj().T))
        return self._get(("hc", i), f)

    def site_h(self, i, t):
        p = self.params
        h = self.site_coupling(i)
        vx, vy = p.potential(0, i, t), p.potential(1, i, t)
        if vx:
            h = h + vx * self.site_number(i)
        if vy:
            h = h + vy * self.site_boson_number(i)
        return h

    def _tkey(self, t):
        return t if self.params.A0 is not None else None

    def site_factor(self, i, t, tau=None):
        tau = self.params.dt if tau is None else tau
        return self._get(("K", i, self._tkey(t), tau),
                         lambda: blockwise_expm(self.site_h(i, t), tau))

    def interaction_factor(self, t, tau=None):
        def f():
            Kt = sp.identity(self.dim, dtype=complex, format="csr")
            for i in range(self.params.L):
                Kt = self.site_factor(i, t, tau) @ Kt
            return Kt
        return self._get(("Kall", self._tkey(t), tau), f)

    @property
    def H_int(self):
        def f():
            H = sp.csr_matrix((self.dim, self.dim), dtype=complex)
            for i in range(self.params.L):
                H = H + self.site_coupling(i)
            return H
        return self._get("H_int", f)

    def potential_op(self, t):
        p = self.params
        V = sp.csr_matrix((self.dim, self.dim), dtype=complex)
        if p.A0 is None:
            return V
        for i in range(p.L):
            vx, vy = p.potential(0, i, t), p.potential(1, i, t)
            if vx:
                V = V + vx * self.site_number(i)
            if vy:
                V = V + vy * self.site_boson_number(i)
        return V

    def hamiltonian(self, t=0):
        H = self.H_free + self.H_int
        if self.params.A0 is not None:
            H = H + self.potential_op(t)
        return H

    def trotter_step(self, t=0):
        return self._get(("T", self._tkey(t)), lambda: self.interaction_factor(t) @ self.free_step)

    # tent moves
    def micro(self, i, fl, fr):
        p = self.params

        def f():
            return self.gamma(micro_matrix(p.L, p.m_x, p.dt, i, fl, fr),
                              micro_matrix(p.L, p.m_y, p.dt, i, fl, fr))
        return self._get(("micro", i, fl, fr), f)


_MODELS = {}


def get_model(params):
    key = (params.hash(), params.basis_cap)
    m = _MODELS.get(key)
    if m is None:
        if len(_MODELS) > 32:
            _MODELS.clear()
        m = Model(params)
        _MODELS[key] = m
    return m
