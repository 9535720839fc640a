"""Truncated Fock space of x-fermions and y-bosons on the lattice.

Two representations live here:
  * FockVector: ordered position tensors psi^{(M,N)} in physical
    normalization (norm = sum a^{d(M+N)} |psi|^2), axes x_1..x_M, y_1..y_N,
    each axis a slot index 2*site + spin.
  * occupation vectors on Basis, unit normalized, used by the engines.
"""
import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .spinor_dirac import LatticeGrid

SCHEMA_VERSION = 1


class BasisCapError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    grid: LatticeGrid
    m_x: float = 1.0
    m_y: float = 0.5
    g: tuple = (1.0, 0.0)
    M_max: int = 1
    N_max: int = 1
    A0: object = None  # None or array (2, L, T): potential on step t -> t+1
    basis_cap: int = 20000

    def __post_init__(self):
        g = tuple(complex(v) for v in np.asarray(self.g, dtype=complex).reshape(-1))
        if len(g) != 2:
            raise ValueError("coupling g must have two spin components")
        object.__setattr__(self, "g", g)
        if self.M_max < 0 or self.N_max < 0:
            raise ValueError("truncation levels must be non-negative")
        if self.A0 is not None:
            A = np.asarray(self.A0, dtype=float)
            if A.ndim != 3 or A.shape[0] != 2 or A.shape[1] != self.grid.L:
                raise ValueError(f"A0 must have shape (2, L, T), got {A.shape}")
            A.setflags(write=False)
            object.__setattr__(self, "A0", A)

    @property
    def L(self):
        return self.grid.L

    @property
    def a(self):
        return self.grid.a

    @property
    def dt(self):
        return self.grid.dt

    @property
    def K(self):
        return 2 * self.grid.L

    @property
    def gvec(self):
        return np.array(self.g, dtype=complex)

    def potential(self, species, site, t):
        if self.A0 is None or t < 0 or t >= self.A0.shape[2]:
            return 0.0
        return float(self.A0[species, site, t])

    def replace(self, **kw):
        d = dict(grid=self.grid, m_x=self.m_x, m_y=self.m_y, g=self.g, M_max=self.M_max,
                 N_max=self.N_max, A0=self.A0, basis_cap=self.basis_cap)
        if "L" in kw or "a" in kw:
            d["grid"] = LatticeGrid(kw.pop("L", self.L), kw.pop("a", self.a))
        d.update(kw)
        return ModelParams(**d)

    def to_dict(self):
        return {
            "d": self.grid.d, "L": int(self.L), "a": float(self.a),
            "m_x": float(self.m_x), "m_y": float(self.m_y),
            "g": [[float(v.real), float(v.imag)] for v in self.g],
            "M_max": int(self.M_max), "N_max": int(self.N_max),
            "A0": None if self.A0 is None else np.asarray(self.A0).tolist(),
        }

    @classmethod
    def from_dict(cls, d, basis_cap=20000):
        g = d.get("g", [1.0, 0.0])
        g = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v) for v in g]
        grid = LatticeGrid(int(d["L"]), float(d.get("a", 1.0)), int(d.get("d", 1)))
        return cls(grid, float(d.get("m_x", 1.0)), float(d.get("m_y", 0.5)), tuple(g),
                   int(d.get("M_max", 1)), int(d.get("N_max", 1)), d.get("A0"), basis_cap)

    def hash(self):
        s = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(s.encode()).hexdigest()[:16]

    def __hash__(self):
        return hash(self.hash())

    def __eq__(self, other):
        return isinstance(other, ModelParams) and self.to_dict() == other.to_dict()


# ---------------------------------------------------------------------------
# occupation basis


class Basis:
    """States |S, n> with S a fermion mode set (|S| = M) and n a boson multiset
    (|n| = N).  Ordered by sector (M, N), then x-set rank, then y-multiset rank."""

    def __init__(self, K, M_max, N_max):
        self.K, self.M_max, self.N_max = K, M_max, N_max
        self.xsets = [list(itertools.combinations(range(K), M)) for M in range(M_max + 1)]
        self.ysets = [list(itertools.combinations_with_replacement(range(K), N))
                      for N in range(N_max + 1)]
        self.ny = np.array([len(s) for s in self.ysets], dtype=np.int64)
        self.nx = np.array([len(s) for s in self.xsets], dtype=np.int64)
        self.off = np.zeros((M_max + 1, N_max + 1), dtype=np.int64)
        tot = 0
        for M in range(M_max + 1):
            for N in range(N_max + 1):
                self.off[M, N] = tot
                tot += self.nx[M] * self.ny[N]
        self.dim = int(tot)
        self.ybase = N_max + 1
        if K > 62 or (N_max + 1) ** K > 2 ** 62:
            raise BasisCapError("mode count too large for integer keys")
        self._xr = {s: r for M in range(M_max + 1) for r, s in enumerate(self.xsets[M])}
        self._yr = {s: r for N in range(N_max + 1) for r, s in enumerate(self.ysets[N])}
        xk = np.array([self.xkey(s) for M in range(M_max + 1) for s in self.xsets[M]], dtype=np.int64)
        xr = np.array([r for M in range(M_max + 1) for r in range(self.nx[M])], dtype=np.int64)
        o = np.argsort(xk)
        self.xkeys, self.xrank = xk[o], xr[o]
        yk = np.array([self.ykey(s) for N in range(N_max + 1) for s in self.ysets[N]], dtype=np.int64)
        yr = np.array([r for N in range(N_max + 1) for r in range(self.ny[N])], dtype=np.int64)
        o = np.argsort(yk)
        self.ykeys, self.yrank = yk[o], yr[o]
        D = self.dim
        self.xs = -np.ones((D, max(M_max, 1)), dtype=np.int64)
        self.ys = -np.ones((D, max(N_max, 1)), dtype=np.int64)
        self.mc = np.zeros(D, dtype=np.int64)
        self.nc = np.zeros(D, dtype=np.int64)
        for M in range(M_max + 1):
            for N in range(N_max + 1):
                o0 = self.off[M, N]
                for ix, xs in enumerate(self.xsets[M]):
                    for iy, ys in enumerate(self.ysets[N]):
                        k = o0 + ix * self.ny[N] + iy
                        self.xs[k, :M] = xs
                        self.ys[k, :N] = ys
                        self.mc[k], self.nc[k] = M, N
        self._conv = {}

    def xkey(self, s):
        m = 0
        for p in s:
            m |= 1 << p
        return m

    def ykey(self, s):
        k = 0
        for q in s:
            k += self.ybase ** q
        return k

    def sector_dim(self, M, N):
        return int(self.nx[M] * self.ny[N])

    def index(self, xset, yset):
        xset, yset = tuple(xset), tuple(yset)
        M, N = len(xset), len(yset)
        return int(self.off[M, N] + self._xr[xset] * self.ny[N] + self._yr[yset])

    def state(self, k):
        M, N = int(self.mc[k]), int(self.nc[k])
        return tuple(int(v) for v in self.xs[k, :M]), tuple(int(v) for v in self.ys[k, :N])

    def sector_slice(self, M, N):
        o = int(self.off[M, N])
        return slice(o, o + self.sector_dim(M, N))

    def sector_mask(self, pred):
        return np.array([pred(int(m), int(n)) for m, n in zip(self.mc, self.nc)])

    def conversion(self, M, N):
        """(flat tensor index, basis index, factor) over all orderings.

        tensor entry = factor * occupation coefficient (unit normalization)."""
        key = (M, N)
        if key in self._conv:
            return self._conv[key]
        K = self.K
        fi, bi, fa = [], [], []
        o0 = self.off[M, N]
        strides = K ** np.arange(M + N - 1, -1, -1)
        xperms = list(itertools.permutations(range(M)))
        xsigns = [_perm_parity(p) for p in xperms]
        for ix, xs in enumerate(self.xsets[M]):
            for iy, ys in enumerate(self.ysets[N]):
                k = o0 + ix * self.ny[N] + iy
                nfac = math.prod(math.factorial(c) for c in _counts(ys))
                norm = math.sqrt(math.factorial(M)) * math.sqrt(math.factorial(N) / nfac)
                yords = sorted(set(itertools.permutations(ys)))
                for p, sgn in zip(xperms, xsigns):
                    xo = [xs[j] for j in p]
                    for yo in yords:
                        fi.append(int(np.dot(strides, list(xo) + list(yo))) if M + N else 0)
                        bi.append(k)
                        fa.append(sgn / norm)
        out = (np.array(fi, dtype=np.int64), np.array(bi, dtype=np.int64), np.array(fa))
        self._conv[key] = out
        return out


def _counts(ys):
    out = {}
    for q in ys:
        out[q] = out.get(q, 0) + 1
    return list(out.values())


def _perm_parity(p):
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


_BASIS_CACHE = {}


def enumerate_basis(params, cap=None):
    cap = params.basis_cap if cap is None else cap
    key = (params.K, params.M_max, params.N_max)
    b = _BASIS_CACHE.get(key)
    if b is None:
        # count before building
        nx = sum(math.comb(params.K, M) for M in range(params.M_max + 1))
        ny = sum(math.comb(params.K + N - 1, N) for N in range(params.N_max + 1))
        if nx * ny > cap:
            raise BasisCapError(f"basis size {nx * ny} exceeds cap {cap}")
        b = Basis(params.K, params.M_max, params.N_max)
        _BASIS_CACHE[key] = b
    if b.dim > cap:
        raise BasisCapError(f"basis size {b.dim} exceeds cap {cap}")
    return b


# ---------------------------------------------------------------------------
# tensor representation


@dataclass
class FockVector:
    params: ModelParams
    sectors: dict
    leak: float = 0.0

    @classmethod
    def zeros(cls, params):
        K = params.K
        return cls(params, {(M, N): np.zeros((K,) * (M + N), dtype=complex)
                            for M in range(params.M_max + 1) for N in range(params.N_max + 1)})

    @classmethod
    def vacuum(cls, params):
        v = cls.zeros(params)
        v.sectors[(0, 0)][()] = 1.0
        return v

    def copy(self):
        return FockVector(self.params, {k: v.copy() for k, v in self.sectors.items()}, self.leak)

    def __add__(self, other):
        return FockVector(self.params, {k: v + other.sectors[k] for k, v in self.sectors.items()},
                          self.leak + other.leak)

    def __sub__(self, other):
        return self + other * (-1.0)

    def __mul__(self, c):
        return FockVector(self.params, {k: v * c for k, v in self.sectors.items()}, self.leak)

    __rmul__ = __mul__

    def norm(self):
        return float(np.sqrt(inner(self, self).real))

    def max_abs(self):
        return max((float(np.max(np.abs(v))) if v.size else 0.0) for v in self.sectors.values())

    def to_json(self):
        secs = []
        for (M, N), v in sorted(self.sectors.items()):
            secs.append({"M": M, "N": N, "shape": list(v.shape),
                         "re": v.real.ravel().tolist(), "im": v.imag.ravel().tolist()})
        return {"schema_version": SCHEMA_VERSION, "params": self.params.to_dict(),
                "leak": float(self.leak), "sectors": secs}

    @classmethod
    def from_json(cls, d):
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported state schema_version {d.get('schema_version')!r}")
        params = ModelParams.from_dict(d["params"])
        out = cls.zeros(params)
        for s in d["sectors"]:
            key = (int(s["M"]), int(s["N"]))
            if key not in out.sectors:
                raise ValueError(f"sector {key} outside truncation")
            arr = (np.asarray(s["re"]) + 1j * np.asarray(s["im"])).reshape(s["shape"])
            out.sectors[key] = arr
        out.leak = float(d.get("leak", 0.0))
        return out


def inner(phi, psi):
    if phi.params.K != psi.params.K:
        raise ValueError("inner product across different lattices")
    a, d = phi.params.a, phi.params.grid.d
    tot = 0j
    for k, v in phi.sectors.items():
        M, N = k
        w = psi.sectors.get(k)
        if w is None:
            continue
        tot += a ** (d * (M + N)) * np.vdot(v, w)
    return tot


def to_tensor(vec, params, basis=None):
    """Occupation vector (unit normalization) -> FockVector."""
    b = basis or enumerate_basis(params)
    out = FockVector.zeros(params)
    a, d = params.a, params.grid.d
    for (M, N), arr in out.sectors.items():
        fi, bi, fa = b.conversion(M, N)
        flat = arr.reshape(-1)
        flat[fi] = fa * vec[bi] * a ** (-d * (M + N) / 2)
    return out


def to_occupation(fv, basis=None):
    """FockVector -> occupation vector, projecting onto the (anti)symmetric part."""
    p = fv.params
    b = basis or enumerate_basis(p)
    vec = np.zeros(b.dim, dtype=complex)
    cnt = np.zeros(b.dim)
    a, d = p.a, p.grid.d
    for (M, N), arr in fv.sectors.items():
        fi, bi, fa = b.conversion(M, N)
        flat = arr.reshape(-1)
        nord = math.factorial(M) * 1.0
        # symmetric part: c = sum over orderings of conj(fa)*T / sum fa^2
        np.add.at(vec, bi, fa * flat[fi] * a ** (d * (M + N) / 2))
        np.add.at(cnt, bi, fa * fa)
        del nord
    nz = cnt > 0
    vec[nz] /= cnt[nz]
    return vec


def amplitude(vec, basis, params, xslots, yslots):
    """psi(x_1..x_M; y_1..y_N) at the given slots read off an occupation vector."""
    M, N = len(xslots), len(yslots)
    if M > params.M_max or N > params.N_max:
        return 0j
    if len(set(xslots)) < M:
        return 0j
    order = np.argsort(xslots, kind="stable")
    sgn = _perm_parity(order)
    xs = tuple(int(xslots[k]) for k in order)
    ys = tuple(sorted(int(v) for v in yslots))
    k = basis.index(xs, ys)
    nfac = math.prod(math.factorial(c) for c in _counts(ys))
    norm = math.sqrt(math.factorial(M)) * math.sqrt(math.factorial(N) / nfac)
    return sgn * vec[k] / norm * params.a ** (-params.grid.d * (M + N) / 2)


def symmetrize(fv):
    """Antisymmetrize x axes, symmetrize y axes."""
    out = FockVector.zeros(fv.params)
    for (M, N), arr in fv.sectors.items():
        if M + N <= 1:
            out.sectors[(M, N)] = arr.copy()
            continue
        acc = np.zeros_like(arr)
        xp = list(itertools.permutations(range(M)))
        yp = list(itertools.permutations(range(N)))
        for px in xp:
            sg = _perm_parity(px)
            for py in yp:
                acc += sg * np.transpose(arr, list(px) + [M + j for j in py])
        out.sectors[(M, N)] = acc / (len(xp) * len(yp))
    out.leak = fv.leak
    return out


def exchange_defect(fv):
    """max |psi - (anti)symmetrized psi| over sectors."""
    s = symmetrize(fv)
    return max(float(np.max(np.abs(fv.sectors[k] - s.sectors[k]))) if fv.sectors[k].size else 0.0
               for k in fv.sectors)


# ---------------------------------------------------------------------------
# ladder operators, tensor route


def _slot(x, spin):
    site = x
    return 2 * site + spin


def ladder(kind, species, site, spin, fv):
    """Apply a, a^dag (species 'x') or b, b^dag (species 'y') at (site, spin).

    kind is 'annihilate' or 'create'.  Returns a new FockVector; creation out of
    the truncation adds the dropped norm^2 to leak."""
    p = fv.params
    K, a, d = p.K, p.a, p.grid.d
    if not 0 <= site < p.L or spin not in (0, 1):
        raise IndexError(f"slot ({site}, {spin}) outside lattice")
    if species not in ("x", "y"):
        raise ValueError(f"unknown species {species!r}")
    k = _slot(site, spin)
    out = FockVector.zeros(p)
    out.leak = fv.leak
    e = np.zeros(K)
    e[k] = 1.0 / a ** d
    for (M, N) in out.sectors:
        if kind == "annihilate":
            if species == "x":
                src = fv.sectors.get((M + 1, N))
                if src is None:
                    continue
                out.sectors[(M, N)] = np.sqrt(M + 1) * (-1) ** M * np.take(src, k, axis=M)
            else:
                src = fv.sectors.get((M, N + 1))
                if src is None:
                    continue
                out.sectors[(M, N)] = np.sqrt(N + 1) * np.take(src, k, axis=M + N)
        elif kind == "create":
            if species == "x":
                if M == 0:
                    continue
                src = fv.sectors[(M - 1, N)]
                acc = np.zeros((K,) * (M + N), dtype=complex)
                for j in range(M):
                    t = np.multiply.outer(e, src)  # new axis first
                    acc += (-1) ** j * np.moveaxis(t, 0, j)
                out.sectors[(M, N)] = acc / np.sqrt(M)
            else:
                if N == 0:
                    continue
                src = fv.sectors[(M, N - 1)]
                acc = np.zeros((K,) * (M + N), dtype=complex)
                for j in range(N):
                    t = np.multiply.outer(e, src)
                    acc += np.moveaxis(t, 0, M + j)
                out.sectors[(M, N)] = acc / np.sqrt(N)
        else:
            raise ValueError(f"unknown ladder kind {kind!r}")
    if kind == "create":
        # norm^2 of the part pushed above the cutoff
        for (M, N), src in fv.sectors.items():
            if (species == "x" and M == p.M_max) or (species == "y" and N == p.N_max):
                out.leak += _created_norm2(species, k, M, N, src, a, d)
    return out


def _created_norm2(species, k, M, N, src, a, d):
    # || c^dag psi ||^2 restricted to one source sector, computed directly
    if species == "x":
        # <psi| a a^dag |psi> = |psi|^2/a^d - <psi|a^dag a|psi>
        occ = np.sqrt(M) * (-1) ** (M - 1) * np.take(src, k, axis=M - 1) if M else None
        full = a ** (d * (M + N)) * np.vdot(src, src).real / a ** d
        n = a ** (d * (M + N - 1)) * np.vdot(occ, occ).real if M else 0.0
        return max(full - n, 0.0)
    occ = np.sqrt(N) * np.take(src, k, axis=M + N - 1) if N else None
    full = a ** (d * (M + N)) * np.vdot(src, src).real / a ** d
    n = a ** (d * (M + N - 1)) * np.vdot(occ, occ).real if N else 0.0
    return full + n


# ---------------------------------------------------------------------------
# ladder operators, matrix route (unit normalization)


def ladder_matrices(basis):
    """Sparse annihilators A[p], B[p] on the occupation basis (unit normalized)."""
    D, K = basis.dim, basis.K
    A, B = [], []
    for p in range(K):
        r, c, v = [], [], []
        for k in range(D):
            xs, ys = basis.state(k)
            if p in xs:
                sg = (-1) ** sum(1 for q in xs if q < p)
                r.append(basis.index(tuple(q for q in xs if q != p), ys))
                c.append(k)
                v.append(sg)
        A.append(sp.csr_matrix((v, (r, c)), shape=(D, D), dtype=complex))
        r, c, v = [], [], []
        for k in range(D):
            xs, ys = basis.state(k)
            n = ys.count(p)
            if n:
                yl = list(ys)
                yl.remove(p)
                r.append(basis.index(xs, tuple(yl)))
                c.append(k)
                v.append(np.sqrt(n))
        B.append(sp.csr_matrix((v, (r, c)), shape=(D, D), dtype=complex))
    return A, B


@dataclass
class CarCcrReport:
    car_max: float
    ccr_max: float
    cross_max: float
    passed: bool
    details: dict = field(default_factory=dict)


def car_ccr_check(params, tol=1e-12):
    """(Anti)commutators of the lattice ladder operators a = a^{-d/2} A, checked
    on the sectors where no creation leaves the truncation."""
    b = enumerate_basis(params)
    A, B = ladder_matrices(b)
    a, d = params.a, params.grid.d
    s = a ** (-d / 2)
    inside = b.sector_mask(lambda M, N: M < params.M_max and N < params.N_max)
    P = sp.diags(inside.astype(float))
    K = b.K
    I = sp.identity(b.dim, format="csr")
    car = ccr = cross = 0.0

    def mx(m):
        m = (m @ P).tocoo()
        return float(np.max(np.abs(m.data))) if m.nnz else 0.0

    for i in range(K):
        for j in range(K):
            ai, aj = s * A[i], s * A[j]
            bi, bj = s * B[i], s * B[j]
            dl = (1.0 / a ** d) * (i == j)
            car = max(car, mx(ai @ aj.conj().T + aj.conj().T @ ai - dl * I), mx(ai @ aj + aj @ ai))
            ccr = max(ccr, mx(bi @ bj.conj().T - bj.conj().T @ bi - dl * I), mx(bi @ bj - bj @ bi))
            cross = max(cross, mx(ai @ bj - bj @ ai), mx(ai @ bj.conj().T - bj.conj().T @ ai))
    passed = max(car, ccr, cross) <= tol
    return CarCcrReport(car, ccr, cross, passed)
