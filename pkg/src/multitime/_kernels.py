"""Hot loops: the lattice walk on batched spinor arrays and the second
quantization of a one-body unitary on the occupation basis.

Each kernel exists twice: a numba version and a plain numpy/python version.
Set MULTITIME_NUMBA=0 to force the fallback.
"""
import os

import numpy as np

_WANT = os.environ.get("MULTITIME_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on env
    HAVE_NUMBA = False


def backend():
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# walk step on u of shape (B, L, 2)


def walk_numpy(u, c, s, forward):
    out = np.empty_like(u)
    if forward:
        p = np.roll(u[:, :, 0], 1, axis=1)
        m = np.roll(u[:, :, 1], -1, axis=1)
        out[:, :, 0] = c * p - 1j * s * m
        out[:, :, 1] = -1j * s * p + c * m
    else:
        p = c * u[:, :, 0] + 1j * s * u[:, :, 1]
        m = 1j * s * u[:, :, 0] + c * u[:, :, 1]
        out[:, :, 0] = np.roll(p, -1, axis=1)
        out[:, :, 1] = np.roll(m, 1, axis=1)
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _walk_nb(u, c, s, forward):
        B, L, _ = u.shape
        out = np.empty_like(u)
        ms = -1j * s
        for b in range(B):
            for i in range(L):
                if forward:
                    p = u[b, (i - 1) % L, 0]
                    m = u[b, (i + 1) % L, 1]
                    out[b, i, 0] = c * p + ms * m
                    out[b, i, 1] = ms * p + c * m
                else:
                    # inverse: rotate back at the source site, then unshift
                    j = (i + 1) % L
                    out[b, i, 0] = c * u[b, j, 0] - ms * u[b, j, 1]
                    k = (i - 1) % L
                    out[b, i, 1] = -ms * u[b, k, 0] + c * u[b, k, 1]
        return out


def walk(u, c, s, forward=True):
    u = np.ascontiguousarray(u, dtype=np.complex128)
    if HAVE_NUMBA:
        return _walk_nb(u, float(c), float(s), bool(forward))
    return walk_numpy(u, c, s, forward)


# ---------------------------------------------------------------------------
# second quantization Gamma(Ux) (x) Gamma(Uy) in the occupation basis
#
# Basis arrays (see fock_space.Basis):
#   xs (D, Mmax) sorted fermion modes padded with -1, mc (D,) counts
#   ys (D, Nmax) sorted boson multiset padded with -1, nc (D,)
#   xkeys/xrank: sorted bitmask keys and their rank inside the M sector
#   ykeys/yrank: sorted count-digit keys and their rank inside the N sector
#   off (Mmax+1, Nmax+1) sector offsets, ny (Nmax+1,) multisets per N
# Unitaries are passed column-sparse: ptr, idx, val.


def _csc(U):
    U = np.asarray(U, dtype=np.complex128)
    K = U.shape[0]
    ptr = np.zeros(K + 1, dtype=np.int64)
    idx, val = [], []
    for j in range(K):
        nz = np.nonzero(U[:, j])[0]
        idx.extend(nz.tolist())
        val.extend(U[nz, j].tolist())
        ptr[j + 1] = len(idx)
    return ptr, np.asarray(idx, dtype=np.int64), np.asarray(val, dtype=np.complex128)


def _lgamma_table(n):
    f = np.ones(n + 1)
    for k in range(1, n + 1):
        f[k] = f[k - 1] * k
    return f


def gamma_python(b, Ux, Uy):
    """Reference implementation with explicit product expansion."""
    import itertools

    xp, xi, xv = _csc(Ux)
    yp, yi, yv = _csc(Uy)
    fact = _lgamma_table(b.N_max + 1)
    rows, cols, vals = [], [], []
    for col in range(b.dim):
        M, N = int(b.mc[col]), int(b.nc[col])
        xm = b.xs[col, :M]
        ym = b.ys[col, :N]
        nold = np.bincount(ym, minlength=b.K) if N else np.zeros(b.K, int)
        den = np.sqrt(np.prod(fact[nold]))
        xch = [list(zip(xi[xp[j]:xp[j + 1]], xv[xp[j]:xp[j + 1]])) for j in xm]
        ych = [list(zip(yi[yp[j]:yp[j + 1]], yv[yp[j]:yp[j + 1]])) for j in ym]
        for xt in itertools.product(*xch):
            modes = [p for p, _ in xt]
            if len(set(modes)) < M:
                continue
            amp = np.prod([v for _, v in xt]) if M else 1.0
            order = np.argsort(modes, kind="stable")
            sign = _perm_sign(order)
            xset = tuple(int(modes[k]) for k in order)
            for yt in itertools.product(*ych):
                q = sorted(int(p) for p, _ in yt)
                a2 = amp * (np.prod([v for _, v in yt]) if N else 1.0)
                nnew = np.bincount(q, minlength=b.K) if N else np.zeros(b.K, int)
                a2 = a2 * np.sqrt(np.prod(fact[nnew])) / den
                rows.append(b.index(xset, tuple(q)))
                cols.append(col)
                vals.append(sign * a2)
    return (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64),
            np.asarray(vals, dtype=np.complex128))


def _perm_sign(order):
    order = list(order)
    s = 1
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                s = -s
    return s


if HAVE_NUMBA:

    @njit(cache=True)
    def _gamma_nb(xs, mc, ys, nc, xkeys, xrank, ykeys, yrank, off, ny, ybase,
                  xp, xi, xv, yp, yi, yv, fact, cap):
        D = xs.shape[0]
        Mm = xs.shape[1]
        Nm = ys.shape[1]
        rows = np.empty(cap, dtype=np.int64)
        cols = np.empty(cap, dtype=np.int64)
        vals = np.empty(cap, dtype=np.complex128)
        nout = 0
        P = Mm + Nm
        ctr = np.zeros(max(P, 1), dtype=np.int64)
        lim = np.zeros(max(P, 1), dtype=np.int64)
        start = np.zeros(max(P, 1), dtype=np.int64)
        modes = np.zeros(max(Mm, 1), dtype=np.int64)
        q = np.zeros(max(Nm, 1), dtype=np.int64)
        K = xp.shape[0] - 1
        nold = np.zeros(K, dtype=np.int64)
        nnew = np.zeros(K, dtype=np.int64)
        for col in range(D):
            M = mc[col]
            N = nc[col]
            for k in range(K):
                nold[k] = 0
            for l in range(N):
                nold[ys[col, l]] += 1
            den = 1.0
            for k in range(K):
                den *= fact[nold[k]]
            den = np.sqrt(den)
            empty = False
            for l in range(M):
                j = xs[col, l]
                start[l] = xp[j]
                lim[l] = xp[j + 1] - xp[j]
                if lim[l] == 0:
                    empty = True
            for l in range(N):
                j = ys[col, l]
                start[M + l] = yp[j]
                lim[M + l] = yp[j + 1] - yp[j]
                if lim[M + l] == 0:
                    empty = True
            if empty:
                continue
            for l in range(M + N):
                ctr[l] = 0
            while True:
                amp = 1.0 + 0.0j
                ok = True
                for l in range(M):
                    e = start[l] + ctr[l]
                    modes[l] = xi[e]
                    amp *= xv[e]
                mask = 0
                for l in range(M):
                    bit = np.int64(1) << modes[l]
                    if mask & bit:
                        ok = False
                        break
                    mask |= bit
                if ok:
                    inv = 0
                    for l in range(M):
                        for r in range(l + 1, M):
                            if modes[l] > modes[r]:
                                inv += 1
                    if inv % 2 == 1:
                        amp = -amp
                    for k in range(K):
                        nnew[k] = 0
                    for l in range(N):
                        e = start[M + l] + ctr[M + l]
                        q[l] = yi[e]
                        amp *= yv[e]
                        nnew[q[l]] += 1
                    num = 1.0
                    ykey = 0
                    pw = 1
                    for k in range(K):
                        num *= fact[nnew[k]]
                        ykey += nnew[k] * pw
                        pw *= ybase
                    amp *= np.sqrt(num) / den
                    ix = np.searchsorted(xkeys, mask)
                    iy = np.searchsorted(ykeys, ykey)
                    rows[nout] = off[M, N] + xrank[ix] * ny[N] + yrank[iy]
                    cols[nout] = col
                    vals[nout] = amp
                    nout += 1
                # advance odometer
                l = M + N - 1
                while l >= 0:
                    ctr[l] += 1
                    if ctr[l] < lim[l]:
                        break
                    ctr[l] = 0
                    l -= 1
                if l < 0:
                    break
        return rows[:nout], cols[:nout], vals[:nout]


def gamma_coo(b, Ux, Uy):
    """COO triplets of Gamma(Ux) (x) Gamma(Uy) on basis b."""
    if not HAVE_NUMBA:
        return gamma_python(b, Ux, Uy)
    xp, xi, xv = _csc(Ux)
    yp, yi, yv = _csc(Uy)
    wx = int(np.max(np.diff(xp))) if len(xp) > 1 else 1
    wy = int(np.max(np.diff(yp))) if len(yp) > 1 else 1
    cap = 0
    for M in range(b.M_max + 1):
        for N in range(b.N_max + 1):
            cap += b.sector_dim(M, N) * max(wx, 1) ** M * max(wy, 1) ** N
    fact = _lgamma_table(b.N_max + 1)
    return _gamma_nb(b.xs, b.mc, b.ys, b.nc, b.xkeys, b.xrank, b.ykeys, b.yrank,
                     b.off, b.ny, np.int64(b.ybase), xp, xi, xv, yp, yi, yv, fact,
                     max(cap, 1))
