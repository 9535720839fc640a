"""Numba kernels against the numpy/python fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from multitime import _kernels as kn
from multitime.fock_space import ModelParams
from multitime.model import get_model
from multitime.spinor_dirac import LatticeGrid, walk_matrix


def best(fn, repeat):
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        ts.append(time.perf_counter() - t0)
    return min(ts), out


def bench_walk(repeat):
    rng = np.random.default_rng(0)
    c, s = np.cos(0.7), np.sin(0.7)
    for B, L in ((64, 16), (4096, 32), (32768, 64)):
        u = rng.normal(size=(B, L, 2)) + 1j * rng.normal(size=(B, L, 2))
        tn, a = best(lambda: kn.walk_numpy(u, c, s, True), repeat)
        row = f"walk    B={B:6d} L={L:3d}  numpy {tn * 1e3:9.3f} ms"
        if kn.HAVE_NUMBA:
            kn._walk_nb(u, c, s, True)
            tb, b = best(lambda: kn._walk_nb(u, c, s, True), repeat)
            row += f"  numba {tb * 1e3:9.3f} ms  speedup {tn / tb:6.1f}x  diff {np.abs(a - b).max():.1e}"
        print(row)


def bench_gamma(repeat):
    for L, M, N in ((4, 1, 1), (4, 2, 2), (6, 1, 2)):
        p = ModelParams(LatticeGrid(L, 1.0), 1.0, 0.5, (1.0, 1.0), M, N)
        b = get_model(p).basis
        Ux, Uy = walk_matrix(L, 1.0, 1.0), walk_matrix(L, 0.5, 1.0)
        tp, a = best(lambda: kn.gamma_python(b, Ux, Uy), 1)
        row = f"gamma   L={L} M={M} N={N} dim={b.dim:6d}  python {tp * 1e3:9.1f} ms"
        if kn.HAVE_NUMBA:
            kn.gamma_coo(b, Ux, Uy)
            tb, r = best(lambda: kn.gamma_coo(b, Ux, Uy), repeat)
            import scipy.sparse as sp
            A = sp.coo_matrix((a[2], (a[0], a[1])), shape=(b.dim, b.dim)).toarray()
            B = sp.coo_matrix((r[2], (r[0], r[1])), shape=(b.dim, b.dim)).toarray()
            row += f"  numba {tb * 1e3:9.2f} ms  speedup {tp / tb:6.1f}x  diff {np.abs(A - B).max():.1e}"
        print(row)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"backend: {kn.backend()}")
    bench_walk(args.repeat)
    bench_gamma(args.repeat)
