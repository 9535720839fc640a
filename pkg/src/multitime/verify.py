"""Verification suites.  Each returns a Report; pass means discrepancy within
tolerance and leakage within the leakage bound."""
import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import hypersurface as hs
from . import multitime_engine as me
from . import single_time as st
from .fock_space import car_ccr_check, enumerate_basis, exchange_defect, to_occupation, to_tensor
from .model import get_model
from .scenario import random_state


@dataclass
class Report:
    id: str
    passed: bool
    discrepancy_max: float
    discrepancy_l2: float
    tolerance: object
    leakage: float
    seed: int
    params_hash: str
    runtime_ms: float = 0.0
    expected_negative: bool = False
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"id": self.id, "pass": bool(self.passed),
                "discrepancy_max": float(self.discrepancy_max),
                "discrepancy_l2": float(self.discrepancy_l2),
                "tolerance": self.tolerance, "leakage": float(self.leakage),
                "seed": int(self.seed), "params_hash": self.params_hash,
                "runtime_ms": float(self.runtime_ms),
                "expected_negative": bool(self.expected_negative),
                "details": _jsonable(self.details)}

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        neg = " (expected negative result)" if self.expected_negative else ""
        return (f"[{flag}] {self.id}: max={self.discrepancy_max:.3e} tol={self.tolerance} "
                f"leak={self.leakage:.1e}{neg}")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)) and not isinstance(x, bool):
        return int(x)
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


class _Acc:
    """Collects discrepancies."""

    def __init__(self):
        self.vals = []

    def add(self, d):
        d = np.abs(np.asarray(d)).ravel()
        self.vals.extend(d.tolist())

    @property
    def max(self):
        return max(self.vals) if self.vals else 0.0

    @property
    def l2(self):
        return float(np.sqrt(np.sum(np.square(self.vals)))) if self.vals else 0.0


def _finish(name, sc, params, acc, tol, leak, t0, extra_ok=True, details=None, neg=False):
    lb = sc.tol("leakage")
    ok = acc.max <= tol and leak <= lb and extra_ok
    return Report(name, bool(ok), acc.max, acc.l2, tol, leak, sc.seed, params.hash(),
                  (time.perf_counter() - t0) * 1e3, neg, details or {})


def _trivial(params):
    return params.M_max == 0 and params.N_max == 0


def sample_configs(params, n, tmax, seed, sectors=None, mixed=True, collision_free=False):
    """Random spacelike configurations with integer times in [0, tmax]."""
    rng = np.random.default_rng(seed)
    L = params.L
    if sectors is None:
        sectors = [(M, N) for M in range(params.M_max + 1) for N in range(params.N_max + 1) if M + N]
    out, seen = [], set()
    tries = 0
    while len(out) < n and tries < 200 * n:
        tries += 1
        M, N = sectors[rng.integers(len(sectors))]
        pts = [(int(rng.integers(L)), int(rng.integers(tmax + 1))) for _ in range(M + N)]
        if not mixed:
            pts = [(s, pts[0][1]) for s, _ in pts]
        cfg = me.SpacetimeConfig(tuple(pts[:M]), tuple(pts[M:]))
        if not me.is_spacelike(cfg, L)[0]:
            continue
        if collision_free and me.is_collision(cfg):
            continue
        key = (cfg.x, cfg.y)
        if key in seen:
            continue
        seen.add(key)
        out.append(cfg)
    return out


# ---------------------------------------------------------------------------


def path_independence_suite(sc):
    t0 = time.perf_counter()
    p = sc.params
    acc = _Acc()
    if _trivial(p):
        return _finish("path_independence", sc, p, acc, sc.tol("path_independence"), 0.0, t0)
    psi0 = sc.initial_state()
    base = hs.SurfaceState.initial(psi0)
    h = max(1, min(sc.steps, 4))
    tgt = hs.make_surface([h + (i % 2) for i in range(p.L)], p.L)
    runs = {}
    for name, sched, seed in (("canonical", "canonical", None), ("reverse", "reverse", None),
                              ("random_a", "random", sc.seed), ("random_b", "random", sc.seed + 1)):
        runs[name] = hs.surface_evolve(base, tgt, sched, seed)
    # a detour above the target and back down
    up = hs.surface_evolve(base, [h + 2] * p.L)
    runs["detour"] = hs.surface_evolve(up, tgt, "random", sc.seed + 2)
    ref = runs["canonical"].vec
    for r in runs.values():
        acc.add(r.vec - ref)
    leak = max(abs(np.linalg.norm(r.vec) ** 2 - 1) for r in runs.values())
    # one configuration read off two containing surfaces
    eng = me.Engine(psi0)
    cfgs = []
    if p.M_max >= 1 and p.N_max >= 1:
        cfgs.append(me.SpacetimeConfig(((1, h + 1),), ((3, h + 1),)))
    if p.M_max >= 1:
        cfgs.append(me.SpacetimeConfig(((p.L - 1, h + 1),), ()))
    if p.N_max >= 1:
        cfgs.append(me.SpacetimeConfig((), ((1, h + 1),)))
    nsurf = 0
    for cfg in cfgs:
        a = me.read_phi(runs["canonical"], cfg)
        b = eng.phi(cfg)
        acc.add(a - b)
        nsurf += 2
    det = {"schedules": list(runs), "target": list(tgt.tau), "moves": runs["canonical"].moves,
           "surfaces_per_config": 2, "configs": len(cfgs)}
    return _finish("path_independence", sc, p, acc, sc.tol("path_independence"), leak, t0, details=det)


def consistency_suite(sc):
    """Inconsistency witness on the lattice Pauli-Jordan proxy."""
    t0 = time.perf_counter()
    p = sc.params
    tz, tw = sc.tol("consistency_zero"), sc.tol("consistency_witness")
    T = 6

    def scan(m_y, g):
        pj = me.pauli_jordan(m_y, g, T, p.a)
        zero = time_max = 0.0
        for t in range(-T, T + 1):
            for x in range(-pj.X, pj.X + 1):
                v = abs(pj.at(t, x))
                if abs(x) > abs(t) or (t == 0 and x == 0):
                    zero = max(zero, v)
                elif abs(x) < abs(t):
                    time_max = max(time_max, v)
        full = float(np.max(np.abs(pj.proxy)))
        return zero, time_max, full

    g = p.gvec
    beta = np.array([[0, 1], [1, 0]])
    gbg = float(np.real(g.conj() @ beta @ g))
    z, tm, full = scan(p.m_y, g)
    witness = p.m_y > 0 and abs(gbg) > 0
    ok = z <= tz and ((tm >= tw) if witness else full <= tz)
    # controls: m_y = 0 and g^dag beta g = 0 must vanish identically
    c1 = scan(0.0, g)[2]
    c2 = scan(p.m_y, np.array([1.0, 1j]) / np.sqrt(2))[2]
    ok = ok and c1 <= tz and c2 <= tz
    acc = _Acc()
    acc.add([z, c1, c2])
    det = {"g_beta_g": gbg, "spacelike_max": z, "timelike_max": tm, "control_m0": c1,
           "control_gbg0": c2, "horizon": T}
    return _finish("consistency", sc, p, acc, tz, 0.0, t0, ok, det, neg=witness)


def single_time_suite(sc):
    t0 = time.perf_counter()
    p = sc.params
    acc = _Acc()
    if _trivial(p):
        return _finish("single_time", sc, p, acc, sc.tol("single_time"), 0.0, t0)
    psi0 = sc.initial_state()
    eng = me.Engine(psi0)
    v0 = to_occupation(psi0)
    T = min(sc.steps, 8)
    leak = 0.0
    for t in range(1, T + 1):
        ref = st.evolve_occ(p, v0, t)
        s = eng.state_on(hs.flat_surface(p.L, t))
        acc.add(s.vec - ref)
        leak = max(leak, abs(np.linalg.norm(s.vec) ** 2 - 1))
    refpsi = {}
    for cfg in sample_configs(p, 12, T, sc.seed, mixed=False):
        t = cfg.points[0][1]
        if t not in refpsi:
            refpsi[t] = to_tensor(st.evolve_occ(p, v0, t), p)
        arr = refpsi[t].sectors[(cfg.M, cfg.N)].reshape((p.L, 2) * (cfg.M + cfg.N))
        idx = tuple(v for s, _ in cfg.points for v in (s, slice(None)))
        acc.add(eng.phi(cfg) - arr[idx])
    # cross backend: Trotter against dense, refining the splitting step
    dp = sc.dense_params()
    dv = to_occupation(sc.initial_state(dp))
    sweep = st.trotter_refinement(dp, dv, min(sc.steps, 8))
    ratios = [sweep[i][1] / sweep[i + 1][1] for i in range(len(sweep) - 1) if sweep[i + 1][1] > 0]
    lo, hi = sc.tol("refinement_ratio")
    rok = lo <= ratios[-1] <= hi if ratios and sweep[-1][1] > 1e-13 else True
    det = {"flat_steps": T, "refinement": sweep, "ratios": ratios, "splitting_order": 1,
           "ratio_window": [lo, hi], "ratio_ok": rok}
    return _finish("single_time", sc, p, acc, sc.tol("single_time"), leak, t0, rok, det)


def heisenberg_suite(sc):
    t0 = time.perf_counter()
    dp = sc.dense_params()
    acc = _Acc()
    if _trivial(dp):
        return _finish("heisenberg", sc, dp, acc, sc.tol("heisenberg"), 0.0, t0)
    psi0 = sc.initial_state(dp)
    eng = me.Engine(psi0)
    pool = sample_configs(dp, 400, 3, sc.seed)
    mixed = [c for c in pool if len({t for _, t in c.points}) > 1]
    cfgs = mixed[:12] + [c for c in pool if c not in mixed][:24 - len(mixed[:12])]
    per = []
    nmixed = 0
    for cfg in cfgs:
        ph = eng.phi(cfg)
        pts = [("x", s, t) for s, t in cfg.x] + [("y", s, t) for s, t in cfg.y]
        d = 0.0
        for spins in itertools.product((0, 1), repeat=len(pts)):
            q = [(a, b, c, r) for (a, b, c), r in zip(pts, spins)]
            fc = st.field_correlation(q, psi0)
            d = max(d, abs(fc - ph[spins]))
            if not me.is_collision(cfg):
                d = max(d, abs(st.field_correlation(q, psi0, "phi") - ph[spins]))
        acc.add(d)
        mixed = len({t for _, t in cfg.points}) > 1
        nmixed += mixed
        per.append({"config": cfg.to_json(), "mixed_time": mixed, "discrepancy": d})
    # combinatorial prefactors at equal time
    pp = sc.perm_params()
    ps = random_state(pp, sc.seed + 7)
    pref = 0.0
    for M, N in ((1, 0), (2, 0), (1, 1), (0, 2)):
        arr = ps.sectors[(M, N)]
        sites = [(0, 0), (2, 1), (1, 0), (3, 1)][:M + N]
        q = [("x" if k < M else "y", s, 0, r) for k, (s, r) in enumerate(sites)]
        slots = tuple(2 * s + r for s, r in sites)
        pref = max(pref, abs(st.field_correlation(q, ps) - arr[slots]))
    acc.add(pref)
    eq = [r["discrepancy"] for r in per if not r["mixed_time"]]
    mx = [r["discrepancy"] for r in per if r["mixed_time"]]
    det = {"configs": per, "n_configs": len(cfgs), "n_mixed": nmixed,
           "equal_time_max": max(eq) if eq else 0.0, "mixed_time_max": max(mx) if mx else 0.0,
           "prefactor_max": pref}
    return _finish("heisenberg", sc, dp, acc, sc.tol("heisenberg"), 0.0, t0, details=det)


def ts_residuals(params, psi0, surface, site, taus):
    """Discrete Tomonaga-Schwinger residual of one tent move with interaction
    duration tau, in the interaction picture relative to the flat surface 0."""
    m = get_model(params)
    base = hs.SurfaceState.initial(psi0)
    s = hs.surface_evolve(base, surface)
    tau_i = surface.tau[site]
    L = params.L
    fl = surface.tau[(site - 1) % L] == tau_i
    fr = surface.tau[(site + 1) % L] == tau_i
    G = m.micro(site, fl, fr)
    new_surf = surface.raised(site)

    def to_ref(vec, surf):
        return hs.free_surface_evolve(hs.SurfaceState(surf, vec, params), hs.flat_surface(L, 0)).vec

    til = to_ref(s.vec, surface)
    h = m.site_h(site, tau_i)
    # H_I on the deformed surface, pulled back to the reference surface
    Htil_psi = to_ref(h @ (G @ s.vec), new_surf)
    out = []
    for tau in taus:
        from .model import blockwise_expm
        K = blockwise_expm(h, tau)
        new = K @ (G @ s.vec)
        til2 = to_ref(new, new_surf)
        out.append(float(np.linalg.norm(1j * (til2 - til) - tau * Htil_psi)))
    return out


def ts_suite(sc):
    t0 = time.perf_counter()
    dp = sc.dense_params()
    acc = _Acc()
    if _trivial(dp):
        return _finish("ts", sc, dp, acc, sc.tol("ts_commutator"), 0.0, t0)
    psi0 = sc.initial_state(dp)
    surf = hs.make_surface([1, 0, 1, 0], dp.L)
    taus = [dp.dt / 2 ** k for k in range(1, 7)]
    res = ts_residuals(dp, psi0, surf, 1, taus)
    ratios = [res[i] / res[i + 1] for i in range(len(res) - 1) if res[i + 1] > 0]
    lo, hi = sc.tol("ts_ratio")
    rok = lo <= ratios[-1] <= hi if ratios and res[-1] > 1e-14 else True
    free = ts_residuals(dp.replace(g=(0.0, 0.0)), sc.initial_state(dp.replace(g=(0.0, 0.0))),
                        surf, 1, taus[:2])
    # same-surface interaction Hamiltonians at stencil-disjoint vertices commute
    m = get_model(dp)
    Ls = dp.L
    s2 = hs.make_surface([1, 0, 1, 0], Ls)
    D = m.dim
    F = np.empty((D, D), dtype=complex)
    for k in range(D):
        e = np.zeros(D, dtype=complex)
        e[k] = 1
        F[:, k] = hs.free_surface_evolve(hs.SurfaceState(s2, e, dp), hs.flat_surface(Ls, 0)).vec
    H0 = F @ m.site_h(0, 1).toarray() @ F.conj().T
    H2 = F @ m.site_h(2, 1).toarray() @ F.conj().T
    comm = float(np.max(np.abs(H0 @ H2 - H2 @ H0)))
    acc.add([comm] + free)
    det = {"taus": taus, "residuals": res, "ratios": ratios, "ratio_window": [lo, hi],
           "ratio_ok": rok, "free_residual_max": max(free), "commutator_max": comm,
           "H0_norm": float(np.max(np.abs(H0)))}
    return _finish("ts", sc, dp, acc, sc.tol("ts_commutator"), 0.0, t0, rok, det)


def unitarity_suite(sc):
    t0 = time.perf_counter()
    p = sc.params
    acc = _Acc()
    psi0 = sc.initial_state()
    s = hs.SurfaceState.initial(psi0)
    n0 = s.norm()
    rng = np.random.default_rng(sc.seed)
    inv = _Acc()
    nmoves = 0
    while nmoves < 60:
        surf = s.surface
        ups = [i for i in range(p.L) if surf.can_raise(i) and surf.tau[i] < 6]
        downs = [i for i in range(p.L) if surf.can_lower(i)]
        opts = [(i, "up") for i in ups] + [(i, "down") for i in downs]
        i, d = opts[rng.integers(len(opts))]
        s2 = hs.local_update(s, i, d)
        back = hs.local_update(s2, i, "down" if d == "up" else "up")
        inv.add(back.vec - s.vec)
        s = s2
        nmoves += 1
        acc.add(s.norm() - n0)
    tol = sc.tol("unitarity")
    ok = inv.max <= sc.tol("inverse")
    det = {"moves": nmoves, "inverse_max": inv.max, "final_surface": list(s.surface.tau)}
    return _finish("unitarity", sc, p, acc, tol, s.leak, t0, ok, det)


def permutation_suite(sc):
    t0 = time.perf_counter()
    pp = sc.params if (sc.params.M_max >= 2 or sc.params.N_max >= 2) and sc.params.L == 4 \
        else sc.perm_params()
    acc = _Acc()
    psi0 = sc.initial_state(pp)
    eng = me.Engine(psi0)
    n = 0
    for cfg in sample_configs(pp, 40, 2, sc.seed, sectors=[(2, 0), (0, 2), (2, 1), (1, 2), (2, 2)]):
        ph = eng.phi(cfg)
        M, N = cfg.M, cfg.N
        if M >= 2:
            sw = me.SpacetimeConfig((cfg.x[1], cfg.x[0]) + cfg.x[2:], cfg.y)
            perm = [1, 0] + list(range(2, M + N))
            acc.add(eng.phi(sw) + np.transpose(ph, perm))
            n += 1
        if N >= 2:
            sw = me.SpacetimeConfig(cfg.x, (cfg.y[1], cfg.y[0]) + cfg.y[2:])
            perm = list(range(M)) + [M + 1, M] + list(range(M + 2, M + N))
            acc.add(eng.phi(sw) - np.transpose(ph, perm))
            n += 1
    # exchange symmetry is preserved by the tensor route and by the Trotter route
    sl = me.family_evolve(psi0, 0, 0, 2, 2)
    fam = {(2, N2): arr for N2, arr in sl.data.items()}
    tens = st.evolve(psi0, 2)
    from .fock_space import FockVector
    fv = FockVector.zeros(pp)
    for k in fv.sectors:
        if k in fam:
            fv.sectors[k] = fam[k]
    acc.add([exchange_defect(fv), exchange_defect(tens)])
    det = {"swaps": n, "tensor_route_defect": exchange_defect(fv), "trotter_defect": exchange_defect(tens)}
    return _finish("permutation", sc, pp, acc, sc.tol("permutation"), 0.0, t0, details=det)


def _far(params, sites_times, r0, t_region=0):
    return all(me.ring_dist(s, r0, params.L) > t - t_region for s, t in sites_times)


def propagation_suite(sc):
    t0 = time.perf_counter()
    p = sc.params.replace(A0=None)
    acc = _Acc()
    if _trivial(p):
        return _finish("propagation", sc, p, acc, sc.tol("propagation"), 0.0, t0)
    L = p.L
    T = min(sc.steps, (L - 1) // 2)
    if T < 1:
        raise ValueError("geometry violates wrap margin: need L >= 3 for one step")
    b = enumerate_basis(p)
    rng = np.random.default_rng(sc.seed)
    r0 = 0
    psi0 = sc.initial_state(p)
    v0 = to_occupation(psi0)
    touch = np.array([r0 in {q // 2 for q in b.state(k)[0] + b.state(k)[1]} for k in range(b.dim)])
    dv = np.where(touch, rng.normal(size=b.dim) + 1j * rng.normal(size=b.dim), 0)
    v1 = v0 + 0.3 * dv / np.linalg.norm(dv)
    psi1 = to_tensor(v1, p)
    nflat = 0
    for t in range(1, T + 1):
        a = st.evolve_occ(p, v0, t)
        c = st.evolve_occ(p, v1, t)
        for k in range(b.dim):
            xs, ys = b.state(k)
            if _far(p, [(q // 2, t) for q in xs + ys], r0):
                acc.add(a[k] - c[k])
                nflat += 1
    e0, e1 = me.Engine(psi0), me.Engine(psi1)
    nmix = 0
    for cfg in sample_configs(p, 60, T, sc.seed):
        if _far(p, cfg.points, r0):
            acc.add(e0.phi(cfg) - e1.phi(cfg))
            nmix += 1
    # external potential switched on at one vertex (r0, t_v)
    tv = 1
    A = np.zeros((2, L, T + 1))
    A[:, r0, tv - 1] = [0.7, -0.4]
    pa = p.replace(A0=A)
    pb = p.replace(A0=np.zeros_like(A))
    va, vb = to_occupation(random_state(pa, sc.seed)), None
    vb = va.copy()
    nA = 0
    for t in range(1, T + 1):
        a = st.evolve_occ(pa, va, t)
        c = st.evolve_occ(pb, vb, t)
        for k in range(b.dim):
            xs, ys = b.state(k)
            if t < tv or _far(p, [(q // 2, t) for q in xs + ys], r0, tv):
                acc.add(a[k] - c[k])
                nA += 1
    ea, eb = me.Engine(to_tensor(va, pa)), me.Engine(to_tensor(vb, pb))
    for cfg in sample_configs(p, 40, T, sc.seed + 1):
        if all(t < tv or me.ring_dist(s, r0, L) > t - tv for s, t in cfg.points):
            acc.add(ea.phi(cfg) - eb.phi(cfg))
            nA += 1
    # influence sets inside N_t
    bad = 0
    checked = 0
    picks = rng.choice(b.dim, size=min(6, b.dim), replace=False)
    for k0 in picks:
        e = np.zeros(b.dim, dtype=complex)
        e[k0] = 1
        x0, y0 = b.state(k0)
        for t in range(1, T + 1):
            w = st.evolve_occ(p, e, t)
            for k in np.nonzero(np.abs(w) > 1e-14)[0]:
                xs, ys = b.state(k)
                Nt = me.domain_of_dependence([q // 2 for q in xs], [q // 2 for q in ys], t, L)
                checked += 1
                if not Nt.contains([q // 2 for q in x0], [q // 2 for q in y0]):
                    bad += 1
    det = {"flat_compared": nflat, "mixed_compared": nmix, "potential_compared": nA,
           "influence_checked": checked, "influence_violations": bad, "horizon": T}
    return _finish("propagation", sc, p, acc, sc.tol("propagation"), 0.0, t0, bad == 0, det)


def car_ccr_suite(sc):
    t0 = time.perf_counter()
    dp = sc.dense_params()
    acc = _Acc()
    if _trivial(dp):
        return _finish("car_ccr", sc, dp, acc, sc.tol("car_ccr"), 0.0, t0)
    r = car_ccr_check(dp, sc.tol("car_ccr"))
    acc.add([r.car_max, r.ccr_max, r.cross_max])
    det = {"car_max": r.car_max, "ccr_max": r.ccr_max, "cross_max": r.cross_max}
    return _finish("car_ccr", sc, dp, acc, sc.tol("car_ccr"), 0.0, t0, details=det)


def alt_split_suite(sc):
    t0 = time.perf_counter()
    p = sc.params
    acc = _Acc()
    if p.M_max < 1:
        return _finish("alt_split", sc, p, acc, sc.tol("alt_split"), 0.0, t0)
    psi0 = sc.initial_state()
    eng = me.Engine(psi0)
    L = p.L
    n_free = n_coll = 0

    def stencil_ok(cfg):
        for j, (s, t) in enumerate(cfg.points):
            for ds in (-1, 1):
                moved = list(cfg.points)
                moved[j] = ((s + ds) % L, t)
                c2 = me.SpacetimeConfig(tuple(moved[:cfg.M]), tuple(moved[cfg.M:]))
                if not me.is_spacelike(c2, L)[0]:
                    return False
        return True

    for cfg in sample_configs(p, 30, 3, sc.seed, collision_free=True):
        if not stencil_ok(cfg):
            continue
        stn = me.make_stencil(cfg, eng)
        for w in [("x", j) for j in range(cfg.M)] + [("y", k) for k in range(cfg.N)]:
            acc.add(me.apply_partial_hamiltonian(w, stn) - me.apply_alt_split(w, stn))
        n_free += 1
    # collisions: joint rule under both splits and the site-local realization
    for s0 in range(L):
        for t in (1, 2):
            for extra in ((), (((s0 + 3) % L, t),)):
                if p.N_max < 1 + len(extra):
                    continue
                cfg = me.SpacetimeConfig(((s0, t),), ((s0, t),) + extra)
                if not me.is_spacelike(cfg, L)[0] or not stencil_ok(cfg):
                    continue
                stn = me.make_stencil(cfg, eng)
                slots = [("x", 0), ("y", 0)]
                a = me.apply_joint(slots, stn)
                b2 = me.apply_joint(slots, stn, "alt")
                acc.add(a - b2)
                acc.add(me.interaction_part(slots, stn) - me.site_interaction_value(eng, cfg, s0))
                n_coll += 1
    det = {"collision_free_stencils": n_free, "collision_stencils": n_coll}
    return _finish("alt_split", sc, p, acc, sc.tol("alt_split"), 0.0, t0, details=det)


SUITES = {
    "consistency": consistency_suite,
    "path_independence": path_independence_suite,
    "single_time": single_time_suite,
    "heisenberg": heisenberg_suite,
    "ts": ts_suite,
    "unitarity": unitarity_suite,
    "permutation": permutation_suite,
    "propagation": propagation_suite,
    "car_ccr": car_ccr_suite,
    "alt_split": alt_split_suite,
}


def run_all(sc, names=None):
    names = names or sc.suites or list(SUITES)
    out = []
    for n in names:
        if n not in SUITES:
            raise ValueError(f"unknown suite {n!r}")
        out.append(SUITES[n](sc))
    return out
