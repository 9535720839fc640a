"""Command line: run / verify / compare scenario files.

Exit codes: 0 success, 1 suite failure or non-empty diff, 2 bad input."""
import argparse
import csv
import hashlib
import json
import os
import platform
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from . import hypersurface as hs
from . import multitime_engine as me
from ._kernels import HAVE_NUMBA, backend
from .fock_space import BasisCapError
from .scenario import SCHEMA_VERSION, ScenarioError, load_scenario
from .verify import run_all

IGNORED_KEYS = {"runtime_ms", "seed"}


def _dump(obj, path):
    # repr floats round-trip exactly; sorted keys keep files byte-stable
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def _versions():
    v = {"multitime": __version__, "python": platform.python_version(),
         "numpy": np.__version__, "scipy": scipy.__version__, "backend": backend()}
    if HAVE_NUMBA:
        import numba
        v["numba"] = numba.__version__
    return v


def _parse_config(c, L):
    cfg = me.SpacetimeConfig(tuple((int(s) % L, int(t)) for s, t in c.get("x", [])),
                             tuple((int(s) % L, int(t)) for s, t in c.get("y", [])))
    return cfg


def write_density(path, states):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["surface", "M", "N", "x_sites", "y_sites", "rho"])
        for label, s in states:
            for (M, N), arr in sorted(hs.density_table(s).items()):
                for idx in np.ndindex(arr.shape):
                    w.writerow([label, M, N, " ".join(map(str, idx[:M])),
                                " ".join(map(str, idx[M:])), repr(float(arr[idx]))])


def write_phi(path, engine, configs):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["config", "spins", "re", "im"])
        for cfg in configs:
            ph = engine.phi(cfg)
            tag = json.dumps(cfg.to_json(), separators=(",", ":"))
            for idx in np.ndindex(ph.shape):
                z = complex(ph[idx])
                w.writerow([tag, "".join(map(str, idx)), repr(z.real), repr(z.imag)])


def cmd_run(args, verify_only=False):
    sc = load_scenario(args.scenario)
    p = sc.params
    names = args.suite or sc.suites
    reports = run_all(sc, names)
    out = None
    if not verify_only:
        out = Path(args.out or os.environ.get("MULTITIME_OUT") or "run_out")
        out.mkdir(parents=True, exist_ok=True)
        psi0 = sc.initial_state()
        eng = me.Engine(psi0)
        surfaces = [("flat_0", hs.flat_surface(p.L, 0)), (f"flat_{sc.steps}", hs.flat_surface(p.L, sc.steps))]
        for k, h in enumerate(sc.surfaces):
            try:
                surfaces.append((f"surface_{k}", hs.make_surface(h, p.L)))
            except ValueError as e:
                raise ScenarioError(f"surfaces[{k}]: {e}") from None
        states = [(lab, eng.state_on(s)) for lab, s in surfaces]
        snaps = {lab: {"tau": list(s.surface.tau), "state": s.psi.to_json()} for lab, s in states}
        _dump({"schema_version": SCHEMA_VERSION, "snapshots": snaps}, out / "states.json")
        write_density(out / "density.csv", states)
        cfgs = []
        for k, c in enumerate(sc.configs):
            cfg = _parse_config(c, p.L)
            ok, wit = me.is_spacelike(cfg, p.L)
            if not ok:
                raise ScenarioError(f"configs[{k}]: not spacelike, offending pair {wit}")
            cfgs.append(cfg)
        write_phi(out / "phi.csv", eng, cfgs)
        _dump({"schema_version": SCHEMA_VERSION, "reports": [r.to_json() for r in reports]},
              out / "reports.json")
        raw = Path(args.scenario).read_bytes()
        _dump({"schema_version": SCHEMA_VERSION, "scenario": sc.to_json(),
               "scenario_sha256": hashlib.sha256(raw).hexdigest(),
               "params_hash": p.hash(), "versions": _versions(),
               "suites": [r.id for r in reports],
               "outputs": ["states.json", "density.csv", "phi.csv", "reports.json", "summary.txt"]},
              out / "manifest.json")
    lines = [r.line() for r in reports]
    ok = all(r.passed for r in reports if not r.expected_negative)
    lines.append(f"overall: {'PASS' if ok else 'FAIL'} ({sum(r.passed for r in reports)}/{len(reports)})")
    text = "\n".join(lines) + "\n"
    if out is not None:
        (out / "summary.txt").write_text(text)
    sys.stdout.write(text)
    return 0 if ok else 1


def _diff(a, b, path, atol, out):
    if isinstance(a, dict) and isinstance(b, dict):
        for k in sorted(set(a) | set(b)):
            if k in IGNORED_KEYS:
                continue
            if k not in a or k not in b:
                out.append(f"{path}.{k}: missing on one side")
            else:
                _diff(a[k], b[k], f"{path}.{k}", atol, out)
    elif isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            out.append(f"{path}: length {len(a)} != {len(b)}")
            return
        if a and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in a + b):
            d = np.max(np.abs(np.asarray(a, float) - np.asarray(b, float)))
            if d > atol:
                out.append(f"{path}: max abs diff {d:.3e}")
            return
        for n, (u, v) in enumerate(zip(a, b)):
            _diff(u, v, f"{path}[{n}]", atol, out)
    elif isinstance(a, (int, float)) and isinstance(b, (int, float)) \
            and not isinstance(a, bool) and not isinstance(b, bool):
        if abs(a - b) > atol:
            out.append(f"{path}: {a!r} != {b!r}")
    elif a != b:
        out.append(f"{path}: {a!r} != {b!r}")


def _read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    out = []
    for r in rows:
        row = []
        for v in r:
            try:
                row.append(float(v))
            except ValueError:
                row.append(v)
        out.append(row)
    return out


def compare_dirs(a, b, atol=0.0):
    a, b = Path(a), Path(b)
    ma, mb = (json.loads((d / "manifest.json").read_text()) for d in (a, b))
    if ma.get("schema_version") != mb.get("schema_version"):
        raise ScenarioError(f"schema_version: {ma.get('schema_version')!r} vs {mb.get('schema_version')!r}")
    diffs = []
    for name in ("states.json", "reports.json"):
        _diff(json.loads((a / name).read_text()), json.loads((b / name).read_text()), name, atol, diffs)
    for name in ("density.csv", "phi.csv"):
        _diff(_read_csv(a / name), _read_csv(b / name), name, atol, diffs)
    return diffs


def cmd_compare(args):
    for d in (args.dir_a, args.dir_b):
        if not (Path(d) / "manifest.json").exists():
            raise ScenarioError(f"{d}: no manifest.json")
    diffs = compare_dirs(args.dir_a, args.dir_b, args.atol)
    for line in diffs:
        print(line)
    print(f"{len(diffs)} difference(s)")
    return 1 if diffs else 0


def build_parser():
    ap = argparse.ArgumentParser(prog="multitime")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="evolve, evaluate and verify a scenario")
    r.add_argument("scenario")
    r.add_argument("--out", default=None)
    r.add_argument("--suite", action="append", default=None)
    v = sub.add_parser("verify", help="run verification suites only")
    v.add_argument("scenario")
    v.add_argument("--suite", action="append", default=None)
    c = sub.add_parser("compare", help="diff two run directories")
    c.add_argument("dir_a")
    c.add_argument("dir_b")
    c.add_argument("--atol", type=float, default=0.0)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "run":
            return cmd_run(args)
        if args.cmd == "verify":
            return cmd_run(args, verify_only=True)
        return cmd_compare(args)
    except (ScenarioError, BasisCapError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        if "suite" in str(e):
            print(f"error: suites: {e}", file=sys.stderr)
            return 2
        raise


if __name__ == "__main__":
    sys.exit(main())
