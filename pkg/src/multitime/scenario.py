"""Scenario files: model parameters, initial state, tolerances, suites."""
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fock_space import FockVector, ModelParams, enumerate_basis, to_tensor

SCHEMA_VERSION = 1

DEFAULT_TOL = {
    "path_independence": 1e-10,
    "leakage": 1e-6,
    "consistency_zero": 1e-14,
    "consistency_witness": 1e-3,
    "single_time": 1e-10,
    "refinement_ratio": [1.7, 2.3],
    "heisenberg": 1e-8,
    "ts_ratio": [3.4, 4.6],
    "ts_commutator": 1e-13,
    "unitarity": 1e-10,
    "inverse": 1e-12,
    "permutation": 1e-12,
    "propagation": 1e-14,
    "car_ccr": 1e-12,
    "alt_split": 1e-12,
}

DEFAULT_PARAMS = {"d": 1, "L": 6, "a": 1.0, "m_x": 1.0, "m_y": 0.5,
                  "g": [[2 ** -0.5, 0.0], [2 ** -0.5, 0.0]], "M_max": 1, "N_max": 2, "A0": None}

KNOWN_KEYS = {"schema_version", "name", "params", "initial_state", "steps", "seed",
              "tolerances", "suites", "surfaces", "configs", "output_dir"}


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    params: ModelParams
    steps: int = 8
    seed: int = 0
    initial: dict = field(default_factory=lambda: {"kind": "random"})
    tolerances: dict = field(default_factory=dict)
    suites: list = None
    surfaces: list = field(default_factory=list)
    configs: list = field(default_factory=list)
    name: str = "scenario"
    base_dir: str = "."

    def tol(self, key):
        return self.tolerances.get(key, DEFAULT_TOL[key])

    def dense_params(self):
        """Small oracle model sharing masses, coupling and spacing."""
        p = self.params
        return p.replace(L=4, M_max=min(p.M_max, 1), N_max=min(p.N_max, 1), A0=None)

    def perm_params(self):
        p = self.params
        return p.replace(L=4, M_max=2, N_max=2, A0=None)

    def initial_state(self, params=None):
        params = self.params if params is None else params
        return make_initial(params, self.initial, self.seed, self.base_dir)

    def to_json(self):
        return {"schema_version": SCHEMA_VERSION, "name": self.name, "params": self.params.to_dict(),
                "initial_state": self.initial, "steps": self.steps, "seed": self.seed,
                "tolerances": self.tolerances, "suites": self.suites, "surfaces": self.surfaces,
                "configs": self.configs}


def random_state(params, seed):
    b = enumerate_basis(params)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=b.dim) + 1j * rng.normal(size=b.dim)
    return to_tensor(v / np.linalg.norm(v), params)


def wavepacket(params, species="x", center=0, width=1.0, spin=0, momentum=0.0):
    L = params.L
    if species == "x" and params.M_max < 1 or species == "y" and params.N_max < 1:
        raise ScenarioError("wavepacket species not allowed by truncation")
    sites = np.arange(L)
    d = (sites - center + L / 2) % L - L / 2
    amp = np.exp(-0.5 * (d / width) ** 2 + 1j * momentum * d)
    f = FockVector.zeros(params)
    key = (1, 0) if species == "x" else (0, 1)
    arr = np.zeros(2 * L, dtype=complex)
    arr[2 * sites + spin] = amp
    arr /= np.sqrt(params.a ** params.grid.d * np.sum(np.abs(arr) ** 2))
    f.sectors[key] = arr
    return f


def make_initial(params, init, seed=0, base_dir="."):
    kind = init.get("kind", "random")
    if kind == "random":
        return random_state(params, int(init.get("seed", seed)))
    if kind == "vacuum":
        return FockVector.vacuum(params)
    if kind == "wavepacket":
        return wavepacket(params, init.get("species", "x"), int(init.get("center", 0)) % params.L,
                          float(init.get("width", 1.0)), int(init.get("spin", 0)),
                          float(init.get("momentum", 0.0)))
    if kind == "file":
        path = Path(base_dir) / init["path"]
        st = FockVector.from_json(json.loads(path.read_text()))
        if st.params != params:
            # suites on a derived model fall back to a seeded random state
            return random_state(params, seed)
        return st
    raise ScenarioError(f"initial_state.kind: unknown value {kind!r}")


def parse_scenario(d, base_dir="."):
    if not isinstance(d, dict):
        raise ScenarioError("scenario: top level must be a JSON object")
    if d.get("schema_version", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ScenarioError(f"schema_version: unsupported value {d.get('schema_version')!r}")
    unknown = set(d) - KNOWN_KEYS
    if unknown:
        raise ScenarioError(f"{sorted(unknown)[0]}: unknown field")
    pd = dict(DEFAULT_PARAMS)
    pd.update(d.get("params", {}))
    for k in ("L", "M_max", "N_max"):
        if not isinstance(pd[k], int) or isinstance(pd[k], bool):
            raise ScenarioError(f"params.{k}: expected integer, got {pd[k]!r}")
    for k in ("a", "m_x", "m_y"):
        if not isinstance(pd[k], (int, float)) or isinstance(pd[k], bool):
            raise ScenarioError(f"params.{k}: expected number, got {pd[k]!r}")
    if pd["m_x"] < 0 or pd["m_y"] < 0:
        raise ScenarioError("params.m_x/m_y: masses must be >= 0")
    g = pd["g"]
    if not isinstance(g, list) or len(g) != 2:
        raise ScenarioError("params.g: expected list of two spin components")
    try:
        params = ModelParams.from_dict(pd)
    except (ValueError, NotImplementedError) as e:
        raise ScenarioError(f"params: {e}") from None
    try:
        enumerate_basis(params)
    except ValueError as e:
        raise ScenarioError(f"params: {e}") from None
    steps = d.get("steps", 8)
    if not isinstance(steps, int) or steps < 0:
        raise ScenarioError(f"steps: expected non-negative integer, got {steps!r}")
    seed = d.get("seed", 0)
    if not isinstance(seed, int):
        raise ScenarioError(f"seed: expected integer, got {seed!r}")
    tol = d.get("tolerances", {}) or {}
    for k in tol:
        if k not in DEFAULT_TOL:
            raise ScenarioError(f"tolerances.{k}: unknown tolerance")
    init = d.get("initial_state", {"kind": "random"})
    if not isinstance(init, dict) or "kind" not in init:
        raise ScenarioError("initial_state: expected object with a 'kind' field")
    if init["kind"] not in ("random", "vacuum", "wavepacket", "file"):
        raise ScenarioError(f"initial_state.kind: unknown value {init['kind']!r}")
    suites = d.get("suites")
    if suites is not None:
        from .verify import SUITES
        for s in suites:
            if s not in SUITES:
                raise ScenarioError(f"suites: unknown suite {s!r}")
    surfaces = d.get("surfaces", [])
    for n, s in enumerate(surfaces):
        if not isinstance(s, list) or len(s) != params.L:
            raise ScenarioError(f"surfaces[{n}]: expected list of {params.L} integers")
    configs = d.get("configs", [])
    for n, c in enumerate(configs):
        if not isinstance(c, dict) or not set(c) <= {"x", "y"}:
            raise ScenarioError(f"configs[{n}]: expected object with 'x' and 'y' point lists")
    return Scenario(params, steps, seed, init, tol, suites, surfaces, configs,
                    d.get("name", "scenario"), str(base_dir))


def load_scenario(path):
    path = Path(path)
    try:
        d = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario: invalid JSON ({e})") from None
    return parse_scenario(d, path.parent)


def default_scenario(**over):
    d = {"params": dict(DEFAULT_PARAMS)}
    d["params"].update(over.pop("params", {}))
    d.update(over)
    return parse_scenario(d)
