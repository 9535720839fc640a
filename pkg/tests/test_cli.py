import json
import subprocess
import sys

import pytest

from multitime.cli_runner import compare_dirs, main

SC = {"schema_version": 1, "name": "t", "params": {"L": 6, "M_max": 1, "N_max": 1},
      "steps": 2, "seed": 1, "suites": ["unitarity", "car_ccr"],
      "surfaces": [[1, 2, 1, 2, 1, 2]], "configs": [{"x": [[0, 1]], "y": [[3, 2]]}]}


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("cli")
    f = write(tmp, "sc.json", SC)
    outs = []
    for k in range(2):
        out = tmp / f"run{k}"
        assert main(["run", f, "--out", str(out)]) == 0
        outs.append(out)
    g = dict(SC, params=dict(SC["params"], g=[[1, 0], [0, 0]]))
    out = tmp / "run_g"
    assert main(["run", write(tmp, "g.json", g), "--out", str(out)]) == 0
    outs.append(out)
    return outs


def test_artifacts_written(runs):
    names = {p.name for p in runs[0].iterdir()}
    assert {"manifest.json", "reports.json", "states.json", "density.csv", "phi.csv", "summary.txt"} <= names
    man = json.loads((runs[0] / "manifest.json").read_text())
    assert man["schema_version"] == 1 and len(man["params_hash"]) == 16


def test_bit_stable(runs):
    for name in ("states.json", "density.csv", "phi.csv", "manifest.json"):
        assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes()
    assert compare_dirs(runs[0], runs[1]) == []
    assert main(["compare", str(runs[0]), str(runs[1])]) == 0


def test_different_g_flagged(runs):
    assert compare_dirs(runs[0], runs[2])
    assert main(["compare", str(runs[0]), str(runs[2])]) == 1


def test_seed_independent_outputs_with_vacuum(tmp_path):
    base = dict(SC, initial_state={"kind": "vacuum"}, suites=["car_ccr", "consistency"])
    a, b = tmp_path / "a", tmp_path / "b"
    main(["run", write(tmp_path, "a.json", dict(base, seed=1)), "--out", str(a)])
    main(["run", write(tmp_path, "b.json", dict(base, seed=2)), "--out", str(b)])
    assert compare_dirs(a, b) == []


def test_malformed_exit_2(tmp_path, capsys):
    assert main(["run", write(tmp_path, "bad.json", {"params": {"M_max": "one"}})]) == 2
    assert "params.M_max" in capsys.readouterr().err
    p = tmp_path / "broken.json"
    p.write_text('{"steps": 2,\n "seed": }')
    assert main(["verify", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_verify_failure_exit_1(tmp_path):
    doc = dict(SC, suites=["unitarity"], tolerances={"unitarity": -1.0})
    assert main(["verify", write(tmp_path, "f.json", doc)]) == 1


def test_module_entry_point(tmp_path):
    f = write(tmp_path, "sc.json", dict(SC, suites=["car_ccr"]))
    r = subprocess.run([sys.executable, "-m", "multitime", "verify", f], capture_output=True, text=True)
    assert r.returncode == 0
    assert "[PASS] car_ccr" in r.stdout


@pytest.mark.parametrize("name", ["default.json", "vacuum.json", "wavepacket.json"])
def test_shipped_scenarios_parse(name):
    from pathlib import Path
    from multitime.scenario import load_scenario
    sc = load_scenario(Path(__file__).parent.parent / "scenarios" / name)
    assert sc.initial_state().norm() > 0


def test_vacuum_scenario_exit_0(tmp_path):
    from pathlib import Path
    f = Path(__file__).parent.parent / "scenarios" / "vacuum.json"
    assert main(["run", str(f), "--out", str(tmp_path / "v")]) == 0
