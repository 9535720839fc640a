import json

import pytest

from multitime import verify as vf
from multitime.scenario import ScenarioError, default_scenario, parse_scenario

FIELDS = {"id", "pass", "discrepancy_max", "discrepancy_l2", "tolerance", "leakage", "seed",
          "params_hash", "runtime_ms"}


@pytest.fixture(scope="module")
def trivial_reports():
    sc = default_scenario(params={"M_max": 0, "N_max": 0, "L": 4})
    return vf.run_all(sc)


def test_trivial_truncation_passes(trivial_reports):
    assert len(trivial_reports) == len(vf.SUITES)
    for r in trivial_reports:
        assert r.passed, r.line()


def test_report_json_fields(trivial_reports):
    for r in trivial_reports:
        d = r.to_json()
        assert FIELDS <= set(d)
        json.dumps(d)


def test_vacuum_scenario_all_pass():
    sc = default_scenario(initial_state={"kind": "vacuum"}, steps=3)
    for r in vf.run_all(sc):
        assert r.passed, r.line()


def test_unknown_suite():
    with pytest.raises(ScenarioError, match="suites"):
        parse_scenario({"suites": ["nope"]})


@pytest.mark.parametrize("doc,field", [({"params": {"L": "x"}}, "params.L"),
                                       ({"steps": -1}, "steps"),
                                       ({"bogus": 1}, "bogus"),
                                       ({"tolerances": {"foo": 1}}, "tolerances.foo"),
                                       ({"params": {"L": 3}}, "params"),
                                       ({"initial_state": {"kind": "x"}}, "initial_state.kind"),
                                       ({"params": {"L": 8, "M_max": 3, "N_max": 4}}, "params")])
def test_parse_errors_name_field(doc, field):
    with pytest.raises(ScenarioError, match=field.replace(".", r"\.")):
        parse_scenario(doc)


def test_sample_configs_spacelike(desk):
    from multitime.multitime_engine import is_spacelike
    cfgs = vf.sample_configs(desk, 20, 4, 0)
    assert len(cfgs) == 20
    assert all(is_spacelike(c, desk.L)[0] for c in cfgs)
