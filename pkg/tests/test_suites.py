"""Suite runner behavior: reports, failure serialization, sharding."""

import json

import pytest

from tarskilab import SUITES, SuiteReport, run_suite
from tarskilab.suites import suite_covering, suite_embedding, suite_solver


def test_suite_registry_complete():
    assert set(SUITES) == {
        "geometry", "composition", "hilbert", "symmetrize",
        "embedding", "covering", "solver",
    }


def test_run_suite_unknown_name():
    with pytest.raises(KeyError, match="bogus"):
        run_suite("bogus")


def test_report_json_excludes_wall_time_and_sorts_failures():
    rep = SuiteReport(suite="demo")
    rep.check("b/check", False, "second")
    rep.check("a/check", False, "first")
    rep.check("c/check", True)
    rep.finish(t0=0.0)
    assert rep.checks_run == 3
    assert [f[0] for f in rep.failures] == ["a/check", "b/check"]
    obj = json.loads(rep.to_json())
    assert set(obj) == {"suite", "checks_run", "failures"}


def test_covering_jobs_sharding_matches_serial():
    serial = suite_covering(n=2, jobs=1)
    sharded = suite_covering(n=2, jobs=3)
    assert serial.checks_run == sharded.checks_run == 100
    assert serial.failures == sharded.failures == []


def test_covering_failures_carry_replayable_counterexample(monkeypatch):
    import tarskilab.suites as suites_mod

    monkeypatch.setattr(suites_mod, "covering_set", lambda geo, p: [])
    rep = suites_mod.suite_covering(n=2)
    assert rep.failures  # empty sets cannot cover anything
    check_id, counterexample = rep.failures[0]
    assert check_id.startswith("covering/n=2/point=")
    payload = json.loads(counterexample)
    assert payload["V"] == []
    assert len(payload["pair"]) == 2  # the differing instance parameters


def test_embedding_failure_path(monkeypatch):
    import tarskilab.suites as suites_mod

    # corrupt the correspondence: swap two images
    real = suites_mod.nos_correspondence

    def crooked(geo, C, i):
        out = bytearray(real(geo, C, i))
        out[0], out[-1] = out[-1], out[0]
        return bytes(out)

    monkeypatch.setattr(suites_mod, "nos_correspondence", crooked)
    with pytest.raises(Exception):
        # swapped strings are no longer valid instances; the suite surfaces it
        suites_mod.suite_embedding(n=2)


def test_solver_suite_counts():
    rep = suite_solver(n=2)
    assert rep.checks_run == 24 * 5
    assert rep.ok
