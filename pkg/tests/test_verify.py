import json

import pytest

from jdcalc.spaces import ResourceError
from jdcalc.verify import FORMAT_VERSION, SUITES, Case, Report, UnknownSuite, _Ctx, run_suite

CHEAP = {
    "delta_welldef": {"degree": 2},
    "delta_Delta": {"degree": 1},
    "jacobi_Dvv": {},
    "kirchhoff": {},
    "leibniz": {"degree": 2, "pairs": 5},
    "oneloop_phi": {"degree": 2},
    "oneloop_rank": {"degree": 3},
    "periodic_iso": {"degree": 2},
    "quasilie_exact": {"degree": 2, "k": 1},
    "eta_iso": {"degree": 2},
    "sq_xi": {"degree": 1},
    "nu_inj": {"degree": 1},
    "periodic_inclusion": {},
    "tree_kernel": {},
    "y3_structure": {},
    "remark_bc": {},
}


def test_every_suite_has_a_cheap_run():
    assert set(CHEAP) == set(SUITES)


@pytest.mark.parametrize("name", sorted(CHEAP))
def test_cheap_runs_pass_and_repeat(name):
    r1 = run_suite(name, CHEAP[name])
    r2 = run_suite(name, CHEAP[name])
    assert r1.passed, [c for c in r1.cases if c.status != "pass"]
    assert r1.cases and r1.skipped == 0
    assert r1.to_json() == r2.to_json()


def test_report_schema():
    r = run_suite("oneloop_rank", {"degree": 2})
    d = json.loads(r.to_json())
    assert set(d) == {"suite", "params", "cases", "passed", "wallTimeMs", "formatVersion"}
    assert d["formatVersion"] == FORMAT_VERSION
    assert d["wallTimeMs"] is None
    assert d["params"] == {"genus": 1, "degree": 2}
    for c in d["cases"]:
        assert set(c) == {"id", "expected", "computed", "status"}


def test_timing_is_opt_in():
    assert isinstance(run_suite("oneloop_rank", {"degree": 2}, timing=True).wall_time_ms, int)


def test_none_params_fall_back_to_defaults():
    assert run_suite("oneloop_rank", {"genus": None, "degree": 2}).params["genus"] == 1


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("nope")


def test_context_records_outcomes():
    r = Report("x", {})
    ctx = _Ctx(r)
    ctx.case("good", "a", lambda: "a")
    ctx.case("bad", "a", lambda: "b")

    def boom():
        raise ResourceError("too big")

    ctx.case("big", "a", boom)
    assert [c.status for c in r.cases] == ["pass", "fail", "skipped-resource"]
    assert not r.passed
    assert r.skipped == 1


def test_skips_alone_do_not_fail():
    r = Report("x", {}, [Case("a", "", "cap", "skipped-resource")])
    assert r.passed and r.skipped == 1


def test_oversized_request_is_skipped():
    r = run_suite("oneloop_rank", {"genus": 3, "degree": 5})
    assert r.passed and r.skipped > 0


def test_leibniz_random_pairs_depend_on_seed():
    a = run_suite("leibniz", {"degree": 1, "pairs": 4, "randomDegree": 3, "seed": 1})
    b = run_suite("leibniz", {"degree": 1, "pairs": 4, "randomDegree": 3, "seed": 1})
    c = run_suite("leibniz", {"degree": 1, "pairs": 4, "randomDegree": 3, "seed": 2})
    assert a.to_json() == b.to_json()
    assert [x.id for x in a.cases] != [x.id for x in c.cases]
