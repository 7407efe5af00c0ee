import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from grassmann_isd.bench import (CSV_HEADER, TABLE1, TABLE2, CodeSpec, ExperimentReport, ExperimentSpec,
                                 PointRecord, emit_report, failure_checks, iteration_budget, load_report,
                                 report_to_csv, rowcost_checks, run_failure_experiment, run_rowcost_experiment,
                                 security_tables, wilson_interval)
from grassmann_isd.decoder import DecoderConfig, plucker_decode
from grassmann_isd.errors import InvalidArgument
from grassmann_isd.field import OpCounter, rref_array


def small_failure_spec(**kw):
    codes = [CodeSpec("grassmann", "plabic", n=12, k=6, seed=1), CodeSpec("ldpc", "ldpc", n=12, col_weight=2,
                                                                          row_weight=4, seed=1)]
    args = dict(experiment="failure_curve", code_specs=codes, sigma_grid=[0.4, 0.5], trials_per_point=40,
                seed=3, w=2, T=200)
    args.update(kw)
    return ExperimentSpec(**args)


def test_security_tables():
    t = security_tables()
    assert t["table1"][128] == 131072 and t["table1"][1024] == 67108864
    row = t["table2"][-1]
    assert (row["n"], row["k"], row["m"], row["q"], row["w"]) == (110, 7, 18, 2, 12)
    assert len(TABLE2) == 5


def test_table1_powers_of_two():
    for level, value in TABLE1.items():
        assert value == 2 ** math.ceil(math.log2(value))
    assert [int(math.log2(v)) for v in TABLE1.values()] == [17, 20, 23, 26]


def test_iteration_budget():
    assert iteration_budget(128) == 131072
    with pytest.raises(InvalidArgument):
        iteration_budget(100)


def test_preset_budget_and_scaling():
    spec = ExperimentSpec.from_preset("paper-128")
    assert spec.budget == 131072
    assert spec.code_specs[0].n == 110 and spec.code_specs[0].k == 7
    scaled = ExperimentSpec.from_preset("paper-256", desk_scale=4)
    assert scaled.budget == 1048576 // 4 and scaled.code_specs[0].n == 27
    assert scaled.code_specs[1].n % 6 == 0
    with pytest.raises(InvalidArgument):
        ExperimentSpec.from_preset("paper-64")


def test_spec_validation():
    with pytest.raises(InvalidArgument):
        small_failure_spec(sigma_grid=[0.1])
    with pytest.raises(InvalidArgument):
        small_failure_spec(trials_per_point=0)
    with pytest.raises(InvalidArgument):
        ExperimentSpec("plot")
    with pytest.raises(InvalidArgument):
        ExperimentSpec("row_cost", lengths=[40, 20])
    with pytest.raises(InvalidArgument):
        ExperimentSpec.from_dict({"experiment": "row_cost", "bogus": 1})
    with pytest.raises(InvalidArgument):
        CodeSpec("x", "goppa").build()
    assert small_failure_spec(sigma_grid=[0.0], smoke=True).sigma_grid == [0.0]


def test_spec_dict_round_trip():
    spec = small_failure_spec()
    again = ExperimentSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
    assert again == spec


def test_noiseless_smoke_run():
    report = run_failure_experiment(small_failure_spec(sigma_grid=[0.0], smoke=True, trials_per_point=10))
    assert [r.value for r in report.records] == [0.0, 0.0]


def test_failure_trial_accounting_and_intervals():
    report = run_failure_experiment(small_failure_spec())
    assert len(report.records) == 4
    for r in report.records:
        assert r.extra["successes"] + r.extra["failures"] == r.trials == 40
        assert r.extra["over_budget"] <= r.extra["failures"]
        assert 0 <= r.lo95 <= r.value <= r.hi95 <= 1
    assert set(report.checks) >= {"monotone:grassmann", "monotone:ldpc", "verdict"}


def test_failure_report_is_byte_identical():
    a = emit_report(run_failure_experiment(small_failure_spec()))
    b = emit_report(run_failure_experiment(small_failure_spec()))
    assert a == b


def test_failure_parallel_matches_serial():
    spec = small_failure_spec(trials_per_point=12)
    assert emit_report(run_failure_experiment(spec, threads=2)) == emit_report(run_failure_experiment(spec))


def test_common_random_numbers():
    # identical noise per trial index: a code and its copy under another name agree exactly
    codes = [CodeSpec("a", "plabic", n=12, k=6, seed=1), CodeSpec("b", "plabic", n=12, k=6, seed=1)]
    report = run_failure_experiment(small_failure_spec(code_specs=codes))
    for sigma in (0.4, 0.5):
        a, b = [r for r in report.records if r.x == sigma]
        assert a.value == b.value and a.extra == b.extra


def test_verdict_logic():
    def rec(series, v, lo, hi):
        return PointRecord(series, 0.5, v, lo, hi, 100)

    rep = ExperimentReport({}, [rec("grassmann", 0.01, 0.0, 0.05), rec("ldpc", 0.3, 0.2, 0.4)])
    assert failure_checks(rep, ["grassmann", "ldpc"])["verdict"]["result"] == "grassmann-lower"
    rep = ExperimentReport({}, [rec("grassmann", 0.3, 0.2, 0.4), rec("ldpc", 0.01, 0.0, 0.05)])
    assert failure_checks(rep, ["grassmann", "ldpc"])["verdict"]["result"] == "ldpc-lower"
    rep = ExperimentReport({}, [rec("grassmann", 0.1, 0.05, 0.2), rec("ldpc", 0.15, 0.1, 0.25)])
    assert failure_checks(rep, ["grassmann", "ldpc"])["verdict"]["result"] == "inconclusive"


def test_monotonicity_check_flags_violations():
    pts = [PointRecord("g", 0.3, 0.5, 0.4, 0.6, 100), PointRecord("g", 0.5, 0.1, 0.05, 0.2, 100)]
    assert failure_checks(ExperimentReport({}, pts), ["g"])["monotone:g"] is False


@given(st.integers(0, 200), st.integers(1, 200))
@settings(max_examples=50)
def test_wilson_contains_estimate(k, n):
    k = min(k, n)
    lo, hi = wilson_interval(k, n)
    assert 0 <= lo <= k / n <= hi <= 1


def test_wilson_empty():
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_rowcost_zero_syndrome_single_trial():
    spec = ExperimentSpec("row_cost", trials_per_point=1, planted_weight=0, seed=0, T=50)
    report = run_rowcost_experiment([12], [1], spec)
    ldpc = report.series("ldpc")[0]
    assert ldpc.value == 6  # one residual evaluation of the 6 sparse checks
    g = report.series("grassmann")[0]
    # replay the trial: one elimination is accepted, rejected windows add their own eliminations
    code = CodeSpec("grassmann", "plabic", n=12, k=6, seed=0).build()
    rng = np.random.default_rng(np.random.SeedSequence([0, 0, 0]))
    rng.choice(12, size=0, replace=False)
    rng.integers(1, 2, size=0)
    out = plucker_decode(code, np.zeros(6, dtype=np.int64), 0, DecoderConfig(T=50, seed=int(rng.integers(0, 2**63))))
    assert out.success and out.iterations_used == out.diagnostics["rejected"] + 1
    assert g.value == out.row_ops
    assert g.value <= out.iterations_used * (6 * 5 + 6)  # per elimination: a swap and r - 1 additions per row


def test_zero_syndrome_accepted_first_window_costs_one_elimination():
    code = CodeSpec("grassmann", "plabic", n=12, k=6, seed=0).build()
    for seed in range(20):
        out = plucker_decode(code, np.zeros(6, dtype=np.int64), 0, DecoderConfig(T=50, seed=seed))
        if out.iterations_used == 1:
            break
    else:
        pytest.fail("no seed accepted its first window")
    # redo the accepted elimination by hand
    rng = np.random.default_rng(seed)
    base = rng.permutation(12)
    window = [int(base[j]) for j in range(6)]
    comp = [int(c) for c in base if c not in set(window)]
    order = list(rng.permutation(comp)) + list(rng.permutation(window)) + [12]
    work = np.hstack([code.parity_check.data, np.zeros((6, 1), dtype=np.int64)])
    ops = OpCounter()
    rref_array(work, code.field, order, ops)
    assert out.ops == ops


def test_rowcost_structure():
    spec = ExperimentSpec("row_cost", trials_per_point=5, seed=1, T=500)
    report = run_rowcost_experiment([12, 20], [1, 2], spec)
    names = {r.series for r in report.records}
    assert names == {"grassmann", "ldpc", "grassmann-q4", "ldpc-q4"}
    for name in names:
        assert [r.x for r in report.series(name)] == [12.0, 20.0]
    assert set(report.checks) == {"grassmann_exceeds_ldpc", "q4_exceeds_q2"}
    with pytest.raises(InvalidArgument):
        run_rowcost_experiment([], [1], spec)
    with pytest.raises(InvalidArgument):
        run_rowcost_experiment([20, 12], [1], spec)
    with pytest.raises(InvalidArgument):
        run_rowcost_experiment([12], [1], small_failure_spec())


def test_rowcost_checks_logic():
    recs = [PointRecord("grassmann", 10, 5, 4, 6, 1), PointRecord("ldpc", 10, 3, 2, 4, 1),
            PointRecord("grassmann-q4", 10, 4, 3, 5, 1)]
    assert rowcost_checks(ExperimentReport({}, recs)) == {"grassmann_exceeds_ldpc": True, "q4_exceeds_q2": False}


def test_csv_output():
    empty = ExperimentReport({}, [])
    assert report_to_csv(empty) == ",".join(CSV_HEADER) + "\n"
    recs = [PointRecord(s, x, 0.1, 0.0, 0.2, 10) for s in ("a", "b") for x in (0.4, 0.5)]
    lines = report_to_csv(ExperimentReport({}, recs)).splitlines()
    assert lines[0].split(",") == CSV_HEADER
    assert sum(1 for ln in lines[1:] if ln.startswith("a,")) == 2
    assert sum(1 for ln in lines[1:] if ln.startswith("b,")) == 2


def test_json_round_trip(tmp_path):
    report = run_failure_experiment(small_failure_spec(trials_per_point=5))
    path = tmp_path / "r.json"
    text = emit_report(report, "json", path)
    assert path.read_text() == text
    assert load_report(text) == report
    assert "wall_time" not in json.loads(text)


def test_emit_errors(tmp_path):
    with pytest.raises(InvalidArgument):
        emit_report(ExperimentReport({}, []), "xml")
    with pytest.raises(InvalidArgument, match="cannot write"):
        emit_report(ExperimentReport({}, []), "csv", tmp_path / "missing" / "r.csv")
