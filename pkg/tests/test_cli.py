import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from limitlab.cli import ExperimentConfig, UsageError, config_from_args, main
from limitlab.reports import records_from_csv

FIXTURES = Path(__file__).parent / "fixtures"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_clt_csv_rows():
    code, out, _ = run("clt", "--dist", "rademacher", "--n", "16,64,256", "--format", "csv")
    assert code == 0
    recs = records_from_csv(out)
    assert [r.n for r in recs] == [16, 64, 256]
    assert recs[0].value > recs[1].value > recs[2].value


def test_clt_standardizes_literal():
    code, out, _ = run("clt", "--dist", "uniform:0,1", "--n", "4")
    assert code == 0 and records_from_csv(out)[0].dist == "uniform:0,1"


def test_wlln_zero_is_usage_error():
    code, _, err = run("wlln", "--dist", "rademacher", "--t", "0", "--n", "4")
    assert code == 2
    assert json.loads(err)["exit_code"] == 2


def test_wlln_bridge_output():
    code, out, _ = run("wlln", "--n", "100", "--eps", "0.5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["bridge"][0]["bound"] <= 1e-4 and len(doc["records"]) == 2


def test_lemmas_single_kernel():
    code, out, _ = run("lemmas", "--kernel", "beta:3,0.5", "--n", "1,2,4,8")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] is True
    assert len(doc["swaps"]) == 24 and all(s["verdict"] for s in doc["swaps"])
    assert all(c["holds"] for c in doc["pair_checks"])


def test_sandwich_json():
    code, out, _ = run("sandwich", "--dist", "rademacher", "--n", "4", "--delta", "0.25",
                       "--t", "0,1")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] and len(doc["reports"]) == 4


def test_mc_checks_pass():
    code, out, _ = run("mc", "--dist", "rademacher", "--kernel", "beta:3,1", "--n", "4",
                       "--samples", "20000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert {r["check"] for r in rows} == {"batch", "clt_sum", "clt_vs_normal", "median_of_uniforms"}
    assert all(r["passed"] == "true" for r in rows if r["passed"])


def test_mc_is_reproducible():
    a = run("mc", "--samples", "5000", "--n", "3", "--seed", "17")[1]
    b = run("mc", "--samples", "5000", "--n", "3", "--seed", "17")[1]
    assert a == b


def test_kernels_dump():
    code, out, _ = run("kernels", "--kernel", "beta:3,1", "--dist", "rademacher")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 201 + 401
    mid = [r for r in rows if r["dist"] == "" and float(r["t"]) == 0.0][0]
    assert float(mid["value"]) == 0.5 and float(mid["d1"]) == 0.9375


def test_out_directory_and_svg(tmp_path):
    code, out, _ = run("clt", "--dist", "rademacher", "--dist", "threepoint:-2,0.25,1,0.2,0.5,0.3",
                       "--n", "4,16,64", "--format", "csv,svg", "--out", str(tmp_path / "r"))
    assert code == 0 and out == ""
    svg = (tmp_path / "r" / "clt.svg").read_text()
    assert svg.count("<polyline") == 2
    assert len(records_from_csv((tmp_path / "r" / "clt.csv").read_text())) == 6


def test_svg_without_out_is_usage_error():
    assert run("clt", "--n", "4", "--format", "svg")[0] == 2


@pytest.mark.parametrize("argv", [
    ["nope"],
    ["clt", "--dist", "uniform:1"],
    ["clt", "--kernel", "beta:5,1"],
    ["clt", "--n", "0"],
    ["clt", "--n", "2.5"],
    ["clt", "--format", "pdf"],
    ["clt", "--dist", "det:1"],  # zero variance
    ["mc", "--alpha", "2"],
    ["mc", "--seed", "-1"],
    ["clt", "--config", "/nonexistent/config.json"],
])
def test_usage_errors(argv):
    code, _, err = run(*argv)
    assert code == 2
    diag = json.loads(err.strip().splitlines()[-1])
    assert diag["exit_code"] == 2 and diag["message"]


def test_literal_error_reports_column():
    _, _, err = run("clt", "--dist", "uniform:1,x")
    assert "column 11" in json.loads(err)["message"]


def test_falsified_golden_exits_1():
    code, _, err = run("clt", "--config", str(FIXTURES / "falsified_golden.json"))
    assert code == 1 and json.loads(err)["error"] == "VerdictFailed"


def test_true_golden_exits_0():
    assert run("clt", "--config", str(FIXTURES / "clt_golden.json"))[0] == 0


def test_config_command_mismatch():
    assert run("wlln", "--config", str(FIXTURES / "clt_golden.json"))[0] == 2


def test_impossible_quadrature_tolerance_exits_3():
    code, _, err = run("sandwich", "--dist", "rademacher", "--n", "4", "--quad-tol", "1e-30")
    diag = json.loads(err)
    assert code == 3 and diag["error"] == "CertificationError" and diag["achieved"] > 1e-30


def test_loose_quadrature_tolerance_is_usage_error():
    assert run("sandwich", "--dist", "rademacher", "--n", "4", "--quad-tol", "1e-3")[0] == 2


def test_flags_override_config(tmp_path):
    cfg = config_from_args(["clt", "--config", str(FIXTURES / "clt_golden.json"), "--n", "4,16"])
    assert cfg.ns == [4, 16] and cfg.dists == ["rademacher"]


configs = st.builds(
    ExperimentConfig,
    command=st.sampled_from(["lemmas", "clt", "wlln", "sandwich", "mc", "kernels"]),
    dists=st.lists(st.sampled_from(["rademacher", "uniform:0,1", "det:0", "atoms:1:0.25,2:0.75"]),
                   max_size=3),
    kernels=st.lists(st.sampled_from(["beta:2,1", "beta:3,0.5"]), max_size=2),
    ns=st.lists(st.integers(1, 1000), max_size=4),
    ts=st.lists(st.floats(-5, 5, allow_nan=False), max_size=3),
    eps=st.none() | st.floats(0.01, 2),
    alpha=st.floats(1e-6, 0.5),
    seed=st.integers(0, 2**64 - 1),
    stream=st.none() | st.integers(0, 2**64 - 1),
    samples=st.integers(1, 10**6),
    formats=st.lists(st.sampled_from(["csv", "json", "svg"]), unique=True, max_size=3),
)


@given(configs)
def test_config_round_trip(cfg):
    cfg.validate()
    once = ExperimentConfig.from_json(cfg.to_json())
    assert once == cfg
    assert ExperimentConfig.from_json(once.to_json()) == once


def test_config_rejects_unknown_keys():
    with pytest.raises(UsageError):
        ExperimentConfig.from_json('{"command": "clt", "colour": "red"}')
    with pytest.raises(UsageError):
        ExperimentConfig.from_json("[1, 2]")


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "limitlab", "clt", "--n", "4"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.startswith("theorem,dist")
