"""Smoke tests for the python module: load the shipped documents, run every
command, check a handful of frozen values, and confirm the error translation
and report determinism contracts."""

import json
import math
import os
import pathlib
import subprocess

import pytest

import rpfkit


FIXTURES = pathlib.Path(
    os.environ.get("RPFKIT_FIXTURES", pathlib.Path(__file__).resolve().parents[2] / "fixtures")
)

GOLDEN_LAMBDA = (1.0 + math.sqrt(5.0)) / 4.0


def doc(name):
    return (FIXTURES / name).read_text()


def results(command, name):
    return json.loads(rpfkit.run(command, doc(name)))["results"]


def strip_wall_time(report):
    return "\n".join(line for line in report.splitlines() if "wall_time_ms" not in line)


def test_version():
    assert rpfkit.version() == "0.1.0"
    assert rpfkit.__version__ == "0.1.0"


def test_eigen_golden_mean():
    res = results("eigen", "golden_mean.json")
    assert res["lambda"] == pytest.approx(GOLDEN_LAMBDA, abs=1e-12)
    assert res["period"] == 1
    assert res["gap_ratio"] == pytest.approx((math.sqrt(5) - 1) / (math.sqrt(5) + 1), abs=1e-10)
    assert res["residuals"]["eigenfunction"] <= 1e-10


def test_eigen_product_type():
    text = doc("product_type.json")
    assert rpfkit.spectral_radius(text) == pytest.approx(2.5, abs=1e-12)
    res = results("eigen", "product_type.json")
    for value in res["f"].values():
        assert value == pytest.approx(1.0, abs=1e-12)
    assert res["rho"]["1"] == pytest.approx(0.8, abs=1e-12)
    assert res["rho"]["1 1"] == pytest.approx(0.64, abs=1e-12)


def test_thermo_helpers_consistent():
    text = doc("golden_mean.json")
    res = json.loads(rpfkit.run("thermo", text))["results"]
    assert rpfkit.pressure(text) == pytest.approx(math.log(GOLDEN_LAMBDA), abs=1e-12)
    assert rpfkit.entropy(text) == pytest.approx(res["entropy"], abs=1e-12)
    # With a vanishing potential the pressure is pure entropy.
    assert res["entropy"] == pytest.approx(res["pressure"], abs=1e-12)
    assert res["energy"] == pytest.approx(0.0, abs=1e-12)


def test_zerotemp_report_and_csv():
    res = results("zerotemp", "golden_mean_sum.json")
    assert res["complete"] is True
    assert res["oracle"]["value"] == pytest.approx(1.0, abs=1e-12)
    assert res["ground_state"]["flag"] == "selected"
    csv = rpfkit.run_csv("zerotemp", doc("golden_mean_sum.json"))
    lines = csv.split("\r\n")
    assert lines[0] == "t,pressure,pressure_over_t,energy,tv_prev"
    assert len(lines) == len(res["temperatures"]) + 2  # header + rows + trailing ""


def test_involution_identities():
    res = results("involution", "golden_mean_sum.json")
    assert res["identity_deviation"] <= 1e-14
    assert res["lemma_deviation"] <= 1e-12
    assert res["lambda_deviation"] <= 1e-10
    assert res["bilateral"]["total"] == pytest.approx(1.0, abs=1e-9)


def test_cms_star_aggregate():
    res = results("cms", "star_shift.json")
    assert res["aggregate_exact"] is True
    assert res["aggregated_lambda"] == pytest.approx(GOLDEN_LAMBDA, abs=1e-12)
    deviations = res["deviations"]
    assert all(b < a for a, b in zip(deviations, deviations[1:]))
    csv = rpfkit.run_csv("cms", doc("star_shift.json"))
    assert csv.startswith("level,lambda,deviation\r\n")


def test_report_determinism():
    text = doc("golden_mean_sum.json")
    first = rpfkit.run("zerotemp", text)
    second = rpfkit.run("zerotemp", text)
    assert strip_wall_time(first) == strip_wall_time(second)
    assert json.loads(first)["report_digest"] == json.loads(second)["report_digest"]
    assert json.loads(first)["input_digest"] == rpfkit.input_digest(text)


def test_error_translation():
    with pytest.raises(rpfkit.ToolkitError) as info:
        rpfkit.run("eigen", "{ not json")
    assert info.value.code == "ParseError"
    assert info.value.exit_status == 2

    with pytest.raises(rpfkit.ToolkitError) as info:
        rpfkit.run("cms", doc("bad_nonaggregable.json"))
    assert info.value.code == "NonAggregableTail"
    assert info.value.exit_status == 4

    with pytest.raises(RuntimeError):  # ToolkitError subclasses RuntimeError
        rpfkit.spectral_radius(doc("star_shift.json"))

    with pytest.raises(rpfkit.ToolkitError) as info:
        rpfkit.run_csv("eigen", doc("golden_mean.json"))
    assert info.value.exit_status == 2


def test_cli_binary():
    cli = os.environ.get("RPFKIT_CLI")
    if not cli or not os.path.exists(cli):
        pytest.skip("RPFKIT_CLI not set")
    out = subprocess.run([cli, "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.strip() == "0.1.0"
    run = subprocess.run([cli, "eigen", str(FIXTURES / "golden_mean.json")],
                         capture_output=True, text=True)
    assert run.returncode == 0
    assert json.loads(run.stdout)["results"]["lambda"] == pytest.approx(GOLDEN_LAMBDA, abs=1e-12)
    bad = subprocess.run([cli, "eigen", str(FIXTURES / "bad_irreducible.json")],
                         capture_output=True, text=True)
    assert bad.returncode == 4
    assert "NotIrreducible" in bad.stderr
