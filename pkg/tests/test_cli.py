import json
import os

import pytest
from click.testing import CliRunner

from qw import cli


@pytest.fixture
def invoke(tmp_path):
    runner = CliRunner()
    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    out = str(tmp_path / "results")

    def _invoke(*args, config=str(empty)):
        command, rest = args[0], list(args[1:])
        options = ["--config", config] if command != "verify" else []
        if command != "verify":
            options += ["--out", out]
        return runner.invoke(cli, [command, *options, *rest])

    _invoke.out = out
    return _invoke


def test_simulate_writes_csv(invoke):
    result = invoke("simulate", "--k", "2", "--steps", "4")
    assert result.exit_code == 0, result.output
    assert "✅ Simulation complete" in result.output
    assert os.path.exists(os.path.join(invoke.out, "simulate_k2_T4_beta0.csv"))


def test_analytic_picks_resonant_route(invoke):
    result = invoke("analytic", "--k", "2", "--steps", "4")
    assert result.exit_code == 0, result.output
    assert os.path.exists(os.path.join(invoke.out, "resonant_k2_T4_beta0.csv"))


def test_analytic_off_resonance_uses_path_sum(invoke):
    result = invoke("analytic", "--k", "1", "--steps", "3", "--beta", "0.001")
    assert result.exit_code == 0, result.output
    assert os.path.exists(os.path.join(invoke.out, "near-resonant_k1_T3_beta0.001.csv"))


def test_compare_passes(invoke):
    result = invoke("compare", "--route", "resonant", "--k", "2", "--steps", "6")
    assert result.exit_code == 0, result.output
    assert "✅ Pass" in result.output
    report_path = os.path.join(invoke.out, "compare_resonant_vs_simulate_k2_T6.json")
    with open(report_path) as f:
        assert json.load(f)["judgment"] == "Pass"


def test_compare_failure_exit_code(invoke):
    result = invoke(
        "compare", "--route", "near-resonant", "--k", "2", "--steps", "5", "--beta", "0.001",
        "--tolerance", "1e-14",
    )
    assert result.exit_code == 4
    assert "❌" in result.output


def test_compare_same_routes(invoke):
    result = invoke("compare", "--route", "simulate", "--against", "simulate")
    assert result.exit_code == 2


def test_bad_config_key(invoke, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"walk": {"kick": 2.0}}))
    result = invoke("simulate", config=str(config))
    assert result.exit_code == 2
    assert "invalid run config" in result.output


def test_missing_explicit_config(invoke, tmp_path):
    result = invoke("simulate", config=str(tmp_path / "missing.json"))
    assert result.exit_code == 2
    assert "config file not found" in result.output


def test_truncation_exit_code(invoke):
    result = invoke("simulate", "--k", "2", "--steps", "10", "--cutoff", "5")
    assert result.exit_code == 3


def test_ensemble_output_is_reproducible(invoke):
    args = ("simulate", "--k", "1", "--steps", "4", "--fwhm", "0.01", "--samples", "16", "--seed", "7")
    path = os.path.join(invoke.out, "simulate_k1_T4_beta0_fwhm0.01.csv")
    assert invoke(*args).exit_code == 0
    with open(path, "rb") as f:
        first = f.read()
    assert invoke(*args).exit_code == 0
    with open(path, "rb") as f:
        assert f.read() == first


def test_analytic_flags_a_broken_path_sum(invoke):
    result = invoke(
        "analytic", "--route", "near-resonant", "--k", "2", "--steps", "15", "--beta", "0.002", "--ratchet", "0,1"
    )
    assert result.exit_code == 0, result.output
    assert "⚠️" in result.output


def test_sweep_steps_with_fit(invoke):
    result = invoke("sweep", "--axis", "steps", "--values", "4,5,6,7", "--k", "2")
    assert result.exit_code == 0, result.output
    assert "Ballistic fit" in result.output
    assert os.path.exists(os.path.join(invoke.out, "sweep_simulate_steps.csv"))


def test_sweep_rejects_bad_values(invoke):
    result = invoke("sweep", "--axis", "k", "--values", "1,two")
    assert result.exit_code == 2


def test_plot_writes_svg(invoke):
    result = invoke("simulate", "--k", "1", "--steps", "3", "--plot")
    assert result.exit_code == 0, result.output
    assert os.path.exists(os.path.join(invoke.out, "simulate_k1_T3_beta0.svg"))


def test_verify_bundled_cases(invoke):
    result = invoke("verify")
    assert result.exit_code == 0, result.output
    assert "✅ All 5 cases pass" in result.output
