import json
import os

import numpy as np
import pytest

import vbesov as vb
from vbesov.cli import main
from vbesov.config import ConfigError, emit_config, parse_config
from vbesov.errors import ParameterError
from vbesov.exprgrammar import ExprError, evaluate_text, parse_expression

FAST_CONFIG = """
# scaled-down run for fast tests
points = 1024
octaves = 6
nodes_per_octave = 12
p = 2
alpha = 1 / 2
q = 2 + 1 / log(e + 1 / t)
q0 = 2.0
member = gauss_w1
seed = 7
"""


# -- expression grammar ---------------------------------------------------------

def test_expr_basic():
    x = np.linspace(-2, 2, 64)
    out = evaluate_text("3 + sin(2 * pi * x / 16)", "x", x)
    assert np.allclose(out, 3 + np.sin(2 * np.pi * x / 16))


def test_expr_nested_and_unary():
    t = np.geomspace(0.01, 1.0, 32)
    out = evaluate_text("2 + 1 / log(e + 1 / t)", "t", t)
    assert np.allclose(out, 2 + 1 / np.log(np.e + 1 / t))
    out = evaluate_text("-abs(t - 1) * 2", "t", t)
    assert np.allclose(out, -np.abs(t - 1) * 2)


def test_expr_errors_carry_position():
    with pytest.raises(ExprError) as ei:
        parse_expression("2 + $")
    assert "column" in str(ei.value)
    with pytest.raises(ExprError):
        parse_expression("sin(1")
    with pytest.raises(ExprError):
        parse_expression("fob(1)")
    with pytest.raises(ParameterError):
        evaluate_text("x + 1", "t", np.ones(3))


def test_expr_no_code_execution():
    with pytest.raises(ExprError):
        parse_expression("__import__('os')")


# -- config ----------------------------------------------------------------------

def test_config_roundtrip():
    cfg = parse_config(FAST_CONFIG)
    assert cfg.points == 1024 and cfg.octaves == 6
    assert cfg.alpha == "1 / 2"
    text = emit_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert emit_config(again) == text


def test_config_errors_carry_line():
    with pytest.raises(ConfigError) as ei:
        parse_config("points = 1024\nwhat even is this\n")
    assert "line 2" in str(ei.value)
    with pytest.raises(ConfigError):
        parse_config("unknown_key = 3\n")
    with pytest.raises(ConfigError):
        parse_config("points = twelve\n")
    with pytest.raises(ConfigError):
        parse_config("p = 2 +\n")


def test_config_builds_fields():
    cfg = parse_config(FAST_CONFIG)
    spec = cfg.grid()
    p = cfg.p_field(spec)
    assert p.cached_min == p.cached_max == 2.0
    q = cfg.q_field(cfg.ladder())
    assert q.limit_value == 2.0


# -- CLI ---------------------------------------------------------------------------


def _write_cfg(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return str(path)


def test_cli_gen_bank(tmp_path):
    cfg = _write_cfg(tmp_path, FAST_CONFIG)
    out = str(tmp_path / "out")
    assert main(["gen-bank", "--config", cfg, "--out", out]) == 0
    manifest = json.load(open(os.path.join(out, "bank_manifest.json")))
    assert len(manifest["members"]) == 20
    some = next(iter(manifest["members"].values()))
    assert os.path.exists(some)


def test_cli_norm_and_zero(tmp_path):
    cfg = _write_cfg(tmp_path, FAST_CONFIG)
    out = str(tmp_path / "out")
    assert main(["norm", "--config", cfg, "--out", out, "--form", "q0"]) == 0
    doc = json.load(open(os.path.join(out, "norm_gauss_w1_q0.json")))
    assert doc["value"] > 0

    zero_csv = str(tmp_path / "zero.csv")
    spec = parse_config(FAST_CONFIG).grid()
    vb.grid.write_csv(vb.from_callable(spec, lambda x: 0 * x), zero_csv)
    cfg2 = _write_cfg(tmp_path, FAST_CONFIG + f"\nmember = {zero_csv}\n")
    # duplicate member key would be a config error; rewrite instead
    cfg2 = _write_cfg(tmp_path, FAST_CONFIG.replace("member = gauss_w1",
                                                    f"member = {zero_csv}"))
    assert main(["norm", "--config", cfg2, "--out", out]) == 0
    doc = json.load(open(os.path.join(out, f"norm_zero.csv_direct.json")))
    assert doc["value"] == 0.0


def test_cli_exit_codes(tmp_path):
    bad = _write_cfg(tmp_path, "p = 0.5\npoints = 1024\n")
    assert main(["norm", "--config", bad, "--out", str(tmp_path / "o")]) == 2

    unparseable = _write_cfg(tmp_path, "points 1024\n")
    assert main(["norm", "--config", unparseable, "--out", str(tmp_path / "o")]) == 2

    # hypothesis violation: alpha+ = 2.5 >= S+1 = 2 for the local-means form
    viol = _write_cfg(tmp_path, FAST_CONFIG.replace("alpha = 1 / 2",
                                                    "alpha = 2.5\nkernel_S = 1"))
    assert main(["norm", "--config", viol, "--out", str(tmp_path / "o"),
                 "--form", "local_mean_double_prime"]) == 3


def test_cli_decompose_synthesize(tmp_path):
    cfg = _write_cfg(tmp_path, FAST_CONFIG)
    out = str(tmp_path / "out")
    assert main(["decompose", "--config", cfg, "--out", out]) == 0
    coeffs = os.path.join(out, "coeffs_gauss_w1.csv")
    assert os.path.exists(coeffs)
    assert main(["synthesize", "--config", cfg, "--out", out]) == 0
    doc = json.load(open(os.path.join(out, "synthesize_gauss_w1.json")))
    assert doc["l2_relative_residual"] <= 0.05


def test_cli_verify_single_and_report(tmp_path):
    cfg = _write_cfg(tmp_path, FAST_CONFIG)
    out = str(tmp_path / "out")
    code = main(["verify", "--config", cfg, "--out", out, "--check", "hardy"])
    assert code == 0
    assert os.path.exists(os.path.join(out, "check_hardy.json"))
    assert os.path.exists(os.path.join(out, "checks.csv"))
    assert main(["report", "--config", cfg, "--out", out]) == 0
