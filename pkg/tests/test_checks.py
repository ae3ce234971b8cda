import numpy as np
import pytest

import vbesov.checks as C
from vbesov.checks import CheckReport, run_checks
from vbesov.errors import ParameterError


@pytest.fixture(scope="module")
def bank(bank4k):
    return bank4k


LEMMA_IDS = sorted(C.LEMMA_CHECKS)


@pytest.mark.parametrize("check_id", LEMMA_IDS)
def test_lemma_checks_pass(bank, check_id):
    report = C.CHECKS[check_id](bank=bank)
    assert isinstance(report, CheckReport)
    assert report.passed, (report.constants, report.details)
    assert not report.violations
    for v in report.constants.values():
        assert np.isfinite(v)


def test_pointwise_shift_divergence_without_hypothesis(bank):
    r = C.check_pointwise_shift(bank=bank)
    assert r.details["R0_growth_across_ladder"] > 10


def test_kernel_decay_no_gain_without_moments(bank):
    r = C.check_kernel_decay(bank=bank)
    assert abs(r.details["slopes"]["M=-1"]) <= 0.2
    assert r.details["slopes"]["M=1"] >= 1.8


def test_hardy_impulse_closed_form(bank):
    r = C.check_hardy(bank=bank)
    assert r.constants["discrete_impulse_geometric"] == pytest.approx(3.0, abs=1e-9)


def test_key_modular_jensen(bank):
    r = C.check_key_modular(bank=bank)
    assert r.constants["grid_p_const2_w1"] <= 1.0 + 1e-6


def test_reports_deterministic(bank):
    a = C.check_hardy(bank=bank, seed=123).to_dict()
    b = C.check_hardy(bank=bank, seed=123).to_dict()
    a.pop("runtime_s"), b.pop("runtime_s")
    assert a == b


def test_run_checks_rejects_unknown(bank):
    with pytest.raises(ParameterError):
        run_checks(["no-such-check"], bank=bank)


def test_run_checks_subset_sorted(bank):
    reports = run_checks(["hardy", "eta-algebra"], bank=bank)
    assert [r.check_id for r in reports] == ["eta-algebra", "hardy"]


def test_embeddings_pass(bank):
    r = C.check_embeddings(bank=bank)
    assert r.passed, r.constants
    assert r.constants["q_monotone_profile_level"] <= 1.1
    assert np.isfinite(r.constants["sobolev_line_p2_to_p4"])
