import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shockline import predict
from shockline.damping import DampingProfile
from shockline.predict import (
    Global,
    HypothesisViolation,
    Inconclusive,
    Shock,
    ShockInterval,
    asymptote_zero_time,
    classify_min_slope,
    mu_asymptote,
    shift_analysis,
    t_star_interval,
)


def test_t_star_interval_undamped_degenerate():
    # delta=1/4, m=-1: exponent delta^{-1/2}/(2|m|) = 2/2 = 1, so T* = e - 1
    iv = t_star_interval(0.25, -1.0, DampingProfile(a=0.0, lam=2.0))
    assert iv.lower == pytest.approx(math.e - 1.0, rel=1e-12)
    assert iv.upper == pytest.approx(iv.lower, rel=1e-15)


def test_t_star_interval_damped_bounds():
    # exponent C with C in [1/e, e]
    iv = t_star_interval(0.25, -1.0, DampingProfile(a=1.0, lam=2.0))
    assert iv.lower == pytest.approx(math.exp(math.exp(-1.0)) - 1.0, rel=1e-12)
    assert iv.upper == pytest.approx(math.exp(math.e) - 1.0, rel=1e-12)


def test_t_star_interval_steeper_seed_halves_exponent():
    iv = t_star_interval(0.25, -2.0, DampingProfile(a=0.0, lam=2.0))
    assert iv.lower == pytest.approx(math.exp(0.5) - 1.0, rel=1e-12)
    assert iv.upper == pytest.approx(math.exp(0.5) - 1.0, rel=1e-12)


def test_t_star_interval_rejects_weak_seed():
    with pytest.raises(HypothesisViolation):
        t_star_interval(0.25, -0.5, DampingProfile(a=0.0, lam=2.0))


def test_t_star_interval_rejects_bad_delta():
    with pytest.raises(HypothesisViolation):
        t_star_interval(1.5, -1.0, DampingProfile(a=0.0, lam=2.0))


def test_classify_compressive():
    res = classify_min_slope(-1.5, delta=0.25, p=DampingProfile(a=0.0, lam=2.0))
    assert isinstance(res, ShockInterval)


def test_classify_global():
    assert isinstance(classify_min_slope(0.7), Global)


def test_classify_silent_band():
    assert isinstance(classify_min_slope(-0.5), Inconclusive)


@settings(max_examples=200, deadline=None)
@given(m=st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_classify_total(m):
    res = classify_min_slope(m)
    assert isinstance(res, (ShockInterval, Global, Inconclusive))


def test_mu_asymptote_initial_value():
    assert mu_asymptote(0.0, 0.25, -1.0, 1.0) == 1.0


def test_mu_asymptote_crosses_zero_before_e_squared():
    val = mu_asymptote(math.exp(2.0) - 1.0, 0.25, -1.0, 1.0)
    assert val == pytest.approx(-1.0, rel=1e-12)
    t_zero = asymptote_zero_time(0.25, -1.0, 1.0)
    assert t_zero == pytest.approx(math.e - 1.0, rel=1e-12)


def test_asymptote_zero_matches_interval_formula():
    # same closed form: undamped zero crossing == degenerate interval end
    for delta, m in ((0.25, -1.0), (0.1, -2.0), (0.5, -1.3)):
        iv = t_star_interval(delta, m, DampingProfile(a=0.0, lam=2.0))
        assert asymptote_zero_time(delta, m, 1.0) == pytest.approx(iv.lower, abs=1e-12, rel=1e-12)


def test_interval_nesting_log_symmetric():
    base = t_star_interval(0.25, -1.0, DampingProfile(a=0.0, lam=2.0))
    mid = math.log1p(base.lower)
    for a in (0.5, 1.0, 2.0):
        iv = t_star_interval(0.25, -1.0, DampingProfile(a=a, lam=2.0))
        lo_ratio = math.log1p(iv.lower) / mid
        hi_ratio = math.log1p(iv.upper) / mid
        assert lo_ratio * hi_ratio == pytest.approx(1.0, rel=1e-12)
        assert lo_ratio < 1.0 < hi_ratio


def test_interval_widens_with_strength():
    widths = []
    for a in (0.0, 0.5, 1.0, 2.0):
        iv = t_star_interval(0.25, -1.0, DampingProfile(a=a, lam=2.0))
        widths.append(math.log1p(iv.upper) - math.log1p(iv.lower))
    assert all(x < y for x, y in zip(widths, widths[1:]))


def test_shift_analysis_single_cell():
    table = shift_analysis([0.5], [2.0], 0.25, -1.0)
    assert table.monotone_in_a and table.monotone_in_lam
    assert len(table.rows) == 1


def test_shift_analysis_increasing_in_a():
    table = shift_analysis([-0.5, 0.0, 0.5, 1.0], [2.0], 0.25, -1.0)
    assert table.monotone_in_a
    mids = [r["t_central"] for r in table.rows]
    assert all(x < y for x, y in zip(mids, mids[1:]))


def test_shift_analysis_decreasing_in_lam():
    table = shift_analysis([1.0], [1.6, 2.0, 3.0, 5.0], 0.25, -1.0)
    assert table.monotone_in_lam
    mids = [r["t_central"] for r in table.rows]
    assert all(x > y for x, y in zip(mids, mids[1:]))


def test_shift_analysis_rejects_weak_decay():
    with pytest.raises(HypothesisViolation):
        shift_analysis([0.0], [0.9], 0.25, -1.0)


def test_shift_table_csv_shape():
    table = shift_analysis([0.0, 1.0], [2.0, 3.0], 0.25, -1.0)
    rows = table.to_csv_rows()
    assert rows[0] == ["a", "lambda", "t_lower", "t_upper", "t_numerical", "monotone_ok"]
    assert len(rows) == 5


def test_chaplygin_flag_polytropic():
    class Eos:
        gamma = 1.4

    assert predict.chaplygin_flag(Eos()) is False


def test_chaplygin_flag_forced_zero():
    assert predict.chaplygin_flag(0.0) is True
    res = predict.apply_chaplygin_override(Shock(t_star=1.0), 0.0)
    assert isinstance(res, Global)


def test_chaplygin_flag_gamma_limit():
    class Eos:
        gamma = -1.0

    assert predict.chaplygin_flag(Eos()) is True


def test_chaplygin_override_keeps_nondegenerate():
    class Eos:
        gamma = 1.4

    shock = Shock(t_star=2.0)
    assert predict.apply_chaplygin_override(shock, Eos()) is shock
