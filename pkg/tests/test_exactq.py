import math
import pickle
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from robincorner import exactq
from robincorner.errors import ClosedFormBranchError, ConfigError
from robincorner.exactq import (IRRATIONAL, AngleSpec, Approach, CornerConfig, DeclaredIrrational,
                                classify, fraction_form, is_cos_zero, is_lambda_shift_zero,
                                is_sin_zero, rho)

from conftest import cfg, table_verdict

F = Fraction


@pytest.mark.parametrize("w, a, expected", [
    ("1/2", "3/2", F(5, 4)),
    ("1", "-1", F(0)),
    ("3/2", "-3/2", F(-3, 4)),
    ("2/3", "2", F(2)),
])
def test_rho_exact(w, a, expected):
    assert rho(cfg(w, a)) == expected


def test_rho_irrational_inputs():
    c = CornerConfig.from_values(omega=1.0, alpha=0)
    assert rho(c) is IRRATIONAL
    c = CornerConfig.from_values(omega_over_pi="1/2", alpha=math.sqrt(2), alpha_irrational=True)
    assert rho(c) is IRRATIONAL


def test_rho_override_for_irrational_product():
    w = math.pi / math.sqrt(2)
    a = math.sqrt(2) * 0.75 - 1  # (w/pi)(a+1) = 3/4
    c = CornerConfig.from_values(omega=w, alpha=a, alpha_irrational=True, rho="3/4")
    assert rho(c) == F(3, 4)
    with pytest.raises(ConfigError):
        CornerConfig.from_values(omega=w, alpha=a, alpha_irrational=True, rho="1/2")


def test_irrational_marker_survives_pickle():
    assert pickle.loads(pickle.dumps(IRRATIONAL)) is IRRATIONAL


@pytest.mark.parametrize("r, kind, p, q, neg", [
    (F(5, 4), "odd_over_even", 3, 2, False),
    (F(2), "any_over_odd", 2, 1, False),
    (F(-3, 4), "odd_over_even", 2, 2, True),
    (F(-2, 3), "any_over_odd", -2, 2, True),
    (F(1, 2), "odd_over_even", 1, 1, False),
])
def test_fraction_form(r, kind, p, q, neg):
    ff = fraction_form(r)
    assert (ff.kind, ff.p, ff.q, ff.negative) == (kind, p, q, neg)
    assert ff.value() == r


def test_fraction_form_zero_is_closed_form_branch():
    with pytest.raises(ClosedFormBranchError):
        fraction_form(F(0))


@given(st.fractions().filter(lambda x: x != 0))
def test_fraction_form_roundtrip(r):
    assert fraction_form(r).value() == r


@pytest.mark.parametrize("k, r, expected", [
    (1, F(5, 4), False),
    (2, F(-1, 2), True),
    (3, F(-2, 3), True),
    (4, F(5, 4), True),
    (7, IRRATIONAL, False),
])
def test_is_sin_zero(k, r, expected):
    assert is_sin_zero(k, r) is expected


@pytest.mark.parametrize("k, r, expected", [
    (1, F(1, 2), True),
    (1, F(5, 4), False),
    # 2*(-3/4) - 1/2 = -2 is an integer
    (2, F(-3, 4), True),
    (0, F(5, 4), False),
    (3, IRRATIONAL, False),
])
def test_is_cos_zero(k, r, expected):
    assert is_cos_zero(k, r) is expected


@pytest.mark.parametrize("j, k, r, approach, expected", [
    (2, 2, F(-3, 4), "dn", True),
    (1, 1, F(5, 4), "dn", False),
    (1, 2, F(1, 2), "dd", True),
    (1, 1, IRRATIONAL, "dd", False),
])
def test_is_lambda_shift_zero(j, k, r, approach, expected):
    assert is_lambda_shift_zero(j, k, r, approach) is expected


def test_trig_is_exact_at_quarter_turns():
    for num in range(-8, 9):
        s, c = exactq.trig_pi(F(num, 2))
        assert s in (0.0, 1.0, -1.0) and c in (0.0, 1.0, -1.0)
    s, c = exactq.trig_pi(F(1, 3))
    assert s == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    assert c == pytest.approx(0.5, abs=1e-15)


def test_trig_large_k_has_no_drift():
    c = cfg("3/7", "5/11")
    s, co = exactq.phase_trig(10_007, 3, c)
    x = math.pi * float((10_007 * rho(c) + F(3, 2)) % 2)
    assert s == pytest.approx(math.sin(x), abs=1e-15)
    assert co == pytest.approx(math.cos(x), abs=1e-15)


@pytest.mark.parametrize("w, a, approach, j, k, expected", [
    ("1/2", "3/2", "dn", 1, 0, F(1)),
    ("1/2", "3/2", "dn", 1, 2, F(6)),
    ("3/2", "-3/2", "dn", 3, 0, F(5, 3)),
    ("1", "-5/3", "dd", 1, 3, F(3)),
    ("1/2", "1/2", "dd", 2, 1, F(5, 2)),
])
def test_exponents_exact(w, a, approach, j, k, expected):
    c = cfg(w, a, approach)
    assert exactq.exponent_exact(j, k, c) == expected
    assert exactq.exponent(j, k, c) == float(expected)


# --- classification -----------------------------------------------------------

def test_classify_dn_apparent_above():
    c = classify(cfg("1/2", "3/2"), 1)
    assert c.series_kind == "finite_exact" and c.S == 2
    assert c.converges_near_zero and c.energy_finite
    assert c.describe() == "apparent critical, S=2, no log terms, converges, energy finite"


def test_classify_dn_below_rows():
    c3 = classify(cfg("3/2", "-3/2"), 3)
    assert c3.series_kind == "finite_exact" and c3.S == 2 and c3.energy_finite
    c1 = classify(cfg("3/2", "-3/2"), 1)
    assert c1.series_kind == "finite_exact" and not c1.energy_finite
    c2 = classify(cfg("3/2", "-3/2"), 2)
    assert c2.series_kind == "infinite_with_log"
    assert (c2.log_period, c2.log_extra_step) == (4, 2)
    assert not c2.converges_near_zero and not c2.energy_finite


def test_classify_dd_actual_critical():
    c = classify(cfg("1", "-5/3", "dd"), 1)
    assert c.series_kind == "infinite_with_log" and c.log_period == 3
    assert c.converges_near_zero and c.energy_finite
    assert c.log_steps(10) == [3, 6, 9]


def test_classify_dd_above_energy():
    c = classify(cfg("1/2", "1/2", "dd"), 1)
    assert c.series_kind == "finite_exact" and c.S == 2
    assert not c.energy_finite
    assert classify(cfg("1/2", "1/2", "dd"), 2).energy_finite


def test_classify_irrational():
    c = classify(CornerConfig.from_values(omega=1.0, alpha=0), 1)
    assert c.series_kind == "infinite_no_log" and c.converges_near_zero
    c = classify(CornerConfig.from_values(omega=1.0, alpha=-2, approach="dn"), 1)
    assert not c.converges_near_zero and not c.energy_finite


def test_classify_alpha_minus_one_routes_to_closed_form():
    with pytest.raises(ClosedFormBranchError):
        classify(cfg("1", "-1"), 1)


@pytest.mark.parametrize("approach", ["dn", "dd"])
def test_classify_snapshot_grid(approach):
    seen = 0
    for num in range(-20, 21):
        for den in range(1, 21):
            r = F(num, den)
            if r == 0 or r.denominator != den:
                continue
            for j in (1, 2, 3, 7):
                c = classify(config_from(r, approach), j)
                kind, n, conv, energy = table_verdict(r, approach, j)
                got_n = c.S if c.series_kind == "finite_exact" else c.log_period
                assert (c.series_kind, got_n, c.converges_near_zero, c.energy_finite) == \
                    (kind, n, conv, energy), (r, approach, j)
                seen += 1
    assert seen > 1000


def config_from(r, approach):
    # omega = pi keeps alpha = rho - 1
    return CornerConfig(AngleSpec.exact(1), r - 1, 1.0, Approach(approach))


# --- number-theoretic properties (bounded; the full 50-grid lives in the acceptance suite)

@given(st.integers(1, 50), st.integers(1, 50), st.data())
def test_no_sine_zero_before_q(p, q, data):
    r = F(2 * p - 1, 2 * q)
    if r.denominator != 2 * q:
        return
    k = data.draw(st.integers(1, q))
    assert not is_sin_zero(k, r)


@given(st.integers(1, 50), st.integers(1, 50))
def test_shift_zero_excludes_sine_and_previous_cosine_zero(j, k):
    r = F(-(2 * j - 1), 2 * k)
    assert is_lambda_shift_zero(j, k, r, "dn")
    assert not is_sin_zero(k, r)
    assert not is_cos_zero(k - 1, r)


@given(st.fractions(), st.fractions(), st.fractions())
def test_fraction_arithmetic_is_exact(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert F(a.numerator, a.denominator) == a
    assert (a < b) + (a == b) + (a > b) == 1


# --- config validation --------------------------------------------------------

@pytest.mark.parametrize("kwargs", [
    dict(omega_over_pi="0", alpha="1"),
    dict(omega_over_pi="5/2", alpha="1"),
    dict(omega_over_pi="1", alpha="1", gamma=0),
    dict(omega_over_pi="1", alpha="1", gamma=-1),
    dict(omega_over_pi="1", alpha="0.5"),
    dict(omega_over_pi="1", alpha="1", approach="closed_form"),
    dict(omega=7.0, alpha="1"),
])
def test_invalid_configs(kwargs):
    with pytest.raises(ConfigError):
        CornerConfig.from_values(**kwargs)


def test_float_alpha_needs_declaration():
    with pytest.raises(ConfigError):
        CornerConfig(AngleSpec.exact(1), 0.5)


def test_suggest_rational_is_only_a_suggestion():
    assert exactq.suggest_rational(math.pi / 4 * 4 / math.pi * 0.75) == F(3, 4)
    assert exactq.suggest_rational(math.pi, 10) == F(22, 7)


def test_parse_rational():
    assert exactq.parse_rational("-3/2") == F(-3, 2)
    assert exactq.parse_rational(4) == F(4)
    for bad in ("1.5", "a/b", "1/0", True):
        with pytest.raises(ConfigError):
            exactq.parse_rational(bad)
