import math

import pytest

from robincorner import DeclaredIrrational, build_series, crack_regime, traction
from robincorner.errors import ConfigError, SingularityError

from conftest import cfg


@pytest.mark.parametrize("alpha, regime, lam", [
    ("0", "classical", 0.5),
    ("1/2", "classical", 0.5),
    ("-3/2", "continuous", 1.0),
    ("-7/3", "continuous", 1.0),
])
def test_regimes(alpha, regime, lam):
    rep = crack_regime(alpha)
    assert rep.regime == regime and rep.lambda1 == lam and rep.residual is None


@pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0])
def test_weak_regime(gamma):
    rep = crack_regime(-1, gamma)
    assert rep.regime == "weak" and 0.5 < rep.lambda1 < 1.0
    assert rep.residual <= 1e-12
    assert "weak singularity" in rep.describe()


def test_weak_exponent_grows_with_stiffness():
    lams = [crack_regime(-1, g).lambda1 for g in (0.1, 1.0, 10.0, 100.0)]
    assert lams == sorted(lams)


def test_irrational_alpha():
    rep = crack_regime(DeclaredIrrational(math.sqrt(2) - 3), max_terms=5)
    assert rep.regime == "continuous" and rep.lambda1 == 1.0


@pytest.mark.parametrize("x", [1e-6, 0.01, 0.5, 3.0])
def test_continuous_traction_trace(x):
    s = crack_regime("-3/2").series
    assert traction(s, x) == pytest.approx(1 - 1.5 * math.sqrt(x), abs=1e-12)
    assert traction(s, -x) == pytest.approx(1.0, abs=1e-12)


def test_tip_limit():
    s = crack_regime("-3/2").series
    assert traction(s, 0.0) == 1.0
    with pytest.raises(SingularityError):
        traction(crack_regime("0").series, 0.0)


def test_classical_traction_blows_up_like_inverse_sqrt():
    s = crack_regime("0").series
    ratio = traction(s, 1e-8) / traction(s, 1e-6)
    assert ratio == pytest.approx(10.0, rel=1e-3)


def test_traction_needs_crack_angle():
    with pytest.raises(ConfigError):
        traction(build_series(1, cfg("1/2", "3/2")), 0.5)
