"""Antiplane bridged crack: the corner with ``omega = pi`` and spring stiffness ``gamma r**alpha``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError, SingularityError
from .evaluation import closed_form_series, grad_term, lambda_robin
from .exactq import AngleSpec, Approach, CornerConfig, DeclaredIrrational, parse_rational
from .series import AsymptoticSeries, build_series


@dataclass(frozen=True)
class CrackReport:
    alpha: Fraction | DeclaredIrrational
    gamma: float
    regime: str
    lambda1: float
    residual: float | None
    series: AsymptoticSeries

    def describe(self) -> str:
        if self.regime == "classical":
            return "classical sqrt(r) singularity, lambda1=1/2"
        if self.regime == "weak":
            return f"weak singularity, lambda1(gamma) in (1/2,1): lambda1={self.lambda1!r}"
        return "no singularity, lambda1=1, stresses continuous"


def crack_regime(alpha, gamma: float = 1.0, max_terms: int = 25) -> CrackReport:
    """Leading exponent and eigensolution at the tip of a bridged crack.

    ``alpha`` is a rational (``Fraction``, int or ``"p/q"``) or a
    :class:`DeclaredIrrational`.
    """
    if not isinstance(alpha, DeclaredIrrational):
        alpha = parse_rational(alpha)
    angle = AngleSpec.exact(1)
    if alpha == -1:
        series = closed_form_series(1, angle, gamma)
        root = lambda_robin(1, angle.omega, gamma)
        return CrackReport(alpha, gamma, "weak", root.lam, root.residual, series)
    cfg = CornerConfig(angle, alpha, gamma, Approach.DN)
    if cfg.alpha_sign() > 0:
        series = build_series(1, cfg, max_terms)
        return CrackReport(alpha, gamma, "classical", series.terms[0].exponent, None, series)
    series = build_series(1, cfg.with_approach(Approach.DD), max_terms)
    return CrackReport(alpha, gamma, "continuous", series.terms[0].exponent, None, series)


def traction(series: AsymptoticSeries, x: float) -> float:
    """Shear stress ``du/dy`` on the crack line ``y = 0`` (ahead of the tip for ``x > 0``)."""
    if series.config.omega != AngleSpec.exact(1).omega:
        raise ConfigError("traction trace is defined for the crack angle omega = pi")
    if x == 0:
        return _tip_traction(series)
    r = abs(x)
    theta = 0.0 if x > 0 else series.config.omega
    sign = 1.0 if x > 0 else -1.0
    return sign * sum(grad_term(t, r, theta)[1] for t in series.terms)


def _tip_traction(series: AsymptoticSeries) -> float:
    # only terms linear in r survive at the tip; anything below r**1 blows up
    total = 0.0
    for t in series.terms:
        if t.is_zero:
            continue
        beta = t.exponent_exact if t.exponent_exact is not None else t.exponent
        if beta < 1 or (beta == 1 and any(t.coeffs[1:])):
            raise SingularityError(f"traction is unbounded at the tip (term exponent {t.exponent})")
        if beta == 1:
            total += grad_term(t, 1.0, 0.0)[1]
    return total
