"""Exact rational bookkeeping for corner parameters and the critical-pair classification.

Every structural decision of the recursion (a vanishing pivot, an enlarged
system, a vanishing right-hand side) reduces to asking whether ``k * rho`` or
``k * rho - 1/2`` is an integer, where ``rho = (omega / pi) * (alpha + 1)``.
Those questions are answered here with :class:`fractions.Fraction` and never
with floating point.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Union

from .errors import ClosedFormBranchError, ConfigError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


@dataclass(frozen=True)
class DeclaredIrrational:
    """A real number the caller asserts is irrational."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise ConfigError(f"declared irrational must be finite, got {self.value!r}")


class _IrrationalMarker:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "IRRATIONAL"

    def __reduce__(self):
        return (_IrrationalMarker, ())


IRRATIONAL = _IrrationalMarker()
RhoValue = Union[Fraction, _IrrationalMarker]


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or an integer into a Fraction; decimals are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ConfigError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str) and _RATIONAL_RE.match(text):
        try:
            return Fraction(text.replace(" ", ""))
        except ZeroDivisionError as exc:
            raise ConfigError(f"zero denominator in {text!r}") from exc
    raise ConfigError(f"not an exact rational 'p/q': {text!r}")


def suggest_rational(x: float, max_den: int = 1000) -> Fraction:
    """Closest fraction with denominator at most ``max_den``.

    Convenience only; nothing in the package feeds its result into a
    classification without the caller asking for it.
    """
    return Fraction(x).limit_denominator(max_den)


class Approach(str, Enum):
    DN = "dn"
    DD = "dd"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class AngleSpec:
    """Inner corner angle, either ``omega/pi`` as a fraction or a declared-irrational ``omega``."""

    omega_over_pi: Fraction | None = None
    omega_value: float | None = None

    def __post_init__(self):
        if (self.omega_over_pi is None) == (self.omega_value is None):
            raise ConfigError("AngleSpec needs exactly one of omega_over_pi / omega_value")
        if self.omega_over_pi is not None:
            object.__setattr__(self, "omega_over_pi", parse_rational(self.omega_over_pi))
            if not 0 < self.omega_over_pi <= 2:
                raise ConfigError(f"omega/pi must lie in (0, 2], got {self.omega_over_pi}")
        else:
            if not 0 < self.omega_value <= 2 * math.pi:
                raise ConfigError(f"omega must lie in (0, 2*pi], got {self.omega_value}")

    @classmethod
    def exact(cls, omega_over_pi) -> "AngleSpec":
        return cls(omega_over_pi=parse_rational(omega_over_pi))

    @classmethod
    def irrational(cls, omega: float) -> "AngleSpec":
        return cls(omega_value=float(omega))

    @property
    def is_exact(self) -> bool:
        return self.omega_over_pi is not None

    @property
    def omega(self) -> float:
        if self.omega_over_pi is not None:
            return math.pi * float(self.omega_over_pi)
        return self.omega_value


@dataclass(frozen=True)
class CornerConfig:
    """Parameters of the Dirichlet-Robin corner problem.

    Parameters
    ----------
    angle : AngleSpec
    alpha : Fraction or DeclaredIrrational
        Exponent of the Robin coefficient ``gamma * r**alpha``.
    gamma : float
        Positive Robin coefficient.
    approach : Approach
        Recursion used for the shadow terms.
    rho_override : Fraction, optional
        Exact value of ``(omega/pi)*(alpha+1)`` when both inputs are declared
        irrational yet their product is known to be rational.
    """

    angle: AngleSpec
    alpha: Fraction | DeclaredIrrational
    gamma: float = 1.0
    approach: Approach = Approach.DN
    rho_override: Fraction | None = field(default=None)

    def __post_init__(self):
        if isinstance(self.alpha, DeclaredIrrational):
            pass
        elif isinstance(self.alpha, float):
            raise ConfigError("float alpha must be wrapped in DeclaredIrrational")
        else:
            object.__setattr__(self, "alpha", parse_rational(self.alpha))
        gamma = float(self.gamma)
        if not (gamma > 0 and math.isfinite(gamma)):
            raise ConfigError(f"gamma must be positive and finite, got {self.gamma!r}")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "approach", Approach(self.approach))
        if self.approach is Approach.CLOSED_FORM and self.alpha != Fraction(-1):
            raise ConfigError("closed-form approach requires alpha == -1 exactly")
        if self.rho_override is not None:
            ro = parse_rational(self.rho_override)
            object.__setattr__(self, "rho_override", ro)
            if self.angle.is_exact and self.alpha_exact is not None:
                raise ConfigError("rho_override is only meaningful with irrational inputs")
            approx = self.angle.omega / math.pi * (self.alpha_value + 1.0)
            if abs(approx - float(ro)) > 1e-9 * max(1.0, abs(approx)):
                raise ConfigError(f"rho_override {ro} disagrees with omega, alpha ({approx!r})")

    @classmethod
    def from_values(cls, *, omega_over_pi=None, omega=None, alpha, gamma=1.0,
                    approach=Approach.DN, alpha_irrational=False, rho=None) -> "CornerConfig":
        """Build a config from plain values: rationals as Fraction/int/'p/q', irrationals as floats."""
        if (omega_over_pi is None) == (omega is None):
            raise ConfigError("give exactly one of omega_over_pi / omega")
        angle = AngleSpec.exact(omega_over_pi) if omega is None else AngleSpec.irrational(omega)
        a = DeclaredIrrational(float(alpha)) if alpha_irrational else parse_rational(alpha)
        return cls(angle, a, gamma, Approach(approach), rho)

    @property
    def omega(self) -> float:
        return self.angle.omega

    @property
    def alpha_exact(self) -> Fraction | None:
        return None if isinstance(self.alpha, DeclaredIrrational) else self.alpha

    @property
    def alpha_value(self) -> float:
        if isinstance(self.alpha, DeclaredIrrational):
            return self.alpha.value
        return float(self.alpha)

    @property
    def omega_alpha1(self) -> float:
        """``omega * (alpha + 1)`` in floating point."""
        r = rho(self)
        if r is not IRRATIONAL:
            return math.pi * float(r)
        return self.omega * (self.alpha_value + 1.0)

    @property
    def alpha_is_minus_one(self) -> bool:
        return self.alpha_exact == -1

    def alpha_sign(self) -> int:
        """Sign of ``alpha + 1``."""
        if self.alpha_exact is not None:
            d = self.alpha_exact + 1
            return (d > 0) - (d < 0)
        d = self.alpha_value + 1.0
        return (d > 0) - (d < 0)

    def with_approach(self, approach) -> "CornerConfig":
        return CornerConfig(self.angle, self.alpha, self.gamma, Approach(approach), self.rho_override)


def rho(config: CornerConfig) -> RhoValue:
    """``(omega/pi) * (alpha + 1)`` exactly, or ``IRRATIONAL``."""
    if config.rho_override is not None:
        return config.rho_override
    a = config.alpha_exact
    if a is not None and a == -1:
        return Fraction(0)
    if a is None or not config.angle.is_exact:
        return IRRATIONAL
    return config.angle.omega_over_pi * (a + 1)


@dataclass(frozen=True)
class FractionForm:
    """Which of the two reduced shapes a nonzero rational takes.

    ``odd_over_even``: ``+-(2p-1)/(2q)``, sign in ``negative``.
    ``any_over_odd``: ``p/(2q-1)`` with the sign carried on ``p``.
    ``irrational``: no fraction at all.
    """

    kind: str
    p: int = 0
    q: int = 0
    negative: bool = False

    def value(self) -> Fraction:
        if self.kind == "odd_over_even":
            v = Fraction(2 * self.p - 1, 2 * self.q)
            return -v if self.negative else v
        if self.kind == "any_over_odd":
            return Fraction(self.p, 2 * self.q - 1)
        raise ValueError("irrational form has no value")

    def __str__(self):
        if self.kind == "odd_over_even":
            s = "-" if self.negative else ""
            return f"{s}(2p-1)/(2q) with p={self.p}, q={self.q}"
        if self.kind == "any_over_odd":
            s = "-" if self.p < 0 else ""
            return f"{s}p/(2q-1) with p={abs(self.p)}, q={self.q}"
        return "irrational"


IRRATIONAL_FORM = FractionForm("irrational")


def fraction_form(r: RhoValue) -> FractionForm:
    if r is IRRATIONAL:
        return IRRATIONAL_FORM
    r = Fraction(r)
    if r == 0:
        raise ClosedFormBranchError("rho = 0 (alpha = -1) has no fraction form; use the closed form")
    num, den = r.numerator, r.denominator
    if den % 2 == 0:
        return FractionForm("odd_over_even", (abs(num) + 1) // 2, den // 2, num < 0)
    return FractionForm("any_over_odd", num, (den + 1) // 2, num < 0)


def is_sin_zero(k: int, r: RhoValue) -> bool:
    """Whether ``sin(k * omega * (alpha + 1))`` vanishes, i.e. ``k * rho`` is an integer."""
    if r is IRRATIONAL:
        return False
    return (k * Fraction(r)).denominator == 1


def is_cos_zero(k: int, r: RhoValue) -> bool:
    """Whether ``cos(k * omega * (alpha + 1))`` vanishes, i.e. ``k * rho - 1/2`` is an integer."""
    if r is IRRATIONAL:
        return False
    return (k * Fraction(r) - Fraction(1, 2)).denominator == 1


def is_lambda_shift_zero(j: int, k: int, r: RhoValue, approach) -> bool:
    """Whether the exponent of the k-th shadow term is exactly zero.

    D-N: ``(2j-1)/2 + k*rho == 0``; D-D: ``j - k*rho == 0`` (both scaled by omega/pi).
    """
    if r is IRRATIONAL:
        return False
    approach = Approach(approach)
    if approach is Approach.DN:
        return Fraction(2 * j - 1, 2) + k * Fraction(r) == 0
    if approach is Approach.DD:
        return j - k * Fraction(r) == 0
    raise ConfigError("lambda shift is defined only for the D-N and D-D recursions")


_QUARTER_TURNS = ((0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0))


def trig_pi(t: Fraction) -> tuple[float, float]:
    """``(sin(pi*t), cos(pi*t))`` for rational ``t``; exact at multiples of 1/2."""
    t = Fraction(t) % 2
    twice = 2 * t
    if twice.denominator == 1:
        return _QUARTER_TURNS[int(twice)]
    if t > 1:
        t -= 2
    x = math.pi * float(t)
    return math.sin(x), math.cos(x)


def rotate_quarter(s: float, c: float, quarter: int) -> tuple[float, float]:
    """sin/cos of ``x + quarter*pi/2`` given ``s = sin x`` and ``c = cos x``."""
    n = quarter % 4
    if n == 0:
        return s, c
    if n == 1:
        return c, -s
    if n == 2:
        return -s, -c
    return -c, s


def phase_trig(k: int, quarter: int, config: CornerConfig) -> tuple[float, float]:
    """sin/cos of ``k*omega*(alpha+1) + quarter*pi/2``, exact at structural zeros."""
    r = rho(config)
    if r is not IRRATIONAL:
        return trig_pi(k * r + Fraction(quarter, 2))
    x = k * config.omega_alpha1
    return rotate_quarter(math.sin(x), math.cos(x), quarter)


def main_exponent_exact(j: int, config: CornerConfig, approach=None) -> Fraction | None:
    """Main-term exponent as a fraction, or None when omega is irrational."""
    approach = Approach(approach or config.approach)
    if not config.angle.is_exact:
        return None
    wp = config.angle.omega_over_pi
    if approach is Approach.DD:
        return Fraction(j) / wp
    return Fraction(2 * j - 1, 2) / wp


def exponent_exact(j: int, k: int, config: CornerConfig, approach=None) -> Fraction | None:
    """``lambda_j +- k(alpha+1)`` as a fraction when it is rational, else None."""
    approach = Approach(approach or config.approach)
    lam = main_exponent_exact(j, config, approach)
    if lam is None:
        return None
    if k == 0:
        return lam
    r = rho(config)
    if r is IRRATIONAL:
        return None
    shift = k * r / config.angle.omega_over_pi
    return lam - shift if approach is Approach.DD else lam + shift


def exponent(j: int, k: int, config: CornerConfig, approach=None) -> float:
    approach = Approach(approach or config.approach)
    ex = exponent_exact(j, k, config, approach)
    if ex is not None:
        return float(ex)
    w = config.omega
    lam = (j if approach is Approach.DD else (2 * j - 1) / 2) * math.pi / w
    shift = k * (config.alpha_value + 1.0)
    return lam - shift if approach is Approach.DD else lam + shift


# --- classification -----------------------------------------------------------

@dataclass(frozen=True)
class EnergyVerdict:
    kind: str  # "finite" | "infinite" | "finite_iff"
    j_threshold: int | None = None
    strict: bool = False

    def is_finite(self, j: int) -> bool:
        if self.kind == "finite":
            return True
        if self.kind == "infinite":
            return False
        return j > self.j_threshold if self.strict else j >= self.j_threshold

    def __str__(self):
        if self.kind == "finite_iff":
            op = ">" if self.strict else ">="
            return f"finite iff j {op} {self.j_threshold}"
        return self.kind


FINITE = EnergyVerdict("finite")
INFINITE = EnergyVerdict("infinite")


@dataclass(frozen=True)
class Classification:
    """Critical-pair verdict for one ``(config, j)``."""

    series_kind: str  # "finite_exact" | "infinite_no_log" | "infinite_with_log"
    converges_near_zero: bool
    energy: EnergyVerdict
    S: int | None = None
    log_period: int | None = None
    log_extra_step: int | None = None
    rho: RhoValue = IRRATIONAL
    form: FractionForm = IRRATIONAL_FORM
    j: int = 1

    @property
    def energy_finite(self) -> bool:
        return self.energy.is_finite(self.j)

    def log_steps(self, max_k: int) -> list[int]:
        """Steps ``k <= max_k`` at which the log degree grows by one."""
        if self.series_kind != "infinite_with_log":
            return []
        steps = {k for k in range(1, max_k + 1) if k % self.log_period == 0}
        if self.log_extra_step is not None and self.log_extra_step <= max_k:
            steps.add(self.log_extra_step)
        return sorted(steps)

    def describe(self) -> str:
        if self.series_kind == "finite_exact":
            kind = f"apparent critical, S={self.S}, no log terms"
        elif self.series_kind == "infinite_no_log":
            kind = "infinite series, no log terms"
        else:
            extra = f" plus k={self.log_extra_step}" if self.log_extra_step else ""
            kind = (f"actual critical, infinite series with log terms "
                    f"(log degree grows at multiples of {self.log_period}{extra})")
        conv = "converges" if self.converges_near_zero else "diverges"
        energy = "energy finite" if self.energy_finite else "energy infinite"
        return f"{kind}, {conv}, {energy}"


def classify(config: CornerConfig, j: int) -> Classification:
    """Series kind, log schedule, convergence and energy for the j-th eigensolution."""
    if j < 1:
        raise ConfigError(f"j must be a positive integer, got {j}")
    if config.approach is Approach.CLOSED_FORM or config.alpha_is_minus_one:
        raise ClosedFormBranchError("alpha = -1: use the closed-form branch (lambda_robin)")
    sign = config.alpha_sign()
    if sign == 0:
        raise ClosedFormBranchError("alpha = -1: use the closed-form branch (lambda_robin)")
    dn = config.approach is Approach.DN
    above = sign > 0
    # D-N converges for alpha > -1, D-D for alpha < -1
    favourable = dn == above
    r = rho(config)
    base = dict(rho=r, j=j)

    if r is IRRATIONAL:
        return Classification("infinite_no_log", favourable, FINITE if favourable else INFINITE,
                              form=IRRATIONAL_FORM, **base)

    form = fraction_form(r)
    if (r > 0) != above:
        raise ConfigError(f"rho={r} has the wrong sign for alpha {'>' if above else '<'} -1")
    if form.kind == "any_over_odd":
        return Classification("infinite_with_log", favourable, FINITE if favourable else INFINITE,
                              log_period=2 * form.q - 1, form=form, **base)

    p, q = form.p, form.q
    if dn and not above and j == p:
        return Classification("infinite_with_log", False, INFINITE, log_period=2 * q,
                              log_extra_step=q, form=form, **base)
    if favourable:
        energy = FINITE
    elif dn:
        energy = EnergyVerdict("finite_iff", p, strict=True)
    else:
        energy = EnergyVerdict("finite_iff", p, strict=False)
    return Classification("finite_exact", True, energy, S=q, form=form, **base)
