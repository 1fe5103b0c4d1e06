"""Point evaluation, Robin-boundary errors and the alpha = -1 closed form."""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from . import exactq
from .errors import ConfigError, DomainError, SingularityError
from .exactq import Approach, AngleSpec, CornerConfig
from .series import AsymptoticSeries, SeriesStatus, ShadowTerm, boundary_profiles

REL_DENOM_FLOOR = 1e-300


@dataclass(frozen=True)
class PointEval:
    u: float
    u_r: float
    u_theta_over_r: float


def _radial(term: ShadowTerm, r):
    """``r**beta * log(r)**m`` for every m, shape ``(L+1,) + r.shape``."""
    r = np.asarray(r, dtype=float)
    logr = np.log(r)
    pw = r ** term.exponent
    return np.stack([pw * logr ** m for m in range(term.L + 1)])


def eval_term(term: ShadowTerm, r, theta):
    """Value of one term at ``(r, theta)``, ``r > 0``; broadcasts over arrays."""
    r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
    G, _ = term.profiles(theta)
    out = np.sum(_radial(term, r) * G, axis=0)
    return float(out) if out.ndim == 0 else out


def grad_term(term: ShadowTerm, r, theta):
    """``(du/dr, (1/r) du/dtheta)`` of one term."""
    r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
    G, dG = term.profiles(theta)
    beta, L = term.exponent, term.L
    # d/dr of r^b log^m r = r^(b-1) (b log^m + m log^(m-1)); regroup by log power
    H = beta * G
    H[:-1] += np.arange(1, L + 1).reshape((-1,) + (1,) * theta.ndim) * G[1:]
    rad = _radial(term, r) / r
    ur = np.sum(rad * H, axis=0)
    ut = np.sum(rad * dG, axis=0)
    if ur.ndim == 0:
        return float(ur), float(ut)
    return ur, ut


def eval_series(series: AsymptoticSeries, r: float, theta: float) -> PointEval:
    """Sum of all stored terms at one point.

    At ``r = 0`` the value is the limit: zero when every exponent is positive.
    Gradients there are zero when every exponent exceeds one and NaN when the
    value exists but the gradient limit does not.
    """
    if r < 0:
        raise DomainError(f"r must be non-negative, got {r}")
    if r == 0:
        b = series.min_exponent
        if b <= 0:
            raise SingularityError(f"singular at origin (min exponent {b})")
        g = 0.0 if b > 1 else math.nan
        return PointEval(0.0, g, g)
    u = ur = ut = 0.0
    for t in series.terms:
        u += eval_term(t, r, theta)
        a, b = grad_term(t, r, theta)
        ur += a
        ut += b
    return PointEval(u, ur, ut)


def term_robin_parts(series: AsymptoticSeries, r: float):
    """Per-term ``(1/r) du/dtheta`` and ``gamma r**alpha u`` at ``theta = omega``."""
    cfg = series.config
    w = cfg.omega
    flux = np.array([grad_term(t, r, w)[1] for t in series.terms])
    trace = np.array([cfg.gamma * r ** cfg.alpha_value * eval_term(t, r, w) for t in series.terms])
    return flux, trace


def robin_residual(series: AsymptoticSeries, r: float) -> float:
    """``(1/r) du/dtheta + gamma r**alpha u`` at ``theta = omega``, evaluated directly."""
    flux, trace = term_robin_parts(series, r)
    return float(np.sum(flux) + np.sum(trace))


def robin_residual_scale(series: AsymptoticSeries, r: float) -> float:
    """Rounding yardstick for :func:`robin_residual`.

    Each term is bounded before any trigonometric cancellation, so a trace
    that vanishes only structurally still counts with its full size.
    """
    cfg = series.config
    w = cfg.omega
    lr = abs(math.log(r))
    total = 0.0
    for t in series.terms:
        size = sum(abs(a) for a in t.coeffs) * ((1 + lr) * (1 + w)) ** t.L * r ** t.exponent
        total += size * ((1 + abs(t.exponent) + t.L) / r + cfg.gamma * r ** cfg.alpha_value)
    return total


def _check(series, r):
    if not series.terms:
        raise DomainError("empty series")
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")


def boundary_values(series: AsymptoticSeries, r: float):
    """Per-term ``u(r, omega)`` and ``(1/r) du/dtheta(r, omega)``, structural zeros exact."""
    cfg = series.config
    us, fs = [], []
    for t in series.terms:
        G, dG = boundary_profiles(t, series.j, cfg)
        rad = _radial(t, r)
        us.append(float(np.dot(rad, G)))
        fs.append(float(np.dot(rad, dG)) / r)
    return us, fs


def abs_error(series: AsymptoticSeries, r: float) -> float:
    """Robin residual of the truncated series via its one-term telescoped form."""
    _check(series, r)
    cfg = series.config
    if cfg.approach is Approach.CLOSED_FORM:
        return robin_residual(series, r)
    us, fs = boundary_values(series, r)
    if cfg.approach is Approach.DN:
        return cfg.gamma * r ** cfg.alpha_value * us[-1]
    return fs[-1]


def rel_error(series: AsymptoticSeries, r: float) -> float:
    """Last-term boundary contribution over the full-sum contribution, negated."""
    _check(series, r)
    cfg = series.config
    if cfg.approach is Approach.CLOSED_FORM:
        return robin_residual(series, r) / robin_residual_scale(series, r)
    us, fs = boundary_values(series, r)
    parts = us if cfg.approach is Approach.DN else fs
    denom = math.fsum(parts)
    if abs(denom) < REL_DENOM_FLOOR:
        raise DomainError(f"relative error undefined at r={r}: boundary value vanishes")
    # adding zero turns a signed -0.0 into 0.0
    return -parts[-1] / denom + 0.0


# --- alpha = -1 -----------------------------------------------------------------

@dataclass(frozen=True)
class RobinEigenvalue:
    j: int
    lam: float
    gamma: float
    omega: float
    residual: float

    @property
    def bracket(self) -> tuple[float, float]:
        return (2 * self.j - 1) * math.pi / (2 * self.omega), self.j * math.pi / self.omega


def robin_root_function(lam: float, omega: float, gamma: float) -> float:
    return gamma * math.sin(lam * omega) + lam * math.cos(lam * omega)


def lambda_robin(j: int, omega: float, gamma: float) -> RobinEigenvalue:
    """j-th positive root of ``gamma sin(lam omega) + lam cos(lam omega) = 0``."""
    if j < 1:
        raise ConfigError(f"j must be positive, got {j}")
    if not 0 < omega <= 2 * math.pi:
        raise ConfigError(f"omega must lie in (0, 2*pi], got {omega}")
    if not gamma > 0:
        raise ConfigError(f"gamma must be positive, got {gamma}")
    lo, hi = (2 * j - 1) * math.pi / (2 * omega), j * math.pi / omega
    f = lambda x: robin_root_function(x, omega, gamma)
    lam = bisect(f, lo, hi, xtol=1e-14, maxiter=200)
    df = (gamma * omega + 1) * math.cos(lam * omega) - lam * omega * math.sin(lam * omega)
    if df != 0:
        polished = lam - f(lam) / df
        if lo < polished < hi and abs(f(polished)) <= abs(f(lam)):
            lam = polished
    return RobinEigenvalue(j, lam, gamma, omega, abs(f(lam)))


def closed_form_series(j: int, omega, gamma: float) -> AsymptoticSeries:
    """Single-term exact eigensolution ``r**lam sin(lam theta)`` for ``alpha = -1``.

    ``omega`` is an :class:`AngleSpec` or a float in radians (then treated as irrational).
    """
    angle = omega if isinstance(omega, AngleSpec) else AngleSpec.irrational(float(omega))
    cfg = CornerConfig(angle, Fraction(-1), gamma, Approach.CLOSED_FORM)
    root = lambda_robin(j, angle.omega, cfg.gamma)
    term = ShadowTerm(0, root.lam, 0, (1.0,), Approach.CLOSED_FORM)
    return AsymptoticSeries(j, cfg, (term,), SeriesStatus.closed_form(root.lam))


# --- finite-difference Laplacian ------------------------------------------------

def _terms_of(obj):
    if isinstance(obj, ShadowTerm):
        return (obj,)
    if isinstance(obj, AsymptoticSeries):
        return obj.terms
    return tuple(obj)


def _eval_terms(terms, r, theta):
    return sum(eval_term(t, r, theta) for t in terms)


def _envelope(terms, r, theta):
    # size of the individual second-derivative pieces, times r**2
    lr = abs(math.log(r))
    return sum(r ** t.exponent * sum(abs(a) for a in t.coeffs) * (1 + lr) ** t.L * (1 + theta) ** t.L
               * (1 + abs(t.exponent) + t.L) ** 2 for t in terms)


def harmonicity_residuals(obj, points, h: float = 1e-4) -> np.ndarray:
    """Scaled five-point Laplacian ``|Lap_h u| r**2 / envelope`` at each ``(r, theta)``."""
    terms = _terms_of(obj)
    out = []
    offsets = ((h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h))
    for r, th in points:
        x, y = r * math.cos(th), r * math.sin(th)
        rs, ts = [], []
        for dx, dy in offsets:
            xp, yp = x + dx, y + dy
            rs.append(math.hypot(xp, yp))
            # unwrap the angle relative to the centre so omega > pi works
            ts.append(th + math.atan2(x * yp - y * xp, x * xp + y * yp))
        vals = _eval_terms(terms, np.array(rs), np.array(ts))
        centre = _eval_terms(terms, r, th)
        lap = (np.sum(vals) - 4 * centre) / h ** 2
        scale = _envelope(terms, r, th)
        out.append(0.0 if scale == 0 else abs(lap) * r ** 2 / scale)
    return np.array(out)


def harmonicity_check(obj, points, h: float = 1e-4) -> float:
    """Largest scaled residual of the five-point Laplacian over ``points``."""
    res = harmonicity_residuals(obj, points, h)
    return float(res.max(initial=0.0))
