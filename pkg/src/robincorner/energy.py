"""Energy of a truncated eigensolution near the corner tip.

    E_R(u) = 1/2 * int_eps^R int_0^omega (r u_r^2 + u_theta^2 / r) dtheta dr
             + gamma * int_eps^R r**(alpha+1) u(r, omega)**2 dr

Every term is a sum of separable pieces ``r**b log(r)**n * f(theta)``, so the
radial integrals are done in closed form and the angular ones by Gauss-Legendre.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import exactq
from .errors import DivergentEnergyError, DomainError
from .exactq import FINITE, INFINITE, Approach, CornerConfig, EnergyVerdict
from .series import AsymptoticSeries, ShadowTerm, boundary_trace

GAUSS_NODES = 64


@dataclass(frozen=True)
class EnergyResult:
    value: float
    bulk: float
    boundary: float
    eps_used: float


def radial_antiderivative(a: float, n: int, r: float) -> float:
    """An antiderivative of ``r**a log(r)**n`` evaluated at ``r > 0``."""
    lr = math.log(r)
    if a == -1:
        return lr ** (n + 1) / (n + 1)
    s = a + 1
    total = 0.0
    for i in range(n + 1):
        total += (-1) ** i * math.perm(n, i) * lr ** (n - i) / s ** (i + 1)
    return r ** s * total


def radial_integral(a: float, n: int, eps: float, R: float) -> float:
    """``int_eps^R r**a log(r)**n dr``; ``eps = 0`` is the limit and needs ``a > -1``."""
    if eps == R:
        return 0.0
    upper = radial_antiderivative(a, n, R)
    if eps > 0:
        return upper - radial_antiderivative(a, n, eps)
    if a + 1 > 0:
        return upper
    raise DivergentEnergyError(f"int_0 r^{a} log^{n} r dr diverges; supply eps > 0")


@lru_cache(maxsize=32)
def _nodes(omega: float, n: int = GAUSS_NODES):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * omega * (x + 1), 0.5 * omega * w


def _radial_gradient_profile(term: ShadowTerm, G):
    """``H_m = beta G_m + (m+1) G_{m+1}``: the angular factor of ``r**(1-beta) u_r`` at log power m."""
    H = term.exponent * G
    H[:-1] += np.arange(1, term.L + 1)[:, None] * G[1:]
    return H


def _sort_key(t: ShadowTerm):
    return (t.k, t.exponent, t.L, t.coeffs)


def _exact_sum(*parts):
    if any(p is None for p in parts):
        return None
    return sum(parts, Fraction(0))


def term_pair_energy(t1: ShadowTerm, t2: ShadowTerm, config: CornerConfig, R: float, eps: float,
                     j: int | None = None) -> tuple[float, float]:
    """Cross contributions ``(bulk, boundary)`` of two terms.

    ``bulk`` is the gradient double integral and ``boundary`` the weighted trace
    integral, both without the 1/2 and gamma factors.  Pass ``j`` to get exact
    zeros for traces that vanish structurally.
    """
    if not 0 <= eps <= R:
        raise DomainError(f"need 0 <= eps <= R, got eps={eps}, R={R}")
    if t1.is_zero or t2.is_zero or eps == R:
        return 0.0, 0.0
    if _sort_key(t2) < _sort_key(t1):
        t1, t2 = t2, t1
    w = config.omega
    theta, wts = _nodes(w)
    G1, dG1 = t1.profiles(theta)
    G2, dG2 = t2.profiles(theta)
    H1 = _radial_gradient_profile(t1, G1)
    H2 = _radial_gradient_profile(t2, G2)
    ang = (H1 * wts) @ H2.T + (dG1 * wts) @ dG2.T

    a_exact = _exact_sum(t1.exponent_exact, t2.exponent_exact)
    b_bulk = t1.exponent + t2.exponent - 1
    bulk = 0.0
    for m1 in range(t1.L + 1):
        for m2 in range(t2.L + 1):
            c = ang[m1, m2]
            if c == 0.0:
                continue
            a = float(a_exact - 1) if a_exact is not None else b_bulk
            bulk += c * radial_integral(a, m1 + m2, eps, R)

    if j is not None:
        T1, T2 = boundary_trace(t1, j, config), boundary_trace(t2, j, config)
    else:
        T1, T2 = t1.profiles(w)[0], t2.profiles(w)[0]
    alpha_exact = config.alpha_exact
    if a_exact is not None and alpha_exact is not None:
        b_bnd = float(a_exact + alpha_exact + 1)
    else:
        b_bnd = t1.exponent + t2.exponent + config.alpha_value + 1
    boundary = 0.0
    for m1 in range(t1.L + 1):
        for m2 in range(t2.L + 1):
            c = T1[m1] * T2[m2]
            if c == 0.0:
                continue
            boundary += c * radial_integral(b_bnd, m1 + m2, eps, R)
    return float(bulk), float(boundary)


def _trace_vanishes(term: ShadowTerm, j: int, config: CornerConfig) -> bool:
    return not np.any(boundary_trace(term, j, config))


def energy_finite(series: AsymptoticSeries, config: CornerConfig | None = None,
                  j: int | None = None) -> EnergyVerdict:
    """Exact finiteness of the energy of the full eigensolution the series represents."""
    config = config or series.config
    j = j or series.j
    if config.approach is Approach.CLOSED_FORM or config.alpha_is_minus_one:
        return FINITE
    divergent_regime = (config.approach is Approach.DN) == (config.alpha_sign() < 0)
    if divergent_regime and series.status.kind != "terminated":
        return INFINITE
    alpha = config.alpha_exact
    for t in series.terms:
        if t.is_zero:
            continue
        beta = t.exponent_exact if t.exponent_exact is not None else t.exponent
        if not beta > 0:
            return INFINITE
        a = alpha if (alpha is not None and isinstance(beta, Fraction)) else config.alpha_value
        if not 2 * beta + a + 2 > 0 and not _trace_vanishes(t, j, config):
            return INFINITE
    return FINITE


def series_energy(series: AsymptoticSeries, R: float = 1.0, eps: float = 0.0,
                  jobs: int = 1) -> EnergyResult:
    """Energy of the stored terms over the sector of radius ``R`` minus the disc of radius ``eps``."""
    cfg = series.config
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    if not 0 <= eps <= R:
        raise DomainError(f"eps must lie in [0, R], got {eps}")
    if eps == 0 and not energy_finite(series).is_finite(series.j):
        raise DivergentEnergyError("divergent; supply eps > 0")
    pairs = [(a, b) for a in series.terms for b in series.terms]
    j = None if cfg.approach is Approach.CLOSED_FORM else series.j
    fn = lambda p: term_pair_energy(p[0], p[1], cfg, R, eps, j)
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            parts = list(pool.map(fn, pairs))
    else:
        parts = [fn(p) for p in pairs]
    bulk = math.fsum(p[0] for p in parts)
    boundary = math.fsum(p[1] for p in parts)
    return EnergyResult(0.5 * bulk + cfg.gamma * boundary, bulk, boundary, eps)
