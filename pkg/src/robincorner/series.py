"""Main terms and recursive shadow terms for the Dirichlet-Robin corner.

A term of index ``k`` has the power-logarithmic form

    u^(k)(r, theta) = r**beta * sum_m log(r)**m * G_m(theta),
    G_m(theta) = sum_{l>=m} a[l] * C(l, m) * theta**(l-m) * sin(beta*theta + (l-m)*pi/2),

so each step of the recursion reduces to an upper-triangular system for the
coefficient vector ``a``.  Two recursions are available: D-N (Neumann main
term, exponents grow by ``alpha + 1``) and D-D (Dirichlet main term, exponents
shrink by ``alpha + 1``).
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np
from scipy.linalg import solve_triangular as _solve_upper

from . import exactq
from .errors import (ClosedFormBranchError, ConfigError, InconsistentSystemError,
                     TerminationMismatchError)
from .exactq import Approach, CornerConfig

DEFAULT_MAX_TERMS = 25
ZERO_RTOL = 1e-14


@dataclass(frozen=True)
class ShadowTerm:
    """One term ``u^(k)``; ``k = 0`` is the main term."""

    k: int
    exponent: float
    L: int
    coeffs: tuple[float, ...]
    approach: Approach
    exponent_exact: Fraction | None = None
    augmented: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if len(self.coeffs) != self.L + 1:
            raise ValueError(f"expected {self.L + 1} coefficients, got {len(self.coeffs)}")

    @property
    def a(self) -> np.ndarray:
        return np.array(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def profiles(self, theta):
        """Angular factors ``G_m`` and ``G_m'`` at ``theta``, each of shape ``(L+1,) + theta.shape``."""
        theta = np.asarray(theta, dtype=float)
        beta = self.exponent
        s, c = np.sin(beta * theta), np.cos(beta * theta)
        G = np.zeros((self.L + 1,) + theta.shape)
        dG = np.zeros_like(G)
        for m in range(self.L + 1):
            for l in range(m, self.L + 1):
                a = self.coeffs[l]
                if a == 0.0:
                    continue
                n = l - m
                sn, cn = exactq.rotate_quarter(s, c, n)
                w = a * comb(l, m)
                tn = theta ** n
                G[m] += w * tn * sn
                dG[m] += w * beta * tn * cn
                if n:
                    dG[m] += w * n * theta ** (n - 1) * sn
        return G, dG


@dataclass(frozen=True)
class SeriesStatus:
    kind: str  # "terminated" | "truncated" | "closed_form"
    S: int | None = None
    at: int | None = None
    lam: float | None = None

    @classmethod
    def terminated(cls, S: int) -> "SeriesStatus":
        return cls("terminated", S=S)

    @classmethod
    def truncated(cls, at: int) -> "SeriesStatus":
        return cls("truncated", at=at)

    @classmethod
    def closed_form(cls, lam: float) -> "SeriesStatus":
        return cls("closed_form", lam=lam)

    def __str__(self):
        if self.kind == "terminated":
            return f"terminated (S={self.S})"
        if self.kind == "truncated":
            return f"truncated at k={self.at}"
        return f"closed form (lambda={self.lam!r})"


@dataclass(frozen=True)
class AsymptoticSeries:
    j: int
    config: CornerConfig
    terms: tuple[ShadowTerm, ...]
    status: SeriesStatus
    classification: exactq.Classification | None = field(default=None, compare=False)

    @property
    def S(self) -> int:
        """Index of the last stored term."""
        return self.terms[-1].k

    @property
    def min_exponent(self) -> float:
        return min(t.exponent for t in self.terms if not t.is_zero)

    def truncate(self, S: int) -> "AsymptoticSeries":
        """Copy keeping terms ``0..S``."""
        if not 0 <= S <= self.S:
            raise ValueError(f"S={S} outside 0..{self.S}")
        status = self.status if S == self.S else SeriesStatus.truncated(S + 1)
        return AsymptoticSeries(self.j, self.config, self.terms[: S + 1], status, self.classification)


@dataclass(frozen=True)
class TriangularSystem:
    """``M a = g`` for one recursion step."""

    M: np.ndarray
    g: np.ndarray
    augmented: bool
    k: int = 0
    exponent: float = 0.0
    exponent_exact: Fraction | None = None
    g_scale: float = 0.0  # sum of |contributions| to g, for cancellation tests

    @property
    def size(self) -> int:
        return len(self.g)


def main_term(j: int, config: CornerConfig) -> ShadowTerm:
    if j < 1:
        raise ConfigError(f"j must be a positive integer, got {j}")
    if config.approach is Approach.CLOSED_FORM:
        raise ClosedFormBranchError("closed-form configs have no D-N/D-D main term; use closed_form_series")
    return ShadowTerm(0, exactq.exponent(j, 0, config), 0, (1.0,), config.approach,
                      exactq.exponent_exact(j, 0, config))


def needs_augmentation(j: int, k: int, config: CornerConfig) -> bool:
    """Exact decision whether step ``k`` enlarges the system by one log power."""
    r = exactq.rho(config)
    sin_zero = exactq.is_sin_zero(k, r)
    shift_zero = exactq.is_lambda_shift_zero(j, k, r, config.approach)
    if config.approach is Approach.DN:
        if sin_zero and shift_zero:
            raise InconsistentSystemError(
                f"both augmentation triggers fire at j={j}, k={k}, rho={r}; impossible for a valid config")
        return sin_zero or shift_zero
    if shift_zero and not sin_zero:
        raise InconsistentSystemError(f"D-D exponent vanishes without a sine zero at j={j}, k={k}")
    return sin_zero


def _prepare(j, k, L_prev, prev_coeffs, config):
    if k < 1:
        raise ValueError("k must be >= 1")
    prev = np.asarray(prev_coeffs, dtype=float)
    if prev.shape != (L_prev + 1,):
        raise ValueError(f"prev_coeffs must have length {L_prev + 1}")
    augmented = needs_augmentation(j, k, config)
    L = L_prev + 1 if augmented else L_prev
    prev = np.concatenate([prev, np.zeros(L - L_prev)])
    beta = exactq.exponent(j, k, config)
    beta_prev = exactq.exponent(j, k - 1, config)
    return prev, L, augmented, beta, beta_prev


def build_system_direct(j: int, k: int, L_prev: int, prev_coeffs, config: CornerConfig) -> TriangularSystem:
    """Assemble step ``k`` entry by entry from the boundary condition at ``theta = omega``."""
    prev, L, augmented, beta, beta_prev = _prepare(j, k, L_prev, prev_coeffs, config)
    w, gamma = config.omega, config.gamma
    n1 = L + 1
    M = np.zeros((n1, n1))
    g = np.zeros(n1)
    g_abs = np.zeros(n1)
    dn = config.approach is Approach.DN
    for m in range(n1):
        for l in range(m, n1):
            n = l - m
            cw = comb(l, m) * w ** n
            if dn:
                s, c = exactq.phase_trig(k, n, config)
                M[m, l] = cw * ((n / w) * c - beta * s)
                _, cp = exactq.phase_trig(k - 1, n, config)
                term = -gamma * prev[l] * cw * cp
            else:
                # sin/cos(n*pi/2 - phi) from the phase helper at -k
                s, _ = exactq.phase_trig(-k, n, config)
                M[m, l] = cw * s
                sp, cp = exactq.phase_trig(-(k - 1), n, config)
                term = -(prev[l] / gamma) * cw * ((n / w) * sp + beta_prev * cp)
            g[m] += term
            g_abs[m] += abs(term)
    return TriangularSystem(M, g, augmented, k, beta, exactq.exponent_exact(j, k, config),
                            float(g_abs.max(initial=0.0)))


def _recursive_blocks(n1: int, k: int, config: CornerConfig):
    """The four matrices of the recursive form: two trig matrices and their ``n``-weighted copies."""
    w = config.omega
    A = np.zeros((n1, n1))
    B = np.zeros((n1, n1))
    nn = np.zeros((n1, n1))
    dn = config.approach is Approach.DN
    for m in range(n1):
        for l in range(m, n1):
            n = l - m
            cw = comb(l, m) * w ** n
            s, c = exactq.phase_trig(k if dn else -k, n, config)
            if dn:
                A[m, l], B[m, l] = cw * c, cw * s  # R, N
            else:
                A[m, l], B[m, l] = cw * s, cw * c  # M, N
            nn[m, l] = n
    return A, B, nn * A, nn * B


def build_system_recursive(j: int, k: int, prev: ShadowTerm, config: CornerConfig) -> TriangularSystem:
    """Same system as :func:`build_system_direct`, assembled from one-step trig rotations."""
    a_prev, L, augmented, beta, beta_prev = _prepare(j, k, prev.L, prev.coeffs, config)
    w, gamma = config.omega, config.gamma
    s1, c1 = exactq.phase_trig(1, 0, config)
    A, B, An, Bn = _recursive_blocks(L + 1, k, config)
    if config.approach is Approach.DN:
        R, N, Rt = A, B, An
        M = Rt / w - beta * N
        rhs = -gamma * (c1 * R + s1 * N)
    else:
        Md, N, Mt, Nt = A, B, An, Bn
        M = Md
        rhs = -(c1 / gamma) * (Mt / w + beta_prev * N) - (s1 / gamma) * (Nt / w - beta_prev * Md)
    g = rhs @ a_prev
    g_scale = float((np.abs(rhs) @ np.abs(a_prev)).max(initial=0.0))
    return TriangularSystem(M, g, augmented, k, beta, exactq.exponent_exact(j, k, config), g_scale)


def solve_triangular(system: TriangularSystem) -> np.ndarray:
    """Back substitution; an enlarged system fixes ``a[0] = 0`` and solves for the rest."""
    M, g = system.M, system.g
    n1 = system.size
    if not system.augmented:
        if np.any(np.diag(M) == 0.0):
            raise InconsistentSystemError("zero pivot in a system that was not enlarged")
        return _solve_upper(M, g, lower=False)
    if np.any(M[:, 0] != 0.0) or np.any(M[-1] != 0.0) or g[-1] != 0.0:
        raise InconsistentSystemError("enlarged system lacks a zero first column / last row")
    a = np.zeros(n1)
    block = M[:-1, 1:]
    if np.any(np.diag(block) == 0.0):
        raise InconsistentSystemError("zero super-diagonal in an enlarged system")
    a[1:] = _solve_upper(block, g[:-1], lower=False)
    return a


def _rhs_vanishes(system: TriangularSystem) -> bool:
    if not np.any(system.g):
        return True
    return bool(np.max(np.abs(system.g)) <= ZERO_RTOL * system.g_scale)


def next_term(j: int, prev: ShadowTerm, config: CornerConfig) -> ShadowTerm:
    """Shadow term ``prev.k + 1``; all coefficients zero when the right-hand side vanishes."""
    system = build_system_direct(j, prev.k + 1, prev.L, prev.coeffs, config)
    if _rhs_vanishes(system):
        a = np.zeros(system.size)
    else:
        a = solve_triangular(system)
    return ShadowTerm(system.k, system.exponent, system.size - 1, tuple(a), config.approach,
                      system.exponent_exact, system.augmented)


def build_series(j: int, config: CornerConfig, max_terms: int = DEFAULT_MAX_TERMS) -> AsymptoticSeries:
    """Main term plus shadow terms until the recursion stops or ``max_terms`` terms are stored."""
    if max_terms < 1:
        raise ConfigError("max_terms must be >= 1")
    if config.approach is Approach.CLOSED_FORM:
        raise ClosedFormBranchError("use closed_form_series for alpha = -1")
    cls = None if config.alpha_is_minus_one else exactq.classify(config, j)
    terms = [main_term(j, config)]
    status = None
    for k in range(1, max_terms + 1):
        term = next_term(j, terms[-1], config)
        if term.is_zero:
            status = SeriesStatus.terminated(k - 1)
            break
        if k == max_terms:
            status = SeriesStatus.truncated(max_terms)
            break
        terms.append(term)
    if status is None:
        status = SeriesStatus.truncated(max_terms)
    if cls is not None:
        if cls.series_kind == "finite_exact":
            if status.kind == "terminated" and status.S != cls.S:
                raise TerminationMismatchError(f"terminated at S={status.S}, expected S={cls.S}")
            if status.kind == "truncated" and max_terms >= cls.S + 1:
                raise TerminationMismatchError(f"no termination by k={max_terms}, expected S={cls.S}")
        elif status.kind == "terminated":
            warnings.warn(f"coefficients vanished numerically at k={status.S + 1} "
                          f"for a pair classified {cls.series_kind}", RuntimeWarning, stacklevel=2)
    return AsymptoticSeries(j, config, tuple(terms), status, cls)


# --- serialization -------------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    return str(x) if x.denominator != 1 else f"{x.numerator}"


def series_to_dict(series: AsymptoticSeries) -> dict:
    cfg = series.config
    out = {"j": series.j, "approach": cfg.approach.value}
    if cfg.angle.is_exact:
        out["omega_over_pi"] = _frac_str(cfg.angle.omega_over_pi)
    else:
        out["omega"] = cfg.angle.omega_value
    out["alpha"] = _frac_str(cfg.alpha_exact) if cfg.alpha_exact is not None else cfg.alpha_value
    out["gamma"] = cfg.gamma
    if cfg.rho_override is not None:
        out["rho"] = _frac_str(cfg.rho_override)
    terms = []
    for t in series.terms:
        d = {"k": t.k, "exponent": t.exponent}
        if t.exponent_exact is not None:
            d["exponent_exact"] = _frac_str(t.exponent_exact)
        d["L"] = t.L
        d["coeffs"] = list(t.coeffs)
        terms.append(d)
    out["terms"] = terms
    st = series.status
    if st.kind == "terminated":
        out["status"] = {"kind": "terminated", "S": st.S}
    elif st.kind == "truncated":
        out["status"] = {"kind": "truncated", "at": st.at}
    else:
        out["status"] = {"kind": "closed_form", "lambda": st.lam}
    return out


def series_from_dict(d: dict) -> AsymptoticSeries:
    try:
        approach = Approach(d["approach"])
        if "omega_over_pi" in d:
            angle = exactq.AngleSpec.exact(exactq.parse_rational(d["omega_over_pi"]))
        else:
            angle = exactq.AngleSpec.irrational(float(d["omega"]))
        a = d["alpha"]
        alpha = exactq.parse_rational(a) if isinstance(a, (str, int)) else exactq.DeclaredIrrational(float(a))
        rho = exactq.parse_rational(d["rho"]) if d.get("rho") is not None else None
        cfg = CornerConfig(angle, alpha, float(d["gamma"]), approach, rho)
        terms, L_prev = [], None
        for t in d["terms"]:
            L = int(t["L"])
            ex = exactq.parse_rational(t["exponent_exact"]) if "exponent_exact" in t else None
            terms.append(ShadowTerm(int(t["k"]), float(t["exponent"]), L, tuple(t["coeffs"]), approach,
                                    ex, L_prev is not None and L > L_prev))
            L_prev = L
        terms = tuple(terms)
        st = d["status"]
        kind = st["kind"]
        if kind == "terminated":
            status = SeriesStatus.terminated(int(st["S"]))
        elif kind == "truncated":
            status = SeriesStatus.truncated(int(st["at"]))
        elif kind == "closed_form":
            status = SeriesStatus.closed_form(float(st["lambda"]))
        else:
            raise ConfigError(f"unknown status kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed series document: {exc}") from exc
    if not terms:
        raise ConfigError("series document has no terms")
    return AsymptoticSeries(int(d["j"]), cfg, terms, status)


def dumps(series: AsymptoticSeries) -> str:
    return json.dumps(series_to_dict(series), indent=2)


def loads(text: str) -> AsymptoticSeries:
    return series_from_dict(json.loads(text))


def boundary_profiles(term: ShadowTerm, j: int, config: CornerConfig) -> tuple[np.ndarray, np.ndarray]:
    """``G_m(omega)`` and ``G_m'(omega)`` for every m, with structural zeros exact."""
    if term.approach is Approach.CLOSED_FORM:
        return term.profiles(config.omega)
    w, beta = config.omega, term.exponent
    G = np.zeros(term.L + 1)
    dG = np.zeros(term.L + 1)
    for m in range(term.L + 1):
        for l in range(m, term.L + 1):
            n = l - m
            if term.approach is Approach.DN:
                # beta*omega = (2j-1)pi/2 + phi_k
                s, c = exactq.phase_trig(term.k, n, config)
                sv, cv = (-1) ** (j - 1) * c, -(-1) ** (j - 1) * s
            else:
                # beta*omega = j*pi - phi_k
                s, c = exactq.phase_trig(-term.k, n, config)
                sv, cv = (-1) ** j * s, (-1) ** j * c
            w_ml = term.coeffs[l] * comb(l, m)
            G[m] += w_ml * w ** n * sv
            dG[m] += w_ml * beta * w ** n * cv
            if n:
                dG[m] += w_ml * n * w ** (n - 1) * sv
    return G, dG


def boundary_trace(term: ShadowTerm, j: int, config: CornerConfig) -> np.ndarray:
    """``G_m(omega)`` for every m, with structural zeros exact."""
    return boundary_profiles(term, j, config)[0]
