from fractions import Fraction
from math import gcd

import pytest

from robincorner import CornerConfig


def cfg(omega_over_pi, alpha, approach="dn", gamma=1.0):
    return CornerConfig.from_values(omega_over_pi=omega_over_pi, alpha=alpha, approach=approach, gamma=gamma)


def apparent_critical_rhos(pmax=6, qmax=6):
    """Reduced (2p-1)/(2q) with p, q <= bounds, as (p, q, rho)."""
    out = []
    for p in range(1, pmax + 1):
        for q in range(1, qmax + 1):
            if gcd(2 * p - 1, 2 * q) == 1:
                out.append((p, q, Fraction(2 * p - 1, 2 * q)))
    return out


def config_for_rho(rho, approach, omega_over_pi=Fraction(1), gamma=1.0):
    """Config with the given (omega/pi)(alpha+1)."""
    alpha = Fraction(rho) / Fraction(omega_over_pi) - 1
    return cfg(Fraction(omega_over_pi), alpha, approach, gamma)


def table_verdict(r, approach, j):
    """Independent restatement of the classification rules."""
    above = r > 0
    dn = approach == "dn"
    good = dn == above
    num, den = r.numerator, r.denominator
    if den % 2 == 0:
        p, q = (abs(num) + 1) // 2, den // 2
        if dn and not above and j == p:
            return ("infinite_with_log", 2 * q, False, False)
        if good:
            energy = True
        elif dn:
            energy = j > p
        else:
            energy = j >= p
        return ("finite_exact", q, True, energy)
    return ("infinite_with_log", den, good, good)


@pytest.fixture
def make_cfg():
    return cfg


# criterion -> list of (check name, passed, detail), filled by the acceptance suite
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[n]
        failed = [f"{name} ({detail})" for name, ok, detail in checks if not ok]
        verdict = "FAIL" if failed else "PASS"
        tail = "; failed: " + "; ".join(failed) if failed else ""
        terminalreporter.write_line(f"criterion {n}: {verdict} [{len(checks) - len(failed)}/{len(checks)} checks]{tail}")
