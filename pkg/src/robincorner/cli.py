"""``robincorner`` command-line interface.

Exit codes: 0 success, 2 usage error, 3 domain error, 1 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import exactq
from .crack import crack_regime, traction
from .energy import energy_finite, series_energy
from .errors import ConfigError, RobinCornerError
from .evaluation import (abs_error, closed_form_series, eval_series, lambda_robin, rel_error)
from .exactq import AngleSpec, Approach, CornerConfig, DeclaredIrrational
from .series import DEFAULT_MAX_TERMS, build_series, dumps, loads

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
OUTPUT_DIR_ENV = "ROBINCORNER_OUTPUT_DIR"

_RATIONAL = re.compile(r"-?\d+(/\d+)?")
_NUMBER = re.compile(r"-?(\d+(/\d+)?|\d*\.\d+([eE][-+]?\d+)?|\d+\.?\d*[eE][-+]?\d+)")


class UsageError(Exception):
    pass


def rational_arg(text: str) -> Fraction:
    if not _RATIONAL.fullmatch(text):
        raise argparse.ArgumentTypeError(f"expected an exact rational 'p/q', got {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise argparse.ArgumentTypeError(f"zero denominator in {text!r}")


def real_arg(text: str) -> float:
    """A real number written as a decimal or as 'p/q'."""
    try:
        if _RATIONAL.fullmatch(text):
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")


def real_list(text: str) -> list[float]:
    return [real_arg(t) for t in text.split(",") if t.strip()]


def int_list(text: str) -> list[int]:
    """Comma list of ints or an inclusive range 'a-b'."""
    out = []
    for part in text.split(","):
        if re.fullmatch(r"\d+-\d+", part):
            a, b = map(int, part.split("-"))
            out.extend(range(a, b + 1))
        elif re.fullmatch(r"\d+", part):
            out.append(int(part))
        else:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}")
    return out


# --- output helpers -------------------------------------------------------------

def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def output_dir(args) -> Path:
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env)
    return Path(args.output_dir) if getattr(args, "output_dir", None) else Path(".")


def resolve_out(args, default_name: str | None) -> Path | None:
    """``None`` means stdout."""
    out = getattr(args, "out", None)
    if out == "-" or (out is None and default_name is None):
        return None
    path = Path(out if out is not None else default_name)
    if not path.is_absolute():
        path = output_dir(args) / path
    return path


def write_csv(args, header, rows, default_name=None):
    path = resolve_out(args, default_name)
    if path is None:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        w.writerows([fmt(v) for v in row] for row in rows)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows([fmt(v) for v in row] for row in rows)
    print(f"wrote {path}", file=sys.stderr)


# --- config parsing -------------------------------------------------------------

def add_config_args(p, need_j=True):
    p.add_argument("--omega-pi", type=rational_arg, help="omega/pi as 'p/q'")
    p.add_argument("--omega", type=float, help="omega in radians (needs --irrational)")
    p.add_argument("--alpha", type=rational_arg, help="alpha as 'p/q'")
    p.add_argument("--alpha-real", type=float, help="alpha as a float (needs --irrational)")
    p.add_argument("--irrational", action="store_true",
                   help="declare the float inputs irrational")
    p.add_argument("--rho", type=rational_arg, help="exact (omega/pi)(alpha+1) for irrational inputs")
    p.add_argument("--gamma", type=real_arg, default=1.0)
    p.add_argument("--approach", choices=[a.value for a in Approach], default="dn")
    if need_j:
        p.add_argument("--j", type=int, default=1)


def config_from_args(args) -> CornerConfig:
    if (args.omega_pi is None) == (args.omega is None):
        raise UsageError("give exactly one of --omega-pi / --omega")
    if (args.alpha is None) == (args.alpha_real is None):
        raise UsageError("give exactly one of --alpha / --alpha-real")
    if (args.omega is not None or args.alpha_real is not None) and not args.irrational:
        raise UsageError("float inputs need --irrational; pass rationals as 'p/q'")
    angle = AngleSpec.exact(args.omega_pi) if args.omega is None else AngleSpec.irrational(args.omega)
    alpha = args.alpha if args.alpha_real is None else DeclaredIrrational(args.alpha_real)
    approach = Approach(args.approach)
    if alpha == -1 and approach is not Approach.CLOSED_FORM and args.command in ("build", "eig"):
        approach = Approach.CLOSED_FORM
    return CornerConfig(angle, alpha, args.gamma, approach, args.rho)


# --- commands -------------------------------------------------------------------

def cmd_classify(args) -> int:
    cfg = config_from_args(args)
    if cfg.alpha_is_minus_one:
        root = lambda_robin(args.j, cfg.omega, cfg.gamma)
        report = {"rho": "0", "verdict": "alpha=-1: closed form branch", "lambda": root.lam}
        if args.json:
            print(json.dumps(report))
        else:
            print(f"alpha=-1: closed form branch, lambda_{args.j} = {fmt(root.lam)}")
        return EXIT_OK
    c = exactq.classify(cfg, args.j)
    r = "irrational" if c.rho is exactq.IRRATIONAL else str(c.rho)
    if args.json:
        print(json.dumps({
            "rho": r, "form": str(c.form), "series_kind": c.series_kind, "S": c.S,
            "log_period": c.log_period, "log_extra_step": c.log_extra_step,
            "converges_near_zero": c.converges_near_zero, "energy": str(c.energy),
            "energy_finite": c.energy_finite, "verdict": c.describe()}))
    else:
        print(f"rho = {r} ({c.form})")
        print(c.describe())
    return EXIT_OK


def _build(cfg: CornerConfig, j: int, max_terms: int):
    if cfg.approach is Approach.CLOSED_FORM:
        return closed_form_series(j, cfg.angle, cfg.gamma)
    return build_series(j, cfg, max_terms)


def cmd_build(args) -> int:
    cfg = config_from_args(args)
    series = _build(cfg, args.j, args.max_terms)
    text = dumps(series) + "\n"
    path = resolve_out(args, None)
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"wrote {path} ({series.status})", file=sys.stderr)
    return EXIT_OK


@dataclass(frozen=True)
class GridSpec:
    r_min: float
    r_max: float
    n_r: int
    theta_points: int
    log_spaced_r: bool = False

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ConfigError("need 0 < r_min < r_max")
        if self.n_r < 2:
            raise ConfigError("need n_r >= 2")
        if self.theta_points < 1:
            raise ConfigError("need theta_points >= 1")

    def radii(self) -> np.ndarray:
        if self.log_spaced_r:
            return np.geomspace(self.r_min, self.r_max, self.n_r)
        return np.linspace(self.r_min, self.r_max, self.n_r)

    def angles(self, omega: float) -> np.ndarray:
        if self.theta_points == 1:
            return np.array([omega])
        return np.linspace(0.0, omega, self.theta_points)


def add_grid_args(p, theta=True):
    p.add_argument("--r", type=real_list, help="comma-separated radii")
    p.add_argument("--r-min", type=real_arg, default=0.01)
    p.add_argument("--r-max", type=real_arg, default=1.0)
    p.add_argument("--n-r", type=int, default=50)
    p.add_argument("--log-r", action="store_true", help="log-spaced radii")
    if theta:
        p.add_argument("--theta", type=real_list, help="comma-separated angles (radians)")
        p.add_argument("--n-theta", type=int, default=5)


def radii_from_args(args):
    if args.r:
        if any(r <= 0 for r in args.r):
            raise ConfigError("radii must be positive")
        return list(args.r)
    grid = GridSpec(args.r_min, args.r_max, args.n_r, 1, args.log_r)
    return [float(x) for x in grid.radii()]


def load_series(path):
    try:
        return loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not a series JSON document ({exc})") from exc


def _field_rows(series, radii, angles):
    rows = []
    for r in radii:
        for th in angles:
            p = eval_series(series, r, th)
            rows.append((r, th, p.u, p.u_r, p.u_theta_over_r))
    return rows


def cmd_eval(args) -> int:
    series = load_series(args.series)
    radii = radii_from_args(args)
    w = series.config.omega
    angles = list(args.theta) if args.theta else list(np.linspace(0.0, w, args.n_theta))
    if any(not 0 <= th <= w for th in angles):
        raise ConfigError("theta must lie in [0, omega]")
    write_csv(args, ["r", "theta", "u", "u_r", "u_theta_over_r"], _field_rows(series, radii, angles))
    return EXIT_OK


def _error_rows(series, radii, S=None):
    rows = []
    for r in radii:
        E = abs_error(series, r)
        try:
            e = rel_error(series, r)
        except RobinCornerError as exc:
            print(f"r={fmt(r)}: {exc}", file=sys.stderr)
            e = ""
        rows.append((r, E, e) if S is None else (S, r, E, e))
    return rows


def cmd_error(args) -> int:
    series = load_series(args.series)
    write_csv(args, ["r", "E", "e"], _error_rows(series, radii_from_args(args)))
    return EXIT_OK


def cmd_energy(args) -> int:
    series = load_series(args.series)
    res = series_energy(series, args.R, args.eps, jobs=args.jobs)
    finite = energy_finite(series).is_finite(series.j)
    write_csv(args, ["R", "eps", "energy", "bulk", "boundary", "finite"],
              [(args.R, args.eps, res.value, res.bulk, res.boundary, str(finite).lower())])
    return EXIT_OK


def _map(fn, items, jobs):
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def cmd_eig(args) -> int:
    if (args.omega_pi is None) == (args.omega is None):
        raise UsageError("give exactly one of --omega-pi / --omega")
    if args.omega is not None and not args.irrational:
        raise UsageError("float omega needs --irrational")
    omega = AngleSpec.exact(args.omega_pi).omega if args.omega is None else args.omega
    tasks = [(j, g) for j in args.j for g in args.gammas]

    def solve(t):
        root = lambda_robin(t[0], omega, t[1])
        lo, hi = root.bracket
        return (t[0], t[1], root.lam, lo, hi, root.residual)

    write_csv(args, ["j", "gamma", "lambda", "lower", "upper", "residual"], _map(solve, tasks, args.jobs))
    return EXIT_OK


def cmd_crack(args) -> int:
    if (args.alpha is None) == (args.alpha_real is None):
        raise UsageError("give exactly one of --alpha / --alpha-real")
    if args.alpha_real is not None and not args.irrational:
        raise UsageError("float alpha needs --irrational")
    alpha = args.alpha if args.alpha_real is None else DeclaredIrrational(args.alpha_real)
    rep = crack_regime(alpha, args.gamma, args.max_terms)
    print(rep.describe(), file=sys.stderr if args.traction else sys.stdout)
    if not args.traction:
        print(f"lambda1 = {fmt(rep.lambda1)}")
        if rep.residual is not None:
            print(f"residual = {fmt(rep.residual)}")
        return EXIT_OK
    xs = args.traction
    write_csv(args, ["x", "sigma_yz"], [(x, traction(rep.series, x)) for x in xs])
    return EXIT_OK


def cmd_export(args) -> int:
    cfg = config_from_args(args)
    radii = radii_from_args(args)
    if args.kind == "field":
        series = _build(cfg, args.j, args.max_terms)
        angles = list(np.linspace(0.0, cfg.omega, args.n_theta))
        write_csv(args, ["r", "theta", "u", "u_r", "u_theta_over_r"], _field_rows(series, radii, angles),
                  f"field_j{args.j}.csv")
        return EXIT_OK
    series = _build(cfg, args.j, args.max_terms)
    rows = []
    for chunk in _map(lambda S: _error_rows(series.truncate(S), radii, S), range(series.S + 1), args.jobs):
        rows.extend(chunk)
    write_csv(args, ["S", "r", "E", "e"], rows, f"errors_j{args.j}.csv")
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robincorner", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def out_args(sp):
        sp.add_argument("--out", help="output file ('-' for stdout); relative paths go under the output dir")
        sp.add_argument("--output-dir", help=f"output directory (overridden by ${OUTPUT_DIR_ENV})")

    sp = sub.add_parser("classify", help="critical-pair classification")
    add_config_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("build", help="build a series and write it as JSON")
    add_config_args(sp)
    sp.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS)
    out_args(sp)
    sp.set_defaults(fn=cmd_build)

    sp = sub.add_parser("eval", help="evaluate u and its gradient on a grid")
    sp.add_argument("series", help="series JSON file")
    add_grid_args(sp)
    out_args(sp)
    sp.set_defaults(fn=cmd_eval)

    sp = sub.add_parser("error", help="absolute and relative Robin errors")
    sp.add_argument("series")
    add_grid_args(sp, theta=False)
    out_args(sp)
    sp.set_defaults(fn=cmd_error)

    sp = sub.add_parser("energy", help="energy in the sector of radius R")
    sp.add_argument("series")
    sp.add_argument("--R", type=real_arg, default=1.0)
    sp.add_argument("--eps", type=real_arg, default=0.0)
    sp.add_argument("--jobs", type=int, default=1)
    out_args(sp)
    sp.set_defaults(fn=cmd_energy)

    sp = sub.add_parser("eig", help="alpha=-1 eigenvalue table")
    sp.add_argument("--omega-pi", type=rational_arg)
    sp.add_argument("--omega", type=float)
    sp.add_argument("--irrational", action="store_true")
    sp.add_argument("--gamma", dest="gammas", type=real_list, default=[1.0], help="comma list")
    sp.add_argument("--j", type=int_list, default=[1, 2, 3, 4, 5], help="e.g. 1-5 or 1,3")
    sp.add_argument("--jobs", type=int, default=1)
    out_args(sp)
    sp.set_defaults(fn=cmd_eig)

    sp = sub.add_parser("crack", help="bridged-crack regime (omega = pi)")
    sp.add_argument("--alpha", type=rational_arg)
    sp.add_argument("--alpha-real", type=float)
    sp.add_argument("--irrational", action="store_true")
    sp.add_argument("--gamma", type=real_arg, default=1.0)
    sp.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS)
    sp.add_argument("--traction", type=real_list, help="comma list of x to emit sigma_yz(x, 0)")
    out_args(sp)
    sp.set_defaults(fn=cmd_crack)

    sp = sub.add_parser("export", help="CSV tables for plots")
    add_config_args(sp)
    sp.add_argument("--kind", choices=["errors", "field"], default="errors")
    sp.add_argument("--max-terms", type=int, default=5)
    sp.add_argument("--n-theta", type=int, default=9)
    sp.add_argument("--jobs", type=int, default=1)
    add_grid_args(sp, theta=False)
    out_args(sp)
    sp.set_defaults(fn=cmd_export)
    return p


_VALUE_TAKING = re.compile(r"--(omega|omega-pi|alpha|alpha-real|rho|gamma|r|theta|traction|R|eps|r-min|r-max)$")


def _join_negative_values(argv):
    """Turn ``--alpha -3/2`` into ``--alpha=-3/2`` so argparse does not read it as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (_VALUE_TAKING.match(tok) and i + 1 < len(argv)
                and re.fullmatch(r"-[\d.][\d./eE,+-]*", argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (UsageError, ConfigError) as exc:
        print(f"robincorner {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RobinCornerError as exc:
        print(f"robincorner {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"robincorner {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
