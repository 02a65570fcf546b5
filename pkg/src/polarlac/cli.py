"""Command-line front end.

Four subcommands share one parameter set: ``sample`` writes the evaluated
grid as CSV and JSON, ``lcg`` writes both logarithmic curvature graphs and
their line fits, ``verify`` writes a machine-readable report of the oracle
checks, and ``svg`` writes simple line plots.  Flags override values from
a ``--config`` JSON file, which overrides the defaults a=1, b=1, theta0=0,
samples=512.

Exit codes: 0 success, 1 verification failed, 2 invalid configuration,
3 expression parse error, 4 I/O failure, 5 degenerate logarithmic
curvature graph.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

from . import curve as _curve
from . import diffgeo as _diffgeo
from . import lcg as _lcg
from . import svgplot as _svgplot
from .phiexpr import ParseError, depends_on_theta, parse

EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_PARSE = 3
EXIT_IO = 4
EXIT_DEGENERATE = 5

DEFAULTS = {"a": 1.0, "b": 1.0, "theta0": 0.0, "samples": 512}

_NUMBER_KEYS = ("n", "a", "b", "theta0", "theta1")
_CONFIG_KEYS = _NUMBER_KEYS + ("phi", "samples", "out_dir", "outputs")
_SVG_OUTPUTS = ("svg-curve", "svg-rho", "svg-lcg")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    n: float
    a: float
    b: float
    theta0: float
    theta1: float
    phi: str
    samples: int
    out_dir: str
    outputs: tuple[str, ...]


def _diagnose(message: str) -> None:
    colored = sys.stderr.isatty() and not os.environ.get("NO_COLOR")
    prefix = "\x1b[31merror:\x1b[0m" if colored else "error:"
    print(f"{prefix} {message}", file=sys.stderr)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=float, default=None, help="curvature-law exponent (nonzero)")
    common.add_argument("--a", type=float, default=None, help="curvature-law rate (nonzero, default 1)")
    common.add_argument("--b", type=float, default=None, help="curvature-law intercept (positive, default 1)")
    common.add_argument("--theta0", type=float, default=None, help="start angle in radians (default 0)")
    common.add_argument("--theta1", type=float, default=None, help="end angle in radians")
    common.add_argument("--phi", type=str, default=None, help="tangential-angle expression in theta")
    common.add_argument("--samples", type=int, default=None, help="grid size (default 512)")
    common.add_argument("--config", type=str, default=None, help="JSON file with the same keys")
    common.add_argument("--out", type=str, default=None, help="output directory (default .)")

    parser = argparse.ArgumentParser(
        prog="polar-lac",
        description="Synthesize polar curves with a prescribed curvature law and check them numerically.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers = {}
    for name, text in (
        ("sample", "evaluate the curve on a grid and write samples.csv / samples.json"),
        ("lcg", "write both logarithmic curvature graphs and their line fits"),
        ("verify", "run the numeric oracle and write verify.json"),
        ("svg", "write curve.svg, rho.svg and lcg.svg line plots"),
    ):
        subparsers[name] = sub.add_parser(name, parents=[common], help=text)
    return parser, subparsers


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read config file: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_CONFIG, f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CliError(EXIT_CONFIG, "config file must hold a JSON object")
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise CliError(EXIT_CONFIG, f"unknown config keys: {', '.join(unknown)}")
    for key in _NUMBER_KEYS:
        if key in data and (isinstance(data[key], bool) or not isinstance(data[key], (int, float))):
            raise CliError(EXIT_CONFIG, f"config key '{key}' must be a number")
    if "phi" in data and not isinstance(data["phi"], str):
        raise CliError(EXIT_CONFIG, "config key 'phi' must be a string")
    if "samples" in data and (isinstance(data["samples"], bool) or not isinstance(data["samples"], int)):
        raise CliError(EXIT_CONFIG, "config key 'samples' must be an integer")
    if "out_dir" in data and not isinstance(data["out_dir"], str):
        raise CliError(EXIT_CONFIG, "config key 'out_dir' must be a string")
    if "outputs" in data:
        v = data["outputs"]
        if not isinstance(v, list) or not all(isinstance(o, str) for o in v):
            raise CliError(EXIT_CONFIG, "config key 'outputs' must be a list of strings")
        bad = sorted(set(v) - set(_SVG_OUTPUTS + ("csv", "json")))
        if bad:
            raise CliError(EXIT_CONFIG, f"unknown outputs: {', '.join(bad)}")
    return data


def _merge_config(args: argparse.Namespace, usage: str) -> RunConfig:
    merged: dict = dict(DEFAULTS)
    outputs: tuple[str, ...] = _SVG_OUTPUTS
    out_dir = "."
    if args.config is not None:
        file_data = _load_config_file(args.config)
        for key in _NUMBER_KEYS + ("phi", "samples"):
            if key in file_data:
                merged[key] = file_data[key]
        if "out_dir" in file_data:
            out_dir = file_data["out_dir"]
        if "outputs" in file_data:
            outputs = tuple(o for o in _SVG_OUTPUTS if o in file_data["outputs"])
    for key in _NUMBER_KEYS + ("phi", "samples"):
        flag = getattr(args, key)
        if flag is not None:
            merged[key] = flag
    if args.out is not None:
        out_dir = args.out

    missing = [k for k in ("n", "theta1", "phi") if k not in merged]
    if missing:
        raise CliError(EXIT_CONFIG, f"{usage}missing required parameter(s): {', '.join(missing)}")
    samples = merged["samples"]
    if samples < 2:
        raise CliError(EXIT_CONFIG, "samples must be at least 2")
    return RunConfig(
        n=float(merged["n"]),
        a=float(merged["a"]),
        b=float(merged["b"]),
        theta0=float(merged["theta0"]),
        theta1=float(merged["theta1"]),
        phi=merged["phi"],
        samples=int(samples),
        out_dir=out_dir,
        outputs=outputs,
    )


def _build_params(cfg: RunConfig) -> _curve.CurveParams:
    try:
        phi = parse(cfg.phi)
    except ParseError as exc:
        raise CliError(EXIT_PARSE, f"cannot parse phi expression: {exc}") from exc
    try:
        return _curve.CurveParams(cfg.n, cfg.a, cfg.b, cfg.theta0, cfg.theta1, phi)
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, f"invalid parameters: {exc}") from exc


def _write_atomic(out_dir: str, name: str, text: str) -> None:
    try:
        os.makedirs(out_dir, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
            os.replace(tmp, os.path.join(out_dir, name))
        except BaseException:
            try:
                os.unlink(tmp)
            except OSError:
                pass
            raise
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {name}: {exc}") from exc


def _f17(v: float) -> str:
    return f"{v:.17g}"


def _json_safe(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _dump_json(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _params_echo(cfg: RunConfig) -> dict:
    return {
        "n": cfg.n,
        "a": cfg.a,
        "b": cfg.b,
        "theta0": cfg.theta0,
        "theta1": cfg.theta1,
        "phi": cfg.phi,
        "samples": cfg.samples,
    }


def _sample_rows(params: _curve.CurveParams, count: int) -> list[_curve.CurveSample]:
    try:
        return _curve.sample(params, count)
    except ValueError as exc:
        raise CliError(EXIT_CONFIG, str(exc)) from exc


def cmd_sample(cfg: RunConfig) -> int:
    params = _build_params(cfg)
    rows = _sample_rows(params, cfg.samples)
    lines = ["theta,L,R,rho,phi,beta,x,y,in_domain"]
    for r in rows:
        flag = "true" if r.valid.in_domain else "false"
        lines.append(
            ",".join(_f17(v) for v in (r.theta, r.L, r.R, r.rho, r.phi, r.beta, r.x, r.y))
            + f",{flag}"
        )
    _write_atomic(cfg.out_dir, "samples.csv", "\n".join(lines) + "\n")
    payload = {
        "params": _params_echo(cfg),
        "rows": [
            {
                "theta": r.theta,
                "L": r.L,
                "R": r.R,
                "rho": r.rho,
                "phi": r.phi,
                "beta": r.beta,
                "x": r.x,
                "y": r.y,
                "in_domain": r.valid.in_domain,
            }
            for r in rows
        ],
    }
    _write_atomic(cfg.out_dir, "samples.json", _dump_json(payload))
    return 0


def _fit_dict(line: _lcg.LcgLine) -> dict:
    return {
        "slope": line.slope,
        "intercept": line.intercept,
        "r_squared": line.r_squared,
        "count": line.count,
    }


def _points_csv(points: list[_lcg.LcgPoint]) -> str:
    lines = ["log_rho,log_dL_dlogrho"]
    lines.extend(f"{_f17(pt.x)},{_f17(pt.y)}" for pt in points)
    return "\n".join(lines) + "\n"


def cmd_lcg(cfg: RunConfig) -> int:
    params = _build_params(cfg)
    closed_points = _lcg.lcg_closed_form(params, cfg.samples)
    report = _diffgeo.compare(params, cfg.samples)
    try:
        numeric_points = _lcg.lcg_numeric(report)
        closed_fit = _lcg.linear_fit(closed_points)
        numeric_fit = _lcg.linear_fit(numeric_points)
    except (_lcg.TooFewPoints, _lcg.DegenerateFit, ValueError) as exc:
        raise CliError(EXIT_DEGENERATE, f"logarithmic curvature graph degenerated: {exc}") from exc
    _write_atomic(cfg.out_dir, "lcg_closed.csv", _points_csv(closed_points))
    _write_atomic(cfg.out_dir, "lcg_numeric.csv", _points_csv(numeric_points))
    payload = {
        "params": _params_echo(cfg),
        "expected_slope": params.n,
        "closed_form": _fit_dict(closed_fit),
        "numeric": _fit_dict(numeric_fit),
    }
    _write_atomic(cfg.out_dir, "lcg_fit.json", _dump_json(payload))
    return 0


def _residual_dict(s: _diffgeo.ResidualSummary) -> dict:
    return {"max": s.max, "rms": s.rms, "count": s.count}


def _is_compatible_spiral(params: _curve.CurveParams) -> bool:
    if not params.is_class_one or depends_on_theta(params.phi.ast):
        return False
    sin0 = math.sin(params.phi0)
    if sin0 == 0.0:
        return False
    return abs(params.a - math.cos(params.phi0) / sin0) <= 1e-9


def cmd_verify(cfg: RunConfig) -> int:
    params = _build_params(cfg)
    report = _diffgeo.compare(params, cfg.samples)
    closed_fit = _lcg.linear_fit(_lcg.lcg_closed_form(params, cfg.samples))
    expected_intercept = math.log(abs(params.n / params.a))

    checks = []
    notes = []

    def check(name: str, value: float, tolerance: float, hard: bool, passed: bool | None = None):
        if passed is None:
            passed = math.isfinite(value) and value <= tolerance
        checks.append(
            {"name": name, "value": value, "tolerance": tolerance, "hard": hard, "passed": passed}
        )
        return passed

    ode_ok = report.ode_residual.count > 0 and check(
        "ode_vs_closed_arc_length", report.ode_residual.max, 1e-8, True
    )
    if report.ode_residual.count == 0:
        check("ode_vs_closed_arc_length", math.nan, 1e-8, True, passed=False)
    slope_ok = check("lcg_closed_slope", abs(closed_fit.slope - params.n), 1e-9, True)
    icept_ok = check("lcg_closed_intercept", abs(closed_fit.intercept - expected_intercept), 1e-9, True)
    r2_ok = check("lcg_closed_r_squared", 1.0 - closed_fit.r_squared, 1e-12, True)
    hard_ok = ode_ok and slope_ok and icept_ok and r2_ok

    if _is_compatible_spiral(params):
        phi_ok = check("compatible_phi_actual", report.phi_residual.max, 1e-5, True)
        hard_ok = hard_ok and phi_ok

    try:
        numeric_fit = _lcg.linear_fit(_lcg.lcg_numeric(report))
        check("numeric_lcg_slope_minus_n", abs(numeric_fit.slope - params.n), math.inf, False, True)
        check("numeric_lcg_r_squared", numeric_fit.r_squared, math.inf, False, True)
        if _is_compatible_spiral(params):
            ok = abs(numeric_fit.slope - 1.0) <= 1e-3 and numeric_fit.r_squared >= 0.999999
            check("compatible_numeric_lcg", abs(numeric_fit.slope - 1.0), 1e-3, True, ok)
            hard_ok = hard_ok and ok
    except (_lcg.TooFewPoints, _lcg.DegenerateFit, ValueError) as exc:
        notes.append(f"numeric logarithmic curvature graph not measurable: {exc}")

    if report.phi_residual.count > 0 and report.phi_residual.max > 1e-3:
        notes.append(
            "prescribed phi differs from the measured tangential angle "
            f"(max angular distance {report.phi_residual.max:.6g}); the prescribed law "
            "is compatible with the generated trace only for special parameter choices"
        )
    if report.degenerate_rows:
        notes.append(f"{report.degenerate_rows} of {len(report.rows)} rows not measurable numerically")

    payload = {
        "params": _params_echo(cfg),
        "residuals": {
            "ode_vs_closed": _residual_dict(report.ode_residual),
            "rho_numeric_vs_closed": _residual_dict(report.rho_residual),
            "phi_actual_vs_prescribed": _residual_dict(report.phi_residual),
            "arc_numeric_vs_model": _residual_dict(report.arc_residual),
        },
        "checks": checks,
        "notes": notes,
    }
    _write_atomic(cfg.out_dir, "verify.json", _dump_json(payload))
    return 0 if hard_ok else EXIT_VERIFY_FAILED


def cmd_svg(cfg: RunConfig) -> int:
    params = _build_params(cfg)
    rows = _sample_rows(params, cfg.samples)
    good = [r for r in rows if r.valid.in_domain]
    if not good:
        raise CliError(EXIT_CONFIG, "all samples are outside the curve domain; nothing to plot")
    if "svg-curve" in cfg.outputs:
        _write_atomic(cfg.out_dir, "curve.svg", _svgplot.render_polyline([(r.x, r.y) for r in good]))
    if "svg-rho" in cfg.outputs:
        _write_atomic(cfg.out_dir, "rho.svg", _svgplot.render_polyline([(r.theta, r.rho) for r in good]))
    if "svg-lcg" in cfg.outputs:
        points = _lcg.lcg_closed_form(params, cfg.samples)
        _write_atomic(cfg.out_dir, "lcg.svg", _svgplot.render_polyline([(pt.x, pt.y) for pt in points]))
    return 0


_COMMANDS = {"sample": cmd_sample, "lcg": cmd_lcg, "verify": cmd_verify, "svg": cmd_svg}


def main(argv: list[str] | None = None) -> int:
    parser, subparsers = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        usage = subparsers[args.command].format_usage()
        cfg = _merge_config(args, usage)
        return _COMMANDS[args.command](cfg)
    except CliError as exc:
        _diagnose(str(exc))
        return exc.code
    except _diffgeo.OdeBlowUp as exc:
        _diagnose(str(exc))
        return EXIT_CONFIG


def main_entry() -> None:
    sys.exit(main(sys.argv[1:]))
