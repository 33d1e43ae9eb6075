"""Command line front end: scenario files, parameter sweeps and figure presets.

Scenario files are INI text::

    [link]
    wavelength = 0.125        ; optional, meters
    spacing = lambda/3        ; optional, defaults to wavelength / 3
    transmit_snr_db = 90
    q = 0.5

    [irs]
    length_y = 8              ; or m_y / m_z element counts
    length_z = 8              ; ``columns = 1`` gives a single column

    [bs]                      ; and [user]
    range = 10
    zenith = pi/3
    azimuth = pi/6

    [bs_array]                ; optional, selects the multi-antenna model
    n_y = 3
    n_z = 3
    spacing = lambda/2

Numeric fields accept arithmetic on ``pi`` and ``lambda`` (the wavelength).
"""

from __future__ import annotations

import argparse
import ast
import configparser
import io
import math
import operator
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Optional

import numpy as np

from . import kernels
from .channel import ConfigurationError, Scenario, exact_max_snr, miso_exact_max_snr
from .geometry import BORESIGHT_MARGIN, BsArray, IrsPanel, Placement, boresight_margin, odd_count_for
from .miso_analysis import miso_bounds, miso_integral_snr
from .numerics import QuadratureError
from .pattern import GainPattern
from .ula_analysis import ula_asymptotic_snr, ula_closed_snr, ula_integral_snr
from .upa_analysis import SnrReport, asymptotic_snr, integral_snr, snr_bounds, to_db
from .upw_model import upw_snr

__all__ = [
    "AXES",
    "FIGURES",
    "SweepSpec",
    "load_scenario",
    "parse_scenario",
    "run_eval",
    "run_sweep",
    "sweep_rows",
    "write_csv",
    "main",
]

DEFAULT_WAVELENGTH = 0.125

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

AXES = ("irs_size_L", "link_distance_rq", "ula_length_Lz", "miso_size")
BASE_COLUMNS = ("axis_value", "snr_exact_db", "snr_integral_db", "snr_lower_db",
                "snr_upper_db", "snr_asymptote_db", "snr_upw_db")


class ConfigError(ValueError):
    """Scenario file could not be parsed or validated."""


# --- expression parsing ------------------------------------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def parse_number(text: str, names: Optional[dict] = None) -> float:
    """Evaluate a small arithmetic expression such as ``3*pi/4`` or ``lambda/3``."""
    env = {"pi": math.pi}
    if names:
        env.update(names)
    # "lambda" is a keyword, so it is renamed before parsing
    src = text.strip().replace("lambda", "_lam")
    if "lambda" in env:
        env["_lam"] = env.pop("lambda")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError:
        raise ValueError(f"cannot parse {text!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in env:
            return float(env[node.id])
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ValueError(f"unsupported expression {text!r}")

    value = ev(tree)
    if not math.isfinite(value):
        raise ValueError(f"{text!r} is not finite")
    return value


# --- scenario files ----------------------------------------------------------

def _get(cp, section, key, names=None, default=None, required=True):
    if not cp.has_option(section, key):
        if default is not None or not required:
            return default
        raise ConfigError(f"[{section}] missing field {key!r}")
    raw = cp.get(section, key)
    try:
        return parse_number(raw, names)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from None


def _placement(cp, section):
    if not cp.has_section(section):
        raise ConfigError(f"missing section [{section}]")
    try:
        return Placement.from_angles(_get(cp, section, "range"), _get(cp, section, "zenith"),
                                     _get(cp, section, "azimuth"))
    except ValueError as exc:
        raise ConfigError(f"[{section}] {exc}") from None


def _panel(cp, spacing, names):
    sec = "irs"
    if not cp.has_section(sec):
        raise ConfigError("missing section [irs]")

    def count(axis):
        n = _get(cp, sec, f"m_{axis}", required=False)
        if n is not None:
            if n != int(n):
                raise ConfigError(f"[irs] m_{axis} must be an integer")
            return int(n)
        length = _get(cp, sec, f"length_{axis}", names, required=False)
        if length is None:
            raise ConfigError(f"[irs] needs m_{axis} or length_{axis}")
        if not length > 0:
            raise ConfigError(f"[irs] length_{axis} must be positive")
        return odd_count_for(length, spacing)

    columns = _get(cp, sec, "columns", required=False)
    m_y = 1 if columns == 1 else count("y")
    m_z = count("z")
    try:
        return IrsPanel(m_y, m_z, spacing)
    except ValueError as exc:
        raise ConfigError(f"[irs] {exc}") from None


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    if not cp.has_section("link"):
        cp.add_section("link")
    lam = _get(cp, "link", "wavelength", default=DEFAULT_WAVELENGTH)
    if not lam > 0:
        raise ConfigError("[link] wavelength must be positive")
    names = {"lambda": lam}
    spacing = _get(cp, "link", "spacing", names, default=lam / 3.0)
    if not spacing > 0:
        raise ConfigError("[link] spacing must be positive")
    snr_db = _get(cp, "link", "transmit_snr_db", default=90.0)
    try:
        pattern = GainPattern(_get(cp, "link", "q", default=0.5))
    except ValueError as exc:
        raise ConfigError(f"[link] {exc}") from None
    panel = _panel(cp, spacing, names)
    bs, user = _placement(cp, "bs"), _placement(cp, "user")
    arr = None
    if cp.has_section("bs_array"):
        try:
            n_y, n_z = _get(cp, "bs_array", "n_y"), _get(cp, "bs_array", "n_z")
            arr = BsArray(int(n_y), int(n_z), _get(cp, "bs_array", "spacing", names, default=lam / 2.0), bs)
        except ValueError as exc:
            raise ConfigError(f"[bs_array] {exc}") from None
    try:
        return Scenario(lam, 10.0 ** (snr_db / 10.0), panel, pattern, bs, user, arr)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_scenario(text, source=str(path))


def load_preset(name: str) -> Scenario:
    text = resources.files("xlirs").joinpath("presets", f"{name}.ini").read_text(encoding="utf-8")
    return parse_scenario(text, source=f"preset {name}")


# --- evaluation ----------------------------------------------------------------

def _is_linear(scn):
    return scn.panel.m_y == 1


def _attempt(errors, name, fn):
    try:
        return fn()
    except (QuadratureError, ArithmeticError, ValueError) as exc:
        errors[name] = f"{type(exc).__name__}: {exc}"
        return None


def run_eval(scn: Scenario) -> SnrReport:
    """Evaluate every model that applies to ``scn``.

    Entries that do not apply are ``None``; failures are recorded in
    ``errors`` under the component name.
    """
    err = {}
    q = scn.pattern.q
    if scn.bs_array is not None:
        n = scn.bs_array.count
        exact = _attempt(err, "exact", lambda: miso_exact_max_snr(scn))
        integral = _attempt(err, "integral", lambda: miso_integral_snr(scn))
        bounds = _attempt(err, "bounds", lambda: miso_bounds(scn))
        lower, upper = bounds if bounds else (None, None)
        return SnrReport(exact, integral, lower, upper, None,
                         _attempt(err, "upw", lambda: n * upw_snr(scn)), err)
    exact = _attempt(err, "exact", lambda: exact_max_snr(scn))
    upw = _attempt(err, "upw", lambda: upw_snr(scn))
    if _is_linear(scn):
        integral = _attempt(err, "integral", lambda: ula_integral_snr(scn))
        asym = _attempt(err, "asymptote", lambda: ula_asymptotic_snr(scn)) if q == 0.5 else None
        return SnrReport(exact, integral, None, None, asym, upw, err)
    integral = _attempt(err, "integral", lambda: integral_snr(scn))
    bounds = _attempt(err, "bounds", lambda: snr_bounds(scn))
    lower, upper = (bounds.lower, bounds.upper) if bounds else (None, None)
    asym = None
    if boresight_margin(scn.panel, scn.bs, scn.user) <= BORESIGHT_MARGIN:
        rho = min(scn.bs.range, scn.user.range) / max(scn.bs.range, scn.user.range)
        asym = _attempt(err, "asymptote", lambda: asymptotic_snr(
            rho, q, scn.wavelength, scn.panel.spacing, scn.transmit_snr))
    return SnrReport(exact, integral, lower, upper, asym, upw, err)


# --- sweeps --------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    axis: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}; choose from {', '.join(AXES)}")
        if not self.start < self.stop:
            raise ValueError("sweep needs from < to")
        if self.points < 2:
            raise ValueError("sweep needs at least 2 points")
        if self.scale not in ("linear", "log"):
            raise ValueError("scale must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0:
            raise ValueError("log sweep needs a positive start")

    def values(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.points)
        return np.linspace(self.start, self.stop, self.points)


def apply_axis(scn: Scenario, axis: str, value: float) -> Scenario:
    d = scn.panel.spacing
    if axis == "irs_size_L":
        m = odd_count_for(value, d)
        return scn.replace(panel=IrsPanel(m, m, d))
    if axis == "miso_size":
        if scn.bs_array is None:
            raise ConfigurationError("miso_size sweep needs a [bs_array] section")
        m = odd_count_for(value, d)
        return scn.replace(panel=IrsPanel(m, m, d))
    if axis == "link_distance_rq":
        return scn.replace(bs=Placement(value, scn.bs.direction))
    if axis == "ula_length_Lz":
        return scn.replace(panel=IrsPanel(1, odd_count_for(value, d), d))
    raise ValueError(f"unknown axis {axis!r}")


def _report_row(value, rep: SnrReport):
    return [value] + [rep.db(name) for name in SnrReport.FIELDS]


def _fig8_extra(scn):
    return [to_db(ula_closed_snr(scn))]


def _fig9_extra(scn):
    lo, hi = miso_bounds(scn, closed=True)
    return [to_db(lo), to_db(hi)]


def sweep_rows(scn: Scenario, spec: SweepSpec, extra: Optional[Callable] = None,
               workers: Optional[int] = None):
    """Evaluate every sweep point; rows come back in axis order."""
    values = spec.values()
    workers = workers or kernels.worker_count()

    def one(v):
        s = apply_axis(scn, spec.axis, float(v))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rep = run_eval(s)
            row = _report_row(float(v), rep)
            if extra is not None:
                row += extra(s)
        return row, rep.errors

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, values))


def _fmt(v) -> str:
    if v is None:
        return ""
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def write_csv(path, header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(buf.getvalue())


def run_sweep(scn: Scenario, spec: SweepSpec, out_path, extra=None, extra_columns=()):
    """Sweep and write one CSV; returns the errors seen per axis value."""
    results = sweep_rows(scn, spec, extra)
    write_csv(out_path, BASE_COLUMNS + tuple(extra_columns), [r for r, _ in results])
    return {r[0]: e for r, e in results if e}


# --- figure presets ------------------------------------------------------------

@dataclass(frozen=True)
class Figure:
    preset: str
    spec: SweepSpec
    patterns: tuple = ()
    extra: Optional[Callable] = None
    extra_columns: tuple = ()


FIGURES = {
    "fig6a": Figure("fig6a", SweepSpec("irs_size_L", 0.1, 400.0, 25, "log")),
    "fig6b": Figure("fig6b", SweepSpec("irs_size_L", 0.1, 400.0, 25, "log")),
    "fig6c": Figure("fig6c", SweepSpec("irs_size_L", 0.1, 400.0, 25, "log")),
    "fig7": Figure("fig7", SweepSpec("link_distance_rq", 5.0, 100.0, 20), patterns=(0.0, 0.5, 1.0)),
    "fig8": Figure("fig8", SweepSpec("ula_length_Lz", 1.0, 1000.0, 25, "log"),
                   extra=_fig8_extra, extra_columns=("snr_closed_db",)),
    "fig9": Figure("fig9", SweepSpec("miso_size", 0.5, 20.0, 20, "log"),
                   extra=_fig9_extra, extra_columns=("snr_closed_lower_db", "snr_closed_upper_db")),
}


def run_figure(name: str, out_dir) -> list:
    fig = FIGURES[name]
    base = load_preset(fig.preset)
    os.makedirs(out_dir, exist_ok=True)
    jobs = [(f"{name}.csv", base)]
    if fig.patterns:
        jobs = [(f"{name}_q{q:g}.csv", base.replace(pattern=GainPattern(q))) for q in fig.patterns]
    written, errors = [], {}
    for fname, scn in jobs:
        path = os.path.join(out_dir, fname)
        errs = run_sweep(scn, fig.spec, path, fig.extra, fig.extra_columns)
        if errs:
            errors[fname] = errs
        written.append(path)
    return written, errors


# --- entry point ---------------------------------------------------------------

def _print_report(rep: SnrReport, out):
    for name in SnrReport.FIELDS:
        lin = getattr(rep, name)
        if name == "asymptote" and rep.asymptote_unbounded:
            out.write(f"{name:10s} unbounded\n")
        elif lin is None:
            note = rep.errors.get(name, rep.errors.get("bounds", "n/a") if name in ("lower", "upper") else "n/a")
            out.write(f"{name:10s} -  ({note})\n")
        else:
            db = to_db(lin)
            tail = "no dB (negative)" if math.isnan(db) else f"{db:9.4f} dB"
            out.write(f"{name:10s} {lin:.6e}  {tail}\n")


def _numeric_failure(errors) -> bool:
    return any("QuadratureError" in str(v) or "ArithmeticError" in str(v) for v in errors.values())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="xlirs", description="near-field SNR of large reflecting surfaces")
    sub = p.add_subparsers(dest="verb", required=True)
    ev = sub.add_parser("eval", help="evaluate one scenario file")
    ev.add_argument("config")
    sw = sub.add_parser("sweep", help="sweep one axis and write CSV")
    sw.add_argument("config")
    sw.add_argument("--axis", required=True, choices=AXES)
    sw.add_argument("--from", dest="start", type=float, required=True)
    sw.add_argument("--to", dest="stop", type=float, required=True)
    sw.add_argument("--points", type=int, required=True)
    sw.add_argument("--log", action="store_true", help="logarithmic spacing")
    sw.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    fg = sub.add_parser("figure", help="reproduce a figure preset as CSV")
    fg.add_argument("name", choices=sorted(FIGURES))
    fg.add_argument("--out", required=True, help="output directory")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "eval":
            with warnings.catch_warnings():
                warnings.simplefilter("once")
                rep = run_eval(load_scenario(args.config))
            _print_report(rep, sys.stdout)
            return EXIT_NUMERIC if _numeric_failure(rep.errors) else EXIT_OK
        if args.verb == "sweep":
            scn = load_scenario(args.config)
            spec = SweepSpec(args.axis, args.start, args.stop, args.points, "log" if args.log else "linear")
            if args.axis == "miso_size" and scn.bs_array is None:
                raise ConfigError("miso_size sweep needs a [bs_array] section")
            if args.out == "-":
                results = sweep_rows(scn, spec)
                sys.stdout.write(",".join(BASE_COLUMNS) + "\n")
                for row, _ in results:
                    sys.stdout.write(",".join(_fmt(v) for v in row) + "\n")
                errs = {r[0]: e for r, e in results if e}
            else:
                errs = run_sweep(scn, spec, args.out)
            for value, e in errs.items():
                print(f"warning: at {value:g}: {e}", file=sys.stderr)
            return EXIT_NUMERIC if any(_numeric_failure(e) for e in errs.values()) else EXIT_OK
        written, errs = run_figure(args.name, args.out)
        for path in written:
            print(path)
        return EXIT_NUMERIC if any(_numeric_failure(e) for f in errs.values() for e in f.values()) else EXIT_OK
    except (ConfigError, ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
