"""Command-line front end.

    lamesl2 spectrum  --m 3/2 --l 1 --k2 0.5 [--format csv]
    lamesl2 verify    --m 2 --l 1 --k2 0.3 [--fixtures]
    lamesl2 band-scan --m 1 --l 0 --k2 0.5 --emin 0 --emax 3 --samples 301
    lamesl2 potential --m 1 --l 1 --k2 0.5 --samples 201

Data goes to stdout, diagnostics to stderr. Exit codes: 0 ok, 2 inadmissible
parameters, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import fixtures
from .algebraize import InadmissibleError, LameParameters, lame_potential, parse_index
from .elliptic import EllipticDomainError, EllipticModulus
from .spectra import SpectrumError, band_edge_spectrum
from .verify import (BAND_EDGE_TOL, DEFAULT_TOL, INCONSISTENT, IntegrationError, band_scan,
                     classify_spectrum, spectrum_residuals)

EXIT_OK = 0
EXIT_INADMISSIBLE = 2
EXIT_VERIFY = 3

DEFAULTS = {
    "format": "json",
    "grid": 2001,
    "threshold": 1e-6,
    "tol": BAND_EDGE_TOL,
    "ode_tol": DEFAULT_TOL,
    "samples": 201,
    "emin": 0.0,
    "emax": None,
    "free": False,
    "fixtures": False,
}


class ConfigError(ValueError):
    pass


def format_float(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dump_json(obj) -> str:
    """JSON with every float written to 17 significant digits."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {dump_json(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    return json.dumps(obj)


def write_csv(out, header, rows):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _resolve(args) -> dict:
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("config file must hold a JSON object")
    merged = dict(DEFAULTS)
    merged.update({k.replace("-", "_"): v for k, v in cfg.items()})
    for key, val in vars(args).items():
        if val is not None and key not in ("config", "command", "func"):
            merged[key] = val
    for key in ("m", "l", "k2"):
        if merged.get(key) is None:
            raise ConfigError(f"missing required setting '{key}'")
    return merged


def _setup(cfg):
    params = LameParameters(parse_index(str(cfg["m"])), parse_index(str(cfg["l"])))
    modulus = EllipticModulus(float(cfg["k2"]))
    return params, modulus


def _state_rows(spec, cfg):
    residuals = spectrum_residuals(spec, int(cfg["grid"]))
    classes = classify_spectrum(spec, float(cfg["tol"]))
    rows = []
    for s, res, cls in zip(spec.states, residuals, classes):
        rows.append({"label": s.label, "energy": s.energy, "degeneracy": s.degeneracy,
                     "family": s.family, "classification": cls, "residual": res})
    return rows


def _report(params, modulus, rows, cfg, extra_cols=()):
    cols = ["label", "energy", "degeneracy", "family", "classification", "residual", *extra_cols]
    if cfg["format"] == "csv":
        write_csv(sys.stdout, cols, ([r[c] for c in cols] for r in rows))
    else:
        doc = {"m": str(params.m), "l": str(params.l), "k2": modulus.k2,
               "states": [{c: r[c] for c in cols} for r in rows]}
        sys.stdout.write(dump_json(doc) + "\n")


def cmd_spectrum(cfg) -> int:
    params, modulus = _setup(cfg)
    spec = band_edge_spectrum(params, modulus)
    rows = _state_rows(spec, cfg)
    _report(params, modulus, rows, cfg)
    bad = [r for r in rows if not r["residual"] < float(cfg["threshold"])]
    for r in bad:
        print(f"state {r['label']}: residual {r['residual']:.3g} above threshold", file=sys.stderr)
    return EXIT_VERIFY if bad else EXIT_OK


def _fixture_deviation(spec, params, modulus, rows):
    """Per state: relative distance to the nearest fixture energy."""
    try:
        fx = fixtures.fixture_for(params)
    except fixtures.FixtureNotFound:
        print(f"no fixture for {params}; skipping comparison", file=sys.stderr)
        return None
    ref = fx.energies(modulus.k2)
    for r in rows:
        r["fixture_deviation"] = float(np.min(np.abs(ref - r["energy"])) / max(1.0, abs(r["energy"])))
    return ref


def cmd_verify(cfg) -> int:
    params, modulus = _setup(cfg)
    spec = band_edge_spectrum(params, modulus)
    rows = _state_rows(spec, cfg)
    failed = False
    extra = ()
    if cfg["fixtures"]:
        ref = _fixture_deviation(spec, params, modulus, rows)
        if ref is not None:
            extra = ("fixture_deviation",)
            if any(r["fixture_deviation"] > 1e-10 for r in rows):
                print("energies differ from closed forms", file=sys.stderr)
                failed = True
    for r in rows:
        if not r["residual"] < float(cfg["threshold"]):
            print(f"state {r['label']}: residual {r['residual']:.3g}", file=sys.stderr)
            failed = True
        if r["classification"] == INCONSISTENT:
            print(f"state {r['label']}: discriminant inconsistent with degeneracy", file=sys.stderr)
            failed = True
    _report(params, modulus, rows, cfg, extra)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_band_scan(cfg) -> int:
    params, modulus = _setup(cfg)
    samples = int(cfg["samples"])
    if samples < 2:
        raise ConfigError("samples must be at least 2")
    emin = float(cfg["emin"])
    emax = cfg["emax"]
    if emax is None:
        m, l = float(params.m), float(params.l)
        emax = (m * (m + 1) + l * (l + 1) + 1) * modulus.k2 + 4.0
    grid = np.linspace(emin, float(emax), samples)
    out = band_scan(grid, params, modulus, float(cfg["ode_tol"]), free=bool(cfg["free"]))
    write_csv(sys.stdout, ["energy", "delta", "det"], ((s.energy, s.delta, s.det) for s in out))
    return EXIT_OK


def cmd_potential(cfg) -> int:
    params, modulus = _setup(cfg)
    x = np.linspace(0.0, modulus.period, int(cfg["samples"]))
    v = lame_potential(x, params, modulus)
    write_csv(sys.stdout, ["x", "V"], zip(x.tolist(), np.asarray(v, dtype=float).tolist()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lamesl2",
                                     description="Band edges of associated Lame potentials")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--m", help='rational index, e.g. "2" or "3/2"')
        p.add_argument("--l", help="rational index with l <= m")
        p.add_argument("--k2", type=float, help="parameter k^2 in (0, 1)")
        p.add_argument("--config", help="JSON file with the same keys as the flags")

    def report(p):
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--grid", type=int, help="residual grid size (default 2001)")
        p.add_argument("--threshold", type=float, help="residual threshold (default 1e-6)")
        p.add_argument("--tol", type=float, help="band-edge tolerance on |Delta| - 2")

    p = sub.add_parser("spectrum", help="band-edge energies with residuals")
    common(p), report(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="residuals, classification and fixture comparison")
    common(p), report(p)
    p.add_argument("--fixtures", action="store_true", default=None,
                   help="compare with closed-form energies")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("band-scan", help="Hill discriminant over an energy window (CSV)")
    common(p)
    p.add_argument("--emin", type=float)
    p.add_argument("--emax", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--ode-tol", dest="ode_tol", type=float)
    p.add_argument("--free", action="store_true", default=None, help="force V = 0")
    p.set_defaults(func=cmd_band_scan)

    p = sub.add_parser("potential", help="V(x) over one period (CSV)")
    common(p)
    p.add_argument("--samples", type=int)
    p.set_defaults(func=cmd_potential)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        return args.func(cfg)
    except (InadmissibleError, EllipticDomainError, SpectrumError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE


if __name__ == "__main__":
    sys.exit(main())
