"""Command-line front end: figure presets and ad-hoc queries as CSV tables.

    urafocus beamdepth --preset fig3 --out fig3.csv
    urafocus ebrd --n1 128 --n2 8 --phi-deg 30
    urafocus sumrate --preset fig6 --trials 50 --seed 1

Exit codes: 0 success, 2 config error, 3 numeric-domain error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys

import numpy as np

from . import __version__
from .channel import array_gain_exact, array_gain_fresnel
from .config import ConfigError, ExperimentConfig, angle_grid, from_dict, load, preset, validate
from .focusing import beamdepth, ebrd, eta_sweep
from .geometry import ParameterDomainError, SphericalPoint, build_ura
from .multiuser import SumRateExperiment, build_codebook, region_bounds, run_monte_carlo, summarize

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4

FIG5_ETAS = [1, 4, 16, 0.016, 0.004]


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return "inf" if math.isinf(v) else repr(float(v))
    return str(v)


def _array(p: dict, carrier_default: float = 28e9):
    a = p["array"]
    return build_ura(a["n1"], a["n2"], a.get("carrier_hz", carrier_default), a.get("spacing_factor", 0.5))


def _focus_ranges(p: dict, cfg) -> list[float]:
    if "rf_m" in p:
        return [float(r) for r in np.atleast_1d(p["rf_m"])]
    return [float(f) * cfg.rayleigh_m for f in np.atleast_1d(p["rf_fraction"])]


def _angles(p: dict, phi_default=0.0, theta_default=90.0):
    return angle_grid(p.get("phi_deg", phi_default)), angle_grid(p.get("theta_deg", theta_default))


def cmd_beamdepth(exp: ExperimentConfig):
    p = exp.params
    cfg = _array(p)
    phis, thetas = _angles(p)
    cols = ["phi_rad", "theta_rad", "rf_m", "bd_m", "rf_min_m", "rf_max_m", "alpha_3db"]
    rows = []
    for rf in _focus_ranges(p, cfg):
        for theta in thetas:
            for phi in phis:
                res = beamdepth(cfg, float(phi), float(theta), rf)
                rows.append([phi, theta, rf, float(res.bd_m), res.rf_min_m, float(res.rf_max_m), res.alpha_3db])
    return cols, rows


def cmd_eta_sweep(exp: ExperimentConfig):
    p = exp.params
    phis, thetas = _angles(p)
    kwargs = {"rf_fraction": p["rf_fraction"]} if "rf_fraction" in p else {"r_f": p["rf_m"]}
    if "etas" in p:
        kwargs["etas"] = p["etas"]
    cols = ["eta_target", "eta", "n1", "n2", "phi_rad", "theta_rad", "rayleigh_m", "alpha_3db", "combined_factor", "rf_m",
            "bd_m", "rf_min_m", "rf_max_m", "ebrd_m"]
    rows = []
    for theta in thetas:
        for phi in phis:
            for r in eta_sweep(p["n_bs"], p.get("carrier_hz", 28e9), float(phi), float(theta), **kwargs):
                bd = r.beamdepth
                rows.append([r.target_eta, r.eta, r.n1, r.n2, phi, theta, r.rayleigh_m, r.alpha_3db, r.combined_factor,
                             r.rf_m, float(bd.bd_m), bd.rf_min_m, float(bd.rf_max_m), r.ebrd_m])
    return cols, rows


def cmd_ebrd(exp: ExperimentConfig):
    from .focusing import factor_pair

    p = exp.params
    phis, thetas = _angles(p)
    if "array" in p:
        arrays = [_array(p)]
    else:
        carrier = p.get("carrier_hz", 28e9)
        arrays = [build_ura(*factor_pair(p["n_bs"], e), carrier) for e in p.get("etas", FIG5_ETAS)]
    cols = ["eta", "phi_rad", "theta_rad", "ebrd_m", "n1", "n2"]
    rows = []
    for cfg in arrays:
        for theta in thetas:
            for phi in phis:
                rows.append([cfg.eta, phi, theta, ebrd(cfg, float(phi), float(theta)).ebrd_m, cfg.n1, cfg.n2])
    return cols, rows


def cmd_gain_profile(exp: ExperimentConfig):
    p = exp.params
    cfg = _array(p)
    phis, thetas = _angles(p)
    phi, theta = float(phis[0]), float(thetas[0])
    rf = _focus_ranges(p, cfg)[0]
    z_lo = p.get("z_min_m", cfg.near_field_min_m)
    z_hi = p.get("z_max_m", 10.0 * cfg.rayleigh_m)
    z = np.union1d(np.geomspace(z_lo, z_hi, int(p.get("points", 1024))), [rf])
    exact = array_gain_exact(cfg, SphericalPoint(phi, theta, rf), z)
    closed = array_gain_fresnel(cfg, (phi, theta), rf, z)
    return ["z_m", "gain_exact", "gain_fresnel"], [list(r) for r in zip(z, exact, closed)]


def _resolve_region(p: dict, carrier: float):
    region = p.get("region", "ebrd")
    if isinstance(region, dict):
        ref = build_ura(*region["of"], carrier) if "of" in region else None
        return region["name"], ref
    if isinstance(region, list):
        return tuple(region), None
    return region, None


def cmd_sumrate(exp: ExperimentConfig):
    p = exp.params
    carrier = p.get("carrier_hz", 28e9)
    cols = ["snr_db", "codebook", "eta", "mean_sum_rate_bps_hz", "ci95_low", "ci95_high", "trials", "seed",
            "n1", "n2"]
    rows = []
    if exp.trials == 0:
        return cols, rows
    region, ref = _resolve_region(p, carrier)
    if ref is not None:
        region = region_bounds(ref, region)
    for curve in p["curves"]:
        sim = SumRateExperiment(
            n1=curve["n1"], n2=curve["n2"], n_users=p["n_users"], snr_db=tuple(p["snr_db"]), trials=exp.trials,
            seed=exp.seed, codebook=curve["codebook"], carrier_hz=carrier, n_rf=p.get("n_rf", 4),
            rings=p.get("rings", 8), region=region, channel_model=p.get("channel_model", "expanded"))
        cfg = sim.array()
        book = build_codebook(cfg, sim.codebook, sim.rings)
        for s in summarize(run_monte_carlo(sim, book)):
            rows.append([s.snr_db, sim.codebook, cfg.eta, s.mean, s.ci95_low, s.ci95_high, s.trials, exp.seed,
                         cfg.n1, cfg.n2])
    return cols, rows


COMMANDS = {
    "beamdepth": cmd_beamdepth,
    "ebrd": cmd_ebrd,
    "eta-sweep": cmd_eta_sweep,
    "gain-profile": cmd_gain_profile,
    "sumrate": cmd_sumrate,
}


def render_csv(exp: ExperimentConfig, cols, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# urafocus {__version__}\n")
    buf.write(f"# command: {exp.kind}\n")
    buf.write(f"# config: {exp.digest()}\n")
    buf.write(f"# seed: {exp.seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def gnuplot_script(csv_path: str, cols) -> str:
    xcol = 1
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        f"set xlabel '{cols[0]}'",
    ]
    ycols = [i + 1 for i, c in enumerate(cols) if i + 1 != xcol and c not in ("codebook",)]
    plots = ", ".join(f"'{os.path.basename(csv_path)}' using {xcol}:{y} with linespoints" for y in ycols[:3])
    lines.append(f"plot {plots}")
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="urafocus", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"urafocus {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON experiment file")
        sp.add_argument("--preset", help="fig3 | fig4 | fig5 | fig6 | fig7 | gain")
        sp.add_argument("--out", help="CSV path (default: stdout)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--trials", type=int)
        sp.add_argument("--gnuplot", action="store_true", help="also write <out>.gp")
        sp.add_argument("--n1", type=int)
        sp.add_argument("--n2", type=int)
        sp.add_argument("--carrier-hz", type=float)
        sp.add_argument("--phi-deg", type=float, help="azimuth in degrees")
        sp.add_argument("--theta-deg", type=float, help="elevation from +z in degrees (90 = boresight)")
        sp.add_argument("--rf-m", type=float, help="focus range in metres")
    return parser


# --n1/--n2 queries without a config file; --rf-m replaces the focus fraction
_QUICK_DEFAULTS = {
    "beamdepth": {"phi_deg": 0, "theta_deg": 90, "rf_fraction": 0.05},
    "ebrd": {"phi_deg": 0, "theta_deg": 90},
    "gain-profile": {"phi_deg": 0, "theta_deg": 90, "rf_fraction": 0.05},
}


def _experiment(args) -> ExperimentConfig:
    if args.config and args.preset:
        raise ConfigError("use either --config or --preset, not both")
    if args.config:
        exp = load(args.config)
    elif args.preset:
        exp = preset(args.preset)
    else:
        if args.n1 is None or args.n2 is None:
            raise ConfigError("need --config, --preset, or --n1/--n2 for a quick query")
        if args.command not in _QUICK_DEFAULTS:
            raise ConfigError(f"{args.command} needs --config or --preset")
        doc = {"kind": args.command, "array": {"n1": args.n1, "n2": args.n2}, **_QUICK_DEFAULTS[args.command]}
        exp = from_dict(doc, "command line")
    if exp.kind != args.command:
        raise ConfigError(f"config kind {exp.kind!r} does not match subcommand {args.command!r}", None, exp.source)
    p = exp.params
    if args.n1 is not None or args.n2 is not None or args.carrier_hz is not None:
        arr = dict(p.get("array", {}))
        for key, val in (("n1", args.n1), ("n2", args.n2), ("carrier_hz", args.carrier_hz)):
            if val is not None:
                arr[key] = val
        p["array"] = arr
    if args.phi_deg is not None:
        p["phi_deg"] = args.phi_deg
    if args.theta_deg is not None:
        p["theta_deg"] = args.theta_deg
    if args.rf_m is not None:
        p.pop("rf_fraction", None)
        p["rf_m"] = args.rf_m
    if args.seed is not None:
        exp.seed = args.seed
    if args.trials is not None:
        exp.trials = args.trials
    if args.out is not None:
        exp.out = args.out
    if args.gnuplot and not exp.out:
        raise ConfigError("--gnuplot needs an output path (--out or 'out' in the config)")
    return validate(exp)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        exp = _experiment(args)
        cols, rows = COMMANDS[args.command](exp)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParameterDomainError, ArithmeticError) as exc:
        print(f"numeric domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    text = render_csv(exp, cols, rows)
    try:
        if exp.out:
            with open(exp.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            if args.gnuplot:
                with open(exp.out + ".gp", "w", encoding="utf-8") as fh:
                    fh.write(gnuplot_script(exp.out, cols))
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"I/O error writing {exp.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
