"""Command line interface.

Subcommands: simulate, converge, noise-stats, energy-audit, uniqueness.
Configuration comes from an optional TOML file of flat keys, each of which
can be overridden by a flag.  Exit codes: 0 success, 1 invalid config,
2 numerical abort, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .evolve import BlowupError, IntegratorConfig, run
from .energetics import evaluate_report
from .gauge import prepared_initial_datum, to_v
from .lab import (
    LabConfig,
    identity_residuals,
    make_datum,
    run_epsilon_family,
    run_noise_stats,
    uniqueness_probe,
    write_distances_csv,
    write_energy_csv,
    write_identity_csv,
    write_manifest,
    write_modulus_csv,
    write_stats_csv,
)
from .noise import Mollifier, build_noise, sample_gaussian
from .spectral import get_grid

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

F_DRIFT_THRESHOLD = 1e-6


def _parse_eps_range(text: str) -> tuple[float, ...]:
    """Accept '2^-2..2^-6' ranges or comma-separated floats."""
    def one(tok: str) -> float:
        tok = tok.strip()
        if "^" in tok:
            base, exp = tok.split("^")
            return float(base) ** float(exp)
        return float(tok)

    if ".." in text:
        lo, hi = text.split("..")
        a, b = one(lo), one(hi)
        out = []
        e = a
        while e >= b * (1 - 1e-12):
            out.append(e)
            e /= 2.0
        return tuple(out)
    return tuple(one(t) for t in text.split(","))


def build_config(args: argparse.Namespace) -> LabConfig:
    values: dict = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        with path.open("rb") as fh:
            values.update(tomllib.load(fh))
    overrides = {
        "N": args.N, "p": args.p, "lam": args.lam, "mollifier": args.mollifier,
        "T": args.T, "dt": args.dt, "seed": args.seed, "datum": args.datum,
        "amplitude": args.amplitude, "sample_count": getattr(args, "samples", None),
    }
    for key, val in overrides.items():
        if val is not None:
            values[key] = val
    if getattr(args, "eps", None):
        values["epsilon_list"] = _parse_eps_range(args.eps)
    if getattr(args, "no_phase", False):
        values["renormalize_phase"] = False
    if "epsilon_list" in values:
        values["epsilon_list"] = tuple(values["epsilon_list"])
    if "gamma_list" in values:
        values["gamma_list"] = tuple(values["gamma_list"])
    return LabConfig(**values)


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--config", help="TOML config file of flat keys")
    sp.add_argument("--out", default="runs/out", help="output directory")
    sp.add_argument("--N", type=int)
    sp.add_argument("--p", type=float)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--mollifier", choices=["gaussian_rho", "sharp_cutoff_rho",
                                            "bump_chi_numeric"])
    sp.add_argument("--T", type=float)
    sp.add_argument("--dt", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--eps", help="epsilon family, e.g. '2^-2..2^-6' or '0.25,0.125'")
    sp.add_argument("--datum", choices=["constant", "single_mode", "gaussian_bump_spectrum"])
    sp.add_argument("--amplitude", type=float)
    sp.add_argument("--samples", type=int, help="Monte Carlo sample count")
    sp.add_argument("--no-phase", action="store_true",
                    help="disable the C_eps phase renormalization")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torus-snls")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("simulate", "converge", "noise-stats", "energy-audit", "uniqueness"):
        sp = sub.add_parser(name)
        _add_common(sp)
        if name == "simulate":
            sp.add_argument("--scheme", choices=["strang_u", "ifrk4_v"], default="strang_u")
    return ap


def _simulate(cfg: LabConfig, outdir: Path, scheme: str) -> int:
    grid = get_grid(cfg.N)
    coeffs = sample_gaussian(cfg.seed, cfg.stream_id, cfg.N)
    noise = build_noise(coeffs, Mollifier(cfg.mollifier), cfg.epsilon_list[0])
    v0 = make_datum(cfg.datum, grid, cfg.amplitude)
    u_state = prepared_initial_datum(v0, noise, cfg.p, cfg.lam,
                                     renormalize_phase=cfg.renormalize_phase)
    state = u_state if scheme == "strang_u" else to_v(u_state)
    n_steps = round(cfg.T / cfg.dt)
    stride = max(1, n_steps // cfg.snapshot_count)
    icfg = IntegratorConfig(scheme=scheme, dt=cfg.dt, t_end=cfg.T, snapshot_stride=stride)
    traj = run(state, icfg)
    reports = [evaluate_report(s if s.gauge_tag == "v_gauge" else to_v(s))
               for s in traj.snapshots]
    write_manifest(outdir, cfg, {"scheme": scheme})
    write_energy_csv(outdir, reports)
    return EXIT_OK


def _converge(cfg: LabConfig, outdir: Path) -> int:
    result = run_epsilon_family(cfg)
    write_manifest(outdir, cfg, {"C_eps_list": result.C_eps_list,
                                 "failed": result.failed})
    write_distances_csv(outdir, result)
    write_modulus_csv(outdir, result)
    write_energy_csv(outdir, result.reference_reports)
    return EXIT_NUMERICAL if result.failed else EXIT_OK


def _noise_stats(cfg: LabConfig, outdir: Path) -> int:
    rows = run_noise_stats(cfg)
    write_manifest(outdir, cfg)
    write_stats_csv(outdir, rows)
    return EXIT_OK


def _energy_audit(cfg: LabConfig, outdir: Path) -> int:
    """Check F-conservation (lambda = 0) or the E drift along ifrk4_v."""
    grid = get_grid(cfg.N)
    coeffs = sample_gaussian(cfg.seed, cfg.stream_id, cfg.N)
    noise = build_noise(coeffs, Mollifier(cfg.mollifier), cfg.epsilon_list[0])
    v0 = make_datum(cfg.datum, grid, cfg.amplitude)
    state = to_v(prepared_initial_datum(v0, noise, cfg.p, cfg.lam))
    n_steps = round(cfg.T / cfg.dt)
    stride = max(1, n_steps // cfg.snapshot_count)
    icfg = IntegratorConfig(scheme="ifrk4_v", dt=cfg.dt, t_end=cfg.T, snapshot_stride=stride)
    traj = run(state, icfg)
    reports = [evaluate_report(s) for s in traj.snapshots]
    write_manifest(outdir, cfg)
    write_energy_csv(outdir, reports)
    write_identity_csv(outdir, identity_residuals(cfg))
    F0 = reports[0].F
    drift = max(abs(r.F - F0) for r in reports) / max(abs(F0), 1e-300)
    print(f"F relative drift over [0, {cfg.T}]: {drift:.3e}")
    if cfg.lam == 0.0 and drift > F_DRIFT_THRESHOLD:
        print(f"drift exceeds threshold {F_DRIFT_THRESHOLD:g}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _uniqueness(cfg: LabConfig, outdir: Path) -> int:
    report = uniqueness_probe(cfg, dt_list=(cfg.dt, cfg.dt / 2.0))
    write_manifest(outdir, cfg, {"uniqueness": {str(k): v for k, v in report["gaps"].items()}})
    for dt, gap in report["gaps"].items():
        print(f"dt={dt:g}: cross-integrator H^{report['gamma']} gap {gap:.3e}")
    return EXIT_OK


def cli_main(argv: list[str] | None = None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        cfg = build_config(args)
    except (ValueError, TypeError, OSError, tomllib.TOMLDecodeError) as err:
        print(f"invalid configuration: {err}", file=sys.stderr)
        return EXIT_CONFIG
    outdir = Path(args.out)
    try:
        if args.command == "simulate":
            return _simulate(cfg, outdir, args.scheme)
        if args.command == "converge":
            return _converge(cfg, outdir)
        if args.command == "noise-stats":
            return _noise_stats(cfg, outdir)
        if args.command == "energy-audit":
            return _energy_audit(cfg, outdir)
        if args.command == "uniqueness":
            return _uniqueness(cfg, outdir)
        print(f"unknown command {args.command}", file=sys.stderr)
        return EXIT_CONFIG
    except (BlowupError, FloatingPointError) as err:
        print(f"numerical abort: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as err:
        print(f"I/O failure: {err}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
