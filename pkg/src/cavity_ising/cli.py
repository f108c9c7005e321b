"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 physics-regime or
convergence failure, 4 size limit.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Optional, Sequence

from .errors import ConfigError, RegimeError, SizeLimitError
from .experiments import (ScenarioConfig, run_cluster, run_comparison,
                          run_single, run_sweep, sweep_table)
from .model import calibrate_jz_report, effective_jz

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REGIME = 3
EXIT_SIZE = 4


def _load_config(path: str) -> ScenarioConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return ScenarioConfig.from_json_dict(doc)


def _cmd_simulate(args) -> int:
    config = _load_config(args.config)
    if args.out_csv or args.out_json:
        config = dataclasses.replace(config, csv_path=args.out_csv or config.csv_path,
                                     json_path=args.out_json or config.json_path)
    series = run_single(config)
    print(f"simulated {len(series.times)} samples over "
          f"[{series.times[0]:g}, {series.times[-1]:g}] ns")
    for name in series.channels:
        print(f"  channel {name}")
    if config.csv_path:
        print(f"wrote {config.csv_path}")
    if config.json_path:
        print(f"wrote {config.json_path}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    report = run_comparison(_load_config(args.config))
    cal = report.calibration
    cmp_ = report.comparison
    print(f"J_z used: {report.jz_used:.6e} GHz ({report.config.jz_convention})")
    print(f"calibration: fit over {cal.samples_used} samples, "
          f"residual {cal.residual_rms:.2e} rad, convention match: {cal.convention}")
    print(f"discrepancy (p_g1g2): max_abs {cmp_.max_abs_diff:.4e} at "
          f"t={cmp_.time_of_max:.1f} ns, max_rel {cmp_.max_rel_diff:.4e} "
          f"({cmp_.rel_points_used} points)")
    print(f"photon occupation max: {report.photon_max:.4e}")
    verdict = "passed" if report.convergence.passed else "FAILED"
    print(f"Fock convergence n_max {report.convergence.base_n_max} -> "
          f"{report.convergence.check_n_max}: {verdict} "
          f"(max change {report.convergence.max_change():.2e})")
    if report.config.csv_path:
        print(f"wrote {report.config.csv_path}")
    if report.config.json_path:
        print(f"wrote {report.config.json_path}")
    print(f"duration: {report.duration_s:.2f} s")
    return EXIT_OK


def _cmd_cluster(args) -> int:
    report = run_cluster(args.n, args.boundary, args.jz, json_path=args.out_json)
    stab = report.stabilizers_after_corrections
    print(f"N={report.N} {report.boundary} chain, phase pi gate")
    if report.gate_time_ns is not None:
        print(f"gate time: {report.gate_time_ns:.1f} ns at J_z={report.jz:.6e} GHz")
    print("single-site entropies:",
          " ".join(f"{s:.6f}" for s in report.single_entropies))
    print("stabilizers after corrections:",
          " ".join(f"{x:+.9f}" for x in stab.expectations))
    print(f"fidelity to canonical cluster state: {stab.fidelity:.12f}")
    if report.witness is not None:
        print(f"local-unitary witness fidelity: {report.witness.fidelity:.12f}")
    if report.ghz is not None:
        print(f"GHZ-equivalent: {report.ghz.passed}")
    if args.out_json:
        print(f"wrote {args.out_json}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad sweep values {args.values!r}: {exc}") from exc
    points = run_sweep(_load_config(args.config), args.axis, values)
    print(sweep_table(points))
    return EXIT_OK


def _cmd_jz(args) -> int:
    config = _load_config(args.config)
    if args.convention == "calibrated":
        cal = calibrate_jz_report(config.params)
        print(f"J_z (calibrated): {cal.jz:.9e} GHz")
        print(f"  fit: {cal.samples_used} samples over {cal.window_ns:.1f} ns, "
              f"residual {cal.residual_rms:.2e} rad")
        print(f"  single-site rates: "
              + " ".join(f"{e:.3e}" for e in cal.epsilon))
        if cal.jz_paper_literal is not None:
            print(f"  paper_literal: {cal.jz_paper_literal:.9e} GHz")
        if cal.jz_normalized is not None:
            print(f"  normalized:    {cal.jz_normalized:.9e} GHz")
        print(f"  closest convention: {cal.convention}")
    else:
        value = effective_jz(config.params, args.convention)
        print(f"J_z ({args.convention}): {value:.9e} GHz")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-ising",
        description="Coupled-cavity Ising simulator: full model, effective "
                    "model, cluster-state generation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the full model with configured channels")
    p.add_argument("--config", required=True)
    p.add_argument("--out-csv", default=None)
    p.add_argument("--out-json", default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="full model against the calibrated Ising model")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("cluster", help="generate and verify a cluster state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--boundary", choices=["periodic", "open"], required=True)
    p.add_argument("--jz", type=float, default=None)
    p.add_argument("--out-json", default=None)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("sweep", help="comparison runs across one parameter axis")
    p.add_argument("--config", required=True)
    p.add_argument("--axis", choices=["Omega", "g", "Jc", "detuning"], required=True)
    p.add_argument("--values", required=True, help="comma-separated values")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("jz", help="effective Ising rate for a configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--convention", default="calibrated",
                   choices=["paper_literal", "normalized", "calibrated"])
    p.set_defaults(func=_cmd_jz)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SizeLimitError as exc:
        print(f"size limit: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except RegimeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REGIME


if __name__ == "__main__":
    sys.exit(main())
