"""Command line interface.

Subcommands:
  run          full pipeline: simulate, detect, mollify, write outputs
  detect       classify a nodal-values CSV and print its edge report JSON
  demo-tophat  reproduce the discontinuous-tophat showcase data

Exit codes: 0 success, 1 configuration error, 2 numerical abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import edges, spectral
from .burgers import InstabilityError, SimulationConfig
from .mollify import mollify_at
from .pipeline import ConfigError, load_config, run_pipeline


def _common(parser):
    parser.add_argument("--config", type=Path, default=None, help="key=value config file")
    parser.add_argument("--outdir", type=Path, default=None, help="output directory")
    parser.add_argument("--quiet", action="store_true", help="suppress progress messages")


def _load(args) -> SimulationConfig:
    if args.config is None:
        return SimulationConfig().validate()
    return load_config(args.config)


def _say(args, msg):
    if not args.quiet:
        print(msg)


def cmd_run(args):
    config = _load(args)
    manifest, processed, result = run_pipeline(config, args.outdir)
    labels = [snap.edge_report.label.value for snap in processed]
    _say(args, f"integrated {result.steps} steps, {len(processed)} snapshots")
    _say(args, f"labels: {' '.join(sorted(set(labels), key=labels.index))}")
    _say(args, f"manifest written to {manifest}")
    return 0


def _read_nodal_csv(path):
    if not Path(path).is_file():
        raise ConfigError(f"input field file not found: {path}")
    rows = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            try:
                rows.append(float(parts[-1]))
            except ValueError:
                if not rows:  # header line
                    continue
                raise ConfigError(f"{path}: non-numeric value {parts[-1]!r}")
    if len(rows) < 9:
        raise ConfigError(f"{path}: need at least 9 nodal values, got {len(rows)}")
    return np.asarray(rows)


def cmd_detect(args):
    config = _load(args)
    nodal = _read_nodal_csv(args.field)
    grid = spectral.build_grid(len(nodal) - 1)
    field = spectral.SpectralField.from_nodal(grid, nodal)
    det = config.detection()
    fit, is_smooth = edges.classify_smoothness(field.modal, det)
    thresholds = edges.resolve_thresholds(det, float(np.abs(nodal).max()))
    if is_smooth:
        report = edges.smooth_report(fit, thresholds)
    else:
        profile = edges.minmod_profile(field.modal, det.factors())
        candidates = edges.find_peaks(profile, grid, thresholds)
        if not candidates:
            report = edges.smooth_report(fit, thresholds)
        else:
            report = edges.reject_spurious(profile, candidates, grid, thresholds, fit)
    doc = json.dumps(report.as_dict(), indent=2, sort_keys=True)
    print(doc)
    if args.outdir is not None:
        args.outdir.mkdir(parents=True, exist_ok=True)
        (args.outdir / "edge_report.json").write_text(doc + "\n")
    return 0


def tophat_nodal(grid, lo=-0.7, hi=-0.2):
    return ((grid.nodes > lo) & (grid.nodes < hi)).astype(float)


def cmd_demo_tophat(args):
    config = _load(args)
    outdir = args.outdir if args.outdir is not None else Path("tophat-demo")
    outdir.mkdir(parents=True, exist_ok=True)
    grid = spectral.build_grid(config.order)
    field = spectral.SpectralField.from_nodal(grid, tophat_nodal(grid))
    det = config.detection()
    fit, _ = edges.classify_smoothness(field.modal, det)
    thresholds = edges.resolve_thresholds(det, 1.0)
    profile = edges.minmod_profile(field.modal, det.factors())
    candidates = edges.find_peaks(profile, grid, thresholds)
    report = edges.reject_spurious(profile, candidates, grid, thresholds, fit)

    xs = np.linspace(-1.0, 1.0, 1001)
    truth = ((xs > -0.7) & (xs < -0.2)).astype(float)
    raw = spectral.synthesize(field.modal, xs)
    recon = mollify_at(
        field, report, xs, config.mollifier_theta, config.mollifier_p_scale
    )
    from .pipeline import _write_csv

    _write_csv(
        outdir / "tophat_reconstruction.csv",
        ("x", "h_true", "u_raw", "u_mollified"),
        (xs, truth, raw, recon),
    )
    _write_csv(
        outdir / "tophat_minmod.csv", ("x", "minmod"),
        (profile.abscissae, profile.minmod),
    )
    (outdir / "tophat_report.json").write_text(
        json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n"
    )
    _say(args, f"edges at {[round(e.location, 4) for e in report.edges]}")
    _say(args, f"demo data written to {outdir}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chebshock",
        description="Chebyshev pseudospectral shock detection and Gibbs removal",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate, post-process and write outputs")
    _common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_det = sub.add_parser("detect", help="edge report for a nodal-values CSV")
    p_det.add_argument("field", type=Path, help="CSV of nodal values on a CGL grid")
    _common(p_det)
    p_det.set_defaults(func=cmd_detect)

    p_demo = sub.add_parser("demo-tophat", help="tophat detection/mollification demo")
    _common(p_demo)
    p_demo.set_defaults(func=cmd_demo_tophat)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except InstabilityError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
