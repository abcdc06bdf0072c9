"""Orchestration and I/O for the simulate/detect/mollify pipeline.

Loads flat key=value run configurations, applies the classify -> peak
search -> spurious rejection decision tree to simulation snapshots,
dispatches the matching mollifier, and persists CSV snapshots plus a
JSON manifest for plotting and regression.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from . import edges, spectral
from .burgers import RunResult, SimulationConfig, SolverState, run_simulation
from .mollify import MollifyError, mollify as apply_mollifier


class ConfigError(ValueError):
    pass


class Treatment(str, Enum):
    NONE = "None"
    TWO_SIDED = "TwoSided"
    ONE_SIDED = "OneSided"


@dataclass(frozen=True, eq=False)
class ProcessedSnapshot:
    """One snapshot after the detect/classify/mollify decision tree."""

    time: float
    raw_nodal: np.ndarray
    modal: np.ndarray
    edge_report: edges.EdgeReport
    minmod_abscissae: Optional[np.ndarray]
    minmod: Optional[np.ndarray]
    mollified_nodal: Optional[np.ndarray]
    treatment: Treatment
    error: Optional[str] = None

    def __post_init__(self):
        if self.error is None:
            has_moll = self.mollified_nodal is not None
            if (self.treatment is Treatment.NONE) != (not has_moll):
                raise ValueError("mollified output must be present iff treated")
            if (self.treatment is Treatment.NONE) != (
                self.edge_report.label is edges.Label.SMOOTH
            ):
                raise ValueError("treatment None corresponds to label Smooth")


def postprocess_snapshot(state: SolverState, config: SimulationConfig) -> ProcessedSnapshot:
    """Run the decision tree on one snapshot.

    Order: smoothness classification (smooth short-circuits), peak search
    (no candidates also means smooth), then spurious-peak rejection with
    two-sided mollification for resolution-limited fields and one-sided
    mollification at the confirmed edges for discontinuous ones.
    """
    field = state.field
    det = config.detection()
    fit, is_smooth = edges.classify_smoothness(field.modal, det)
    thresholds = edges.resolve_thresholds(det, float(np.abs(field.nodal).max()))
    if is_smooth:
        return ProcessedSnapshot(
            state.time, field.nodal, field.modal,
            edges.smooth_report(fit, thresholds),
            None, None, None, Treatment.NONE,
        )
    profile = edges.minmod_profile(field.modal, det.factors())
    candidates = edges.find_peaks(profile, field.grid, thresholds)
    if not candidates:
        return ProcessedSnapshot(
            state.time, field.nodal, field.modal,
            edges.smooth_report(fit, thresholds),
            profile.abscissae, profile.minmod, None, Treatment.NONE,
        )
    report = edges.reject_spurious(profile, candidates, field.grid, thresholds, fit)
    treatment = (
        Treatment.ONE_SIDED
        if report.label is edges.Label.DISCONTINUOUS
        else Treatment.TWO_SIDED
    )
    try:
        mollified = apply_mollifier(
            field, report, config.mollifier_theta, config.mollifier_p_scale
        )
    except MollifyError as exc:
        return ProcessedSnapshot(
            state.time, field.nodal, field.modal, report,
            profile.abscissae, profile.minmod, None, treatment, error=str(exc),
        )
    return ProcessedSnapshot(
        state.time, field.nodal, field.modal, report,
        profile.abscissae, profile.minmod, mollified, treatment,
    )


def postprocess_all(result: RunResult, config: SimulationConfig):
    """Post-process every snapshot; snapshots are independent tasks."""
    with ThreadPoolExecutor() as pool:
        return list(pool.map(lambda s: postprocess_snapshot(s, config), result.snapshots))


# flat key=value configuration format; keys map 1:1 onto SimulationConfig
_INT_KEYS = {"order", "dissipation_order"}
_STR_KEYS = {"output_dir"}
_OPTIONAL_FLOAT_KEYS = {"mollifier_theta"}
_KNOWN_KEYS = {f.name for f in fields(SimulationConfig)}


def parse_config(text, source="<config>") -> SimulationConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown config key '{key}'")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate config key '{key}'")
        try:
            if key in _STR_KEYS:
                values[key] = val
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _OPTIONAL_FLOAT_KEYS and val.lower() == "none":
                values[key] = None
            else:
                values[key] = float(val)
        except ValueError:
            raise ConfigError(f"{source}:{lineno}: invalid value for '{key}': {val!r}")
    cfg = SimulationConfig(**values)
    try:
        return cfg.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> SimulationConfig:
    """Parse and validate a key=value config file; defaults fill gaps."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(), source=str(path))


def dump_config(config: SimulationConfig) -> str:
    lines = []
    for f in fields(SimulationConfig):
        v = getattr(config, f.name)
        lines.append(f"{f.name} = {'none' if v is None else v}")
    return "\n".join(lines) + "\n"


def config_dict(config: SimulationConfig) -> dict:
    return {f.name: getattr(config, f.name) for f in fields(SimulationConfig)}


def _format(v):
    return repr(float(v))


def _write_csv(path, header, columns):
    rows = len(columns[0])
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(
                ",".join("" if c is None else _format(c[i]) for c in columns) + "\n"
            )


def write_outputs(snapshots, outdir, config: Optional[SimulationConfig] = None, grid=None):
    """Write per-snapshot CSVs and the run manifest; returns manifest path.

    Each snapshot produces snap_<index>.csv with columns x,u_raw,u_mollified
    (third column empty for untreated snapshots) and, when a minmod profile
    was computed, minmod_<index>.csv.  Any I/O failure removes the partial
    output files before propagating.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    created = []
    try:
        entries = []
        for i, snap in enumerate(snapshots):
            if grid is None:
                nodes = spectral.build_grid(len(snap.raw_nodal) - 1).nodes
            else:
                nodes = grid.nodes
            name = f"snap_{i:04d}.csv"
            _write_csv(
                outdir / name,
                ("x", "u_raw", "u_mollified"),
                (nodes, snap.raw_nodal, snap.mollified_nodal),
            )
            created.append(outdir / name)
            entry = {
                "index": i,
                "time": snap.time,
                "file": name,
                "treatment": snap.treatment.value,
                "edge_report": snap.edge_report.as_dict(),
            }
            if snap.error is not None:
                entry["error"] = snap.error
            if snap.minmod is not None:
                mm_name = f"minmod_{i:04d}.csv"
                _write_csv(
                    outdir / mm_name, ("x", "minmod"),
                    (snap.minmod_abscissae, snap.minmod),
                )
                created.append(outdir / mm_name)
                entry["minmod_file"] = mm_name
            entries.append(entry)
        manifest = {
            "snapshot_count": len(snapshots),
            "snapshots": entries,
            "config": config_dict(config) if config is not None else None,
        }
        manifest_path = outdir / "manifest.json"
        with open(manifest_path, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        created.append(manifest_path)
        return manifest_path
    except OSError:
        for p in created:
            try:
                p.unlink()
            except OSError:
                pass
        raise


def run_pipeline(config: SimulationConfig, outdir=None):
    """Full pipeline: simulate, post-process every snapshot, write outputs."""
    result = run_simulation(config)
    processed = postprocess_all(result, config)
    target = Path(outdir) if outdir is not None else Path(config.output_dir)
    grid = result.snapshots[0].field.grid
    manifest = write_outputs(processed, target, config, grid)
    return manifest, processed, result
