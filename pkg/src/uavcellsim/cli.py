"""Command-line front end: config parsing, experiment dispatch, CSV/JSON output.

Subcommands `cnc` and `shared` run the matching experiment and write
deterministic CSVs plus a manifest. Numeric CSV fields use 17-significant
-digit formatting so identical seeds reproduce byte-identical files.

Exit codes: 0 success, 2 validation error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from pathlib import Path

from . import __version__
from .experiments import (ExperimentConfig, SCENARIO_CNC, SCENARIO_SHARED,
                          default_config, ecdf, run_cnc, run_shared,
                          validate_config)

# Manifest bookkeeping keys that may appear alongside config fields when a
# manifest.json is fed back in as a config file.
_MANIFEST_ONLY_KEYS = {"artifact_version", "outputs", "duration_s"}
_LIST_FIELDS = {"altitudes", "n_uav_values", "uav_xy"}


class ConfigError(ValueError):
    pass


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def serialize_config(cfg: ExperimentConfig) -> dict:
    """JSON-ready dict that parse_config round-trips to an equal config."""
    out = dataclasses.asdict(cfg)
    for key in _LIST_FIELDS:
        out[key] = list(out[key])
    return out


def parse_config(scenario: str, path: str | Path | None = None,
                 overrides: dict | None = None) -> ExperimentConfig:
    """Build a validated config from defaults, an optional JSON file and flags.

    Flag overrides win over file values. Unknown file keys are rejected.
    """
    data: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as f:
                data = json.load(f)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")

    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    data = {k: v for k, v in data.items() if k not in _MANIFEST_ONLY_KEYS}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if "scenario" in data and data["scenario"] != scenario:
        raise ConfigError(
            f"scenario: config file says {data['scenario']!r} but the "
            f"{scenario!r} subcommand was invoked")
    data.pop("scenario", None)
    for key in _LIST_FIELDS & set(data):
        data[key] = tuple(data[key])
    if overrides:
        data.update(overrides)
    try:
        return default_config(scenario, **data)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _run_cnc_outputs(cfg: ExperimentConfig, out_dir: Path, workers: int) -> list[str]:
    result = run_cnc(cfg, workers=workers)
    assoc_rows = []
    for i, altitude in enumerate(result.altitudes):
        for cell_id in range(1, result.association.shape[1] + 1):
            assoc_rows.append((_fmt(altitude), cell_id,
                               _fmt(result.association[i, cell_id - 1])))
    _write_csv(out_dir / "association.csv",
               ["altitude_m", "cell_id", "probability"], assoc_rows)

    snr_rows = []
    for i, altitude in enumerate(result.altitudes):
        values, probs = ecdf(result.snr_db[i])
        for v, p in zip(values, probs):
            snr_rows.append((cfg.mode, _fmt(altitude), _fmt(v), _fmt(p)))
    _write_csv(out_dir / "snr_cdf.csv",
               ["mode", "altitude_m", "snr_db", "cdf"], snr_rows)
    return ["association.csv", "snr_cdf.csv"]


def _run_shared_outputs(cfg: ExperimentConfig, out_dir: Path,
                        workers: int) -> list[str]:
    result = run_shared(cfg, workers=workers)
    rows = []
    for i, n_uav in enumerate(result.n_uav_values):
        values, probs = ecdf(result.sum_rate_bps[i] / 1e6)
        for v, p in zip(values, probs):
            rows.append((cfg.mode, n_uav, _fmt(v), _fmt(p)))
    _write_csv(out_dir / "sumrate_cdf.csv",
               ["mode", "n_uav", "sum_rate_mbps", "cdf"], rows)
    return ["sumrate_cdf.csv"]


def run(scenario: str, cfg: ExperimentConfig, out_dir: str | Path,
        workers: int = 1) -> dict:
    """Execute one experiment and write its CSVs plus manifest.json.

    Returns the manifest dict. The manifest is written last, so its
    presence marks a complete run.
    """
    started = time.monotonic()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if scenario == SCENARIO_CNC:
        outputs = _run_cnc_outputs(cfg, out_dir, workers)
    else:
        outputs = _run_shared_outputs(cfg, out_dir, workers)
    manifest = dict(serialize_config(cfg))
    manifest["artifact_version"] = __version__
    manifest["outputs"] = outputs
    manifest["duration_s"] = time.monotonic() - started
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2)
        f.write("\n")
    return manifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavcellsim",
        description="Monte Carlo downlink simulator for cellular networks "
                    "with ground and aerial UEs")
    sub = parser.add_subparsers(dest="scenario", required=True)
    for scenario, blurb in ((SCENARIO_CNC, "dedicated command-and-control channel"),
                            (SCENARIO_SHARED, "channel shared by ground and aerial UEs")):
        p = sub.add_parser(scenario, help=blurb)
        p.add_argument("--config", type=Path, default=None,
                       help="JSON config file (flags override its values)")
        p.add_argument("--seed", type=int, default=None, metavar="U64",
                       help="master seed for all random substreams")
        p.add_argument("--drops", type=int, default=None,
                       help="Monte Carlo drops per case")
        p.add_argument("--mode", choices=("fixed", "bf3d"), default=None,
                       help="array mode: fixed downtilt pattern or 3D MRT beamforming")
        p.add_argument("--out", type=Path, required=True, help="output directory")
        p.add_argument("--workers", type=int, default=1,
                       help="worker threads over drops (results are identical "
                            "for any worker count)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {}
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.drops is not None:
        overrides["drops"] = args.drops
    if args.mode is not None:
        overrides["mode"] = args.mode
    try:
        cfg = parse_config(args.scenario, args.config, overrides)
        validate_config(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        run(args.scenario, cfg, args.out, workers=max(1, args.workers))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
