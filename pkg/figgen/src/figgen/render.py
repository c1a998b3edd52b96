"""Render simulator result figures from the CSV outputs.

Three figure kinds, one per CSV schema: grouped association bars, SNR
CDF curves and sum-rate CDF curves. Styling is fixed and timestamps are
stripped so re-rendering the same CSV reproduces identical image bytes.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams.update({
    "figure.figsize": (8.0, 4.5),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.4,
    "font.size": 10,
    "legend.fontsize": 9,
    "svg.hashsalt": "plot-figs",
})

KIND_ASSOCIATION = "association_bars"
KIND_SNR_CDF = "snr_cdf"
KIND_SUMRATE_CDF = "sumrate_cdf"

EXPECTED_COLUMNS = {
    KIND_ASSOCIATION: ["altitude_m", "cell_id", "probability"],
    KIND_SNR_CDF: ["mode", "altitude_m", "snr_db", "cdf"],
    KIND_SUMRATE_CDF: ["mode", "n_uav", "sum_rate_mbps", "cdf"],
}


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    csv_path: Path
    kind: str
    out_path: Path
    image_format: str = "png"  # png or svg


def load_rows(csv_path: Path, kind: str) -> list[dict]:
    """Read and schema-check one CSV; returns one dict per data row."""
    expected = EXPECTED_COLUMNS[kind]
    try:
        with open(csv_path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{csv_path}: file is empty") from None
            missing = [c for c in expected if c not in header]
            extra = [c for c in header if c not in expected]
            if missing or extra:
                parts = []
                if missing:
                    parts.append("missing column(s): " + ", ".join(missing))
                if extra:
                    parts.append("unexpected column(s): " + ", ".join(extra))
                raise SchemaError(f"{csv_path}: " + "; ".join(parts))
            rows = [dict(zip(header, row)) for row in reader]
    except OSError as exc:
        raise SchemaError(f"cannot read {csv_path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{csv_path}: no data rows")
    return rows


def _series(rows: list[dict], key_fields: tuple[str, ...],
            x_field: str, y_field: str) -> dict[tuple, tuple[list, list]]:
    """Group rows into (x, y) series keyed by the given fields, file order."""
    series: dict[tuple, tuple[list, list]] = {}
    for row in rows:
        key = tuple(row[k] for k in key_fields)
        try:
            x = float(row[x_field])
            y = float(row[y_field])
        except ValueError as exc:
            raise SchemaError(f"non-numeric value in {x_field}/{y_field}: {exc}")
        series.setdefault(key, ([], []))
        series[key][0].append(x)
        series[key][1].append(y)
    return series


def _check_cdf_monotone(name: str, xs: list, ys: list) -> None:
    pairs = sorted(zip(xs, ys))
    cdf = [y for _, y in pairs]
    if any(b < a for a, b in zip(cdf, cdf[1:])):
        raise ValueError(f"CDF series {name} is not non-decreasing")


def _save(fig, spec: FigureSpec) -> None:
    if spec.image_format == "svg":
        metadata = {"Date": None}  # no timestamp, keeps bytes reproducible
    else:
        metadata = {"Software": "plot-figs"}
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path, format=spec.image_format, metadata=metadata)
    plt.close(fig)


def _render_association(spec: FigureSpec) -> None:
    rows = load_rows(spec.csv_path, KIND_ASSOCIATION)
    series = _series(rows, ("altitude_m",), "cell_id", "probability")
    fig, ax = plt.subplots()
    n = len(series)
    width = 0.8 / n
    for i, (key, (cells, probs)) in enumerate(series.items()):
        offset = (i - (n - 1) / 2) * width
        ax.bar([c + offset for c in cells], probs, width=width,
               label=f"H = {key[0]} m")
    ax.set_xlabel("Cell ID")
    ax.set_ylabel("Association probability")
    ax.set_title("Cell association vs UE altitude")
    ax.legend()
    _save(fig, spec)


def _render_cdf(spec: FigureSpec, kind: str, key_fields: tuple[str, ...],
                x_field: str, x_label: str, label_fn) -> None:
    rows = load_rows(spec.csv_path, kind)
    series = _series(rows, key_fields, x_field, "cdf")
    fig, ax = plt.subplots()
    for key, (xs, ys) in series.items():
        _check_cdf_monotone("/".join(key), xs, ys)
        pairs = sorted(zip(xs, ys))
        ax.step([p[0] for p in pairs], [p[1] for p in pairs], where="post",
                label=label_fn(key))
    ax.set_xlabel(x_label)
    ax.set_ylabel("Empirical CDF")
    ax.set_ylim(0.0, 1.02)
    ax.legend(loc="lower right")
    _save(fig, spec)


def render(spec: FigureSpec) -> Path:
    """Render one figure from its CSV; returns the written image path."""
    if spec.image_format not in ("png", "svg"):
        raise ValueError(f"unsupported image format {spec.image_format!r}")
    if spec.kind == KIND_ASSOCIATION:
        _render_association(spec)
    elif spec.kind == KIND_SNR_CDF:
        _render_cdf(spec, KIND_SNR_CDF, ("mode", "altitude_m"), "snr_db",
                    "SNR [dB]", lambda k: f"{k[0]}, H = {k[1]} m")
    elif spec.kind == KIND_SUMRATE_CDF:
        _render_cdf(spec, KIND_SUMRATE_CDF, ("mode", "n_uav"), "sum_rate_mbps",
                    "Sum rate [Mbps]", lambda k: f"{k[0]}, N_UAV = {k[1]}")
    else:
        raise ValueError(f"unknown figure kind {spec.kind!r}")
    return spec.out_path
