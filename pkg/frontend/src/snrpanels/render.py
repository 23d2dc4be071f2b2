"""Line charts of recovery SNR vs signal SNR from a benchmark aggregate CSV.

The input is the aggregate schema written by the benchmark harness::

    experiment,algorithm,n,s,m_r,m_o,m,xi_s_db,n_v,xi_r_db,success_rate

One PNG is produced per distinct sparsity value, one curve per algorithm.
Single-point series are drawn as markers.  Output filenames depend only on
the CSV contents, so identical inputs yield identical file sets.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

REQUIRED_COLUMNS = [
    "experiment", "algorithm", "n", "s", "m_r", "m_o", "m",
    "xi_s_db", "n_v", "xi_r_db", "success_rate",
]
DPI = 150


class SchemaError(ValueError):
    """The CSV does not carry the aggregate schema."""


@dataclass
class PanelInfo:
    """What was drawn for one sparsity panel."""

    s: int
    path: Path
    series_points: dict[str, int]  # algorithm -> number of plotted points


def read_aggregate(csv_path: str | Path) -> list[dict]:
    """Parse the aggregate CSV, enforcing the schema by column name."""
    with open(csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [col for col in REQUIRED_COLUMNS if col not in header]
        if missing:
            raise SchemaError(f"missing column(s): {', '.join(missing)}")
        rows = []
        for raw in reader:
            rows.append(
                {
                    "algorithm": raw["algorithm"],
                    "s": int(raw["s"]),
                    "xi_s_db": float(raw["xi_s_db"]),
                    "xi_r_db": float(raw["xi_r_db"]),
                }
            )
    return rows


def render(aggregate_csv: str | Path, out_dir: str | Path) -> list[PanelInfo]:
    """Render one recovery-SNR panel per sparsity value; returns what was drawn."""
    rows = read_aggregate(aggregate_csv)
    out = Path(out_dir)
    if not rows:
        print("warning: aggregate CSV has no data rows; nothing to render", file=sys.stderr)
        return []
    out.mkdir(parents=True, exist_ok=True)

    panels = []
    for s in sorted({row["s"] for row in rows}):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        series_points: dict[str, int] = {}
        algorithms = []
        for row in rows:  # preserve first-appearance order for the legend
            if row["s"] == s and row["algorithm"] not in algorithms:
                algorithms.append(row["algorithm"])
        for algorithm in algorithms:
            pts = sorted(
                (row["xi_s_db"], row["xi_r_db"])
                for row in rows
                if row["s"] == s and row["algorithm"] == algorithm
            )
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker="o", label=algorithm)
            series_points[algorithm] = len(pts)
        ax.set_xlabel("signal SNR (dB)")
        ax.set_ylabel("recovery SNR (dB)")
        ax.set_title(f"s = {s}")
        ax.grid(True, alpha=0.3)
        ax.legend()
        path = out / f"recovery_snr_s{s}.png"
        fig.savefig(path, dpi=DPI)
        plt.close(fig)
        panels.append(PanelInfo(s=s, path=path, series_points=series_points))
    return panels


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render recovery-SNR line charts from a benchmark aggregate CSV.",
    )
    parser.add_argument("--in", dest="aggregate_csv", required=True,
                        help="path to aggregate.csv")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory for the PNG panels")
    args = parser.parse_args(argv)
    try:
        panels = render(args.aggregate_csv, args.out_dir)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for panel in panels:
        print(f"wrote {panel.path} ({len(panel.series_points)} curves)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
