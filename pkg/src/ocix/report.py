"""Statistics reports: delimited output plus rendered figures.

The stats report path writes a machine-readable stats.csv next to PNG
figures: a corpus overview bar chart and, when coverage against reference
sets was computed, a horizontal coverage chart with one bar per set.
Rendering uses the Agg backend so it works headless.
"""

from __future__ import annotations

import csv
from pathlib import Path

from . import LICENSE_ID
from .metrics import CorpusStats

__all__ = ["write_stats_report"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _write_stats_csv(stats: CorpusStats, path: Path, coverage_results: dict[str, float] | None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(f"# license: {LICENSE_ID}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("metric", "value"))
        writer.writerow(("citation_links", stats.citation_links))
        writer.writerow(("bibliographic_resources", stats.bibliographic_resources))
        writer.writerow(("dangling_citations", stats.dangling_citations))
        for label, count in sorted(stats.self_citation_counts.items()):
            writer.writerow((f"self_citation_{label}", count))
        writer.writerow(("timespan_coverage", f"{stats.timespan_coverage:.4f}"))
        if coverage_results:
            for label, percentage in sorted(coverage_results.items()):
                writer.writerow((f"coverage_{label}", f"{percentage:.1f}"))


def _overview_figure(stats: CorpusStats, path: Path) -> None:
    plt = _pyplot()
    labels = ["citation links", "resources", "dangling"]
    values = [stats.citation_links, stats.bibliographic_resources, stats.dangling_citations]
    for label, count in sorted(stats.self_citation_counts.items()):
        labels.append(f"{label} self-citation")
        values.append(count)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(values)), values, color="#4878a8")
    ax.set_xticks(range(len(values)))
    ax.set_xticklabels(labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("count")
    ax.set_title("Corpus overview")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _coverage_figure(coverage_results: dict[str, float], path: Path) -> None:
    plt = _pyplot()
    items = sorted(coverage_results.items())
    labels = [label for label, _ in items]
    values = [value for _, value in items]
    fig, ax = plt.subplots(figsize=(7, 1 + 0.6 * len(items)))
    bars = ax.barh(range(len(values)), values, color="#6aa84f")
    ax.set_yticks(range(len(values)))
    ax.set_yticklabels(labels, fontsize=9)
    ax.set_xlim(0, 100)
    ax.set_xlabel("citations found (%)")
    ax.set_title("Coverage by reference set")
    for bar, value in zip(bars, values):
        ax.text(min(value + 1, 97), bar.get_y() + bar.get_height() / 2,
                f"{value:.1f}", va="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_stats_report(
    stats: CorpusStats,
    out_dir: Path,
    coverage_results: dict[str, float] | None = None,
) -> list[Path]:
    """Write stats.csv and figures into `out_dir`; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    stats_csv = out_dir / "stats.csv"
    _write_stats_csv(stats, stats_csv, coverage_results)
    written.append(stats_csv)

    overview_png = out_dir / "overview.png"
    _overview_figure(stats, overview_png)
    written.append(overview_png)

    if coverage_results:
        coverage_png = out_dir / "coverage.png"
        _coverage_figure(coverage_results, coverage_png)
        written.append(coverage_png)

    return written
