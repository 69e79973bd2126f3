"""Figure rendering for evaluation and hold-out audit reports.

Figures are written straight to files (Agg backend, no display) so the CLI
can drop a PNG next to every JSON report it emits.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .benchgen import HoldoutReport
from .harness.evaluate import EvalReport


def default_figure_path(out_path: str | Path) -> Path:
    return Path(out_path).with_suffix(".png")


def render_eval_figure(report: EvalReport, path: str | Path) -> Path:
    """Match/mismatch bar chart with the exact-match score in the title."""
    path = Path(path)
    n_miss = report.n_total - report.n_match
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    bars = ax.bar(["match", "mismatch"], [report.n_match, n_miss], color=["#2a9d8f", "#e76f51"])
    ax.bar_label(bars)
    ax.set_ylabel("episodes")
    ax.set_title(f"{report.split} · {report.field} · EM {report.em_percent}")
    ax.set_ylim(0, max(report.n_total, 1) * 1.15)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_holdout_figure(report: HoldoutReport, path: str | Path) -> Path:
    """Coverage per required pattern, with the violation count in the title."""
    path = Path(path)
    labels = list(report.coverage)
    counts = [report.coverage[label] for label in labels]
    colors = ["#bbbbbb" if label == "uncovered" else "#457b9d" for label in labels]
    height = max(2.4, 0.5 * len(labels) + 1.2)
    fig, ax = plt.subplots(figsize=(6.4, height))
    bars = ax.barh(labels, counts, color=colors)
    ax.bar_label(bars)
    ax.invert_yaxis()
    ax.set_xlabel("test episodes")
    ax.set_title(
        f"{report.split}: hold-out audit, "
        f"{len(report.violations)} violation(s), {report.n_test} test episodes"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
