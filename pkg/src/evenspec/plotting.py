"""Report figures for batch classification runs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .classify import ClassificationRecord, Verdict, summarize  # noqa: E402


def verdict_chart(records: list[ClassificationRecord], path: Path, title: str = "") -> Path:
    counts = summarize(records)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    names = list(counts)
    ax.bar(names, [counts[k] for k in names], color=["#b2413c", "#2f6f9f", "#6aa0c8", "#999999"])
    for i, k in enumerate(names):
        ax.text(i, counts[k], str(counts[k]), ha="center", va="bottom")
    ax.set_ylabel("graphs")
    ax.set_title(title or "verdicts")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def spectra_chart(records: list[ClassificationRecord], path: Path, title: str = "") -> Path:
    """One column per YES graph; dots at its certified eigenvalues."""
    yes = [r for r in records if r.verdict.is_yes and r.certificate]
    fig, ax = plt.subplots(figsize=(max(5, 0.12 * len(yes) + 2), 3.2))
    for i, r in enumerate(yes):
        vals = r.certificate["eigenvalues"]
        colour = "#2f6f9f" if r.verdict is Verdict.CERTIFIED_YES else "#6aa0c8"
        ax.scatter([i] * len(vals), vals, s=8, color=colour)
    ax.set_xlabel("YES graph (enumeration order)")
    ax.set_ylabel("eigenvalue")
    ax.set_title(title or "certified spectra")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
