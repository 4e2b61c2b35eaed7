"""Level-profile figures and tab-delimited tables for Sperner reports."""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sperner import SpernerReport  # noqa: E402


def _stem(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name).strip("_") or "poset"


def write_level_table(report: SpernerReport, path: str | Path) -> Path:
    path = Path(path)
    nfp = {r.k: r.feasible for r in report.nfp}
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, delimiter="\t", lineterminator="\n")
        out.writerow(["rank", "level_weight", "is_max_level", "nfp_to_next"])
        for r, w in enumerate(report.level_weights):
            feasible = nfp.get(r)
            out.writerow([r, w, int(r == report.max_level[0]), "" if feasible is None else int(feasible)])
    return path


def plot_levels(report: SpernerReport, path: str | Path) -> Path:
    """Bar chart of level weights with the width drawn as a dashed line."""
    path = Path(path)
    ranks = list(range(len(report.level_weights)))
    colors = ["tab:red" if r == report.max_level[0] else "tab:blue" for r in ranks]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(ranks, [float(w) for w in report.level_weights], color=colors)
    ax.axhline(float(report.width), color="k", linestyle="--", linewidth=1, label=f"width {report.width}")
    for k in (r.k for r in report.nfp if not r.feasible):
        ax.axvspan(k - 0.5, k + 1.5, color="tab:orange", alpha=0.15)
    ax.set_xlabel("rank")
    ax.set_ylabel("level weight")
    verdict = "Sperner" if report.verdict else "not Sperner"
    ax.set_title(f"{report.name or 'poset'}: {verdict}")
    ax.set_xticks(ranks)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_report_files(report: SpernerReport, directory: str | Path) -> tuple[Path, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = _stem(report.name)
    table = write_level_table(report, directory / f"{stem}_levels.tsv")
    figure = plot_levels(report, directory / f"{stem}_levels.png")
    return table, figure
