"""Report figures for a list of identities."""
from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .records import IdentityRecord  # noqa: E402

CASE_COLORS = {"case1_A": "tab:blue", "case1_B": "tab:orange", "case2": "tab:green"}


def _kind(desc: str) -> str:
    return "E" if desc.startswith("E") else "cusp"


def identity_figures(records: list[IdentityRecord], directory: Path) -> list[Path]:
    """Bar chart of identities per level and a k/l scatter; returns the written paths."""
    directory = Path(directory)
    written = []

    levels = sorted({r.level for r in records})
    fig, ax = plt.subplots(figsize=(7, 4))
    bottom = [0] * len(levels)
    for case, color in CASE_COLORS.items():
        counts = Counter(r.level for r in records if r.case == case)
        heights = [counts.get(N, 0) for N in levels]
        ax.bar([str(N) for N in levels], heights, bottom=bottom, color=color, label=case)
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xlabel("level N")
    ax.set_ylabel("identities")
    ax.legend()
    fig.tight_layout()
    path = directory / "identities_by_level.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(5, 5))
    markers = {"E": "o", "cusp": "s"}
    for kind, marker in markers.items():
        pts = Counter((r.k, r.l) for r in records if _kind(r.g) == kind)
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=[40 * n for n in pts.values()], marker=marker, alpha=0.6, label=f"g {kind}")
    ax.set_xlabel("weight k of f")
    ax.set_ylabel("weight l of g")
    ax.legend()
    fig.tight_layout()
    path = directory / "weights.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
