"""Rendering of rate curves to image files (headless backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_rate_figure(points, path: str, title: str = "") -> str:
    """Plot CurvePoints grouped by method and save the figure.

    Upper bounds are solid, the existence (lower) curve dashed.  Methods
    keep their first-appearance order so the legend is stable.
    """
    by_method: dict = {}
    for p in points:
        by_method.setdefault(p.method, []).append(p)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for method, pts in by_method.items():
        pts = sorted(pts, key=lambda p: p.d)
        style = "--" if method.endswith("lower") else "-"
        ax.plot([p.d for p in pts], [p.rate for p in pts], style, label=method)
    ax.set_xlabel("minimum distance d")
    ax.set_ylabel("rate (nats / n)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if by_method:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
