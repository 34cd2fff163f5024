"""Matplotlib figure emission for recovered scatters, biplots, and comparisons.

Figures are written as self-contained SVG files.  Text is kept as SVG text
elements (not paths) so emitted labels stay greppable; every figure carries a
caption line stating the centering mode, target dimension, and seed.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_SVG_RC = {
    "svg.fonttype": "none",
    "svg.hashsalt": "affinedim",
    "figure.dpi": 100,
}

_POINT_COLOR = "#1f6fb4"
_ARROW_COLOR = "#c23b22"


def _marker_sizes(radii, by_radius: bool) -> np.ndarray:
    if not by_radius:
        return np.full(len(radii), 36.0)
    rmax = float(np.max(radii))
    if rmax <= 0:
        return np.full(len(radii), 36.0)
    return 12.0 + 108.0 * (np.asarray(radii) / rmax)  # area proportional to radius


def _draw_scatter_panel(ax, z, labels, *, origin_marker=True, rings=False,
                        size_by_radius=False, axes_arrows=None, arrow_names=None,
                        title=None):
    z = np.asarray(z, dtype=float)
    radii = np.linalg.norm(z, axis=1)
    ax.scatter(z[:, 0], z[:, 1], s=_marker_sizes(radii, size_by_radius),
               color=_POINT_COLOR, zorder=3)
    if labels is not None:
        for (x, y), text in zip(z, labels):
            ax.annotate(str(text), (x, y), textcoords="offset points",
                        xytext=(4, 4), fontsize=8)
    if origin_marker:
        marker = ax.scatter([0.0], [0.0], marker="+", s=90, color="black", zorder=4)
        marker.set_gid("origin-marker")
    if rings:
        for radius, style, tag in ((radii.min(), "-", "min"), (radii.max(), "--", "max")):
            if radius > 0:
                circle = plt.Circle((0, 0), radius, fill=False, color="gray",
                                    linestyle=style, linewidth=0.8, zorder=1)
                circle.set_gid(f"radius-ring-{tag}")
                ax.add_patch(circle)
    if axes_arrows is not None:
        arrows = np.asarray(axes_arrows, dtype=float)
        span = max(float(np.abs(z).max()), 1e-12) * 0.8
        for j, row in enumerate(arrows):
            if not np.any(row):
                continue
            ax.annotate("", xy=(row[0] * span, row[1] * span), xytext=(0, 0),
                        arrowprops=dict(arrowstyle="->", color=_ARROW_COLOR, lw=1.2))
            name = arrow_names[j] if arrow_names is not None else f"V{j + 1}"
            ax.annotate(str(name), (row[0] * span, row[1] * span),
                        color=_ARROW_COLOR, fontsize=8,
                        textcoords="offset points", xytext=(3, 3))
    ax.axhline(0.0, color="0.85", linewidth=0.6, zorder=0)
    ax.axvline(0.0, color="0.85", linewidth=0.6, zorder=0)
    ax.set_aspect("equal", adjustable="datalim")
    if title:
        ax.set_title(title, fontsize=10)


def _caption(fig, legend: str):
    fig.text(0.01, 0.01, legend, fontsize=8, color="0.25")


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def save_scatter(path, z, labels, legend, *, rings=False, size_by_radius=False,
                 axes_arrows=None, arrow_names=None, title=None) -> None:
    """Scatter of a 2-D recovered configuration with origin marker."""
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 6.0))
        _draw_scatter_panel(ax, z, labels, origin_marker=True, rings=rings,
                            size_by_radius=size_by_radius, axes_arrows=axes_arrows,
                            arrow_names=arrow_names, title=title)
        _caption(fig, legend)
        fig.tight_layout(rect=(0, 0.03, 1, 1))
        _save(fig, path)


def save_number_line(path, z1, labels, legend, *, title=None) -> None:
    """q=1 view: points on a horizontal number line through the origin."""
    z1 = np.asarray(z1, dtype=float).ravel()
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(7.2, 2.4))
        ax.axhline(0.0, color="0.6", linewidth=1.0, zorder=1)
        ax.scatter(z1, np.zeros_like(z1), s=40, color=_POINT_COLOR, zorder=3)
        marker = ax.scatter([0.0], [0.0], marker="+", s=90, color="black", zorder=4)
        marker.set_gid("origin-marker")
        if labels is not None:
            for x, text in zip(z1, labels):
                ax.annotate(str(text), (x, 0), textcoords="offset points",
                            xytext=(0, 8), fontsize=8, rotation=45)
        ax.set_yticks([])
        if title:
            ax.set_title(title, fontsize=10)
        _caption(fig, legend)
        fig.tight_layout(rect=(0, 0.08, 1, 1))
        _save(fig, path)


def save_biplot(path, scores, loadings, point_labels, variable_names, legend,
                *, title=None) -> None:
    """Scores scatter plus one loading arrow per original variable."""
    scores = np.asarray(scores, dtype=float)
    loadings = np.asarray(loadings, dtype=float)
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(6.4, 6.0))
        arrow_scale = max(float(np.abs(scores).max()), 1e-12) * 0.8
        _draw_scatter_panel(ax, scores, point_labels, origin_marker=True,
                            title=title)
        for j, row in enumerate(loadings):
            ax.annotate("", xy=(row[0] * arrow_scale, row[1] * arrow_scale),
                        xytext=(0, 0),
                        arrowprops=dict(arrowstyle="->", color=_ARROW_COLOR, lw=1.2))
            ax.annotate(str(variable_names[j]),
                        (row[0] * arrow_scale, row[1] * arrow_scale),
                        color=_ARROW_COLOR, fontsize=8,
                        textcoords="offset points", xytext=(3, 3))
        _caption(fig, legend)
        fig.tight_layout(rect=(0, 0.03, 1, 1))
        _save(fig, path)


def save_compare(path, pca_scores, pca_loadings, z, axes_arrows, point_labels,
                 variable_names, legend, *, size_by_radius=False) -> None:
    """Side-by-side panels: PCA biplot (left) and origin-centric scatter (right)."""
    pca_scores = np.asarray(pca_scores, dtype=float)
    with plt.rc_context(_SVG_RC):
        fig, (ax_pca, ax_red) = plt.subplots(1, 2, figsize=(12.8, 6.2))
        _draw_scatter_panel(ax_pca, pca_scores, point_labels, origin_marker=True,
                            title="PCA (q=2)")
        arrow_scale = max(float(np.abs(pca_scores).max()), 1e-12) * 0.8
        for j, row in enumerate(np.asarray(pca_loadings, dtype=float)):
            ax_pca.annotate("", xy=(row[0] * arrow_scale, row[1] * arrow_scale),
                            xytext=(0, 0),
                            arrowprops=dict(arrowstyle="->", color=_ARROW_COLOR, lw=1.2))
            ax_pca.annotate(str(variable_names[j]),
                            (row[0] * arrow_scale, row[1] * arrow_scale),
                            color=_ARROW_COLOR, fontsize=8,
                            textcoords="offset points", xytext=(3, 3))
        _draw_scatter_panel(ax_red, z, point_labels, origin_marker=True, rings=True,
                            size_by_radius=size_by_radius, axes_arrows=axes_arrows,
                            arrow_names=variable_names,
                            title="Origin-centric reduction (q=2)")
        _caption(fig, legend)
        fig.tight_layout(rect=(0, 0.04, 1, 1))
        _save(fig, path)
