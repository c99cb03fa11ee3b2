"""Static SVG figures: boundary curves, overlap clouds and polar phase histograms."""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "qudit-bound-lab"
plt.rcParams["svg.fonttype"] = "path"

_BOUNDARY = "#d62728"
_CLOUD = "#1f77b4"
_CIRCLE = "#2ca02c"


def _save(fig, path: Path) -> Path:
    path = Path(path)
    # no creation date, so the file depends only on its content
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def _complex_axes(title: str):
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    t = np.linspace(0, 2 * np.pi, 721)
    ax.plot(np.cos(t), np.sin(t), color=_CIRCLE, lw=0.8)
    ax.axhline(0, color="0.8", lw=0.5)
    ax.axvline(0, color="0.8", lw=0.5)
    ax.set_aspect("equal")
    ax.set_xlim(-1.1, 1.1)
    ax.set_ylim(-1.1, 1.1)
    ax.set_xlabel("Re O")
    ax.set_ylabel("Im O")
    ax.set_title(title, fontsize=10)
    return fig, ax


def _closed(z: np.ndarray) -> np.ndarray:
    return np.append(z, z[:1])


def boundary_figure(path: Path, curve_points: np.ndarray, title: str) -> Path:
    fig, ax = _complex_axes(title)
    z = _closed(curve_points)
    ax.plot(z.real, z.imag, color=_BOUNDARY, lw=1.2)
    return _save(fig, path)


def scatter_figure(
    path: Path,
    overlaps: np.ndarray,
    curve_points: Optional[np.ndarray],
    title: str,
) -> Path:
    fig, ax = _complex_axes(title)
    ax.scatter(overlaps.real, overlaps.imag, s=2, color=_CLOUD, linewidths=0, rasterized=False)
    if curve_points is not None:
        z = _closed(curve_points)
        ax.plot(z.real, z.imag, color=_BOUNDARY, lw=1.2)
    return _save(fig, path)


def histogram_figure(
    path: Path,
    histogram: Sequence[tuple[float, int]],
    title: str,
    degrees: bool = False,
) -> Path:
    """Polar histogram drawn as a fan of wedges, one per phase bin."""
    centers = np.array([c for c, _ in histogram])
    counts = np.array([n for _, n in histogram], dtype=float)
    width = 2 * np.pi / len(centers)
    fig = plt.figure(figsize=(4.5, 4.5))
    ax = fig.add_subplot(projection="polar")
    ax.bar(centers, counts, width=width, bottom=0.0, color=_CLOUD, edgecolor="white", lw=0.4)
    if not degrees:
        ticks = np.arange(8) * np.pi / 4
        labels = ["0", "π/4", "π/2", "3π/4", "π", "-3π/4", "-π/2", "-π/4"]
        ax.set_xticks(ticks)
        ax.set_xticklabels(labels)
    ax.set_title(title, fontsize=10)
    return _save(fig, path)


def oracle_figure(
    path: Path,
    empirical: np.ndarray,
    curve_points: np.ndarray,
    title: str,
) -> Path:
    fig, ax = _complex_axes(title)
    z = _closed(curve_points)
    ax.plot(z.real, z.imag, color=_BOUNDARY, lw=1.2, label="analytic")
    ax.scatter(empirical.real, empirical.imag, s=4, color=_CLOUD, linewidths=0, label="grid max")
    ax.legend(loc="lower left", fontsize=7, frameon=False)
    return _save(fig, path)
