"""Figure construction.

Each figure kind maps one or two exported artifacts to a raster image.
Figures are data-equivalent to the originals they imitate, not pixel
replicas; colors and labels are chosen here. build_figure returns the
matplotlib Figure so tests can inspect artists without decoding PNGs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.lines import Line2D
from matplotlib.patches import Patch

from .io import SchemaError, read_basin_grid, read_profile, read_summary, read_surface

HEATMAP = "heatmap"
SURFACE_3D = "surface-3d"
CURVES_1D = "curves-1d"
BASIN_MAP = "basin-map"
FIGURE_KINDS = (HEATMAP, SURFACE_3D, CURVES_1D, BASIN_MAP)

_N_INPUTS = {HEATMAP: 1, SURFACE_3D: 1, CURVES_1D: 1, BASIN_MAP: 2}

_GLOBAL_COLOR = (0.93, 0.93, 0.93)
_FAILED_COLOR = (0.0, 0.0, 0.0)


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple
    out: Path
    title: str = ""
    xlabel: str = "phi1 [rad]"
    ylabel: str = "phi2 [rad]"
    dpi: int = 130

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}")
        paths = tuple(Path(p) for p in self.inputs)
        if len(paths) != _N_INPUTS[self.kind]:
            raise ValueError(
                f"{self.kind} needs {_N_INPUTS[self.kind]} input file(s), got {len(paths)}"
            )
        object.__setattr__(self, "inputs", paths)
        object.__setattr__(self, "out", Path(self.out))


def _pixel_extent(axis1, axis2):
    """imshow extent placing pixel centers exactly on the axis samples."""
    h1 = axis1[1] - axis1[0]
    h2 = axis2[1] - axis2[0]
    return (axis1[0] - h1 / 2, axis1[-1] + h1 / 2, axis2[0] - h2 / 2, axis2[-1] + h2 / 2)


def _default_title(meta: dict) -> str:
    return f"{meta.get('kind', '')}  [{meta.get('problem', '')}]"


def _heatmap(spec: FigureSpec):
    surf = read_surface(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    im = ax.imshow(
        surf.values,
        origin="lower",
        extent=_pixel_extent(surf.axis1, surf.axis2),
        aspect="auto",
        cmap="viridis",
    )
    fig.colorbar(im, ax=ax, label="cost")
    ax.set_title(spec.title or _default_title(surf.meta))
    return fig, ax


def _surface_3d(spec: FigureSpec):
    surf = read_surface(spec.inputs[0])
    fig = plt.figure(figsize=(6.8, 5.4))
    ax = fig.add_subplot(projection="3d")
    G1, G2 = np.meshgrid(surf.axis1, surf.axis2)
    ax.plot_surface(G1, G2, surf.values, cmap="viridis", rcount=60, ccount=60, linewidth=0)
    ax.set_zlabel("cost")
    ax.set_title(spec.title or _default_title(surf.meta))
    return fig, ax


def _curves_1d(spec: FigureSpec):
    prof = read_profile(spec.inputs[0])
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    styles = {-1: ("C0", "--"), 0: ("C1", "-"), 1: ("C2", "-.")}
    for k in (-1, 0, 1):
        color, ls = styles[k]
        ax.plot(prof.phi1, prof.curves[k], color=color, linestyle=ls, label=f"k = {k:+d}" if k else "k = 0")
    ax.set_ylabel("profile cost")
    ax.legend()
    ax.grid(True, alpha=0.3)
    ax.set_title(spec.title or _default_title(prof.meta))
    return fig, ax


def _split_basin_inputs(inputs):
    json_in = [p for p in inputs if p.suffix.lower() == ".json"]
    csv_in = [p for p in inputs if p.suffix.lower() != ".json"]
    if len(json_in) != 1 or len(csv_in) != 1:
        raise SchemaError("basin-map needs exactly one grid CSV and one summary JSON")
    return csv_in[0], json_in[0]


def _region_boundary_lines(summary: dict) -> float:
    ms = summary["problem"]["measurements"]
    # the wrapped middle residual changes sheet where
    # phi12 - (phi2 - phi1) crosses an odd multiple of pi
    return float(ms["phi12"])


def _basin_map(spec: FigureSpec):
    grid_path, summary_path = _split_basin_inputs(spec.inputs)
    grid = read_basin_grid(grid_path)
    summary = read_summary(summary_path)
    labels = grid.labels
    image = np.empty(labels.shape + (3,), dtype=float)
    image[:] = _GLOBAL_COLOR
    tab10 = plt.get_cmap("tab10")
    handles = [Patch(facecolor=_GLOBAL_COLOR, edgecolor="0.6", label="global basin")]
    for value in sorted(np.unique(labels[labels > 0])):
        color = tab10((int(value) - 1) % 10)[:3]
        image[labels == value] = color
        handles.append(Patch(facecolor=color, label=f"local basin (catalog {int(value)})"))
    if np.any(labels < 0):
        image[labels < 0] = _FAILED_COLOR
        handles.append(Patch(facecolor=_FAILED_COLOR, label="failed"))

    fig, ax = plt.subplots(figsize=(6.6, 6.0))
    extent = _pixel_extent(grid.axis1, grid.axis2)
    ax.imshow(image, origin="lower", extent=extent, aspect="equal")
    phi12 = _region_boundary_lines(summary)
    xs = np.array([extent[0] - 1.0, extent[1] + 1.0])
    for m in range(-3, 3):
        ys = xs + phi12 - (2 * m + 1) * np.pi
        ax.plot(xs, ys, color="black", linestyle="--", linewidth=1.1, clip_on=True)
    handles.append(
        Line2D([], [], color="black", linestyle="--", linewidth=1.1, label="region boundary")
    )
    ax.set_xlim(extent[0], extent[1])
    ax.set_ylim(extent[2], extent[3])
    ax.legend(handles=handles, loc="upper right", fontsize=8, framealpha=0.9)
    ax.set_title(spec.title or _default_title(grid.meta))
    return fig, ax


_BUILDERS = {
    HEATMAP: _heatmap,
    SURFACE_3D: _surface_3d,
    CURVES_1D: _curves_1d,
    BASIN_MAP: _basin_map,
}


def build_figure(spec: FigureSpec):
    """Build (but do not save) the figure; caller owns closing it."""
    fig, ax = _BUILDERS[spec.kind](spec)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    return fig


def render(spec: FigureSpec) -> Path:
    """Render the figure and write the raster image; returns the path."""
    fig = build_figure(spec)
    try:
        spec.out.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.out, dpi=spec.dpi)
    finally:
        plt.close(fig)
    return spec.out
