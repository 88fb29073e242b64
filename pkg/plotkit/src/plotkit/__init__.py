"""Batch figure renderer for exported cost-landscape artifacts."""

from .figures import (
    BASIN_MAP,
    CURVES_1D,
    FIGURE_KINDS,
    HEATMAP,
    SURFACE_3D,
    FigureSpec,
    build_figure,
    render,
)
from .io import SchemaError

__version__ = "0.1.0"

__all__ = [
    "BASIN_MAP",
    "CURVES_1D",
    "FIGURE_KINDS",
    "HEATMAP",
    "SURFACE_3D",
    "FigureSpec",
    "SchemaError",
    "build_figure",
    "render",
    "__version__",
]
