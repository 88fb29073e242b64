"""Readers for the exporter's file formats.

plotkit never imports the analysis package; these parsers are written
against the documented artifact formats (hash-comment provenance headers
on CSVs, a "provenance" object in JSON) and fail loudly on anything
else. Keeping the boundary at the file level is the point: a figure can
always be traced to bytes on disk.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """Input file missing or not in a documented artifact format."""


def _read_lines(path: Path) -> tuple[dict[str, str], list[str]]:
    if not path.is_file():
        raise SchemaError(f"input file does not exist: {path}")
    meta: dict[str, str] = {}
    data: list[str] = []
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        data.append(line)
    if not meta:
        raise SchemaError(f"{path}: no provenance header; not an exported artifact")
    return meta, data


def _parse_axis(path: Path, meta: dict[str, str], key: str) -> np.ndarray:
    try:
        fields = dict(item.split("=", 1) for item in meta[key].split())
        start, stop, n = float(fields["start"]), float(fields["stop"]), int(fields["n"])
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"{path}: bad or missing axis header {key!r}") from exc
    return np.linspace(start, stop, n)


@dataclass(frozen=True)
class Surface:
    values: np.ndarray  # (n, n), rows phi2 ascending
    axis1: np.ndarray
    axis2: np.ndarray
    meta: dict


@dataclass(frozen=True)
class Profile:
    phi1: np.ndarray
    curves: dict  # region k -> cost samples
    meta: dict


@dataclass(frozen=True)
class BasinGrid:
    labels: np.ndarray  # (n, n) int; 0 global, i>0 catalog entry, -1 failed
    axis1: np.ndarray
    axis2: np.ndarray
    meta: dict


def read_surface(path) -> Surface:
    path = Path(path)
    meta, data = _read_lines(path)
    if not meta.get("kind", "").startswith("surface."):
        raise SchemaError(f"{path}: kind {meta.get('kind')!r} is not a surface export")
    axis1 = _parse_axis(path, meta, "phi1_axis")
    axis2 = _parse_axis(path, meta, "phi2_axis")
    try:
        values = np.array([[float(tok) for tok in row.split(",")] for row in data])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric surface row") from exc
    if values.shape != (axis2.size, axis1.size):
        raise SchemaError(
            f"{path}: surface shape {values.shape} does not match declared axes "
            f"({axis2.size}, {axis1.size})"
        )
    return Surface(values=values, axis1=axis1, axis2=axis2, meta=meta)


_PROFILE_HEADER = "phi1,f_1_km1,f_1_k0,f_1_kp1"


def read_profile(path) -> Profile:
    path = Path(path)
    meta, data = _read_lines(path)
    if meta.get("kind") != "profile-1d":
        raise SchemaError(f"{path}: kind {meta.get('kind')!r} is not a 1D profile export")
    if not data or data[0] != _PROFILE_HEADER:
        raise SchemaError(f"{path}: expected column header {_PROFILE_HEADER!r}")
    try:
        table = np.array([[float(tok) for tok in row.split(",")] for row in data[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric profile row") from exc
    if table.ndim != 2 or table.shape[1] != 4 or table.shape[0] < 2:
        raise SchemaError(f"{path}: profile table has shape {table.shape}, expected (n>=2, 4)")
    return Profile(
        phi1=table[:, 0],
        curves={-1: table[:, 1], 0: table[:, 2], 1: table[:, 3]},
        meta=meta,
    )


def read_basin_grid(path) -> BasinGrid:
    path = Path(path)
    meta, data = _read_lines(path)
    if not meta.get("kind", "").startswith("basin-grid."):
        raise SchemaError(f"{path}: kind {meta.get('kind')!r} is not a basin grid export")
    axis1 = _parse_axis(path, meta, "phi1_axis")
    axis2 = _parse_axis(path, meta, "phi2_axis")
    try:
        labels = np.array([[int(tok) for tok in row.split(",")] for row in data])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-integer basin label") from exc
    if labels.shape != (axis2.size, axis1.size):
        raise SchemaError(
            f"{path}: label grid shape {labels.shape} does not match declared axes"
        )
    return BasinGrid(labels=labels, axis1=axis1, axis2=axis2, meta=meta)


def read_summary(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"input file does not exist: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON") from exc
    for key in ("provenance", "problem", "axes"):
        if key not in data:
            raise SchemaError(f"{path}: summary JSON missing {key!r}")
    ms = data["problem"].get("measurements", {})
    for key in ("phi01", "phi12", "phi02"):
        if key not in ms:
            raise SchemaError(f"{path}: summary problem echo missing measurement {key!r}")
    return data
