"""Synthetic instance generation and CSV ingestion.

The synthetic family is i.i.d. uniform points on a square (side 100 by
default) with a seed-portable generator, so a GenSpec reproduces the same
instance bit-for-bit everywhere. The CSV reader accepts planar files with
``x,y[,z,...]`` columns or geo files with ``lat,lon`` columns, plus an
optional ``label`` column.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .metric import MetricError, MetricInstance, build_from_points, project_geo
from .rng import uniform01


class CsvError(ValueError):
    """Malformed point CSV."""


@dataclass(frozen=True)
class GenSpec:
    """Parameters for a synthetic instance: n uniform points in
    [0, side]^2."""

    n: int
    k: int
    q: int
    side: float = 100.0
    seed: int = 0


def generate(spec: GenSpec) -> MetricInstance:
    """Deterministic synthetic instance; same spec, same bits."""
    if spec.n < 1:
        raise MetricError(f"n must be positive, got {spec.n}")
    if not spec.side > 0:
        raise MetricError(f"side must be positive, got {spec.side}")
    u = uniform01(spec.seed, 2 * spec.n)
    points = u.reshape(spec.n, 2) * spec.side
    meta = {
        "generator": "uniform-square",
        "side": float(spec.side),
        "seed": int(spec.seed),
        "prng": "splitmix64",
    }
    return build_from_points(points, spec.k, spec.q, meta=meta)


def _parse_header(header: list[str], geo: bool) -> tuple[list[int], int | None]:
    cols = [c.strip().lower() for c in header]
    label_idx = cols.index("label") if "label" in cols else None
    if geo:
        if "lat" not in cols or "lon" not in cols:
            raise CsvError(f"geo CSV needs 'lat' and 'lon' columns, found {cols}")
        coord_idx = [cols.index("lat"), cols.index("lon")]
    else:
        coord_idx = [i for i, c in enumerate(cols) if i != label_idx]
        if not coord_idx:
            raise CsvError("CSV has no coordinate columns")
    return coord_idx, label_idx


def load_csv(path, k: int, q: int, geo: bool = False) -> MetricInstance:
    """Build an instance from a point CSV; geo rows are projected onto a
    plane first. Parse failures report the 1-based line number."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvError(f"{path}: empty file") from None
        coord_idx, label_idx = _parse_header(header, geo)
        rows: list[list[float]] = []
        labels: list[str] = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not f.strip() for f in row):
                continue
            if len(row) != len(header):
                raise CsvError(f"{path}: line {lineno}: expected {len(header)} fields, got {len(row)}")
            try:
                rows.append([float(row[i]) for i in coord_idx])
            except ValueError:
                bad = next(row[i] for i in coord_idx if not _is_float(row[i]))
                raise CsvError(f"{path}: line {lineno}: invalid number {bad!r}") from None
            if label_idx is not None:
                labels.append(row[label_idx])
    if not rows:
        raise CsvError(f"{path}: no data rows")
    coords = np.asarray(rows, dtype=np.float64)
    projection = "none"
    if geo:
        coords = project_geo(coords)
        projection = "equirectangular"
    return build_from_points(
        coords,
        k,
        q,
        labels=labels if label_idx is not None else None,
        projection=projection,
        meta={"source": str(path)},
    )


def _is_float(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def dump_points_csv(points, path, labels=None, geo: bool = False) -> None:
    """Write points in the CSV layout ``load_csv`` reads back; coordinate
    text uses repr so values round-trip exactly."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("points must be a 2-D array")
    if geo:
        if arr.shape[1] != 2:
            raise ValueError("geo dump needs (lat, lon) pairs")
        header = ["lat", "lon"]
    else:
        names = ["x", "y", "z"]
        header = [names[i] if i < 3 else f"c{i}" for i in range(arr.shape[1])]
    if labels is not None:
        header.append("label")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, row in enumerate(arr):
            fields = [repr(float(v)) for v in row]
            if labels is not None:
                fields.append(str(labels[i]))
            writer.writerow(fields)
