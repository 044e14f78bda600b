"""Metric instances: construction from points, geo coordinates, or explicit
distance matrices, with validation and JSON serialization.

An instance bundles a dense symmetric distance matrix with the two solver
parameters: ``k`` (maximum number of centers, 1 <= k <= n) and ``q``
(maximum number of outliers, 0 <= q < n). ``q = n`` is rejected because it
would leave the outlier-related neighborhood rank at zero.
"""

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels

EARTH_RADIUS_M = 6371000.0

# metric validation tolerance is scale-relative: float Euclidean matrices are
# not exactly metric, and geo data has large absolute coordinates
EPS_TRI_SCALE = 1e-9


class MetricError(ValueError):
    """Distance matrix or instance parameters are invalid."""


class GeoPoint(NamedTuple):
    latitude: float
    longitude: float


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """Immutable vertex set with a validated metric and parameters k, q.

    ``dist`` is a read-only dense n x n float64 matrix. ``points`` holds the
    originating coordinates when the instance was built from them (used for
    serialization); ``projection`` records how geo input was flattened.
    """

    dist: np.ndarray
    k: int
    q: int
    labels: tuple[str, ...] | None = None
    points: np.ndarray | None = None
    projection: str = "none"
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.dist.shape[0]


def _check_params(n: int, k: int, q: int) -> None:
    if not 1 <= k <= n:
        raise MetricError(f"k must satisfy 1 <= k <= n, got k={k}, n={n}")
    if not 0 <= q < n:
        raise MetricError(f"q must satisfy 0 <= q < n, got q={q}, n={n}")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def build_from_points(
    points,
    k: int,
    q: int,
    *,
    labels: Sequence[str] | None = None,
    projection: str = "none",
    meta: dict | None = None,
) -> MetricInstance:
    """Instance over the pairwise Euclidean metric of real-coordinate vectors.

    The matrix is metric by construction, so only parameter bounds and
    finiteness are checked here.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise MetricError("points must be a non-empty list of equal-length coordinate vectors")
    if not np.isfinite(arr).all():
        raise MetricError("points contain non-finite coordinates")
    n = arr.shape[0]
    _check_params(n, k, q)
    if labels is not None and len(labels) != n:
        raise MetricError(f"expected {n} labels, got {len(labels)}")
    dist = _kernels.pairwise_dists(np.ascontiguousarray(arr))
    return MetricInstance(
        dist=_freeze(dist),
        k=int(k),
        q=int(q),
        labels=tuple(labels) if labels is not None else None,
        points=_freeze(arr),
        projection=projection,
        meta=dict(meta) if meta else {},
    )


def build_from_matrix(
    dist,
    k: int,
    q: int,
    *,
    labels: Sequence[str] | None = None,
    meta: dict | None = None,
) -> MetricInstance:
    """Instance over an explicit distance matrix; rejects non-metric input.

    Checks, with tolerance eps = 1e-9 * max entry: zero diagonal, symmetry,
    non-negativity, and all n^3 triangle inequalities (cubic; intended for
    matrices small enough that an explicit matrix is sensible). Entries are
    then canonicalized: symmetrized and the diagonal zeroed exactly.
    """
    arr = np.array(dist, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise MetricError(f"distance matrix must be square, got shape {arr.shape}")
    n = arr.shape[0]
    if n < 1:
        raise MetricError("distance matrix must be non-empty")
    if not np.isfinite(arr).all():
        raise MetricError("distance matrix contains non-finite entries")
    if (arr < 0).any():
        i, j = np.unravel_index(int(np.argmin(arr)), arr.shape)
        raise MetricError(f"negative entry d[{i}][{j}] = {arr[i, j]}")
    tol = EPS_TRI_SCALE * float(arr.max()) if n > 0 else 0.0
    diag = np.abs(np.diagonal(arr))
    if (diag > tol).any():
        i = int(np.argmax(diag))
        raise MetricError(f"nonzero diagonal d[{i}][{i}] = {arr[i, i]}")
    asym = np.abs(arr - arr.T)
    if (asym > tol).any():
        i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
        raise MetricError(f"asymmetric entries d[{i}][{j}] = {arr[i, j]} vs d[{j}][{i}] = {arr[j, i]}")
    arr = (arr + arr.T) / 2.0
    np.fill_diagonal(arr, 0.0)
    h, i, j = _kernels.triangle_violation(arr, tol)
    if h >= 0:
        raise MetricError(
            f"triangle inequality violated: d[{h}][{j}] = {arr[h, j]} > "
            f"d[{h}][{i}] + d[{i}][{j}] = {arr[h, i] + arr[i, j]}"
        )
    _check_params(n, k, q)
    if labels is not None and len(labels) != n:
        raise MetricError(f"expected {n} labels, got {len(labels)}")
    return MetricInstance(
        dist=_freeze(arr),
        k=int(k),
        q=int(q),
        labels=tuple(labels) if labels is not None else None,
        points=None,
        projection="none",
        meta=dict(meta) if meta else {},
    )


def project_geo(points) -> np.ndarray:
    """Map (latitude, longitude) degrees onto a plane, in meters.

    Equirectangular projection about the mean latitude:
    x = R * lon_rad * cos(mean_lat_rad), y = R * lat_rad, R = 6371000 m.
    Adequate at city scale; pairwise distances are approximate at continental
    scale.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1 and arr.size == 2:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 1:
        raise MetricError("expected a non-empty list of (latitude, longitude) pairs")
    lat, lon = arr[:, 0], arr[:, 1]
    if not np.isfinite(arr).all():
        raise MetricError("geo coordinates contain non-finite values")
    if (np.abs(lat) > 90.0).any():
        raise MetricError(f"latitude out of range [-90, 90]: {lat[np.abs(lat) > 90.0][0]}")
    if (np.abs(lon) > 180.0).any():
        raise MetricError(f"longitude out of range [-180, 180]: {lon[np.abs(lon) > 180.0][0]}")
    lat_rad = np.radians(lat)
    lon_rad = np.radians(lon)
    scale = math.cos(float(lat_rad.mean()))
    return np.column_stack((EARTH_RADIUS_M * lon_rad * scale, EARTH_RADIUS_M * lat_rad))


# ---------------------------------------------------------------------------
# instance JSON
#
# {"n": int, "k": int, "q": int,
#  "dist": [[...]] | null, "points": [[...]] | null,
#  "labels": [...] | null, "projection": "equirectangular" | "none"}
# Exactly one of dist/points is non-null; an optional "meta" object carries
# provenance (generator, seed, source file).


def instance_to_json(inst: MetricInstance) -> dict:
    doc = {
        "n": inst.n,
        "k": inst.k,
        "q": inst.q,
        "dist": None,
        "points": None,
        "labels": list(inst.labels) if inst.labels is not None else None,
        "projection": inst.projection,
    }
    if inst.points is not None:
        doc["points"] = inst.points.tolist()
    else:
        doc["dist"] = inst.dist.tolist()
    if inst.meta:
        doc["meta"] = dict(inst.meta)
    return doc


def instance_from_json(doc: dict) -> MetricInstance:
    try:
        n, k, q = int(doc["n"]), int(doc["k"]), int(doc["q"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MetricError(f"instance JSON missing or invalid n/k/q: {exc}") from None
    dist = doc.get("dist")
    points = doc.get("points")
    if (dist is None) == (points is None):
        raise MetricError("instance JSON must set exactly one of 'dist'/'points'")
    labels = doc.get("labels")
    meta = doc.get("meta") or {}
    if points is not None:
        inst = build_from_points(
            points, k, q,
            labels=labels,
            projection=doc.get("projection", "none"),
            meta=meta,
        )
    else:
        inst = build_from_matrix(dist, k, q, labels=labels, meta=meta)
    if inst.n != n:
        raise MetricError(f"instance JSON declares n={n} but carries {inst.n} vertices")
    return inst


def save_instance(inst: MetricInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_json(inst), fh)
        fh.write("\n")


def load_instance(path) -> MetricInstance:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise MetricError(f"{path}: not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MetricError(f"{path}: instance JSON must be an object")
    return instance_from_json(doc)
