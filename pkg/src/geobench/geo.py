"""Area geometries, point assignment and per-area aggregations."""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from geobench.metrics import EARTH_RADIUS_KM, haversine_km
from geobench.regions import region_sort_key

log = logging.getLogger(__name__)

UNASSIGNED = "(unassigned)"
# Tolerance, in degrees, for treating a point as lying on a ring edge.
EDGE_EPS = 1e-12

Ring = tuple[tuple[float, float], ...]  # closed list of (lat, lon)


def _ring_array(ring: Sequence[Sequence[float]]) -> np.ndarray:
    arr = np.asarray(ring, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("a ring is a sequence of (lat, lon) pairs")
    if len(arr) < 4:
        raise ValueError(f"a ring needs at least 4 vertices, got {len(arr)}")
    if not np.array_equal(arr[0], arr[-1]):
        raise ValueError("a ring must be closed (first vertex == last vertex)")
    return arr


def _on_ring(lat: float, lon: float, ring: np.ndarray) -> bool:
    y1, x1 = ring[:-1, 0], ring[:-1, 1]
    y2, x2 = ring[1:, 0], ring[1:, 1]
    cross = (x2 - x1) * (lat - y1) - (lon - x1) * (y2 - y1)
    within = (
        (np.minimum(x1, x2) - EDGE_EPS <= lon)
        & (lon <= np.maximum(x1, x2) + EDGE_EPS)
        & (np.minimum(y1, y2) - EDGE_EPS <= lat)
        & (lat <= np.maximum(y1, y2) + EDGE_EPS)
    )
    return bool(np.any(within & (np.abs(cross) <= EDGE_EPS)))


def _crosses_odd(lat: float, lon: float, ring: np.ndarray) -> bool:
    # even-odd rule: cast a ray towards +lon and count edge crossings
    y1, x1 = ring[:-1, 0], ring[:-1, 1]
    y2, x2 = ring[1:, 0], ring[1:, 1]
    straddle = (y1 > lat) != (y2 > lat)
    if not straddle.any():
        return False
    y1, x1, y2, x2 = y1[straddle], x1[straddle], y2[straddle], x2[straddle]
    x_cross = x1 + (lat - y1) * (x2 - x1) / (y2 - y1)
    return bool(np.count_nonzero(lon < x_cross) % 2)


def _ring_area_centroid(ring: np.ndarray) -> tuple[float, float, float]:
    """Signed shoelace area and centroid (lat, lon) in degree space."""
    y, x = ring[:, 0], ring[:, 1]
    cross = x[:-1] * y[1:] - x[1:] * y[:-1]
    area = cross.sum() / 2.0
    if area == 0:
        return 0.0, float(y[:-1].mean()), float(x[:-1].mean())
    cx = ((x[:-1] + x[1:]) * cross).sum() / (6.0 * area)
    cy = ((y[:-1] + y[1:]) * cross).sum() / (6.0 * area)
    return float(area), float(cy), float(cx)


@dataclass(frozen=True)
class AreaGeometry:
    """A named area made of one or more polygons.

    Each polygon is ``(shell, *holes)``; every ring is a closed tuple of
    ``(lat, lon)`` vertices. ``centroid`` is the area-weighted planar centroid
    in degree space.
    """

    name: str
    polygons: tuple[tuple[Ring, ...], ...]
    centroid: tuple[float, float] = field(default=None)
    _arrays: tuple = field(default=None, compare=False, repr=False)
    _bbox: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.polygons:
            raise ValueError(f"area {self.name!r} has no polygons")
        arrays = tuple(tuple(_ring_array(r) for r in poly) for poly in self.polygons)
        object.__setattr__(self, "_arrays", arrays)
        stacked = np.vstack([poly[0] for poly in arrays])
        object.__setattr__(
            self,
            "_bbox",
            (stacked[:, 0].min(), stacked[:, 1].min(), stacked[:, 0].max(), stacked[:, 1].max()),
        )
        if self.centroid is None:
            object.__setattr__(self, "centroid", self._planar_centroid())

    def _planar_centroid(self) -> tuple[float, float]:
        total = sx = sy = 0.0
        for poly in self._arrays:
            for i, ring in enumerate(poly):
                area, cy, cx = _ring_area_centroid(ring)
                # shells count positive, holes negative, whatever the winding
                area = abs(area) if i == 0 else -abs(area)
                total += area
                sy += area * cy
                sx += area * cx
        if total == 0:
            pts = np.vstack([poly[0][:-1] for poly in self._arrays])
            return float(pts[:, 0].mean()), float(pts[:, 1].mean())
        return sy / total, sx / total

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        """``(min_lat, min_lon, max_lat, max_lon)``."""
        return self._bbox

    def contains(self, lat: float, lon: float) -> bool:
        """Closed containment: points on any ring edge count as inside."""
        lo_lat, lo_lon, hi_lat, hi_lon = self._bbox
        if not (lo_lat <= lat <= hi_lat and lo_lon <= lon <= hi_lon):
            return False
        for poly in self._arrays:
            if any(_on_ring(lat, lon, ring) for ring in poly):
                return True
            if _crosses_odd(lat, lon, poly[0]) and not any(
                _crosses_odd(lat, lon, hole) for hole in poly[1:]
            ):
                return True
        return False

    def to_geojson_geometry(self) -> dict:
        polys = [
            [[[lon, lat] for lat, lon in ring] for ring in poly] for poly in self.polygons
        ]
        if len(polys) == 1:
            return {"type": "Polygon", "coordinates": polys[0]}
        return {"type": "MultiPolygon", "coordinates": polys}


def canonical_order(areas: Iterable[AreaGeometry]) -> list[AreaGeometry]:
    return sorted(areas, key=lambda a: region_sort_key(a.name))


def _check_simple(name: str, geometry: dict) -> None:
    from shapely.geometry import shape
    from shapely.validation import explain_validity

    try:
        geom = shape(geometry)
        if not geom.is_valid:
            log.warning("area %s: invalid geometry (%s)", name, explain_validity(geom))
    except Exception as exc:  # malformed input is reported by the loader itself
        log.warning("area %s: could not validate geometry (%s)", name, exc)


def areas_from_geojson(data: dict, name_key: str = "name", validate: bool = True) -> list[AreaGeometry]:
    """Build areas from a GeoJSON FeatureCollection (lon-lat vertex order).

    Features sharing a name are merged into one multi-polygon area. The
    result is in canonical name order.
    """
    if data.get("type") != "FeatureCollection":
        raise ValueError("expected a GeoJSON FeatureCollection")
    polygons: dict[str, list] = {}
    for i, feature in enumerate(data.get("features", [])):
        props = feature.get("properties") or {}
        if name_key not in props:
            raise ValueError(f"feature {i} lacks the {name_key!r} property")
        name = str(props[name_key])
        geometry = feature.get("geometry") or {}
        kind = geometry.get("type")
        if kind == "Polygon":
            parts = [geometry["coordinates"]]
        elif kind == "MultiPolygon":
            parts = geometry["coordinates"]
        else:
            raise ValueError(f"feature {name!r}: unsupported geometry type {kind!r}")
        if validate:
            _check_simple(name, geometry)
        for part in parts:
            rings = tuple(tuple((float(lat), float(lon)) for lon, lat, *_ in ring) for ring in part)
            polygons.setdefault(name, []).append(rings)
    if not polygons:
        raise ValueError("geometry file contains no features")
    return canonical_order(AreaGeometry(name, tuple(polys)) for name, polys in polygons.items())


def load_areas(path: str | Path, name_key: str = "name", validate: bool = True) -> list[AreaGeometry]:
    with open(path, encoding="utf-8") as fh:
        return areas_from_geojson(json.load(fh), name_key, validate)


def locate_area(point: tuple[float, float], areas: Sequence[AreaGeometry]) -> str | None:
    """Name of the area containing ``point`` or ``None`` (e.g. offshore).

    Areas are tried in canonical name order, so a point on a shared boundary
    goes to the first name.
    """
    if not areas:
        raise ValueError("no area geometries loaded")
    lat, lon = point
    for area in canonical_order(areas):
        if area.contains(lat, lon):
            return area.name
    return None


def nearest_centroid(point: tuple[float, float], areas: Sequence[AreaGeometry]) -> str:
    best = min(
        canonical_order(areas),
        key=lambda a: haversine_km(point, a.centroid),
    )
    return best.name


class _Locator:
    """Memoizing point assignment shared by the aggregations."""

    def __init__(self, areas: Sequence[AreaGeometry], snap: bool):
        if not areas:
            raise ValueError("no area geometries loaded")
        self.areas = canonical_order(areas)
        self.snap = snap
        self._cache: dict[tuple[float, float], str | None] = {}

    def __call__(self, lat: float, lon: float) -> str | None:
        key = (lat, lon)
        if key not in self._cache:
            name = locate_area(key, self.areas)
            if name is None and self.snap:
                name = nearest_centroid(key, self.areas)
            self._cache[key] = name
        return self._cache[key]


def majority_region(records: Sequence) -> str:
    """Most frequent gold region; ties go to canonical name order."""
    if not records:
        raise ValueError("cannot pick a majority region from no records")
    counts = Counter(r.region for r in records)
    return min(counts, key=lambda r: (-counts[r], region_sort_key(r)))


def gold_region_centroid(records: Sequence, region: str) -> tuple[float, float]:
    """Arithmetic mean of the gold coordinates of ``region``'s records."""
    lats = [r.lat for r in records if r.region == region]
    if not lats:
        raise ValueError(f"no records for region {region!r}")
    lons = [r.lon for r in records if r.region == region]
    return _plain_mean(lats), _plain_mean(lons)


def _plain_mean(values: list[float]) -> float:
    # Left-to-right accumulation, so the value is reproducible by a naive loop
    # on every Python version (sum() became compensated in 3.12).
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def global_centroid(records: Sequence) -> tuple[float, float]:
    if not records:
        raise ValueError("cannot average no records")
    n = len(records)
    return math.fsum(r.lat for r in records) / n, math.fsum(r.lon for r in records) / n


@dataclass(frozen=True)
class AreaError:
    sum_km: float
    mean_km: float
    count: int


def _area_error(errors: list[float]) -> AreaError:
    if not errors:
        return AreaError(0.0, 0.0, 0)
    total = math.fsum(errors)
    return AreaError(total, total / len(errors), len(errors))


@dataclass(frozen=True)
class AreaErrorMap:
    """Sum and mean km error per area, with unlocatable samples kept apart."""

    areas: dict[str, AreaError]
    unassigned: AreaError

    @property
    def total_km(self) -> float:
        return math.fsum([*(a.sum_km for a in self.areas.values()), self.unassigned.sum_km])

    def to_csv(self) -> str:
        lines = ["area,sum_km,mean_km,count"]
        for name, e in [*self.areas.items(), (UNASSIGNED, self.unassigned)]:
            lines.append(f"{_quote(name)},{e.sum_km!r},{e.mean_km!r},{e.count}")
        return "\n".join(lines) + "\n"

    def to_geojson(self, areas: Sequence[AreaGeometry]) -> dict:
        features = []
        for area in canonical_order(areas):
            e = self.areas.get(area.name, AreaError(0.0, 0.0, 0))
            features.append(
                {
                    "type": "Feature",
                    "properties": {
                        "name": area.name,
                        "sum_km": e.sum_km,
                        "mean_km": e.mean_km,
                        "count": e.count,
                    },
                    "geometry": area.to_geojson_geometry(),
                }
            )
        return {
            "type": "FeatureCollection",
            "features": features,
            "properties": {
                "unassigned_count": self.unassigned.count,
                "unassigned_sum_km": self.unassigned.sum_km,
            },
        }


def _quote(value: str) -> str:
    if any(ch in value for ch in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def area_error_map(
    preds: Sequence,
    golds: Sequence,
    areas: Sequence[AreaGeometry],
    *,
    snap: bool = False,
    radius: float = EARTH_RADIUS_KM,
) -> AreaErrorMap:
    """Aggregate per-sample km error by the area holding each GOLD point."""
    if len(preds) != len(golds):
        raise ValueError(f"length mismatch: {len(preds)} predictions vs {len(golds)} golds")
    locate = _Locator(areas, snap)
    buckets: dict[str, list[float]] = {a.name: [] for a in locate.areas}
    unassigned: list[float] = []
    for p, g in zip(preds, golds):
        err = haversine_km((p.lat, p.lon), (g.lat, g.lon), radius)
        name = locate(g.lat, g.lon)
        (unassigned if name is None else buckets[name]).append(err)
    return AreaErrorMap({k: _area_error(v) for k, v in buckets.items()}, _area_error(unassigned))


@dataclass(frozen=True)
class DensityMap:
    counts: dict[str, int]
    unassigned: int

    def to_csv(self) -> str:
        lines = ["area,count"]
        for name, c in [*self.counts.items(), (UNASSIGNED, self.unassigned)]:
            lines.append(f"{_quote(name)},{c}")
        return "\n".join(lines) + "\n"


def density_map(
    records: Sequence, areas: Sequence[AreaGeometry], *, snap: bool = False
) -> DensityMap:
    """Number of posts whose gold point falls in each area."""
    locate = _Locator(areas, snap)
    counts = {a.name: 0 for a in locate.areas}
    unassigned = 0
    for r in records:
        name = locate(r.lat, r.lon)
        if name is None:
            unassigned += 1
        else:
            counts[name] += 1
    return DensityMap(counts, unassigned)
