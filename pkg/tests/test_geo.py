import logging
import math
import random
from types import SimpleNamespace

import pytest
from hypothesis import given, strategies as st

from geobench.geo import (
    AreaGeometry,
    area_error_map,
    areas_from_geojson,
    density_map,
    gold_region_centroid,
    locate_area,
    majority_region,
)
from geobench.ingest import Record
from geobench.metrics import EARTH_RADIUS_KM, avg_distance_error

KM_PER_DEG = math.pi * EARTH_RADIUS_KM / 180.0


def square(lat0, lon0, size=1.0):
    return (
        (lat0, lon0), (lat0, lon0 + size), (lat0 + size, lon0 + size), (lat0 + size, lon0), (lat0, lon0),
    )


# --- winding-number oracle (independent of the even-odd implementation) ----


def _is_left(a, b, p):
    return (b[1] - a[1]) * (p[0] - a[0]) - (p[1] - a[1]) * (b[0] - a[0])


def winding_number(ring, p):
    wn = 0
    for a, b in zip(ring, ring[1:]):
        if a[0] <= p[0]:
            if b[0] > p[0] and _is_left(a, b, p) > 0:
                wn += 1
        elif b[0] <= p[0] and _is_left(a, b, p) < 0:
            wn -= 1
    return wn


def oracle_locate(point, areas):
    for area in sorted(areas, key=lambda a: a.name):
        for shell, *holes in area.polygons:
            if winding_number(shell, point) and not any(winding_number(h, point) for h in holes):
                return area.name
    return None


# ---------------------------------------------------------------------------


def test_unit_square():
    sq = AreaGeometry("sq", ((square(0.0, 0.0),),))
    assert locate_area((0.5, 0.5), [sq]) == "sq"
    assert locate_area((1.5, 0.5), [sq]) is None
    assert sq.centroid == pytest.approx((0.5, 0.5))


def test_empty_geometry_set_is_an_error():
    with pytest.raises(ValueError):
        locate_area((0.0, 0.0), [])


@pytest.mark.parametrize(
    "ring",
    [
        ((0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)),  # not closed
        ((0.0, 0.0), (0.0, 1.0), (0.0, 0.0)),  # too short
    ],
)
def test_ring_validation(ring):
    with pytest.raises(ValueError):
        AreaGeometry("bad", ((ring,),))


def test_self_intersection_warns(caplog):
    bowtie = [[[0, 0], [1, 1], [1, 0], [0, 1], [0, 0]]]
    fc = {
        "type": "FeatureCollection",
        "features": [{"type": "Feature", "properties": {"name": "x"}, "geometry": {"type": "Polygon", "coordinates": bowtie}}],
    }
    with caplog.at_level(logging.WARNING):
        areas_from_geojson(fc)
    assert "invalid geometry" in caplog.text


def test_geojson_lon_lat_order_and_name_key():
    fc = {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {"DEN_PROV": "Roma"},
                "geometry": {"type": "Polygon", "coordinates": [[[12, 41], [13, 41], [13, 42], [12, 42], [12, 41]]]},
            }
        ],
    }
    (area,) = areas_from_geojson(fc, name_key="DEN_PROV")
    assert area.name == "Roma"
    assert locate_area((41.9, 12.5), [area]) == "Roma"
    assert locate_area((12.5, 41.9), [area]) is None


def test_table1_points_locate_to_their_regions(areas, table1):
    for rec in table1:
        assert locate_area(rec.coords, areas) == rec.region


@pytest.mark.parametrize(
    "point, expected",
    [
        ((41.0, 14.0), "Campania"),  # Lazio/Campania shared edge
        ((45.0, 8.5), "Lombardia"),  # Piemonte/Lombardia shared edge
        ((42.8, 12.0), "Lazio"),  # Toscana/Lazio shared edge
        ((40.8, 12.0), "Lazio"),  # outer edge
        ((40.15, 9.0), None),  # inside Sardegna's hole
        ((40.0, 9.0), "Sardegna"),  # on the hole's edge
        ((42.74, 10.3), "Toscana"),  # second polygon of a multipolygon
        ((39.5, 12.0), None),  # offshore
    ],
)
def test_boundaries_holes_and_multipolygons(areas, point, expected):
    assert locate_area(point, areas) == expected
    assert locate_area(point, list(reversed(areas))) == expected


def test_locate_matches_winding_oracle_on_random_points(areas):
    rng = random.Random(2024)
    for _ in range(2000):
        p = (rng.uniform(36.0, 47.0), rng.uniform(6.0, 19.0))
        assert locate_area(p, areas) == oracle_locate(p, areas)


def test_centroids_lie_in_bbox(areas):
    for a in areas:
        lo_lat, lo_lon, hi_lat, hi_lon = a.bbox
        assert lo_lat <= a.centroid[0] <= hi_lat and lo_lon <= a.centroid[1] <= hi_lon


def test_hole_shifts_centroid():
    shell = square(0.0, 0.0, 4.0)
    hole = square(0.0, 0.0, 2.0)[::-1]
    area = AreaGeometry("h", ((shell, hole),))
    # 16 - 4 = 12; centroid = (16*2 - 4*1) / 12
    assert area.centroid == pytest.approx((28 / 12, 28 / 12))


# --- centroids --------------------------------------------------------------


def rec(i, region, lat, lon):
    return Record(str(i), "", region, lat, lon)


def test_gold_region_centroid_examples():
    assert gold_region_centroid([rec(1, "Campania", 40.0, 14.0)], "Campania") == (40.0, 14.0)
    recs = [rec(1, "Campania", 40.0, 14.0), rec(2, "Campania", 42.0, 12.0), rec(3, "Lazio", 0.0, 0.0)]
    assert gold_region_centroid(recs, "Campania") == (41.0, 13.0)
    with pytest.raises(ValueError):
        gold_region_centroid(recs, "Veneto")


def test_gold_region_centroid_fixture_campania(fixture_train):
    camp = [r for r in fixture_train if r.region == "Campania"]
    naive_lat = naive_lon = 0.0
    for r in camp:
        naive_lat += r.lat
        naive_lon += r.lon
    assert gold_region_centroid(fixture_train, "Campania") == (naive_lat / len(camp), naive_lon / len(camp))


@given(st.lists(st.tuples(st.floats(35, 48), st.floats(6, 19)), min_size=1, max_size=50))
def test_gold_centroid_within_bbox(points):
    recs = [rec(i, "Lazio", lat, lon) for i, (lat, lon) in enumerate(points)]
    lat, lon = gold_region_centroid(recs, "Lazio")
    assert min(p[0] for p in points) - 1e-9 <= lat <= max(p[0] for p in points) + 1e-9
    assert min(p[1] for p in points) - 1e-9 <= lon <= max(p[1] for p in points) + 1e-9


def test_majority_region_tie_goes_to_canonical_order():
    recs = [rec(1, "Veneto", 45, 12), rec(2, "Lazio", 41, 12)]
    assert majority_region(recs) == "Lazio"


# --- aggregations ----------------------------------------------------------

FIVE = [AreaGeometry(name, ((square(0.0, 2.0 * i),),)) for i, name in enumerate("ABCDE")]


def P(lat, lon):
    return SimpleNamespace(lat=lat, lon=lon)


def test_error_map_exact_predictions_are_zero(areas, fixture_train):
    emap = area_error_map(fixture_train, fixture_train, areas)
    assert all(e.sum_km == 0.0 and e.mean_km == 0.0 for e in emap.areas.values())


def test_error_map_two_samples():
    golds = [P(0.5, 0.5), P(0.5, 0.6)]
    # meridian offsets: 10 km and 30 km
    preds = [P(0.5 + 10 / KM_PER_DEG, 0.5), P(0.5 - 30 / KM_PER_DEG, 0.6)]
    e = area_error_map(preds, golds, FIVE).areas["A"]
    assert e.count == 2
    assert e.sum_km == pytest.approx(40.0, abs=1e-9)
    assert e.mean_km == pytest.approx(20.0, abs=1e-9)


def test_error_map_five_area_fixture():
    # gold points (by area) and latitude offsets in degrees of the predictions
    golds = [P(0.5, 0.5), P(0.2, 2.5), P(0.7, 2.5), P(0.5, 4.5), P(0.5, 8.5), P(0.5, 1.5), P(0.1, 0.1)]
    offsets = [1.0, 2.0, 0.5, 0.0, 3.0, 1.0, 0.25]
    preds = [P(g.lat + d, g.lon) for g, d in zip(golds, offsets)]
    emap = area_error_map(preds, golds, FIVE)
    hand = {  # area: (sum in degrees, count)
        "A": (1.25, 2),
        "B": (2.5, 2),
        "C": (0.0, 1),
        "D": (0.0, 0),
        "E": (3.0, 1),
    }
    for name, (deg, count) in hand.items():
        e = emap.areas[name]
        assert e.count == count
        assert e.sum_km == pytest.approx(deg * KM_PER_DEG, abs=1e-9)
        assert e.mean_km == pytest.approx(deg * KM_PER_DEG / count if count else 0.0, abs=1e-9)
    assert emap.unassigned.count == 1 and emap.unassigned.sum_km == pytest.approx(KM_PER_DEG)
    total = emap.total_km
    assert total == pytest.approx(len(golds) * avg_distance_error(preds, golds), abs=1e-6)


def test_error_map_length_mismatch():
    with pytest.raises(ValueError):
        area_error_map([P(0, 0)], [], FIVE)


def test_error_map_outputs(areas, fixture_test):
    preds = [P(41.9, 12.5)] * len(fixture_test)
    emap = area_error_map(preds, fixture_test, areas)
    csv = emap.to_csv().splitlines()
    assert csv[0] == "area,sum_km,mean_km,count"
    assert csv[-1].startswith("(unassigned),")
    gj = emap.to_geojson(areas)
    assert len(gj["features"]) == len(areas)
    props = gj["features"][0]["properties"]
    assert set(props) == {"name", "sum_km", "mean_km", "count"}
    for e in emap.areas.values():
        if e.count:
            assert e.mean_km * e.count == pytest.approx(e.sum_km, abs=1e-6)


def test_density_map(areas, table1, fixture_test):
    assert set(density_map([], areas).counts.values()) == {0}
    dens = density_map(table1, areas)
    assert {k: v for k, v in dens.counts.items() if v} == {"Piemonte": 1, "Campania": 1, "Veneto": 1}
    dens = density_map(fixture_test, areas)
    assert sum(dens.counts.values()) == len(fixture_test) - dens.unassigned
    assert dens.unassigned == 2


def test_density_matches_oracle_on_random_records(areas):
    rng = random.Random(5)
    recs = [rec(i, "Lazio", rng.uniform(36, 47), rng.uniform(6, 19)) for i in range(500)]
    expected = {a.name: 0 for a in areas}
    unassigned = 0
    for r in recs:
        name = oracle_locate(r.coords, areas)
        if name is None:
            unassigned += 1
        else:
            expected[name] += 1
    dens = density_map(recs, areas)
    assert dens.counts == expected and dens.unassigned == unassigned


def test_snap_nearest_centroid(areas):
    offshore = [rec(1, "Lazio", 39.5, 12.0)]
    assert density_map(offshore, areas).unassigned == 1
    snapped = density_map(offshore, areas, snap=True)
    assert snapped.unassigned == 0
    assert sum(snapped.counts.values()) == 1
