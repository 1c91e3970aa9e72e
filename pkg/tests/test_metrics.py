import math
import random
from types import SimpleNamespace

import pytest
from hypothesis import given, strategies as st

from geobench.metrics import (
    AVG_KM_COLUMN,
    EARTH_RADIUS_KM,
    MACRO_F1_COLUMN,
    avg_distance_error,
    confusion,
    evaluate,
    f1_macro,
    f1_micro,
    haversine_km,
    per_class_scores,
)


# --- independent oracles ---------------------------------------------------


def oracle_macro_f1(preds, golds):
    classes = []
    for g in golds:
        if g not in classes:
            classes.append(g)
    total = 0.0
    for c in classes:
        tp = fp = fn = 0
        for p, g in zip(preds, golds):
            if p == c and g == c:
                tp += 1
            elif p == c:
                fp += 1
            elif g == c:
                fn += 1
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        total += 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    return total / len(classes)


def oracle_micro_f1(preds, golds):
    tp = fp = fn = 0
    for c in set(golds) | set(preds):
        for p, g in zip(preds, golds):
            tp += p == c and g == c
            fp += p == c and g != c
            fn += p != c and g == c
    prec, rec = tp / (tp + fp), tp / (tp + fn)
    return 2 * prec * rec / (prec + rec) if prec + rec else 0.0


def law_of_cosines_km(p, q, radius=EARTH_RADIUS_KM):
    f1, f2 = math.radians(p[0]), math.radians(q[0])
    dl = math.radians(q[1] - p[1])
    c = math.sin(f1) * math.sin(f2) + math.cos(f1) * math.cos(f2) * math.cos(dl)
    return radius * math.acos(max(-1.0, min(1.0, c)))


def pt(lat, lon, region="Lazio"):
    return SimpleNamespace(lat=lat, lon=lon, region=region)


# --- F1 ------------------------------------------------------------------


def test_macro_f1_perfect():
    labels = ["x", "y", "y", "z"]
    assert f1_macro(labels, labels) == 1.0


def test_macro_f1_hand_example():
    # P_A=1, R_A=1/2; P_B=1/2, R_B=1 -> both F1 = 2/3
    golds, preds = ["A", "A", "B"], ["A", "B", "B"]
    scores = per_class_scores(preds, golds)
    assert scores["A"].precision == 1.0 and scores["A"].recall == 0.5
    assert scores["B"].precision == 0.5 and scores["B"].recall == 1.0
    assert f1_macro(preds, golds) == pytest.approx(2 / 3, abs=1e-12)


def test_micro_f1_examples():
    assert f1_micro(["A", "B", "B"], ["A", "A", "B"]) == pytest.approx(2 / 3)
    assert f1_micro(["A", "B"], ["A", "B"]) == 1.0
    assert f1_micro(["B", "A"], ["A", "B"]) == 0.0


def test_pred_only_class_affects_precision_but_not_average():
    golds, preds = ["A", "A"], ["A", "C"]
    scores = per_class_scores(preds, golds)
    assert list(scores) == ["A"]
    assert f1_macro(preds, golds) == pytest.approx(2 * 1 * 0.5 / 1.5)


def test_fixed_universe_includes_absent_classes():
    golds, preds = ["A", "A"], ["A", "A"]
    assert f1_macro(preds, golds, labels=["A", "B"]) == 0.5


@pytest.mark.parametrize("f", [f1_macro, f1_micro])
def test_f1_rejects_bad_input(f):
    with pytest.raises(ValueError):
        f([], [])
    with pytest.raises(ValueError):
        f(["A"], ["A", "B"])


def test_f1_matches_brute_force_on_random_vectors():
    rng = random.Random(1234)
    for _ in range(1000):
        k = rng.randint(1, 8)
        n = rng.randint(1, 40)
        golds = [rng.randrange(k) for _ in range(n)]
        preds = [rng.randrange(k) for _ in range(n)]
        assert abs(f1_macro(preds, golds) - oracle_macro_f1(preds, golds)) <= 1e-9
        assert abs(f1_micro(preds, golds) - oracle_micro_f1(preds, golds)) <= 1e-9


def test_f1_agrees_with_sklearn():
    metrics = pytest.importorskip("sklearn.metrics")
    rng = random.Random(99)
    for _ in range(200):
        n = rng.randint(1, 60)
        golds = [rng.randrange(6) for _ in range(n)]
        preds = [rng.randrange(7) for _ in range(n)]
        expected = metrics.f1_score(golds, preds, labels=sorted(set(golds)), average="macro", zero_division=0)
        assert f1_macro(preds, golds) == pytest.approx(expected, abs=1e-12)


label_pairs = st.integers(1, 50).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
    )
)


@given(label_pairs, st.randoms(use_true_random=False))
def test_metrics_are_permutation_invariant(pair, rnd):
    preds, golds = pair
    idx = list(range(len(golds)))
    rnd.shuffle(idx)
    sp, sg = [preds[i] for i in idx], [golds[i] for i in idx]
    assert f1_macro(sp, sg) == pytest.approx(f1_macro(preds, golds), abs=1e-12)
    assert f1_micro(sp, sg) == f1_micro(preds, golds)
    assert 0.0 <= f1_macro(preds, golds) <= 1.0
    assert f1_micro(preds, golds) == sum(p == g for p, g in zip(preds, golds)) / len(golds)


# --- distances -----------------------------------------------------------


def test_haversine_identity():
    assert haversine_km((45.0729, 7.6758), (45.0729, 7.6758)) == 0.0


def test_haversine_antipodal_closed_form():
    assert haversine_km((0.0, 0.0), (0.0, 180.0)) == pytest.approx(math.pi * 6371.0088, abs=1e-9)
    assert haversine_km((0.0, 0.0), (0.0, 180.0)) == pytest.approx(20015.1144, abs=1e-3)
    # the familiar 20015.087 km figure belongs to R = 6371.0
    assert haversine_km((0.0, 0.0), (0.0, 180.0), radius=6371.0) == pytest.approx(20015.087, abs=1e-3)


def test_haversine_table1_rows_dual_formula():
    p, q = (45.0729, 7.6758), (40.8541, 14.2435)
    d = haversine_km(p, q)
    assert d == pytest.approx(law_of_cosines_km(p, q), abs=1e-6)
    assert d == pytest.approx(710.6760158, abs=1e-6)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_haversine_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        haversine_km((bad, 0.0), (0.0, 0.0))


coords = st.tuples(st.floats(-90, 90), st.floats(-180, 180))


@given(coords, coords, coords)
def test_haversine_metric_properties(p, q, r):
    assert haversine_km(p, q) == haversine_km(q, p)
    assert haversine_km(p, q) >= 0.0
    assert haversine_km(p, r) <= haversine_km(p, q) + haversine_km(q, r) + 1e-9


def test_avg_distance_examples():
    golds = [pt(41.9, 12.5), pt(45.0, 7.6)]
    assert avg_distance_error(golds, golds) == 0.0
    with pytest.raises(ValueError):
        avg_distance_error(golds, golds[:1])


def test_avg_distance_is_arithmetic_mean():
    # two samples at 10 km and 30 km along the equator
    deg_per_km = 180.0 / (math.pi * EARTH_RADIUS_KM)
    golds = [pt(0.0, 0.0), pt(0.0, 0.0)]
    preds = [pt(0.0, 10 * deg_per_km), pt(0.0, 30 * deg_per_km)]
    assert avg_distance_error(preds, golds) == pytest.approx(20.0, abs=1e-9)


def test_avg_distance_matches_naive_sum():
    rng = random.Random(7)
    golds = [pt(rng.uniform(36, 47), rng.uniform(6, 19)) for _ in range(500)]
    preds = [pt(rng.uniform(36, 47), rng.uniform(6, 19)) for _ in range(500)]
    naive = 0.0
    for p, g in zip(preds, golds):
        naive += law_of_cosines_km((p.lat, p.lon), (g.lat, g.lon))
    naive /= len(golds)
    assert avg_distance_error(preds, golds) == pytest.approx(naive, rel=1e-9)


# --- confusion -------------------------------------------------------------


def test_confusion_hand_example():
    cm = confusion(["A", "B", "B"], ["A", "A", "B"])
    assert cm.rows == ["A", "B"] and cm.columns == ["A", "B"]
    assert cm.frequencies == [[0.5, 0.5], [0.0, 1.0]]
    assert cm.to_csv() == "gold\\pred,A,B\nA,0.5000,0.5000\nB,-,1.0000\n"


def test_confusion_perfect_is_identity():
    labels = ["Lazio", "Campania", "Veneto", "Lazio"]
    cm = confusion(labels, labels)
    assert cm.rows == ["Campania", "Lazio", "Veneto"]
    assert cm.frequencies == [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]


def test_confusion_pred_only_class_adds_a_column():
    cm = confusion(["Lazio", "Umbria"], ["Lazio", "Lazio"])
    assert cm.rows == ["Lazio"]
    assert cm.columns == ["Lazio", "Umbria"]
    assert cm.count("Lazio", "Umbria") == 1


@given(label_pairs)
def test_confusion_rows_normalize(pair):
    preds, golds = pair
    cm = confusion(preds, golds)
    assert cm.n == len(golds)
    for row in cm.frequencies:
        assert math.isclose(sum(row), 1.0, abs_tol=1e-9)


# --- report ---------------------------------------------------------------


def test_evaluate_report_schema():
    golds = [pt(41.9, 12.5, "Lazio"), pt(40.85, 14.25, "Campania")]
    preds = [
        SimpleNamespace(lat=41.9, lon=12.5, region="Lazio", parse_status="clean"),
        SimpleNamespace(lat=41.9, lon=12.5, region="Lazio", parse_status="fallback"),
    ]
    report = evaluate(preds, golds)
    data = report.to_dict()
    assert set(data["summary"]) == {MACRO_F1_COLUMN, AVG_KM_COLUMN}
    assert report.parse_failure_rate == 0.5
    assert report.micro_f1 == 0.5
    assert sum(s["support"] for s in data["per_class"].values()) == report.n == 2
    header, row = report.to_csv().splitlines()
    assert header.split(",")[0] == MACRO_F1_COLUMN and AVG_KM_COLUMN in header
    assert float(row.split(",")[2]) == report.avg_km
