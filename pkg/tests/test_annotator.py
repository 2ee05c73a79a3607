import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topolabel.annotator import (Annotator, AnnotatorConfig, Outcome, annotate_set, classify_point,
                                 decide, point_distances, threshold_sweep)
from topolabel.distances import DiagramMetric
from topolabel.errors import ClassTooSmall, DimensionMismatch
from topolabel.geometry import PointCloud, normalize_together

from conftest import two_blobs

METRICS = [DiagramMetric("bottleneck"), DiagramMetric("wasserstein")]


def split(cloud):
    labels = np.array(cloud.labels)
    X1 = cloud.subset(np.flatnonzero(labels == 1)[:20])
    X2 = cloud.subset(np.flatnonzero(labels == 2)[:20])
    X = cloud.subset(np.r_[np.flatnonzero(labels == 1)[20:], np.flatnonzero(labels == 2)[20:]])
    return X1, X2, X


@pytest.fixture(scope="module")
def blob_sets():
    X1, X2, X = split(two_blobs())
    return tuple(normalize_together([X1, X2, X]))


def test_figure_two_rule():
    assert decide(0.1285, 0.4958, 0.6) is Outcome.CLASS1
    assert decide(0.1285, 0.4958, 0.1) is Outcome.UNLABELED


def test_both_above_threshold():
    assert decide(0.7, 0.7, 0.6) is Outcome.UNLABELED


def test_tie_policy():
    assert decide(0.3, 0.3, 0.6) is Outcome.UNLABELED
    assert decide(0.3, 0.3, 0.6, "class1") is Outcome.CLASS1


def test_threshold_equality_labels():
    assert decide(0.6, 0.9, 0.6) is Outcome.CLASS1


def test_zero_threshold_disables_test():
    assert decide(0.5, 0.9, 0.0) is Outcome.CLASS1
    assert decide(0.9, 0.5, 0.0) is Outcome.CLASS2


def test_infinite_threshold_never_binds():
    assert decide(1e9, 2e9, math.inf) is Outcome.CLASS1


@settings(max_examples=200)
@given(st.floats(0, 2), st.floats(0, 2), st.floats(0.01, 2), st.floats(0.01, 2))
def test_unlabeled_set_shrinks_with_threshold(d1, d2, t1, t2):
    lo, hi = sorted((t1, t2))
    if decide(d1, d2, hi) is Outcome.UNLABELED:
        assert decide(d1, d2, lo) is Outcome.UNLABELED


@settings(max_examples=200)
@given(st.floats(0, 2), st.floats(0, 2), st.floats(0, 2))
def test_swap_symmetry(d1, d2, t):
    swapped = {Outcome.CLASS1: Outcome.CLASS2, Outcome.CLASS2: Outcome.CLASS1,
               Outcome.UNLABELED: Outcome.UNLABELED}
    assert decide(d2, d1, t) is swapped[decide(d1, d2, t)]


def test_blob_center_goes_to_blob(blob_sets):
    X1, X2, _ = blob_sets
    center = X1.points.mean(axis=0)
    for metric in METRICS:
        cfg = AnnotatorConfig(threshold=0.8, metric=metric)
        assert classify_point(X1, X2, center, cfg).outcome is Outcome.CLASS1


def test_duplicate_point_has_zero_distance(blob_sets):
    X1, X2, _ = blob_sets
    for metric in METRICS:
        for t in (0.0, 0.05, 0.8):
            decision = classify_point(X1, X2, X1.points[3], AnnotatorConfig(threshold=t, metric=metric))
            assert decision.d1 == 0.0
            assert decision.outcome is Outcome.CLASS1


def test_symmetric_tie_is_unlabeled():
    X1 = PointCloud([[-3.0, 0.0], [-2.0, 0.0]])
    X2 = PointCloud([[2.0, 0.0], [3.0, 0.0]])
    decision = classify_point(X1, X2, [0.0, 0.0], AnnotatorConfig(threshold=10.0))
    assert decision.d1 == decision.d2
    assert decision.outcome is Outcome.UNLABELED


def test_validation():
    small = PointCloud([[0.0, 0.0]])
    ok = PointCloud([[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(ClassTooSmall):
        Annotator(small, ok)
    with pytest.raises(DimensionMismatch):
        Annotator(ok, PointCloud([[0.0], [1.0]]))
    with pytest.raises(DimensionMismatch):
        Annotator(ok, ok).classify([1.0, 2.0, 3.0])


def test_annotate_set_matches_classify_point(blob_sets):
    X1, X2, X = blob_sets
    cfg = AnnotatorConfig(threshold=0.8)
    decisions = annotate_set(X1, X2, X, cfg)
    assert [d.point_id for d in decisions] == list(X.ids)
    for i in range(0, len(X), 7):
        single = classify_point(X1, X2, X.points[i], cfg, point_id=X.ids[i])
        assert decisions[i] == single


def test_annotate_set_empty(blob_sets):
    X1, X2, X = blob_sets
    assert annotate_set(X1, X2, X.subset([])) == []


def test_annotate_set_order_independent(blob_sets):
    X1, X2, X = blob_sets
    perm = list(range(len(X)))
    random.Random(0).shuffle(perm)
    a = annotate_set(X1, X2, X)
    b = annotate_set(X1, X2, X.subset(perm))
    assert sorted(a, key=lambda d: d.point_id) == sorted(b, key=lambda d: d.point_id)


def test_bad_point_does_not_abort_batch(blob_sets):
    X1, X2, _ = blob_sets
    annotator = Annotator(X1, X2)
    X = PointCloud([[0.1, 0.1], [0.9, 0.5]])
    results = point_distances(annotator, X, METRICS)
    assert all(isinstance(r, list) for r in results)
    # a wrong-dimension point surfaces as an error message, not an exception
    narrow = Annotator(PointCloud([[0.0], [1.0]]), PointCloud([[5.0], [6.0]]))
    bad = point_distances(narrow, X, METRICS)
    assert all(isinstance(r, str) and "DimensionMismatch" in r for r in bad)


def test_parallel_matches_serial(blob_sets):
    X1, X2, X = blob_sets
    cfg = AnnotatorConfig(threshold=0.8)
    assert annotate_set(X1, X2, X, cfg, n_jobs=2) == annotate_set(X1, X2, X, cfg)


def test_sweep_grid(blob_sets):
    X1, X2, X = blob_sets
    thresholds = [0.8, 0.6, 0.4, 0.2, 0.0, math.inf]
    cells = threshold_sweep(X1, X2, X, thresholds, METRICS)
    assert [(c.metric.kind, c.threshold) for c in cells] == [
        (m.kind, t) for m in METRICS for t in thresholds]
    for c in cells:
        assert sum(c.counts().values()) == len(X)
        if c.threshold == math.inf:
            assert c.counts()[Outcome.UNLABELED] == 0


def test_sweep_distances_do_not_depend_on_threshold(blob_sets):
    X1, X2, X = blob_sets
    cells = threshold_sweep(X1, X2, X, [0.4, 0.2], METRICS[:1])
    d = np.array([[c.d1, c.d2] for c in cells[0].decisions])
    inside = np.any((d.min(axis=1) > 0.2) & (d.min(axis=1) <= 0.4))
    assert not inside, "fixture assumption: no distance in (0.2, 0.4]"
    assert [x.outcome for x in cells[0].decisions] == [x.outcome for x in cells[1].decisions]
