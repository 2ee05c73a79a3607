import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topolabel.errors import InvalidFiltration
from topolabel.filtration import Filtration, Simplex, build_rips
from topolabel.geometry import DistanceMatrix, PointCloud, pairwise_distances
from topolabel.oracles import betti_numbers
from topolabel.persistence import PersistenceDiagram, PersistencePoint, compute_persistence, finitize

SQRT2 = math.sqrt(2)


def diagram(points, max_dim=2, **kw):
    return compute_persistence(build_rips(pairwise_distances(PointCloud(points)), max_dim), **kw)


def pairs(diag, k):
    return sorted(map(tuple, diag.degree(k).tolist()))


def test_equilateral_triangle():
    d = np.ones((3, 3)) - np.eye(3)
    diag = compute_persistence(build_rips(DistanceMatrix(d), 2))
    assert pairs(diag, 0) == [(0.0, 1.0), (0.0, 1.0), (0.0, math.inf)]
    assert pairs(diag, 1) == []


def test_unit_square_loop():
    diag = diagram([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert pairs(diag, 1) == [(1.0, SQRT2)]


def test_top_degree_not_reported():
    diag = diagram([[0, 0], [1, 0], [1, 1], [0, 1]], max_dim=1)
    assert diag.degrees == (0,)


def test_missing_face_is_rejected():
    filt = Filtration.from_simplices([Simplex((0,), 0.0), Simplex((0, 1), 1.0)])
    with pytest.raises(InvalidFiltration):
        compute_persistence(filt)


def test_face_entering_late_is_rejected():
    filt = Filtration.from_simplices([Simplex((0,), 0.0), Simplex((1,), 2.0), Simplex((0, 1), 1.0)])
    with pytest.raises(InvalidFiltration):
        compute_persistence(filt)


def test_betti_against_gf2_oracle():
    rng = np.random.default_rng(5)
    pts = rng.uniform(size=(8, 3))
    diag = diagram(pts)
    for r in np.linspace(0, 1.8, 20):
        want = betti_numbers(pts.tolist(), 2, r)
        assert [diag.betti(k, r) for k in range(2)] == want, r


def test_finitize_drop():
    diag = PersistenceDiagram((PersistencePoint(0, 0.0, math.inf),), enclosing_radius=2.5)
    assert finitize(diag, "drop").points == ()


def test_finitize_cap():
    diag = PersistenceDiagram((PersistencePoint(0, 0.0, math.inf),), enclosing_radius=2.5)
    capped = finitize(diag, "cap")
    assert capped.points == (PersistencePoint(0, 0.0, 2.5),)
    assert capped.essential_policy == "cap"
    assert finitize(capped, "cap") == capped


def test_json_round_trip():
    diag = diagram(np.random.default_rng(1).uniform(size=(6, 2)))
    again = PersistenceDiagram.from_json(diag.to_json())
    assert again.points == diag.points
    assert '"inf"' in diag.to_json()


def test_zero_persistence_dropped():
    diag = diagram([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    assert all(p.death > p.birth for p in diag.points)
    assert pairs(diag, 0) == [(0.0, 1.0), (0.0, math.inf)]


clouds = st.integers(2, 9).flatmap(
    lambda n: st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1)),
                       min_size=n, max_size=n))


@settings(max_examples=60, deadline=None)
@given(clouds)
def test_clearing_does_not_change_diagram(pts):
    fast = diagram(pts)
    assert diagram(pts, clearing=False).points == fast.points
    assert diagram(pts, clearing=True, union_find_h0=False).points == fast.points


@settings(max_examples=60, deadline=None)
@given(clouds)
def test_one_essential_component(pts):
    diag = diagram(pts)
    assert sum(1 for p in diag.essential() if p.dim == 0) == 1
    assert all(p.birth >= 0 and p.death >= p.birth for p in diag.points)


@pytest.mark.parametrize("seed, radius", [(0, "auto"), (1, "auto"), (2, 0.35), (3, 0.5)])
def test_fast_path_on_larger_clouds(seed, radius):
    pts = np.random.default_rng(seed).uniform(size=(40, 3))
    filt = build_rips(pairwise_distances(PointCloud(pts)), 2, radius)
    fast = compute_persistence(filt)
    assert compute_persistence(filt, clearing=False).points == fast.points
    if radius != "auto":
        # truncated filtrations can leave loops alive; the early stop must not hide them
        assert compute_persistence(filt, clearing=True, union_find_h0=False).points == fast.points
