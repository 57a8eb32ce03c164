import math

import numpy as np
import pytest

from cat0 import Vertex, build_spm, convex_hull, validate, verify_hull
from cat0 import _plane as pl
from cat0.hull import hull_side_angles, partition_points
from cat0.oracle import generate_instance
from cat0.points import FacePoint
from instances import SQRT3, instance_b, instance_c, instance_d


def _flat_xy(K, p):
    fi = K.faces_of_point(p)[0]
    return K.point_bary(p, fi) @ K.flat_coordinates[list(K.faces[fi])]


def _random_points(K, rng, m):
    out = []
    for _ in range(m):
        b = rng.random(3) + 1e-3
        out.append(FacePoint(int(rng.integers(K.n_faces)), tuple(b / b.sum())))
    return out


def _near(K, a, b, tol=1e-9):
    fs = K.common_faces(a, b)
    return bool(fs) and K.distance_in_face(fs[0], a, b) <= tol


def test_l_shape_golden_perimeter():
    res = convex_hull(instance_d(), [Vertex(0), Vertex(1), Vertex(2), Vertex(5)])
    assert res.kind == "polygon"
    assert res.perimeter == pytest.approx(6 + math.sqrt(2), abs=1e-9)
    assert Vertex(3) in res.boundary.breakpoints


def test_square_corners_give_the_square():
    B = instance_b()
    res = convex_hull(B, [Vertex(i) for i in range(4)])
    assert res.perimeter == pytest.approx(4.0, abs=1e-9)
    assert set(res.boundary.breakpoints) == {Vertex(i) for i in range(4)}
    assert res.contains(FacePoint(1, (0.3, 0.3, 0.4)))


def test_degenerate_hulls():
    C = instance_c()
    one = convex_hull(C, [Vertex(2), Vertex(2)])
    assert one.kind == "point" and one.perimeter == 0
    seg = convex_hull(C, [Vertex(1), Vertex(3)])
    assert seg.kind == "segment"
    assert seg.boundary.length == pytest.approx(SQRT3, abs=1e-9)
    assert seg.perimeter == pytest.approx(2 * SQRT3, abs=1e-9)


def test_partition_needs_boundary_source():
    C = instance_c()
    with pytest.raises(ValueError):
        partition_points(build_spm(C, Vertex(0)), [Vertex(1)])
    parts = partition_points(build_spm(C, Vertex(1)), [Vertex(3), Vertex(5), Vertex(6)])
    assert [ci for ci, _ in parts] == sorted(ci for ci, _ in parts)


def test_interior_points_need_an_anchor():
    B = instance_b()
    S = [FacePoint(0, (0.5, 0.25, 0.25)), FacePoint(1, (0.25, 0.25, 0.5)), FacePoint(0, (0.2, 0.4, 0.4))]
    res = convex_hull(B, S)
    assert res.skeleton.anchor is not None
    assert verify_hull(res, n_sources=5, n_targets=5).passed
    assert not res.contains(Vertex(1))


@pytest.mark.parametrize("seed", range(3))
def test_flat_convex_matches_planar_hull(seed):
    K = generate_instance("flat-convex", 30, seed)
    rng = np.random.default_rng(seed)
    S = _random_points(K, rng, 9)
    res = convex_hull(K, S)
    P = np.array([_flat_xy(K, s) for s in S])
    hp = P[pl.convex_hull(P)]
    per = sum(math.dist(hp[i], hp[i - 1]) for i in range(len(hp)))
    assert res.perimeter == pytest.approx(per, abs=1e-9)


@pytest.mark.parametrize("kind,n", [("curved", 40), ("flat-polygon", 30), ("cone-fan", 10)])
def test_hull_invariants(kind, n):
    K = generate_instance(kind, n, seed=7)
    S = _random_points(K, np.random.default_rng(1), 7)
    res = convex_hull(K, S)
    rep = verify_hull(res, n_sources=6, n_targets=6)
    assert rep.passed, rep.violations[:3]
    for sub, _, _ in res.cut.pieces.values():
        assert validate(sub).passed


def test_hull_is_idempotent_on_its_extreme_points():
    K = generate_instance("curved", 40, seed=2)
    S = _random_points(K, np.random.default_rng(4), 8)
    res = convex_hull(K, S)
    ext = [s for s in S if any(_near(K, s, b) for b in res.boundary.breakpoints)]
    assert len(ext) >= 3
    again = convex_hull(K, ext)
    assert again.perimeter == pytest.approx(res.perimeter, abs=1e-9)


def test_convexity_angles_are_reported():
    res = convex_hull(instance_d(), [Vertex(0), Vertex(1), Vertex(2), Vertex(5)])
    angles = hull_side_angles(res.K, res.boundary)
    assert len(angles) == len(res.boundary.breakpoints) - 1
