import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cat0 import Vertex, build_spm, is_locally_geodesic, locate_cone, shortest_path
from cat0.points import EdgePoint, FacePoint
from cat0.query import distance, unfold_cone
from instances import SQRT3, instance_b, instance_c, instance_d


def test_flat_square_diagonal():
    path, d = shortest_path(build_spm(instance_b(), Vertex(0)), Vertex(2))
    assert d == pytest.approx(math.sqrt(2), abs=1e-12)
    assert path.breakpoints[0] == Vertex(0) and path.breakpoints[-1] == Vertex(2)


def test_rim_midpoint_routes_through_the_centre():
    m = build_spm(instance_c(), Vertex(1))
    path, d = shortest_path(m, EdgePoint(4, 5, 0.5))
    assert d == pytest.approx(1 + SQRT3 / 2, abs=1e-9)
    assert Vertex(0) in path.breakpoints
    assert path.length == pytest.approx(d, abs=1e-9)


def test_l_shape_bends_at_the_reflex_corner():
    D = instance_d()
    m = build_spm(D, Vertex(2))
    path, d = shortest_path(m, Vertex(5))
    assert d == pytest.approx(1 + math.sqrt(2), abs=1e-12)
    assert path.breakpoints == (Vertex(2), Vertex(3), Vertex(5))


def test_locate_cone_prefers_lowest_index_on_shared_sides():
    m = build_spm(instance_c(), Vertex(1))
    for c in m.cones:
        y = m.refinement.to_parent(c.side_q.end)
        assert locate_cone(m, y) <= c.index


def test_cone_unfolding_angles():
    m = build_spm(instance_c(), Vertex(1))
    cu = unfold_cone(m, 0)
    a, b, c = cu.angles
    assert a + b + c == pytest.approx(math.pi, abs=1e-9)
    assert a < math.pi


def _rand_point(K, rng):
    fi = int(rng.integers(K.n_faces))
    b = rng.random(3) + 1e-3
    return FacePoint(fi, tuple(b / b.sum()))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_symmetry_and_triangle_inequality(seed):
    K = instance_c()
    rng = np.random.default_rng(seed)
    x, y, z = (_rand_point(K, rng) for _ in range(3))
    mx, my = build_spm(K, x), build_spm(K, y)
    dxy, dyx = distance(mx, y), distance(my, x)
    assert dxy == pytest.approx(dyx, abs=1e-9)
    assert distance(mx, z) <= dxy + distance(my, z) + 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_returned_paths_are_geodesic(seed):
    K = instance_d()
    rng = np.random.default_rng(seed)
    x, y = _rand_point(K, rng), _rand_point(K, rng)
    path, d = shortest_path(build_spm(K, x), y)
    assert path.length == pytest.approx(d, abs=1e-9)
    assert is_locally_geodesic(K, path, 1e-7)
