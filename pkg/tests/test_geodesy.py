import math

import pytest

from cat0 import Vertex, extend_ray, is_locally_geodesic, unfold_strip
from cat0.geodesy import make_path, path_from_json

from instances import SQRT3, instance_b, instance_c, instance_d

def test_make_path_drops_repeats_and_measures():
    B = instance_b()
    p = make_path(B, [Vertex(0), Vertex(0), Vertex(2)])
    assert p.breakpoints == (Vertex(0), Vertex(2))
    assert p.length == pytest.approx(math.sqrt(2), abs=1e-12)
    assert path_from_json(B, p.to_json()).breakpoints == p.breakpoints

def test_strip_unfolding_is_isometric():
    C = instance_c()
    U = unfold_strip(C, [0, 1, 2])
    a = U.vertex_position(0, 1)
    b = U.vertex_position(2, 3)
    assert math.dist(a, b) == pytest.approx(SQRT3, abs=1e-12)

def test_extend_ray_through_the_centre():
    # r0 -> c continues at half the excess angle and leaves the rim at rim-mid(r3, r4)
    ray = extend_ray(instance_c(), Vertex(1), Vertex(0))
    assert ray.length == pytest.approx(1 + SQRT3 / 2, abs=1e-9)
    end = ray.breakpoints[-1]
    assert (end.u, end.v) == (4, 5) and end.t == pytest.approx(0.5, abs=1e-9)

def test_local_geodesicity_detects_a_kink():
    D = instance_d()
    good = make_path(D, [Vertex(2), Vertex(3), Vertex(5)])
    assert is_locally_geodesic(D, good)
    B = instance_b()
    bad = make_path(B, [Vertex(0), Vertex(1), Vertex(2)])
    assert not is_locally_geodesic(B, bad)

def test_reversed_path():
    D = instance_d()
    p = make_path(D, [Vertex(2), Vertex(3), Vertex(5)])
    r = p.reversed()
    assert r.breakpoints == p.breakpoints[::-1]
    assert r.length == p.length
