import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cat0 import ComplexError, PlanarComplex, Vertex, boundary, parse_complex, serialize_complex, validate
from cat0.complex import identity_refinement, insert_point
from cat0.points import EdgePoint, FacePoint
from instances import fan, instance_a, instance_b, instance_c, instance_d


@pytest.mark.parametrize("make", [instance_a, instance_b, instance_c, instance_d])
def test_named_instances_validate(make):
    rep = validate(make())
    assert rep.passed, rep.codes()


def test_five_fan_is_positively_curved():
    rep = validate(fan(5))
    assert rep.codes() == ["CURVATURE"]


def test_degenerate_triangle_rejected():
    K = PlanarComplex(3, [(0, 1, 2)], {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 3.0})
    assert "TRIANGLE_INEQ" in validate(K).codes()


def test_angle_sums():
    C = instance_c()
    assert C.vertex_angle_sum(0) == pytest.approx(7 * math.pi / 3, abs=1e-12)
    A = instance_a()
    assert A.corner_angle(0, 0) == pytest.approx(math.pi / 2, abs=1e-12)


def test_boundary_cycle():
    assert boundary(instance_b()) == [0, 1, 2, 3]
    D = instance_d()
    assert sorted(boundary(D)) == list(range(6))


def test_round_trip_serialization():
    for K in (instance_a(), instance_b(), instance_c(), instance_d()):
        again = parse_complex(serialize_complex(K))
        assert again == K
        assert serialize_complex(again) == serialize_complex(K)


def test_parse_errors_are_located():
    with pytest.raises(ComplexError, match="line 1"):
        parse_complex('{"format": "cat0-complex/1", "n_vertices": 3, "faces": [[0,1,2]]')
    with pytest.raises(ComplexError):
        parse_complex(json.dumps({"format": "cat0-complex/1", "n_vertices": 3, "faces": [[0, 1, 2]]}))


def test_polygon_faces_need_diagonal_lengths():
    doc = {"format": "cat0-complex/1", "n_vertices": 4, "faces": [[0, 1, 2, 3]],
           "flat_coordinates": [[0, 0], [1, 0], [1, 1], [0, 1]]}
    K = parse_complex(json.dumps(doc))
    assert K.n_faces == 2
    assert K.length(0, 2) == pytest.approx(math.sqrt(2))


def test_point_conversions():
    B = instance_b()
    p = B.normalize(EdgePoint(2, 0, 0.25))
    assert p == EdgePoint(0, 2, 0.75)
    xy0 = B.point_xy(p, 0)
    xy1 = B.point_xy(p, 1)
    assert np.hypot(*(xy0 - B.charts[0][0])) == pytest.approx(np.hypot(*(xy1 - B.charts[1][0])))
    assert B.canonical(0, (1.0, 0.0, 0.0)) == Vertex(0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 1), st.floats(0.01, 0.98), st.floats(0.01, 0.98))
def test_insert_point_round_trip(fi, a, b):
    if a + b >= 0.99:
        a, b = a / 2, b / 2
    B = instance_b()
    p = FacePoint(fi, (1 - a - b, a, b))
    R, s = insert_point(B, p)
    assert validate(R.child).passed
    assert _close(B, R.to_parent(Vertex(s)), p)
    q = FacePoint(1 - fi, (0.2, 0.3, 0.5))
    assert _close(B, R.to_parent(R.to_child(q)), q)


def _close(K, a, b):
    fs = K.common_faces(a, b)
    return bool(fs) and K.distance_in_face(fs[0], a, b) < 1e-12


def test_identity_refinement():
    C = instance_c()
    R = identity_refinement(C)
    assert R.to_child(Vertex(3)) == Vertex(3)
