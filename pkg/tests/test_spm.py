import math

import pytest

from cat0 import Vertex, build_spm, verify_spm
from cat0.geodesy import make_path
from cat0.oracle import generate_instance
from cat0.points import EdgePoint, FacePoint
from instances import SQRT3, instance_a, instance_b, instance_c, instance_d


def test_golden_vertex_distances_on_c():
    m = build_spm(instance_c(), Vertex(1))
    d = m.vertex_distances()
    assert d[3] == pytest.approx(SQRT3, abs=1e-9)
    assert d[4] == pytest.approx(2.0, abs=1e-9)
    assert d[0] == pytest.approx(1.0, abs=1e-12)


def test_cone_counts():
    assert len(build_spm(instance_a(), Vertex(0)).cones) == 1
    m = build_spm(instance_c(), Vertex(1))
    assert len(m.cones) == 5
    # the cone behind the centre spans the face (r3, c, r4) with angle pi/3
    apex_c = [c for c in m.cones if c.apex == 0]
    assert len(apex_c) == 1
    assert apex_c[0].apex_angle == pytest.approx(math.pi / 3, abs=1e-9)


@pytest.mark.parametrize(
    "make,src",
    [
        (instance_a, Vertex(0)),
        (instance_b, Vertex(1)),
        (instance_c, Vertex(1)),
        (instance_c, Vertex(0)),
        (instance_d, Vertex(2)),
        (instance_d, EdgePoint(0, 3, 0.5)),
        (instance_d, FacePoint(3, (0.2, 0.3, 0.5))),
        (instance_c, FacePoint(2, (0.6, 0.2, 0.2))),
    ],
)
def test_verify_spm_on_named_instances(make, src):
    K = make()
    m = build_spm(K, src)
    rep = verify_spm(K, m, n_coverage=300, n_convexity=40)
    assert rep.passed, rep.violations[:3]
    assert len(m.cones) <= 6 * K.n_vertices


@pytest.mark.parametrize("kind,n", [("flat-polygon", 30), ("curved", 40), ("cone-fan", 8), ("spindle", 24)])
def test_verify_spm_on_generated(kind, n):
    K = generate_instance(kind, n, seed=3)
    m = build_spm(K, Vertex(K.n_vertices // 2))
    rep = verify_spm(K, m, n_coverage=300, n_convexity=30)
    assert rep.passed, rep.violations[:3]


def test_mutated_side_is_caught():
    K = generate_instance("curved", 40, seed=1)
    m = build_spm(K, Vertex(0))
    assert verify_spm(K, m, n_coverage=100, n_convexity=10).passed
    Kr = m.Kr
    for c in m.cones:
        bp = list(c.side_p.breakpoints)
        k = next((i for i in range(1, len(bp) - 1) if isinstance(bp[i], EdgePoint)), None)
        if k is not None:
            e = bp[k]
            bp[k] = EdgePoint(e.u, e.v, e.t + (1e-3 if e.t < 0.5 else -1e-3))
            c.side_p = make_path(Kr, bp)
            break
    else:
        pytest.skip("no side crosses an edge")
    rep = verify_spm(K, m, n_coverage=100, n_convexity=10)
    assert "vi" in rep.checks_failed()


def test_dump_is_deterministic():
    a = build_spm(instance_d(), Vertex(0)).to_json()
    b = build_spm(instance_d(), Vertex(0)).to_json()
    assert a == b
    assert set(a) == {"source", "cones", "vertex_distances"}
    assert {"apex", "sideP", "sideQ", "faces"} <= set(a["cones"][0])
