import math

import numpy as np
import pytest

from cat0 import Vertex, build_spm, validate
from cat0.oracle import KINDS, EpsilonNet, cone_fan, generate_instance, oracle_distance, visibility_distance
from cat0.query import distance
from instances import SQRT3, instance_c, instance_d


@pytest.mark.parametrize("kind", KINDS)
def test_generators_are_valid_and_seeded(kind):
    n = 9 if kind == "cone-fan" else 30
    K = generate_instance(kind, n, seed=5)
    assert validate(K).passed
    again = generate_instance(kind, n, seed=5)
    assert again == K


def test_cone_fan_needs_excess_angle():
    with pytest.raises(ValueError):
        cone_fan(6)
    assert cone_fan(7) == instance_c()


def test_net_upper_bounds_and_converges():
    K = instance_c()
    exact = SQRT3
    prev = math.inf
    for eps in (0.1, 0.05, 0.025):
        d = oracle_distance(K, Vertex(1), Vertex(3), eps)
        assert d >= exact - 1e-9
        assert d <= prev + 1e-12
        prev = d
    assert prev - exact < 0.05 * exact


def test_net_batch_matches_single():
    K = instance_c()
    net = EpsilonNet(K, 0.05)
    D = net.distances([Vertex(1)], [Vertex(3), Vertex(4)])
    assert D.shape == (1, 2)
    assert D[0, 0] == pytest.approx(oracle_distance(K, Vertex(1), Vertex(3), 0.05))


def test_visibility_on_the_l_shape():
    D = instance_d()
    assert visibility_distance(D, Vertex(2), Vertex(5)) == pytest.approx(1 + math.sqrt(2), abs=1e-12)


def test_visibility_agrees_with_kernel_on_a_polygon():
    K = generate_instance("flat-polygon", 30, seed=2)
    rng = np.random.default_rng(0)
    for _ in range(10):
        a, b = (int(v) for v in rng.integers(K.n_vertices, size=2))
        got = distance(build_spm(K, Vertex(a)), Vertex(b))
        assert got == pytest.approx(visibility_distance(K, Vertex(a), Vertex(b)), abs=1e-9)
