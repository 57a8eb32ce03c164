"""Small named instances shared by the tests."""

import math

from cat0.complex import PlanarComplex


def instance_a():
    # right triangle with legs 4 (v0-v1) and 3 (v0-v2)
    return PlanarComplex(3, [(0, 1, 2)], {(0, 1): 4.0, (1, 2): 5.0, (0, 2): 3.0})


def instance_b():
    return PlanarComplex(4, [(0, 1, 2), (0, 2, 3)], flat_coordinates=[[0, 0], [1, 0], [1, 1], [0, 1]])


def fan(k):
    """k unit equilateral triangles around centre 0; rim vertices 1..k are r0..r_{k-1}."""
    faces = [(1 + i, 0, 1 + (i + 1) % k) for i in range(k)]
    lengths = {}
    for a, b, c in faces:
        for u, v in ((a, b), (b, c), (c, a)):
            lengths[(min(u, v), max(u, v))] = 1.0
    return PlanarComplex(k + 1, faces, lengths)


def instance_c():
    return fan(7)


def instance_d():
    xy = [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]
    return PlanarComplex(6, [(0, 1, 2), (0, 2, 3), (0, 3, 5), (3, 4, 5)], flat_coordinates=xy)


SQRT3 = math.sqrt(3.0)
