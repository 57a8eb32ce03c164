"""Geodesic convex hulls, flat and curved.

In the L-shaped room the hull of four corners has to wrap around the reflex
corner; on a negatively curved disk the hull edges are geodesics that bend at
saddle vertices.

    python demos/hull_tour.py [out.svg]
"""

import math
import sys

import numpy as np

from cat0 import PlanarComplex, Vertex, convex_hull, verify_hull
from cat0.oracle import generate_instance
from cat0.points import FacePoint
from cat0.render import RenderSpec, render_tutte

xy = [[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]]
L = PlanarComplex(6, [(0, 1, 2), (0, 2, 3), (0, 3, 5), (3, 4, 5)], flat_coordinates=xy)
res = convex_hull(L, [Vertex(0), Vertex(1), Vertex(2), Vertex(5)])
print("L-shape hull:", " -> ".join(str(b) for b in res.boundary.breakpoints))
print("perimeter %.12f   6 + sqrt(2) = %.12f" % (res.perimeter, 6 + math.sqrt(2)))

K = generate_instance("curved", 60, seed=0)
rng = np.random.default_rng(3)
S = []
for _ in range(8):
    b = rng.random(3) + 1e-3
    S.append(FacePoint(int(rng.integers(K.n_faces)), tuple(b / b.sum())))
res = convex_hull(K, S)
saddles = [b for b in res.boundary.breakpoints if isinstance(b, Vertex) and not K.is_boundary_vertex[b.id]]
print("\ncurved(60): hull perimeter %.6f with %d breakpoints, %d at saddle vertices"
      % (res.perimeter, len(res.boundary.breakpoints) - 1, len(saddles)))
anchored = res.skeleton.anchor is not None
print("skeleton needed an anchor to the boundary:", anchored)

rep = verify_hull(res, n_sources=5, n_targets=5)
print("checks:", rep.checks, "passed" if rep.passed else rep.violations[:3])

if len(sys.argv) > 1:
    spec = RenderSpec(hull=res.to_json(), points=[s.to_json() for s in S])
    with open(sys.argv[1], "w") as fh:
        fh.write(render_tutte(K, spec))
    print("wrote", sys.argv[1])
