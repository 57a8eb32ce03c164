"""Shortest paths on a seven-triangle fan.

Seven unit equilateral triangles around one centre give an angle sum of
7*pi/3 at the centre: a small saddle. Geodesics that meet the centre may bend
there, and the shortest path map splits into cones behind it.

    python demos/fan_walkthrough.py [out.svg]
"""

import math
import sys

from cat0 import PlanarComplex, Vertex, build_spm, shortest_path, validate
from cat0.points import EdgePoint
from cat0.render import RenderSpec, render_tutte


def fan(k):
    faces = [(1 + i, 0, 1 + (i + 1) % k) for i in range(k)]
    lengths = {}
    for f in faces:
        for u, v in ((f[0], f[1]), (f[1], f[2]), (f[2], f[0])):
            lengths[(min(u, v), max(u, v))] = 1.0
    return PlanarComplex(k + 1, faces, lengths)


K = fan(7)
print("angle sum at the centre: %.6f (2*pi = %.6f)" % (K.vertex_angle_sum(0), 2 * math.pi))
print("valid CAT(0) disk:", validate(K).passed)

m = build_spm(K, Vertex(1))
print("\nshortest path map from rim vertex r0: %d cones" % len(m.cones))
for c in m.cones:
    print("  cone %d  apex %d  apex distance %.4f  angle %.4f" % (c.index, c.apex, c.apex_distance, c.apex_angle))

# r2 is two triangles away and visible across a flat strip; r3 sits exactly
# behind the centre, so the straight unfolding and the route through c agree.
for name, y in (("r2", Vertex(3)), ("r3", Vertex(4)), ("mid(r3,r4)", EdgePoint(4, 5, 0.5))):
    path, d = shortest_path(m, y)
    via = " -> ".join(str(b) for b in path.breakpoints)
    print("\nd(r0, %s) = %.10f\n  %s" % (name, d, via))

print("\n1 + sqrt(3)/2 = %.10f" % (1 + math.sqrt(3) / 2))

if len(sys.argv) > 1:
    path, _ = shortest_path(m, EdgePoint(4, 5, 0.5))
    spec = RenderSpec(spm=m.to_json(), path=path.to_json())
    with open(sys.argv[1], "w") as fh:
        fh.write(render_tutte(K, spec))
    print("wrote", sys.argv[1])
