"""Small 2D helpers used by charts, unfoldings and the sweep."""

import math

import numpy as np


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def rotate(v, phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def unit(v):
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise ValueError("zero-length vector")
    return np.array([v[0] / n, v[1] / n])


def ccw_angle(u, v):
    """Counterclockwise angle from ``u`` to ``v`` in [0, 2*pi)."""
    a = math.atan2(cross(u, v), u[0] * v[0] + u[1] * v[1])
    return a + 2 * math.pi if a < 0 else a


def unsigned_angle(u, v):
    return abs(math.atan2(cross(u, v), u[0] * v[0] + u[1] * v[1]))


def law_of_cosines(a, b, c):
    """Angle opposite to side ``c`` in a triangle with sides a, b, c."""
    cos = (a * a + b * b - c * c) / (2 * a * b)
    return math.acos(min(1.0, max(-1.0, cos)))


def place_third(pu, pv, luw, lvw):
    """Point w to the left of the directed segment pu->pv with |uw|=luw, |vw|=lvw."""
    d = pv - pu
    luv = math.hypot(d[0], d[1])
    x = (luv * luv + luw * luw - lvw * lvw) / (2 * luv)
    y = math.sqrt(max(luw * luw - x * x, 0.0))
    e = d / luv
    return pu + x * e + y * np.array([-e[1], e[0]])


def rigid_from_segments(p0, p1, q0, q1):
    """Orientation-preserving isometry sending p0->q0 and the direction p0p1 to q0q1."""
    phi = math.atan2(q1[1] - q0[1], q1[0] - q0[0]) - math.atan2(p1[1] - p0[1], p1[0] - p0[0])
    c, s = math.cos(phi), math.sin(phi)
    R = np.array([[c, -s], [s, c]])
    t = np.asarray(q0, float) - R @ np.asarray(p0, float)
    return R, t


def barycentric(p, tri):
    """Barycentric coordinates of p w.r.t. the 3x2 array ``tri``."""
    a, b, c = tri
    v0, v1, v2 = b - a, c - a, np.asarray(p, float) - a
    den = cross(v0, v1)
    l1 = cross(v2, v1) / den
    l2 = cross(v0, v2) / den
    return np.array([1.0 - l1 - l2, l1, l2])


def seg_distance(p, a, b):
    """Distance from p to segment ab and the parameter of the closest point."""
    d = b - a
    L2 = float(d @ d)
    if L2 == 0.0:
        return float(np.hypot(*(p - a))), 0.0
    t = min(1.0, max(0.0, float((p - a) @ d) / L2))
    q = a + t * d
    return float(np.hypot(*(p - q))), t


def line_param(o, d, a, b):
    """Intersect the line o + s*d with segment a + t*(b-a); returns (s, t) or None if parallel."""
    e = b - a
    den = cross(d, e)
    if abs(den) < 1e-300:
        return None
    w = a - o
    s = cross(w, e) / den
    t = cross(w, d) / den
    return s, t


def clip_halfplane(poly, o, n, eps=0.0):
    """Keep the part of a convex polygon where (p - o) . n >= -eps."""
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        fp = float((p - o) @ n)
        fq = float((q - o) @ n)
        if fp >= -eps:
            out.append(p)
        if (fp >= -eps) != (fq >= -eps):
            t = fp / (fp - fq)
            out.append(p + t * (q - p))
    return out


def polygon_area(poly):
    s = 0.0
    k = len(poly)
    for i in range(k):
        s += cross(poly[i], poly[(i + 1) % k])
    return 0.5 * s


def convex_hull(points):
    """Andrew's monotone chain. Returns hull indices counterclockwise, collinear points dropped."""
    pts = sorted(range(len(points)), key=lambda i: (points[i][0], points[i][1]))
    if len(pts) <= 2:
        return pts

    def turn(o, a, b):
        return cross(points[a] - points[o], points[b] - points[o])

    lower, upper = [], []
    for i in pts:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) <= 1e-14:
            lower.pop()
        lower.append(i)
    for i in reversed(pts):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) <= 1e-14:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]
