"""Geodesic paths, strip unfoldings and ray shooting."""

import math
from dataclasses import dataclass

import numpy as np

from . import _plane as pl
from ._tol import EPS_ANGLE
from .complex import ComplexError, transfer
from .points import EdgePoint, FacePoint, Vertex, point_from_json


@dataclass(frozen=True)
class GeodesicPath:
    """Breakpoint chain; ``faces[i]`` contains breakpoints i and i+1."""

    breakpoints: tuple
    faces: tuple
    length: float

    def __len__(self):
        return len(self.breakpoints)

    @property
    def start(self):
        return self.breakpoints[0]

    @property
    def end(self):
        return self.breakpoints[-1]

    def to_json(self):
        return {"breakpoints": [p.to_json() for p in self.breakpoints], "length": self.length}

    def reversed(self):
        return GeodesicPath(self.breakpoints[::-1], self.faces[::-1], self.length)


def make_path(K, points, faces=None):
    """Build a GeodesicPath, dropping repeated breakpoints and recomputing the length."""
    pts = []
    fs = []
    for i, p in enumerate(points):
        if pts:
            cands = K.common_faces(pts[-1], p)
            if not cands:
                raise ComplexError(f"breakpoints {pts[-1]} and {p} share no face")
            fi = faces[i - 1] if faces is not None and faces[i - 1] in cands else cands[0]
            if K.distance_in_face(fi, pts[-1], p) <= K.eps:
                continue
            fs.append(fi)
        pts.append(p)
    L = sum(K.distance_in_face(fi, pts[i], pts[i + 1]) for i, fi in enumerate(fs))
    return GeodesicPath(tuple(pts), tuple(fs), float(L))


def concat_paths(K, a, b):
    return make_path(K, list(a.breakpoints) + list(b.breakpoints[1:]))


def path_length(K, path):
    return float(sum(K.distance_in_face(fi, path.breakpoints[i], path.breakpoints[i + 1]) for i, fi in enumerate(path.faces)))


def path_from_json(K, obj):
    return make_path(K, [point_from_json(p) for p in obj["breakpoints"]])


# ----------------------------------------------------------------- unfolding
class Unfolding:
    """A face strip developed isometrically into one plane."""

    def __init__(self, K, faces, charts):
        self.K = K
        self.faces = list(faces)
        self.charts = [np.asarray(c, float) for c in charts]
        self._index = {f: i for i, f in enumerate(self.faces)}

    def __len__(self):
        return len(self.faces)

    def vertex_position(self, i, v):
        return self.charts[i][self.K.faces[self.faces[i]].index(v)]

    def forward(self, p, index=None):
        """Plane image of a point; ``index`` selects the strip face when p lies in several."""
        if index is None:
            cands = [self._index[f] for f in self.K.faces_of_point(p) if f in self._index]
            if not cands:
                raise ComplexError(f"point {p} is not in the strip")
            index = cands[0]
        fi = self.faces[index]
        return self.K.point_bary(p, fi) @ self.charts[index]

    def locate(self, xy, tol=None):
        """Strip index whose face image contains xy (best barycentric margin)."""
        best = None
        for i, ch in enumerate(self.charts):
            m = pl.barycentric(xy, ch).min()
            if best is None or m > best[0]:
                best = (m, i)
        return best[1]

    def inverse(self, xy, index=None):
        if index is None:
            index = self.locate(xy)
        return self.K.canonical(self.faces[index], pl.barycentric(xy, self.charts[index]))

    def pull_back(self, A, B, first=0, last=None):
        """Breakpoints where the plane segment A->B crosses the strip edges first..last."""
        if last is None:
            last = len(self.faces) - 1
        K = self.K
        d = B - A
        out = []
        for i in range(first, last):
            u, v = K.shared_edge(self.faces[i], self.faces[i + 1])
            pu, pv = self.vertex_position(i, u), self.vertex_position(i, v)
            r = pl.line_param(A, d, pu, pv)
            if r is None:
                continue
            s, t = r
            t = min(1.0, max(0.0, t))
            L = K.length(u, v)
            if t * L <= K.eps:
                out.append((s, Vertex(u)))
            elif (1 - t) * L <= K.eps:
                out.append((s, Vertex(v)))
            else:
                out.append((s, K.normalize(EdgePoint(u, v, t))))
        return [p for _, p in out]


def glue_next(K, prev_face, prev_chart, face):
    """Chart of ``face`` in the plane of ``prev_chart`` glued along their shared edge."""
    u, v = K.shared_edge(prev_face, face)
    fp = K.faces[prev_face]
    P = {fp[k]: prev_chart[k] for k in range(3)}
    g = K.faces[face]
    k = [j for j in range(3) if g[j] in (u, v) and g[(j + 1) % 3] in (u, v)][0]
    a, b, w = g[k], g[(k + 1) % 3], g[(k + 2) % 3]
    pw = pl.place_third(P[a], P[b], K.length(a, w), K.length(b, w))
    out = np.zeros((3, 2))
    out[k], out[(k + 1) % 3], out[(k + 2) % 3] = P[a], P[b], pw
    return out


def unfold_strip(K, faces, base_chart=None):
    """Develop consecutive adjacent faces into one plane (first face in its canonical chart)."""
    faces = [int(f) for f in faces]
    if not faces:
        raise ComplexError("empty face sequence")
    if len(set(faces)) != len(faces):
        raise ComplexError("face repeated in strip")
    charts = [K.charts[faces[0]].copy() if base_chart is None else np.asarray(base_chart, float)]
    for i in range(1, len(faces)):
        charts.append(glue_next(K, faces[i - 1], charts[-1], faces[i]))
    return Unfolding(K, faces, charts)


# -------------------------------------------------------------- ray shooting
def _exit(K, fi, P, d):
    """Exit point of the ray P + s d, s > 0, from face fi (chart coordinates)."""
    ch = K.charts[fi]
    best = None
    for k in range(3):
        a, b = ch[k], ch[(k + 1) % 3]
        r = pl.line_param(P, d, a, b)
        if r is None:
            continue
        s, t = r
        if -1e-9 <= t <= 1 + 1e-9 and (best is None or s > best[0]):
            best = (s, k)
    if best is None or best[0] <= K.eps:
        return None
    return P + best[0] * d


def extend_ray(K, u, v, rule="half"):
    """Geodesic ray from u through v, continued until it reaches the boundary.

    At a vertex w the continuation leaves at link distance theta(w)/2 from the
    incoming direction (``rule="half"``); ``rule="straight"`` uses angle pi on the
    clockwise side instead.
    """
    cands = K.common_faces(u, v)
    if not cands:
        raise ComplexError("seed endpoints share no face")
    fi = cands[0]
    if isinstance(u, (Vertex, EdgePoint)) and isinstance(v, (Vertex, EdgePoint)) and len(cands) == 1:
        e = _seg_edge(u, v)
        if e is not None and K.is_boundary_edge(*e):
            raise ComplexError("seed lies on the boundary")
    P = K.point_xy(v, fi)
    d = pl.unit(P - K.point_xy(u, fi))
    pts, faces = [u, v], [fi]
    visited = {fi}
    cur = v
    for _ in range(4 * K.n_faces + 8):
        if isinstance(cur, Vertex):
            w = cur.id
            if K.is_boundary_vertex[w]:
                break
            a = K.link_position(w, fi, -d)
            if a is None:
                raise ComplexError("incoming direction not in the arrival corner")
            theta = K.link_length(w)
            out = a + (theta / 2 if rule == "half" else math.pi)
            fi, d = K.link_direction(w, out)
            P = K.charts[fi][K.corner_of(fi, w)]
            Q = _exit(K, fi, P, d)
        else:
            Q = _exit(K, fi, P, d)
            if Q is None:
                if not isinstance(cur, EdgePoint):
                    raise ComplexError("ray stalled inside a face")
                nb = [g for g in K.edge_faces[cur.edge] if g != fi]
                if not nb:
                    break
                g = nb[0]
                P2 = transfer(K, P, fi, g)
                d = transfer(K, P + d, fi, g) - P2
                fi, P = g, P2
                Q = _exit(K, fi, P, d)
        if Q is None:
            break
        if fi in visited and faces[-1] != fi:
            raise ComplexError(f"ray revisits face {fi}")
        visited.add(fi)
        cur = K.canonical(fi, xy=Q)
        P = K.point_xy(cur, fi)
        pts.append(cur)
        faces.append(fi)
    return make_path(K, pts, faces)


def _seg_edge(a, b):
    """Edge containing both endpoints of a segment, or None."""
    ends = [{p.id} if isinstance(p, Vertex) else {p.u, p.v} for p in (a, b)]
    both = ends[0] | ends[1]
    if len(both) == 2 and not isinstance(a, FacePoint) and not isinstance(b, FacePoint):
        return tuple(sorted(both))
    return None


# -------------------------------------------------------- local geodesicity
@dataclass(frozen=True)
class GeodesicCheck:
    ok: bool
    index: int = -1
    detail: str = ""

    def __bool__(self):
        return self.ok


def breakpoint_angles(K, path, i):
    """Side angles (clockwise side, counterclockwise side) at interior breakpoint i.

    For boundary vertices only the angle inside K is meaningful; the other entry is inf.
    """
    a, b, c = path.breakpoints[i - 1], path.breakpoints[i], path.breakpoints[i + 1]
    f1, f2 = path.faces[i - 1], path.faces[i]
    if isinstance(b, Vertex):
        w = b.id
        s_in = K.link_position(w, f1, K.point_xy(a, f1) - K.point_xy(b, f1))
        s_out = K.link_position(w, f2, K.point_xy(c, f2) - K.point_xy(b, f2))
        if s_in is None or s_out is None:
            raise ComplexError("inconsistent breakpoint faces")
        if K.is_boundary_vertex[w]:
            return abs(s_out - s_in), math.inf
        theta = K.link_length(w)
        ccw = (s_out - s_in) % theta
        return ccw, theta - ccw
    pa = K.point_xy(a, f1)
    pb = K.point_xy(b, f1)
    if f2 == f1:
        pc = K.point_xy(c, f1)
    else:
        pc = transfer(K, K.point_xy(c, f2), f2, f1)
    ang = pl.ccw_angle(pa - pb, pc - pb)
    return ang, 2 * math.pi - ang


def is_locally_geodesic(K, path, tol=EPS_ANGLE):
    """Straight (pi on both sides) through edges and faces; both side angles >= pi - tol at vertices."""
    n = len(path.breakpoints)
    for i in range(1, n - 1):
        b = path.breakpoints[i]
        try:
            s1, s2 = breakpoint_angles(K, path, i)
        except ComplexError as exc:
            return GeodesicCheck(False, i, str(exc))
        if isinstance(b, Vertex):
            if s1 < math.pi - tol or s2 < math.pi - tol:
                return GeodesicCheck(False, i, f"vertex {b.id} side angles {s1!r}, {s2!r}")
        elif abs(s1 - math.pi) > tol:
            return GeodesicCheck(False, i, f"bend at {b}: angle {s1!r}")
    return GeodesicCheck(True)
