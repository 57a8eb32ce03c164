"""Triangulated piecewise-Euclidean disks given by combinatorics and edge lengths.

A :class:`PlanarComplex` never needs global coordinates. Every face gets its own
canonical chart (corner 0 at the origin, corner 1 on the positive x axis,
corner 2 in the upper half-plane) and neighbouring charts are related by the
rigid motion that glues them along their shared edge.
"""

import json
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field

import numpy as np

from . import _plane as pl
from ._tol import EPS_ANGLE, EPS_CURVATURE, EPS_LEN
from .points import EdgePoint, FacePoint, Vertex

FORMAT = "cat0-complex/1"
TWO_PI = 2.0 * math.pi


class ComplexError(ValueError):
    """Malformed complex input or an operation the complex cannot support."""


def _ekey(u, v):
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class FaceChart:
    face: int
    corners: np.ndarray  # 3x2

    def to_xy(self, bary):
        return np.asarray(bary, float) @ self.corners

    def to_bary(self, xy):
        return pl.barycentric(xy, self.corners)


class PlanarComplex:
    """Finite triangulated disk with an intrinsic metric.

    Parameters
    ----------
    n_vertices : int
    faces : sequence of (a, b, c)
        Counterclockwise vertex triples.
    edge_lengths : mapping (u, v) -> float, optional
        May be omitted when ``flat_coordinates`` is given.
    flat_coordinates : array_like (n_vertices, 2), optional
        Isometric planar embedding for flat instances.
    """

    def __init__(self, n_vertices, faces, edge_lengths=None, flat_coordinates=None):
        self.n_vertices = int(n_vertices)
        self.faces = [tuple(int(x) for x in f) for f in faces]
        for f in self.faces:
            if len(f) != 3:
                raise ComplexError(f"face {f} is not a triangle")
            for x in f:
                if not 0 <= x < self.n_vertices:
                    raise ComplexError(f"vertex index {x} out of range in face {f}")
            if len(set(f)) != 3:
                raise ComplexError(f"face {f} repeats a vertex")
        self.flat_coordinates = None
        if flat_coordinates is not None:
            fc = np.asarray(flat_coordinates, float)
            if fc.shape != (self.n_vertices, 2):
                raise ComplexError("flat_coordinates must have shape (n_vertices, 2)")
            self.flat_coordinates = fc

        edge_faces = defaultdict(list)
        for fi, f in enumerate(self.faces):
            for k in range(3):
                edge_faces[_ekey(f[k], f[(k + 1) % 3])].append(fi)
        self.edges = sorted(edge_faces)
        self.edge_faces = {e: tuple(edge_faces[e]) for e in self.edges}

        lengths = {}
        if edge_lengths is not None:
            for (u, v), L in dict(edge_lengths).items():
                lengths[_ekey(int(u), int(v))] = float(L)
        for e in self.edges:
            if e not in lengths:
                if self.flat_coordinates is None:
                    raise ComplexError(f"missing length for edge {e}")
                d = self.flat_coordinates[e[0]] - self.flat_coordinates[e[1]]
                lengths[e] = float(math.hypot(d[0], d[1]))
            if not lengths[e] > 0:
                raise ComplexError(f"edge {e} must have positive length")
        self.edge_lengths = {e: lengths[e] for e in self.edges}

        self.scale = max(self.edge_lengths.values()) if self.edges else 1.0
        self.eps = EPS_LEN * max(1.0, self.scale)

        self.halfedge = {}
        self._orientation_clash = []
        for fi, f in enumerate(self.faces):
            for k in range(3):
                he = (f[k], f[(k + 1) % 3])
                if he in self.halfedge:
                    self._orientation_clash.append((he, self.halfedge[he], fi))
                else:
                    self.halfedge[he] = fi

        self._build_metric()
        self._build_rings()

    # ------------------------------------------------------------------ build
    def _build_metric(self):
        F = len(self.faces)
        self.side_lengths = np.zeros((F, 3))
        self.corner_angles = np.full((F, 3), np.nan)
        self.charts = np.full((F, 3, 2), np.nan)
        self._heights = np.zeros((F, 3))
        self.degenerate_faces = []
        for fi, f in enumerate(self.faces):
            L = [self.length(f[k], f[(k + 1) % 3]) for k in range(3)]
            self.side_lengths[fi] = L
            a, b, c = L  # a = |f0 f1|, b = |f1 f2|, c = |f2 f0|
            if not (a < b + c and b < a + c and c < a + b):
                self.degenerate_faces.append(fi)
                continue
            self.corner_angles[fi, 0] = pl.law_of_cosines(a, c, b)
            self.corner_angles[fi, 1] = pl.law_of_cosines(a, b, c)
            self.corner_angles[fi, 2] = math.pi - self.corner_angles[fi, 0] - self.corner_angles[fi, 1]
            x = (a * a + c * c - b * b) / (2 * a)
            y = math.sqrt(max(c * c - x * x, 0.0))
            self.charts[fi] = [[0.0, 0.0], [a, 0.0], [x, y]]
            self._heights[fi] = [a * y / L[(k + 1) % 3] for k in range(3)]
        sums = np.zeros(self.n_vertices)
        for fi, f in enumerate(self.faces):
            for k in range(3):
                sums[f[k]] += self.corner_angles[fi, k]
        self.angle_sums = sums

    def _build_rings(self):
        """Counterclockwise corner fans around each vertex."""
        corners = defaultdict(list)
        for fi, f in enumerate(self.faces):
            for k in range(3):
                corners[f[k]].append((fi, k))
        self.is_boundary_vertex = np.zeros(self.n_vertices, bool)
        for (u, v), fs in self.edge_faces.items():
            if len(fs) == 1:
                self.is_boundary_vertex[u] = self.is_boundary_vertex[v] = True
        self.rings = {}
        self.ring_offsets = {}
        self._ring_index = {}
        self.nonmanifold_vertices = []
        for v in range(self.n_vertices):
            cs = corners.get(v, [])
            if not cs:
                continue
            by_start = {}
            for fi, k in cs:
                f = self.faces[fi]
                by_start[f[(k + 1) % 3]] = (fi, k)
            start = cs[0]
            if self.is_boundary_vertex[v]:
                for fi, k in cs:
                    f = self.faces[fi]
                    if (f[(k + 1) % 3], v) not in self.halfedge:
                        start = (fi, k)
                        break
            ring = [start]
            seen = {start}
            while True:
                fi, k = ring[-1]
                nxt_vertex = self.faces[fi][(k + 2) % 3]
                nxt = by_start.get(nxt_vertex)
                if nxt is None or nxt in seen:
                    break
                ring.append(nxt)
                seen.add(nxt)
            if len(ring) != len(cs):
                self.nonmanifold_vertices.append(v)
            offs = [0.0]
            for fi, k in ring:
                offs.append(offs[-1] + self.corner_angles[fi, k])
            self.rings[v] = ring
            self.ring_offsets[v] = offs
            for idx, (fi, k) in enumerate(ring):
                self._ring_index[(fi, k)] = idx

    # ------------------------------------------------------------- accessors
    @property
    def n_faces(self):
        return len(self.faces)

    def length(self, u, v):
        return self.edge_lengths[_ekey(u, v)]

    def corner_of(self, fi, v):
        return self.faces[fi].index(v)

    def corner_angle(self, fi, corner):
        return float(self.corner_angles[fi, corner])

    def vertex_angle_sum(self, v):
        return float(self.angle_sums[v])

    def face_chart(self, fi):
        return FaceChart(fi, self.charts[fi].copy())

    def is_boundary_edge(self, u, v):
        return len(self.edge_faces[_ekey(u, v)]) == 1

    def neighbor(self, fi, side):
        """Face across side ``side`` (edge f[side] -> f[side+1]) or None."""
        f = self.faces[fi]
        return self.halfedge.get((f[(side + 1) % 3], f[side]))

    def shared_edge(self, f1, f2):
        a = set(self.faces[f1]) & set(self.faces[f2])
        if len(a) != 2 or f1 == f2:
            raise ComplexError(f"faces {f1} and {f2} are not adjacent")
        u, v = sorted(a)
        if f2 not in self.edge_faces[(u, v)] or f1 not in self.edge_faces[(u, v)]:
            raise ComplexError(f"faces {f1} and {f2} are not adjacent")
        return u, v

    def is_flat(self):
        return self.flat_coordinates is not None

    # ------------------------------------------------------------ vertex links
    def link_length(self, v):
        return self.ring_offsets[v][-1]

    def link_position(self, v, fi, direction):
        """Link coordinate of a direction at vertex v given in face ``fi``'s chart.

        Returns None if the direction does not point into that corner (with tolerance).
        """
        k = self.corner_of(fi, v)
        ch = self.charts[fi]
        start = ch[(k + 1) % 3] - ch[k]
        phi = pl.ccw_angle(start, direction)
        ang = self.corner_angles[fi, k]
        if phi > math.pi + ang / 2:  # slightly clockwise of start
            phi -= TWO_PI
        if phi < -1e-6 or phi > ang + 1e-6:
            return None
        phi = min(max(phi, 0.0), ang)
        return self.ring_offsets[v][self._ring_index[(fi, k)]] + phi

    def link_direction(self, v, s):
        """(face, unit direction in that face's chart) for link coordinate s at v."""
        offs = self.ring_offsets[v]
        theta = offs[-1]
        if not self.is_boundary_vertex[v]:
            s = s % theta
        s = min(max(s, 0.0), theta)
        ring = self.rings[v]
        idx = int(np.searchsorted(offs, s, side="right")) - 1
        idx = min(max(idx, 0), len(ring) - 1)
        fi, k = ring[idx]
        ch = self.charts[fi]
        start = pl.unit(ch[(k + 1) % 3] - ch[k])
        return fi, pl.rotate(start, s - offs[idx])

    def link_distance(self, v, s1, s2):
        d = abs(s1 - s2)
        if self.is_boundary_vertex[v]:
            return d
        theta = self.link_length(v)
        d = d % theta
        return min(d, theta - d)

    # ---------------------------------------------------------------- points
    def faces_of_point(self, p):
        if isinstance(p, Vertex):
            return [fi for fi, _ in self.rings.get(p.id, [])]
        if isinstance(p, EdgePoint):
            try:
                return list(self.edge_faces[(p.u, p.v)])
            except KeyError:
                raise ComplexError(f"({p.u}, {p.v}) is not an edge") from None
        if isinstance(p, FacePoint):
            if not 0 <= p.face < self.n_faces:
                raise ComplexError(f"face {p.face} out of range")
            return [p.face]
        raise TypeError(p)

    def point_bary(self, p, fi):
        f = self.faces[fi]
        if isinstance(p, Vertex):
            b = np.zeros(3)
            b[f.index(p.id)] = 1.0
            return b
        if isinstance(p, EdgePoint):
            b = np.zeros(3)
            b[f.index(p.u)] = 1.0 - p.t
            b[f.index(p.v)] = p.t
            return b
        if p.face != fi:
            raise ComplexError(f"point {p} does not lie in face {fi}")
        return np.asarray(p.bary, float)

    def point_xy(self, p, fi):
        return self.point_bary(p, fi) @ self.charts[fi]

    def canonical(self, fi, bary=None, xy=None):
        """Canonical point for a location in face ``fi`` (given by bary or chart xy)."""
        ch = self.charts[fi]
        if xy is None:
            xy = np.asarray(bary, float) @ ch
        else:
            xy = np.asarray(xy, float)
        f = self.faces[fi]
        bc = pl.barycentric(xy, ch) if bary is None else np.asarray(bary, float)
        if float(np.min(bc * self._heights[fi])) > 2 * self.eps:
            # clearly interior: distance to side k+1..k+2 is bc[k] times the height at corner k
            bc = bc / bc.sum()
            return FacePoint(fi, tuple(float(x) for x in bc))
        for k in range(3):
            if math.hypot(*(xy - ch[k])) <= self.eps:
                return Vertex(f[k])
        best = None
        for k in range(3):
            a, b = ch[k], ch[(k + 1) % 3]
            d, t = pl.seg_distance(xy, a, b)
            if d <= self.eps and (best is None or d < best[0]):
                best = (d, k, t)
        if best is not None:
            _, k, t = best
            if bary is not None:
                b = np.asarray(bary, float)
                s = b[k] + b[(k + 1) % 3]
                if s > 0:
                    t = min(1.0, max(0.0, b[(k + 1) % 3] / s))
            return EdgePoint(f[k], f[(k + 1) % 3], float(t))
        bc = np.clip(bc, 0.0, None)
        bc = bc / bc.sum()
        return FacePoint(fi, tuple(float(x) for x in bc))

    def check_point(self, p):
        """Raise ComplexError if p is not a point of K."""
        if isinstance(p, Vertex):
            if not 0 <= p.id < self.n_vertices or p.id not in self.rings:
                raise ComplexError(f"vertex {p.id} not in complex")
        elif isinstance(p, EdgePoint):
            self.faces_of_point(p)
            if not 0.0 <= p.t <= 1.0:
                raise ComplexError(f"edge parameter {p.t} outside [0, 1]")
        elif isinstance(p, FacePoint):
            self.faces_of_point(p)
            b = np.asarray(p.bary)
            if b.min() < -1e-12 or abs(b.sum() - 1.0) > 1e-9:
                raise ComplexError(f"barycentric coordinates {p.bary} outside the face")
        else:
            raise TypeError(p)

    def normalize(self, p):
        """Re-canonicalise a point (snap near-vertex / near-edge locations)."""
        self.check_point(p)
        fi = self.faces_of_point(p)[0]
        return self.canonical(fi, self.point_bary(p, fi))

    def distance_in_face(self, fi, p, q):
        d = self.point_xy(p, fi) - self.point_xy(q, fi)
        return float(math.hypot(d[0], d[1]))

    def common_faces(self, p, q):
        fq = set(self.faces_of_point(q))
        return [fi for fi in self.faces_of_point(p) if fi in fq]

    # --------------------------------------------------------------- topology
    def boundary_halfedges(self):
        return sorted(he for he in self.halfedge if (he[1], he[0]) not in self.halfedge)

    def boundary_cycles(self):
        nxt = {}
        for a, b in self.boundary_halfedges():
            nxt.setdefault(a, []).append(b)
        cycles = []
        used = set()
        for start in sorted(nxt):
            for b0 in nxt[start]:
                if (start, b0) in used:
                    continue
                cyc = [start]
                a, b = start, b0
                while (a, b) not in used:
                    used.add((a, b))
                    if b == start:
                        break
                    cyc.append(b)
                    cands = [c for c in nxt.get(b, []) if (b, c) not in used]
                    if not cands:
                        break
                    a, b = b, cands[0]
                cycles.append(cyc)
        return cycles

    def edge_graph_diameter(self):
        """Largest shortest-path length in the 1-skeleton (upper bound on the intrinsic diameter)."""
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import dijkstra

        u = [e[0] for e in self.edges]
        v = [e[1] for e in self.edges]
        w = [self.edge_lengths[e] for e in self.edges]
        G = coo_matrix((w, (u, v)), shape=(self.n_vertices, self.n_vertices)).tocsr()
        D = dijkstra(G, directed=False)
        D = D[np.isfinite(D)]
        return float(D.max()) if D.size else 0.0

    def __eq__(self, other):
        if not isinstance(other, PlanarComplex):
            return NotImplemented
        if self.n_vertices != other.n_vertices or self.faces != other.faces:
            return False
        if self.edge_lengths != other.edge_lengths:
            return False
        a, b = self.flat_coordinates, other.flat_coordinates
        if (a is None) != (b is None):
            return False
        return a is None or bool(np.array_equal(a, b))

    __hash__ = None

    def __repr__(self):
        return f"PlanarComplex(n_vertices={self.n_vertices}, n_faces={self.n_faces})"


# ---------------------------------------------------------------- operations
def corner_angle(K, face, corner):
    """Interior angle of ``face`` at corner index ``corner`` (0, 1 or 2)."""
    if face in K.degenerate_faces:
        raise ComplexError(f"face {face} is degenerate")
    return K.corner_angle(face, corner)


def vertex_angle_sum(K, v):
    return K.vertex_angle_sum(v)


def transfer(K, xy, from_face, to_face):
    """Map chart coordinates of ``from_face`` into the chart of the adjacent ``to_face``."""
    u, v = K.shared_edge(from_face, to_face)
    P = K.charts[from_face]
    Q = K.charts[to_face]
    fa, fb = K.faces[from_face], K.faces[to_face]
    R, t = pl.rigid_from_segments(P[fa.index(u)], P[fa.index(v)], Q[fb.index(u)], Q[fb.index(v)])
    return R @ np.asarray(xy, float) + t


def boundary(K):
    """Boundary vertices in cycle order, following the face orientation."""
    cycles = K.boundary_cycles()
    if len(cycles) != 1:
        raise ComplexError(f"complex has {len(cycles)} boundary cycles")
    cyc = cycles[0]
    i = cyc.index(min(cyc))
    return cyc[i:] + cyc[:i]


@dataclass
class Violation:
    code: str
    element: object
    detail: str = ""

    def to_json(self):
        el = self.element
        if isinstance(el, tuple):
            el = list(el)
        return {"code": self.code, "element": el, "detail": self.detail}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    boundary_angle_sums: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def codes(self):
        return sorted({v.code for v in self.violations})

    def to_json(self):
        return {
            "pass": self.passed,
            "violations": [v.to_json() for v in self.violations],
            "boundary_angle_sums": {str(k): v for k, v in sorted(self.boundary_angle_sums.items())},
        }


def validate(K, curvature_tol=EPS_CURVATURE):
    """Check every structural, metric and curvature condition; collect all violations."""
    rep = ValidationReport()
    for fi in K.degenerate_faces:
        rep.violations.append(Violation("TRIANGLE_INEQ", fi, f"side lengths {K.side_lengths[fi].tolist()}"))
    for he, f1, f2 in K._orientation_clash:
        rep.violations.append(Violation("ORIENTATION", he, f"half-edge used by faces {f1} and {f2}"))

    for e, fs in K.edge_faces.items():
        if len(fs) > 2:
            rep.violations.append(Violation("NOT_DISK", e, f"edge in {len(fs)} faces"))
    used = sorted({x for f in K.faces for x in f})
    if len(used) != K.n_vertices:
        missing = sorted(set(range(K.n_vertices)) - set(used))
        rep.violations.append(Violation("NOT_DISK", missing, "isolated vertices"))
    V, E, F = len(used), len(K.edges), K.n_faces
    if V - E + F != 1:
        rep.violations.append(Violation("NOT_DISK", None, f"Euler characteristic {V - E + F} != 1"))
    if F:
        adj = defaultdict(set)
        for u, v in K.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen = {used[0]}
        dq = deque([used[0]])
        while dq:
            a = dq.popleft()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    dq.append(b)
        if len(seen) != len(used):
            rep.violations.append(Violation("NOT_DISK", None, "1-skeleton is disconnected"))
        if len(K.boundary_cycles()) != 1:
            rep.violations.append(Violation("NOT_DISK", None, f"{len(K.boundary_cycles())} boundary cycles"))
    else:
        rep.violations.append(Violation("NOT_DISK", None, "no faces"))
    for v in K.nonmanifold_vertices:
        rep.violations.append(Violation("NOT_DISK", v, "vertex link is not a single fan"))

    bad = set(K.degenerate_faces)
    for v in used:
        if any(fi in bad for fi, _ in K.rings.get(v, [])):
            continue
        theta = K.vertex_angle_sum(v)
        if K.is_boundary_vertex[v]:
            rep.boundary_angle_sums[v] = theta
        elif theta < TWO_PI - curvature_tol:
            rep.violations.append(Violation("CURVATURE", v, f"theta={theta!r} < 2*pi"))

    if K.flat_coordinates is not None:
        X = K.flat_coordinates
        for e in K.edges:
            d = X[e[0]] - X[e[1]]
            if abs(math.hypot(d[0], d[1]) - K.edge_lengths[e]) > K.eps * 10:
                rep.violations.append(Violation("COORD_MISMATCH", e, "length differs from coordinates"))
        for fi, (a, b, c) in enumerate(K.faces):
            if pl.cross(X[b] - X[a], X[c] - X[a]) <= K.eps * K.scale:
                rep.violations.append(Violation("COORD_MISMATCH", fi, "face not counterclockwise"))
        for v in used:
            if not K.is_boundary_vertex[v] and abs(K.vertex_angle_sum(v) - TWO_PI) > max(EPS_ANGLE, curvature_tol):
                rep.violations.append(Violation("COORD_MISMATCH", v, "inner vertex of a flat instance is not flat"))
    return rep


# ------------------------------------------------------------------ file I/O
def complex_from_dict(obj):
    if not isinstance(obj, dict):
        raise ComplexError("complex file must contain a JSON object")
    fmt = obj.get("format", FORMAT)
    if fmt != FORMAT:
        raise ComplexError(f"unsupported format {fmt!r}")
    try:
        n = int(obj["n_vertices"])
        raw_faces = obj["faces"]
    except KeyError as exc:
        raise ComplexError(f"missing field {exc}") from None
    flat = obj.get("flat_coordinates")
    if flat is not None:
        flat = np.asarray(flat, float)
    lengths = {}
    for entry in obj.get("edge_lengths", []) or []:
        u, v, L = int(entry[0]), int(entry[1]), float(entry[2])
        for x in (u, v):
            if not 0 <= x < n:
                raise ComplexError(f"edge_lengths: vertex index {x} out of range")
        k = _ekey(u, v)
        if k in lengths and lengths[k] != L:
            raise ComplexError(f"conflicting lengths for edge {k}: {lengths[k]} vs {L}")
        lengths[k] = L
    if "edge_lengths" not in obj and flat is None:
        raise ComplexError("edge_lengths may only be omitted when flat_coordinates is present")

    faces = []
    for f in raw_faces:
        f = [int(x) for x in f]
        for x in f:
            if not 0 <= x < n:
                raise ComplexError(f"vertex index {x} out of range in face {f}")
        if len(f) < 3:
            raise ComplexError(f"face {f} has fewer than 3 vertices")
        for i in range(1, len(f) - 1):
            faces.append((f[0], f[i], f[i + 1]))
            if len(f) > 3 and i > 1:
                k = _ekey(f[0], f[i])
                if k not in lengths and flat is None:
                    raise ComplexError(f"polygon face {f}: diagonal {k} needs a length or flat coordinates")
    return PlanarComplex(n, faces, lengths or None, flat)


def parse_complex(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"JSON parse error at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}") from None
    return complex_from_dict(obj)


def load_complex(path):
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())


def complex_to_dict(K):
    out = {
        "format": FORMAT,
        "n_vertices": K.n_vertices,
        "faces": [list(f) for f in K.faces],
        "edge_lengths": [[u, v, K.edge_lengths[(u, v)]] for u, v in K.edges],
    }
    if K.flat_coordinates is not None:
        out["flat_coordinates"] = K.flat_coordinates.tolist()
    return out


def serialize_complex(K):
    return json.dumps(complex_to_dict(K))


# --------------------------------------------------------------- refinement
class Refinement:
    """A child complex whose faces lie inside faces of a parent complex.

    ``face_map[i] = (parent_face, M)`` where row j of the 3x3 matrix M holds the
    parent barycentric coordinates of corner j of child face i.
    """

    def __init__(self, parent, child, face_map):
        self.parent = parent
        self.child = child
        self.face_map = [(int(pf), np.asarray(M, float)) for pf, M in face_map]
        self._children = defaultdict(list)
        for ci, (pf, _) in enumerate(self.face_map):
            self._children[pf].append(ci)

    def to_parent(self, q):
        ci = self.child.faces_of_point(q)[0]
        pf, M = self.face_map[ci]
        b = self.child.point_bary(q, ci) @ M
        return self.parent.canonical(pf, b)

    def to_child(self, p):
        best = None
        for pf in self.parent.faces_of_point(p):
            b = self.parent.point_bary(p, pf)
            for ci in self._children[pf]:
                M = self.face_map[ci][1]
                try:
                    beta = np.linalg.solve(M.T, b)
                except np.linalg.LinAlgError:
                    continue
                score = beta.min()
                if best is None or score > best[0]:
                    best = (score, ci, beta)
            if best is not None and best[0] >= -1e-12:
                break
        if best is None:
            raise ComplexError(f"point {p} not covered by the refinement")
        _, ci, beta = best
        beta = np.clip(beta, 0.0, None)
        return self.child.canonical(ci, beta / beta.sum())

    def compose(self, inner):
        """Refinement from ``self.parent`` to ``inner.child`` (inner.parent must be self.child)."""
        fm = []
        for pf, M in inner.face_map:
            gpf, G = self.face_map[pf]
            fm.append((gpf, M @ G))
        return Refinement(self.parent, inner.child, fm)


def identity_refinement(K):
    return Refinement(K, K, [(i, np.eye(3)) for i in range(K.n_faces)])


def _child_complex(K, n_new, rows):
    """Build a child complex from rows (parent_face, (c0, c1, c2) child vertex ids, M)."""
    faces, lengths, fm = [], {}, []
    for pf, tri, M in rows:
        xy = M @ K.charts[pf]
        faces.append(tuple(tri))
        for k in range(3):
            e = _ekey(tri[k], tri[(k + 1) % 3])
            d = xy[k] - xy[(k + 1) % 3]
            lengths.setdefault(e, float(math.hypot(d[0], d[1])))
        fm.append((pf, M))
    flat = None
    if K.flat_coordinates is not None:
        flat = np.zeros((K.n_vertices + n_new, 2))
        flat[: K.n_vertices] = K.flat_coordinates
        for pf, tri, M in rows:
            xyz = M @ K.flat_coordinates[list(K.faces[pf])]
            for k in range(3):
                if tri[k] >= K.n_vertices:
                    flat[tri[k]] = xyz[k]
    return Refinement(K, PlanarComplex(K.n_vertices + n_new, faces, lengths, flat), fm)


def insert_point(K, p):
    """Make ``p`` a vertex. Returns (Refinement, vertex id of p in the child)."""
    K.check_point(p)
    p = K.normalize(p)
    if isinstance(p, Vertex):
        return identity_refinement(K), p.id
    s = K.n_vertices
    rows = []
    E = np.eye(3)
    if isinstance(p, FacePoint):
        b = np.asarray(p.bary)
        for fi, f in enumerate(K.faces):
            if fi != p.face:
                rows.append((fi, f, E))
                continue
            for k in range(3):
                k1 = (k + 1) % 3
                M = np.array([E[k], E[k1], b])
                rows.append((fi, (f[k], f[k1], s), M))
    else:
        split = set(K.edge_faces[(p.u, p.v)])
        for fi, f in enumerate(K.faces):
            if fi not in split:
                rows.append((fi, f, E))
                continue
            b = K.point_bary(p, fi)
            k = [j for j in range(3) if f[j] in (p.u, p.v) and f[(j + 1) % 3] in (p.u, p.v)][0]
            k1, k2 = (k + 1) % 3, (k + 2) % 3
            rows.append((fi, (f[k], s, f[k2]), np.array([E[k], b, E[k2]])))
            rows.append((fi, (s, f[k1], f[k2]), np.array([b, E[k1], E[k2]])))
    return _child_complex(K, 1, rows), s
