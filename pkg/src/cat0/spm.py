"""Shortest path maps by a wavefront sweep over planar cones.

The wavefront is kept as a set of *wedges*: planar cones with an apex image O
and two rays, each developed face by face into its own plane. A wedge whose
opposite vertex lies strictly inside is split along the ray through that
vertex; a wedge that reaches the boundary becomes a cone of the map. When a
vertex is settled, the sector of its link that no passing wedge covers (the
part at link distance more than pi from the arrival direction) is handed to new
wedges with apex at that vertex.
"""

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from . import _plane as pl
from ._tol import EPS_ANGLE
from .complex import ComplexError, boundary, insert_point
from .geodesy import GeodesicPath, Unfolding, is_locally_geodesic, make_path
from .points import EdgePoint, Vertex, point_key

VERTEX_EVENT = "vertex"
EDGE_EVENT = "edge"


@dataclass(frozen=True)
class SweepEvent:
    kind: str
    location: object
    key: float
    angles: tuple = ()
    cone: int = -1


class _Node:
    """One face of a wedge lineage, placed in the wedge's plane."""

    __slots__ = ("face", "pos", "parent", "depth")

    def __init__(self, face, pos, parent):
        self.face = face
        self.pos = pos
        self.parent = parent
        self.depth = 0 if parent is None else parent.depth + 1

    def chain(self):
        out = []
        n = self
        while n is not None:
            out.append(n)
            n = n.parent
        return out[::-1]


class _Wedge:
    __slots__ = ("id", "apex", "O", "r1", "r2", "last1", "last2", "node", "entry")

    def __init__(self, id, apex, O, r1, r2, last1, last2, node, entry):
        self.id = id
        self.apex = apex
        self.O = O
        self.r1 = r1
        self.r2 = r2
        self.last1 = last1
        self.last2 = last2
        self.node = node
        self.entry = entry  # half-edge of node.face we came through; None at the apex corner


@dataclass
class Cone:
    """Cell C(z; p, q) of a shortest path map, stored in the refined complex."""

    index: int
    apex: int
    apex_distance: float
    O: np.ndarray
    r1: np.ndarray
    r2: np.ndarray
    faces: tuple
    placed: list
    polygons: list
    side_p: GeodesicPath
    side_q: GeodesicPath
    far_p: np.ndarray
    far_q: np.ndarray
    exit_edge: tuple
    face_index: dict = field(default_factory=dict)

    @property
    def apex_angle(self):
        return pl.ccw_angle(self.r1, self.r2)

    @property
    def p(self):
        return self.side_p.end

    @property
    def q(self):
        return self.side_q.end


def _rigid_to_chart(K, fi, pos):
    ch = K.charts[fi]
    return pl.rigid_from_segments(pos[0], pos[1], ch[0], ch[1])


def _clip_interval(O, r1, r2, A, B, eps):
    """Parameter interval [t0, t1] of segment A->B inside the wedge, or None."""
    t0, t1 = 0.0, 1.0
    d = B - A
    for f0, fd in ((pl.cross(r1, A - O), pl.cross(r1, d)), (pl.cross(A - O, r2), pl.cross(d, r2))):
        # f0 + t*fd >= -eps
        if abs(fd) < 1e-300:
            if f0 < -eps:
                return None
            continue
        t = (-eps - f0) / fd
        if fd > 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
    if t1 < t0:
        return None
    return t0, t1


class _Sweep:
    def __init__(self, K, source):
        self.K = K
        self.s = source
        self.eps = K.eps
        self.dist = {}
        self.parent = {}
        self.arrival = {}
        self.arrival_angles = {}
        self.order = []
        self.heap = []
        self.seq = 0
        self.leaves = []
        self.n_events = 0
        self.n_wedges = 0

    # -------------------------------------------------------------- queue
    def push(self, ev, payload):
        kind_rank = 0 if ev.kind == VERTEX_EVENT else 1
        self.seq += 1
        heapq.heappush(self.heap, (round(ev.key * 1e9), kind_rank, point_key(ev.location), self.seq, ev, payload))

    def new_wedge(self, *args):
        self.n_wedges += 1
        return _Wedge(self.n_wedges, *args)

    # ----------------------------------------------------------- sectors
    def spawn_sector(self, h, lo, hi):
        """Apex-corner wedges at vertex h covering link coordinates [lo, hi]."""
        K = self.K
        offs = K.ring_offsets[h]
        ring = K.rings[h]
        theta = offs[-1]
        laps = 1 if K.is_boundary_vertex[h] else 2
        if not K.is_boundary_vertex[h]:
            shift = math.floor(lo / theta) * theta
            lo, hi = lo - shift, hi - shift
        for lap in range(laps):
            base = lap * theta
            for idx, (fi, k) in enumerate(ring):
                a, b = base + offs[idx], base + offs[idx + 1]
                s0, s1 = max(lo, a), min(hi, b)
                if s1 - s0 <= EPS_ANGLE:
                    continue
                pos = K.charts[fi].copy()
                O = pos[k]
                start = pl.unit(pos[(k + 1) % 3] - O)
                r1 = start if s0 - a <= EPS_ANGLE else pl.rotate(start, s0 - a)
                end = pl.unit(pos[(k + 2) % 3] - O)
                r2 = end if b - s1 <= EPS_ANGLE else pl.rotate(start, s1 - a)
                w = self.new_wedge(h, O, r1, r2, h, h, _Node(fi, pos, None), None)
                pb, pc = pos[(k + 1) % 3], pos[(k + 2) % 3]
                key = self.dist[h] + self._seg_dist(w, pb, pc)
                self.push(SweepEvent(VERTEX_EVENT, Vertex(h), key, cone=w.id), w)

    def _seg_dist(self, w, A, B):
        iv = _clip_interval(w.O, w.r1, w.r2, A, B, self.eps)
        if iv is None:
            return pl.seg_distance(w.O, A, B)[0]
        t0, t1 = iv
        return pl.seg_distance(w.O, A + t0 * (B - A), A + t1 * (B - A))[0]

    # ------------------------------------------------------------ events
    def settle(self, ev, info):
        v = ev.location.id
        if v in self.dist:
            return
        w, node, pg, parent = info
        self.dist[v] = ev.key
        self.parent[v] = parent
        self.arrival[v] = (w.apex, w.O, node, pg)
        self.order.append(v)
        K = self.K
        R, _ = _rigid_to_chart(K, node.face, node.pos)
        a = K.link_position(v, node.face, R @ (w.O - pg))
        if a is None:
            raise ComplexError(f"arrival direction at vertex {v} outside its corner")
        k = K.corner_of(node.face, v)
        off = K.ring_offsets[v][K._ring_index[(node.face, k)]]
        self.arrival_angles[v] = (a - off, K.corner_angles[node.face, k] - (a - off))
        theta = K.link_length(v)
        if K.is_boundary_vertex[v]:
            if theta - (a + math.pi) > EPS_ANGLE:
                self.spawn_sector(v, a + math.pi, theta)
            if a - math.pi > EPS_ANGLE:
                self.spawn_sector(v, 0.0, a - math.pi)
        elif theta - 2 * math.pi > EPS_ANGLE:
            self.spawn_sector(v, a + math.pi, a + theta - math.pi)

    def vertex_event(self, w, node, g, pg, parent):
        key = self.dist[w.apex] + float(np.hypot(*(pg - w.O)))
        ev = SweepEvent(VERTEX_EVENT, Vertex(g), key, cone=w.id)
        self.push(ev, ("settle", (w, node, pg, parent)))
        return ev

    def cross(self, w, a, b, pa, pb):
        """Move wedge w across half-edge (a, b) of its current face."""
        K = self.K
        nb = K.halfedge.get((b, a))
        if nb is None:
            self.leaves.append((w, (a, b), pa, pb))
            return None
        g = K.faces[nb]
        k = g.index(b)
        c = g[(k + 2) % 3]
        pos = np.zeros((3, 2))
        pos[k] = pb
        pos[(k + 1) % 3] = pa
        pos[(k + 2) % 3] = pl.place_third(pb, pa, K.length(b, c), K.length(a, c))
        w.node = _Node(nb, pos, w.node)
        w.entry = (b, a)
        iv = _clip_interval(w.O, w.r1, w.r2, pa, pb, self.eps)
        if iv is None:
            loc_xy = pa if pl.seg_distance(w.O, pa, pb)[1] < 0.5 else pb
            key = self.dist[w.apex] + pl.seg_distance(w.O, pa, pb)[0]
        else:
            A, B = pa + iv[0] * (pb - pa), pa + iv[1] * (pb - pa)
            dd, t = pl.seg_distance(w.O, A, B)
            key = self.dist[w.apex] + dd
            loc_xy = A + t * (B - A)
        loc = K.canonical(nb, pl.barycentric(loc_xy, pos))
        kind = VERTEX_EVENT if isinstance(loc, Vertex) else EDGE_EVENT
        ev = SweepEvent(kind, loc, key, cone=w.id)
        self.push(ev, w)
        return ev

    def run(self):
        K = self.K
        self.dist[self.s] = 0.0
        self.parent[self.s] = None
        self.order.append(self.s)
        self.spawn_sector(self.s, 0.0, K.link_length(self.s))
        limit = 40 * (K.n_faces + 4) ** 2
        while self.heap:
            *_, ev, payload = heapq.heappop(self.heap)
            self.n_events += 1
            if self.n_events > limit:
                raise ComplexError("sweep did not terminate; is the complex CAT(0)?")
            if isinstance(payload, tuple):
                self.settle(ev, payload[1])
            else:
                find_new_events(self, payload)


def find_new_events(sweep, w):
    """Advance wedge ``w`` through its current face; returns the events it creates."""
    K = sweep.K
    eps = sweep.eps
    node = w.node
    f = K.faces[node.face]
    pos = node.pos
    P = {f[j]: pos[j] for j in range(3)}
    O, r1, r2 = w.O, w.r1, w.r2
    out = []
    if w.entry is None:
        k = f.index(w.apex)
        b, c = f[(k + 1) % 3], f[(k + 2) % 3]
        pb, pc = P[b], P[c]
        if abs(pl.cross(r1, pb - O)) <= eps:
            out.append(sweep.vertex_event(w, node, b, pb, w.apex))
            w.last1 = b
        if abs(pl.cross(pc - O, r2)) <= eps:
            out.append(sweep.vertex_event(w, node, c, pc, w.apex))
            w.last2 = c
        ev = sweep.cross(w, b, c, pb, pc)
    else:
        p, q = w.entry
        g = [x for x in f if x != p and x != q][0]
        pp, pq, pg = P[p], P[q], P[g]
        d1 = pl.cross(r1, pg - O)
        d2 = pl.cross(pg - O, r2)
        if d1 > eps and d2 > eps:
            out.append(sweep.vertex_event(w, node, g, pg, w.apex))
            u = pl.unit(pg - O)
            w2 = sweep.new_wedge(w.apex, O, u, r2, g, w.last2, node, w.entry)
            w.r2, w.last2 = u, g
            ev = sweep.cross(w, q, g, pq, pg)
            if ev is not None:
                out.append(ev)
            ev = sweep.cross(w2, g, p, pg, pp)
        elif abs(d1) <= eps and d2 > -eps:
            out.append(sweep.vertex_event(w, node, g, pg, w.last1))
            w.last1 = g
            ev = sweep.cross(w, g, p, pg, pp)
        elif abs(d2) <= eps and d1 > -eps:
            out.append(sweep.vertex_event(w, node, g, pg, w.last2))
            w.last2 = g
            ev = sweep.cross(w, q, g, pq, pg)
        else:
            l1 = _clip_len(w, pq, pg, eps)
            l2 = _clip_len(w, pg, pp, eps)
            if l1 >= l2:
                ev = sweep.cross(w, q, g, pq, pg)
            else:
                ev = sweep.cross(w, g, p, pg, pp)
    if ev is not None:
        out.append(ev)
    return out


def _clip_len(w, A, B, eps):
    iv = _clip_interval(w.O, w.r1, w.r2, A, B, eps)
    if iv is None:
        return -1.0
    return (iv[1] - iv[0]) * float(np.hypot(*(B - A)))


# ----------------------------------------------------------------- the map
class ShortestPathMap:
    """SPM(x). Internally everything lives in ``Kr``, the complex with x as a vertex."""

    def __init__(self, K, source, refinement, s, sweep):
        self.K = K
        self.source = source
        self.refinement = refinement
        self.Kr = refinement.child
        self.s = s
        self.dist = sweep.dist
        self.parent = sweep.parent
        self.arrival = sweep.arrival
        self.arrival_angles = sweep.arrival_angles
        self.settle_order = sweep.order
        self.n_events = sweep.n_events
        self.cones = []
        self.crossings = {}
        self.tree = {}
        self._vertex_paths = {}
        self._unfoldings = {}

    # ------------------------------------------------------------ tree
    def vertex_breakpoints(self, v):
        """Breakpoints of the geodesic from the source to vertex v (in Kr)."""
        if v in self._vertex_paths:
            return self._vertex_paths[v]
        stack = [v]
        while stack:
            u = stack[-1]
            if u == self.s:
                self._vertex_paths[u] = [Vertex(u)]
                stack.pop()
                continue
            z, O, node, pg = self.arrival[u]
            if z not in self._vertex_paths:
                stack.append(z)
                continue
            chain = node.chain()
            unf = Unfolding(self.Kr, [n.face for n in chain], [n.pos for n in chain])
            self._vertex_paths[u] = self._vertex_paths[z] + unf.pull_back(O, pg) + [Vertex(u)]
            stack.pop()
        return self._vertex_paths[v]

    def distance_to_vertex(self, v):
        return self.dist[v]

    # ---------------------------------------------------------- mapping
    def to_parent_points(self, pts):
        return [self.refinement.to_parent(p) for p in pts]

    def to_parent_path(self, path):
        return make_path(self.K, self.to_parent_points(path.breakpoints))

    def vertex_distances(self):
        return [self.dist.get(v) for v in range(self.K.n_vertices)]

    def crossing_list(self, face):
        """L(F) for a face of the refined complex: (cone index, polygon in face chart)."""
        return [(ci, self.cones[ci].polygons[self.cones[ci].face_index[face]]) for ci in self.crossings.get(face, [])]

    def to_json(self):
        cones = []
        for c in self.cones:
            seen = []
            for fr in c.faces:
                pf = self.refinement.face_map[fr][0]
                if pf not in seen:
                    seen.append(pf)
            cones.append(
                {
                    "apex": self.refinement.to_parent(Vertex(c.apex)).to_json(),
                    "apex_distance": c.apex_distance,
                    "apex_angle": c.apex_angle,
                    "sideP": self.to_parent_path(c.side_p).to_json(),
                    "sideQ": self.to_parent_path(c.side_q).to_json(),
                    "faces": seen,
                }
            )
        return {
            "source": self.source.to_json(),
            "cones": cones,
            "vertex_distances": self.vertex_distances(),
        }


def _boundary_positions(K, start):
    cyc = boundary(K)
    if start in cyc:
        i = cyc.index(start)
        cyc = cyc[i:] + cyc[:i]
    pos = {}
    acc = 0.0
    for i, v in enumerate(cyc):
        pos[v] = acc
        acc += K.length(v, cyc[(i + 1) % len(cyc)])
    return cyc, pos, acc


def build_spm(K, x):
    """Shortest path map of K from the point x."""
    R, s = insert_point(K, x)
    Kr = R.child
    sweep = _Sweep(Kr, s)
    sweep.run()
    spm = ShortestPathMap(K, K.normalize(x), R, s, sweep)
    _assemble_cones(spm, sweep)
    return spm


def _assemble_cones(spm, sweep):
    Kr = spm.Kr
    cyc, bpos, total = _boundary_positions(Kr, spm.s)
    nxt = {cyc[i]: cyc[(i + 1) % len(cyc)] for i in range(len(cyc))}
    raw = []
    for w, (a, b), pa, pb in sweep.leaves:
        chain = w.node.chain()
        faces = tuple(n.face for n in chain)
        placed = [n.pos for n in chain]
        rp = pl.line_param(w.O, w.r1, pa, pb)
        rq = pl.line_param(w.O, w.r2, pa, pb)
        tp = min(1.0, max(0.0, rp[1])) if rp is not None else 0.0
        tq = min(1.0, max(0.0, rq[1])) if rq is not None else 1.0
        far_p = pa + tp * (pb - pa)
        far_q = pa + tq * (pb - pa)
        # position of the far side along the boundary cycle from the source
        u, v = (a, b) if nxt.get(a) == b else (b, a)
        tm = 0.5 * (tp + tq)
        if u != a:
            tm = 1.0 - tm
        key = (bpos[u] + tm * Kr.length(u, v)) % total if total > 0 else 0.0
        raw.append((round(key * 1e9), w.id, w, faces, placed, far_p, far_q, (a, b)))
    raw.sort(key=lambda r: (r[0], r[1]))
    for ci, (_, _, w, faces, placed, far_p, far_q, edge) in enumerate(raw):
        unf = Unfolding(Kr, faces, placed)
        n_last = len(faces) - 1
        fp = Kr.canonical(faces[-1], pl.barycentric(far_p, placed[-1]))
        fq = Kr.canonical(faces[-1], pl.barycentric(far_q, placed[-1]))
        side_p = make_path(Kr, [Vertex(w.apex)] + unf.pull_back(w.O, far_p, 0, n_last) + [fp])
        side_q = make_path(Kr, [Vertex(w.apex)] + unf.pull_back(w.O, far_q, 0, n_last) + [fq])
        polys = []
        for fi, pos in zip(faces, placed):
            poly = [pos[0], pos[1], pos[2]]
            poly = pl.clip_halfplane(poly, w.O, np.array([-w.r1[1], w.r1[0]]), 0.0)
            poly = pl.clip_halfplane(poly, w.O, np.array([w.r2[1], -w.r2[0]]), 0.0)
            Rm, t = _rigid_to_chart(Kr, fi, pos)
            polys.append(_dedupe(np.array([Rm @ p + t for p in poly]).reshape(-1, 2)))
        cone = Cone(
            ci, w.apex, spm.dist[w.apex], w.O, w.r1, w.r2, faces, placed, polys,
            side_p, side_q, far_p, far_q, edge, {f: i for i, f in enumerate(faces)},
        )
        spm.cones.append(cone)
        for fi in faces:
            spm.crossings.setdefault(fi, []).append(ci)
        for end, last in ((fp, w.last1), (fq, w.last2)):
            if not isinstance(end, Vertex):
                spm.tree[_tree_key(end)] = (end, Vertex(last))
    for v, par in spm.parent.items():
        if par is not None:
            spm.tree[_tree_key(Vertex(v))] = (Vertex(v), Vertex(par))


def _dedupe(poly, tol=1e-12):
    keep = []
    for p in poly:
        if not keep or np.hypot(*(p - keep[-1])) > tol:
            keep.append(p)
    while len(keep) > 1 and np.hypot(*(keep[0] - keep[-1])) <= tol:
        keep.pop()
    return np.array(keep).reshape(-1, 2)


def _tree_key(p):
    if isinstance(p, Vertex):
        return ("v", p.id)
    if isinstance(p, EdgePoint):
        return ("e", p.u, p.v, round(p.t, 9))
    return ("f", p.face, tuple(round(b, 9) for b in p.bary))


# ------------------------------------------------------------ verification
@dataclass
class SpmReport:
    violations: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def checks_failed(self):
        return sorted({c for c, _ in self.violations})


def _in_poly(poly, xy, tol):
    """Signed margin of xy inside a convex CCW polygon (>= -tol means inside)."""
    n = len(poly)
    if n < 3:
        return -math.inf
    m = math.inf
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        e = b - a
        L = math.hypot(e[0], e[1])
        if L <= 1e-12:
            continue
        m = min(m, pl.cross(e, xy - a) / L)
    return m


def _random_face_point(rng, K, fi):
    r = rng.random(2)
    if r.sum() > 1:
        r = 1 - r
    b = np.array([1 - r.sum(), r[0], r[1]])
    return b


def verify_spm(K, spm, n_coverage=1000, n_convexity=100, seed=0):
    """Run the cone-partition property suite; returns an SpmReport."""
    rep = SpmReport()
    Kr = spm.Kr
    tol = 1e-9
    eps = Kr.eps
    rng = np.random.default_rng(seed)

    # (i) tree
    indeg = {}
    for key, (child, par) in spm.tree.items():
        indeg[key] = indeg.get(key, 0) + 1
    for v in range(Kr.n_vertices):
        if v not in spm.dist:
            rep.violations.append(("i", f"vertex {v} never reached"))
    for v in spm.dist:
        seen = set()
        u = v
        while u is not None:
            if u in seen:
                rep.violations.append(("i", f"cycle through vertex {v}"))
                break
            seen.add(u)
            u = spm.parent.get(u)
    if spm.parent.get(spm.s) is not None:
        rep.violations.append(("i", "source has a parent"))

    on_side = set()
    for c in spm.cones:
        # (ii)
        if not c.apex_angle < math.pi - tol:
            rep.violations.append(("ii", f"cone {c.index} apex angle {c.apex_angle}"))
        # (vi)
        for name, side in (("p", c.side_p), ("q", c.side_q)):
            chk = is_locally_geodesic(Kr, side, tol)
            if not chk:
                rep.violations.append(("vi", f"cone {c.index} side {name}: {chk.detail}"))
            for b in side.breakpoints:
                if isinstance(b, Vertex):
                    on_side.add(b.id)
        # faces at most once
        if len(set(c.faces)) != len(c.faces):
            rep.violations.append(("faces", f"cone {c.index} repeats a face"))
        # (iv)
        for pos in c.placed:
            for xy in pos:
                if pl.cross(c.r1, xy - c.O) > eps * 10 and pl.cross(xy - c.O, c.r2) > eps * 10:
                    if float(np.hypot(*(xy - c.O))) > eps:
                        rep.violations.append(("iv", f"cone {c.index} contains a vertex"))
        on_side.add(c.apex)
    for v in range(Kr.n_vertices):
        if v not in on_side:
            rep.violations.append(("iv", f"vertex {v} lies on no cone side or apex"))

    # (iii) convexity, sampled inside each cone's unfolding
    for c in spm.cones:
        unf = Unfolding(Kr, c.faces, c.placed)
        samples = []
        for _ in range(n_convexity * 2):
            i = int(rng.integers(len(c.faces)))
            poly = c.polygons[i]
            if len(poly) < 3:
                continue
            w = rng.random(len(poly))
            w /= w.sum()
            Rm, t = _rigid_to_chart(Kr, c.faces[i], c.placed[i])
            xy = Rm.T @ (w @ poly - t)
            samples.append((i, xy))
        for j in range(0, len(samples) - 1, 2):
            (i1, a), (i2, b) = samples[j], samples[j + 1]
            if i1 > i2:
                (i1, a), (i2, b) = (i2, b), (i1, a)
            pts = [unf.inverse(a, i1)] + unf.pull_back(a, b, i1, i2) + [unf.inverse(b, i2)]
            path = make_path(Kr, pts)
            chk = is_locally_geodesic(Kr, path, 1e-7)
            if not chk:
                rep.violations.append(("iii", f"cone {c.index}: in-cone segment not geodesic ({chk.detail})"))
                continue
            for bp in path.breakpoints:
                ok = False
                for fi in Kr.faces_of_point(bp):
                    if fi in c.face_index and _in_poly(c.polygons[c.face_index[fi]], Kr.point_xy(bp, fi), 1e-7 * max(1, Kr.scale)) >= -1e-7 * max(1, Kr.scale):
                        ok = True
                        break
                if not ok:
                    rep.violations.append(("iii", f"cone {c.index}: segment leaves the cone at {bp}"))
                    break

    # (v) coverage
    for _ in range(n_coverage):
        fi = int(rng.integers(Kr.n_faces))
        b = _random_face_point(rng, Kr, fi)
        xy = b @ Kr.charts[fi]
        inside = []
        for ci in spm.crossings.get(fi, []):
            c = spm.cones[ci]
            m = _in_poly(c.polygons[c.face_index[fi]], xy, eps)
            if m >= -eps:
                inside.append((ci, m))
        if not inside:
            rep.violations.append(("v", f"point {b.tolist()} of face {fi} in no cone"))
        elif len(inside) > 1 and sum(1 for _, m in inside if m > eps) > 0 and len(inside) - sum(1 for _, m in inside if abs(m) <= eps) > 1:
            rep.violations.append(("v", f"point {b.tolist()} of face {fi} in cones {[ci for ci, _ in inside]}"))

    n = spm.K.n_vertices
    if len(spm.cones) > 6 * max(n, Kr.n_vertices):
        rep.violations.append(("count", f"{len(spm.cones)} cones > 6n"))
    rep.counts = {"cones": len(spm.cones), "crossings": sum(len(c.faces) for c in spm.cones), "events": spm.n_events}
    return rep
