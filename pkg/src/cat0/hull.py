"""Geodesic convex hulls of finite point sets.

The hull is found by the cut-and-wrap scheme: points are grouped by the cones
of a shortest path map from a boundary vertex, each group gets a planar hull
inside its cone's unfolding, consecutive groups are joined by geodesics, and
the resulting skeleton P is cut out of the complex. The boundary of the hull
is the shortest path that wraps around P inside the cut complex.

When P touches the boundary of K the complement of P falls apart into several
disks; the wrap is then assembled from one shortest path per disk, joined at
the contact points.
"""

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import _plane as pl
from .complex import ComplexError, PlanarComplex, Refinement, _child_complex, _ekey, validate
from .geodesy import GeodesicPath, breakpoint_angles, make_path
from .points import EdgePoint, FacePoint, Vertex, point_key
from .query import _candidates, _child_point, shortest_path, unfold_cone
from .spm import build_spm


class HullError(ComplexError):
    pass


# ------------------------------------------------------------ partition
def partition_points(spm, S):
    """Group S by containing cone, in cone order. Returns [(cone index, [points])]."""
    K = spm.K
    if not isinstance(spm.source, Vertex) or not K.is_boundary_vertex[spm.source.id]:
        raise HullError("the shortest path map must be built from a boundary vertex")
    groups = defaultdict(list)
    for y in S:
        cands = _candidates(spm, _child_point(spm, y))
        if not cands:
            raise HullError(f"point {y} lies in no cone")
        groups[cands[0][0]].append(K.normalize(y))
    out = []
    for ci in sorted(groups):
        pts = sorted(set(groups[ci]), key=point_key)
        out.append((ci, pts))
    return out


def _strip_index(spm, ci, yr):
    c = spm.cones[ci]
    best = None
    for fi in spm.Kr.faces_of_point(yr):
        if fi in c.face_index:
            i = c.face_index[fi]
            if best is None or i < best:
                best = i
    if best is None:
        raise HullError(f"point {yr} is not in cone {ci}")
    return best


def hull_in_cone(spm, cone, pts):
    """Closed counterclockwise chain (list of K points) bounding the hull of pts in one cone.

    One point gives [p]; collinear images give the segment walked there and back.
    """
    ci = cone if isinstance(cone, int) else cone.index
    if not pts:
        return []
    pts = sorted(set(spm.K.normalize(p) for p in pts), key=point_key)
    if len(pts) == 1:
        return [pts[0]]
    c = spm.cones[ci]
    cu = unfold_cone(spm, ci)
    rs = [_child_point(spm, p) for p in pts]
    idx = [_strip_index(spm, ci, r) for r in rs]
    xy = np.array([spm.Kr.point_bary(r, c.faces[i]) @ c.placed[i] for r, i in zip(rs, idx)])
    order = pl.convex_hull(xy)
    if len(order) < 3:
        # collinear: extreme pair along the common line
        d = xy - xy[0]
        far = int(np.argmax(np.hypot(d[:, 0], d[:, 1])))
        d2 = xy - xy[far]
        other = int(np.argmax(np.hypot(d2[:, 0], d2[:, 1])))
        order = [far, other]
        if np.hypot(*(xy[far] - xy[other])) <= spm.K.eps:
            return [pts[far]]
    chain = []
    m = len(order)
    for j in range(m):
        a, b = order[j], order[(j + 1) % m]
        chain.append(rs[a])
        if idx[a] <= idx[b]:
            mid = cu.unfolding.pull_back(xy[a], xy[b], idx[a], idx[b])
        else:
            mid = cu.unfolding.pull_back(xy[b], xy[a], idx[b], idx[a])[::-1]
        chain.extend(mid)
        if m == 2 and j == 1:
            break
    chain.append(rs[order[0]])
    out = [spm.refinement.to_parent(p) for p in chain]
    return list(make_path(spm.K, out).breakpoints)


# ------------------------------------------------------------- skeleton
@dataclass
class HullSkeleton:
    subsets: list
    cone_ids: list
    chains: list
    connectors: list
    anchor: object = None
    p: object = None
    q: object = None

    def paths(self):
        out = [list(ch) for ch in self.chains if len(ch) > 1]
        out += [list(c.breakpoints) for c in self.connectors]
        if self.anchor is not None:
            out.append(list(self.anchor.breakpoints))
        return out

    def points(self):
        pts = []
        for ch in self.chains:
            pts.extend(ch)
        for c in self.connectors:
            pts.extend(c.breakpoints)
        if self.anchor is not None:
            pts.extend(self.anchor.breakpoints)
        return pts


def _nearest_boundary(spm):
    """(distance, boundary point of K) nearest to the map's source."""
    best = None
    Kr = spm.Kr
    for c in spm.cones:
        A, B = c.far_p, c.far_q
        d, t = pl.seg_distance(c.O, A, B)
        d += c.apex_distance
        if best is None or d < best[0] - Kr.eps:
            xy = A + t * (B - A)
            pt = Kr.canonical(c.faces[-1], pl.barycentric(xy, c.placed[-1]))
            best = (d, pt)
    d, pt = best
    return d, spm.refinement.to_parent(pt)


def build_skeleton(K, spm, S, connector_maps=None):
    """Per-cone hulls joined in cone order; anchored to the boundary only if needed."""
    if not S:
        raise HullError("empty point set")
    parts = partition_points(spm, S)
    chains = [hull_in_cone(spm, ci, pts) for ci, pts in parts]
    connectors = []
    maps = {} if connector_maps is None else connector_maps
    for i in range(1, len(parts)):
        a = parts[i - 1][1][0]
        b = parts[i][1][0]
        if a == b:
            continue
        m = maps.get(a)
        if m is None:
            m = maps[a] = build_spm(K, a)
        connectors.append(shortest_path(m, b)[0])
    sk = HullSkeleton([p for _, p in parts], [ci for ci, _ in parts], chains, connectors)
    if not _touches_boundary(K, sk.points()):
        _add_anchor(K, sk, parts[0][1], maps)
    return sk


def _on_boundary(K, p):
    if isinstance(p, Vertex):
        return bool(K.is_boundary_vertex[p.id])
    if isinstance(p, EdgePoint):
        return K.is_boundary_edge(p.u, p.v)
    return False


def _touches_boundary(K, pts):
    return any(_on_boundary(K, p) for p in pts)


def _add_anchor(K, sk, first, maps):
    best = None
    for t in first:
        m = maps.get(t)
        if m is None:
            m = maps[t] = build_spm(K, t)
        d, q = _nearest_boundary(m)
        if best is None or d < best[0] - K.eps:
            best = (d, t, q, m)
    d, t, q, m = best
    path = shortest_path(m, q)[0].reversed()  # q -> t
    hit, k = _first_hit(K, path, sk)
    pts = list(path.breakpoints[: k + 1]) + [hit]
    sk.anchor = make_path(K, pts).reversed()
    sk.p = hit
    sk.q = q


def _segments_of(K, sk):
    segs = []
    for pts in sk.paths():
        for a, b in zip(pts[:-1], pts[1:]):
            segs.append((a, b))
    return segs


def _first_hit(K, path, sk):
    """First point of the skeleton met along path; returns (point, index of the segment start)."""
    segs = _segments_of(K, sk)
    lone = [p for ch in sk.chains if len(ch) == 1 for p in ch]
    tol = K.eps * 10
    bp = path.breakpoints
    for k in range(len(bp) - 1):
        a, b = bp[k], bp[k + 1]
        fi = path.faces[k]
        A, B = K.point_xy(a, fi), K.point_xy(b, fi)
        L = float(np.hypot(*(B - A)))
        best = None
        for c, d in segs:
            fc, fd = set(K.faces_of_point(c)), set(K.faces_of_point(d))
            if fi not in fc or fi not in fd:
                continue
            C, D = K.point_xy(c, fi), K.point_xy(d, fi)
            for s in _seg_seg(A, B, C, D, tol):
                if best is None or s < best:
                    best = s
        for p in lone:
            if fi in K.faces_of_point(p):
                dist, s = pl.seg_distance(K.point_xy(p, fi), A, B)
                if dist <= tol and (best is None or s < best):
                    best = s
        if best is not None:
            if best * L <= tol:
                return a, max(k - 1, 0)
            return K.canonical(fi, pl.barycentric(A + best * (B - A), K.charts[fi])), k
    return bp[-1], len(bp) - 2


def _seg_seg(A, B, C, D, tol):
    """Parameters s on AB of the intersection with CD (touching and overlaps included)."""
    out = []
    d = B - A
    L2 = float(d @ d)
    if L2 == 0:
        return out
    e = D - C
    den = pl.cross(d, e)
    L = math.sqrt(L2)
    if abs(den) > 1e-14 * L * max(float(np.hypot(*e)), 1e-300):
        w = C - A
        s = pl.cross(w, e) / den
        t = pl.cross(w, d) / den
        Le = float(np.hypot(*e))
        if -tol / L <= s <= 1 + tol / L and -tol / max(Le, 1e-300) <= t <= 1 + tol / max(Le, 1e-300):
            out.append(min(1.0, max(0.0, s)))
        return out
    # parallel: check overlap on the common line
    if abs(pl.cross(d, C - A)) / L > tol:
        return out
    for P in (C, D):
        s = float((P - A) @ d) / L2
        if -tol / L <= s <= 1 + tol / L:
            out.append(min(1.0, max(0.0, s)))
    sc = float((C - A) @ d) / L2
    sd = float((D - A) @ d) / L2
    if min(sc, sd) <= 0 <= max(sc, sd):
        out.append(0.0)
    return out


# --------------------------------------------------------------- overlay
def overlay(K, paths):
    """Refine K so every segment of every path becomes a chain of edges.

    Returns (Refinement, set of child edges lying on the paths).
    """
    tol = K.eps * 10
    edge_t = defaultdict(list)
    face_xy = defaultdict(list)
    face_segs = defaultdict(list)
    seg_list = []

    def reg(p):
        if isinstance(p, EdgePoint):
            edge_t[(p.u, p.v)].append(p.t)
        elif isinstance(p, FacePoint):
            face_xy[p.face].append(K.point_xy(p, p.face))

    for pts in paths:
        for p in pts:
            reg(p)
        for a, b in zip(pts[:-1], pts[1:]):
            cands = K.common_faces(a, b)
            if not cands:
                raise HullError(f"segment {a} - {b} leaves its face")
            fi = cands[0]
            A, B = K.point_xy(a, fi), K.point_xy(b, fi)
            if np.hypot(*(A - B)) <= tol:
                continue
            seg_list.append((fi, A, B))
            if not _on_face_side(K, fi, A, B, tol):
                face_segs[fi].append((A, B))

    # intersections inside faces
    for fi, segs in face_segs.items():
        if len(segs) < 2:
            continue
        for i in range(len(segs)):
            for j in range(i + 1, len(segs)):
                A, B = segs[i]
                C, D = segs[j]
                for s in _seg_seg(A, B, C, D, tol):
                    X = A + s * (B - A)
                    pt = K.canonical(fi, pl.barycentric(X, K.charts[fi]))
                    if isinstance(pt, EdgePoint):
                        edge_t[(pt.u, pt.v)].append(pt.t)
                    elif isinstance(pt, FacePoint):
                        face_xy[fi].append(X)

    # merge per edge
    n = K.n_vertices
    nxt = n
    edge_ids = {}
    for e, ts in edge_t.items():
        L = K.edge_lengths[e]
        merged = []
        for t in sorted(ts):
            if t * L <= tol or (1 - t) * L <= tol:
                continue
            if merged and (t - merged[-1]) * L <= tol:
                continue
            merged.append(t)
        edge_ids[e] = [(t, nxt + i) for i, t in enumerate(merged)]
        nxt += len(merged)
    face_ids = {}
    for fi, xs in face_xy.items():
        merged = []
        for X in xs:
            if any(np.hypot(*(X - Y)) <= tol for Y, _ in merged):
                continue
            merged.append((X, nxt))
            nxt += 1
        face_ids[fi] = merged

    rows = []
    local = {}
    E = np.eye(3)
    for fi, f in enumerate(K.faces):
        ch = K.charts[fi]
        verts = [(ch[k], f[k]) for k in range(3)]
        bsegs = []
        for k in range(3):
            a, b = f[k], f[(k + 1) % 3]
            e = _ekey(a, b)
            pts = edge_ids.get(e, [])
            if a > b:
                pts = [(1 - t, g) for t, g in reversed(pts)]
            chain = [k]
            for t, g in pts:
                verts.append((ch[k] + t * (ch[(k + 1) % 3] - ch[k]), g))
                chain.append(len(verts) - 1)
            chain.append((k + 1) % 3)
            bsegs.extend(zip(chain[:-1], chain[1:]))
        for X, g in face_ids.get(fi, []):
            verts.append((X, g))
        local[fi] = verts
        if len(verts) == 3:
            rows.append((fi, f, E))
            continue
        V = np.array([v[0] for v in verts])
        segs = [list(s) for s in bsegs]
        for A, B in face_segs.get(fi, []):
            on = []
            for i, (X, _) in enumerate(verts):
                dist, s = pl.seg_distance(X, A, B)
                if dist <= tol:
                    on.append((s, i))
            on.sort()
            for (_, i), (_, j) in zip(on[:-1], on[1:]):
                if i != j:
                    segs.append([i, j])
        tri = _triangulate(V, segs)
        for a, b, c in tri:
            M = np.array([pl.barycentric(V[a], ch), pl.barycentric(V[b], ch), pl.barycentric(V[c], ch)])
            for r, idx in enumerate((a, b, c)):
                if idx < 3:
                    M[r] = E[idx]
            rows.append((fi, (verts[a][1], verts[b][1], verts[c][1]), M))

    R = _child_complex(K, nxt - n, rows)
    # child edges on the paths
    Kr = R.child
    on_path = set()
    for fi, A, B in seg_list:
        on = []
        for X, g in local[fi]:
            dist, s = pl.seg_distance(X, A, B)
            if dist <= tol:
                on.append((s, g))
        on.sort()
        for (_, g1), (_, g2) in zip(on[:-1], on[1:]):
            if g1 == g2:
                continue
            e = _ekey(g1, g2)
            if e not in Kr.edge_faces:
                raise HullError(f"overlay lost the segment piece {e}")
            on_path.add(e)
    return R, on_path


def _on_face_side(K, fi, A, B, tol):
    ch = K.charts[fi]
    for k in range(3):
        a, b = ch[k], ch[(k + 1) % 3]
        if pl.seg_distance(A, a, b)[0] <= tol and pl.seg_distance(B, a, b)[0] <= tol:
            return True
    return False


def _triangulate(V, segs):
    import triangle

    t = triangle.triangulate({"vertices": V, "segments": np.array(segs)}, "pQ")
    if len(t["vertices"]) != len(V):
        raise HullError("constrained triangulation needed extra points")
    out = []
    for a, b, c in t["triangles"]:
        a, b, c = int(a), int(b), int(c)
        cr = pl.cross(V[b] - V[a], V[c] - V[a])
        if abs(cr) <= 1e-18:
            raise HullError("degenerate triangle in overlay")
        out.append((a, b, c) if cr > 0 else (a, c, b))
    return out


# ------------------------------------------------------------------ cut
@dataclass
class CutComplex:
    """K cut open along the skeleton edges.

    ``refinement`` maps the overlay complex back to K; ``cut`` is the overlay
    with every vertex split into one copy per fan between skeleton edges;
    ``components`` lists face sets of the pieces, and ``pieces`` the disks
    (sub-complexes) used by the wrap, each with a Refinement back to K.
    """

    refinement: Refinement
    cut: PlanarComplex
    cut_edges: set
    copy_of: dict
    original: list
    component_of: list
    pieces: dict = field(default_factory=dict)
    p: object = None
    p_star: object = None
    q: object = None
    q_star: object = None

    def piece(self, comp):
        """(sub-complex, Refinement to K) for one component, built on demand."""
        got = self.pieces.get(comp)
        if got is None:
            Kc = self.cut
            faces = [fi for fi in range(Kc.n_faces) if self.component_of[fi] == comp]
            ids = sorted({v for fi in faces for v in Kc.faces[fi]})
            ren = {v: i for i, v in enumerate(ids)}
            sub_faces = [tuple(ren[v] for v in Kc.faces[fi]) for fi in faces]
            lengths = {}
            for fi, sf in zip(faces, sub_faces):
                for k in range(3):
                    u, v = Kc.faces[fi][k], Kc.faces[fi][(k + 1) % 3]
                    lengths[_ekey(sf[k], sf[(k + 1) % 3])] = Kc.length(u, v)
            flat = None
            if Kc.flat_coordinates is not None:
                flat = Kc.flat_coordinates[ids]
            sub = PlanarComplex(len(ids), sub_faces, lengths, flat)
            to_r = Refinement(self.refinement.child, sub, [(fi, np.eye(3)) for fi in faces])
            to_k = self.refinement.compose(to_r)
            got = (sub, to_k, ren)
            self.pieces[comp] = got
        return got


def cut_along(R, cut_edges):
    """Split the overlay complex R.child along the given edges."""
    Kr = R.child
    copy_of = {}
    original = []
    for v in range(Kr.n_vertices):
        ring = Kr.rings.get(v)
        if not ring:
            continue
        starts = [i for i, (fi, k) in enumerate(ring) if _ekey(v, Kr.faces[fi][(k + 1) % 3]) in cut_edges]
        if Kr.is_boundary_vertex[v]:
            breaks = [i for i in starts if i > 0]
            fans = []
            prev = 0
            for b in breaks:
                fans.append(ring[prev:b])
                prev = b
            fans.append(ring[prev:])
        elif not starts:
            fans = [ring]
        else:
            s0 = starts[0]
            rot = ring[s0:] + ring[:s0]
            br = [(i - s0) % len(ring) for i in starts]
            br = sorted(br)[1:]
            fans = []
            prev = 0
            for b in br:
                fans.append(rot[prev:b])
                prev = b
            fans.append(rot[prev:])
        for fan in fans:
            nid = len(original)
            original.append(v)
            for fi, k in fan:
                copy_of[(fi, v)] = nid
    faces = [tuple(copy_of[(fi, v)] for v in f) for fi, f in enumerate(Kr.faces)]
    lengths = {}
    for fi, f in enumerate(Kr.faces):
        for k in range(3):
            a, b = faces[fi][k], faces[fi][(k + 1) % 3]
            lengths[_ekey(a, b)] = Kr.length(f[k], f[(k + 1) % 3])
    flat = None
    if Kr.flat_coordinates is not None:
        flat = Kr.flat_coordinates[original]
    cutK = PlanarComplex(len(original), faces, lengths, flat)
    # components over uncut edges
    parent = list(range(Kr.n_faces))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e, fs in Kr.edge_faces.items():
        if len(fs) == 2 and e not in cut_edges:
            a, b = find(fs[0]), find(fs[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
    comp = [find(i) for i in range(Kr.n_faces)]
    return CutComplex(R, cutK, set(cut_edges), copy_of, original, comp)


def cut_complex(K, skeleton):
    """K cut open along the skeleton; p and q are doubled when an anchor exists."""
    R, edges = overlay(K, skeleton.paths())
    C = cut_along(R, edges)
    if skeleton.anchor is not None:
        Kr = R.child
        pv = R.to_child(skeleton.p)
        qv = R.to_child(skeleton.q)
        for name, pt in (("p", pv), ("q", qv)):
            if not isinstance(pt, Vertex):
                raise HullError(f"anchor end {name} is not an overlay vertex")
        a_pts = [R.to_child(x) for x in skeleton.anchor.breakpoints]
        p_copies = _copies_beside(C, Kr, pv.id, edges, a_pts[1] if len(a_pts) > 1 else None)
        q_copies = _copies_beside(C, Kr, qv.id, edges, None)
        C.p, C.p_star = p_copies[0], p_copies[-1]
        C.q, C.q_star = q_copies[0], q_copies[-1]
    return C


def _copies_beside(C, Kr, v, edges, toward):
    cps = []
    for fi, k in Kr.rings[v]:
        c = C.copy_of[(fi, v)]
        if c not in cps:
            cps.append(c)
    return cps


# ----------------------------------------------------------------- wrap
def _ccw_neighbours(Kr, v):
    ring = Kr.rings[v]
    out = [Kr.faces[fi][(k + 1) % 3] for fi, k in ring]
    if Kr.is_boundary_vertex[v]:
        fi, k = ring[-1]
        out.append(Kr.faces[fi][(k + 2) % 3])
    return out


class _Graph:
    def __init__(self, Kr, edges):
        self.Kr = Kr
        adj = defaultdict(set)
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        self.order = {}
        for v in adj:
            nb = _ccw_neighbours(Kr, v)
            self.order[v] = [w for w in nb if w in adj[v]]

    def next_dart(self, u, w):
        lst = self.order[w]
        i = lst.index(u)
        return w, lst[(i + 1) % len(lst)]

    def walk(self, start):
        out = [start]
        d = self.next_dart(*start)
        while d != start:
            out.append(d)
            d = self.next_dart(*d)
            if len(out) > 4 * sum(len(x) for x in self.order.values()) + 4:
                raise HullError("boundary walk did not close")
        return out


def _outer_walk(Kr, g, cut_edges, anchor_start=None):
    if anchor_start is not None:
        return g.walk(anchor_start)
    seen = set()
    {e for e, fs in Kr.edge_faces.items() if len(fs) == 1 and e not in cut_edges}
    best = None
    for u in sorted(g.order):
        for w in g.order[u]:
            if (u, w) in seen:
                continue
            walk = g.walk((u, w))
            seen.update(walk)
            if any(Kr.halfedge.get((b, a)) is None for a, b in walk):
                return walk
            if best is None:
                best = walk
    return best


def _right_face(Kr, a, b):
    return Kr.halfedge.get((b, a))


def wrap(K, skeleton, C=None):
    """Closed boundary path (in K) of the hull of the skeleton."""
    if C is None:
        C = cut_complex(K, skeleton)
    R = C.refinement
    Kr = R.child
    g = _Graph(Kr, C.cut_edges)
    anchor_start = None
    anchor_darts = set()
    if skeleton.anchor is not None:
        a_vs = _path_vertices(Kr, R, skeleton.anchor, C.cut_edges)  # p ... q
        for x, y in zip(a_vs[:-1], a_vs[1:]):
            anchor_darts.add((x, y))
            anchor_darts.add((y, x))
        q = a_vs[-1]
        anchor_start = (q, a_vs[-2])
    walk = _outer_walk(Kr, g, C.cut_edges, anchor_start)
    if anchor_start is not None:
        # rotate so that the walk starts right after the anchor is left at p
        k = 0
        while walk[k] in anchor_darts:
            k += 1
        walk = walk[k:] + walk[:k]
        while walk and walk[-1] in anchor_darts:
            walk.pop()

    def copy(dart, at):
        fi = _right_face(Kr, *dart)
        return None if fi is None else C.copy_of[(fi, at)]

    # split into runs
    runs = []
    cur = None
    for d in walk:
        fi = _right_face(Kr, *d)
        if fi is None:
            if cur is not None:
                runs.append(cur)
                cur = None
            runs.append(("edge", d))
            continue
        if cur is not None:
            prev = cur[1][-1]
            if copy(prev, d[0]) == copy(d, d[0]) and C.component_of[fi] == cur[0]:
                cur[1].append(d)
                continue
            runs.append(cur)
        cur = (C.component_of[fi], [d])
    if cur is not None:
        runs.append(cur)
    # merge a run split only by the cyclic start
    if len(runs) > 1 and runs[0][0] != "edge" and runs[-1][0] != "edge":
        last, first = runs[-1], runs[0]
        if last[0] == first[0] and anchor_start is None and copy(last[1][-1], first[1][0][0]) == copy(first[1][0], first[1][0][0]):
            runs = [(first[0], last[1] + first[1])] + runs[1:-1]
    if len(runs) == 1 and runs[0][0] != "edge" and anchor_start is None:
        d0, d1 = runs[0][1][0], runs[0][1][-1]
        if d1[1] == d0[0] and copy(d1, d1[1]) == copy(d0, d0[0]):
            raise HullError("skeleton is not anchored to the boundary")

    pts = []
    for run in runs:
        if run[0] == "edge":
            a, b = run[1]
            seg = [R.to_parent(Vertex(a)), R.to_parent(Vertex(b))]
        else:
            comp, darts = run
            s = copy(darts[0], darts[0][0])
            e = copy(darts[-1], darts[-1][1])
            sub, to_k, ren = C.piece(comp)
            if s == e:
                seg = [to_k.to_parent(Vertex(ren[s]))]
            else:
                m = build_spm(sub, Vertex(ren[s]))
                path, _ = shortest_path(m, Vertex(ren[e]))
                seg = [to_k.to_parent(p) for p in path.breakpoints]
        if pts and seg and seg[0] == pts[-1]:
            seg = seg[1:]
        pts.extend(seg)
    if pts and pts[0] != pts[-1]:
        pts.append(pts[0])
    return make_path(K, pts), C


def _path_vertices(Kr, R, path, cut_edges):
    """Overlay vertices along a path, in order."""
    out = []
    for i, p in enumerate(path.breakpoints):
        v = R.to_child(p)
        if not isinstance(v, Vertex):
            raise HullError(f"path point {p} is not an overlay vertex")
        if i > 0:
            # fill the edge chain between consecutive breakpoints
            a = out[-1]
            chain = _edge_chain(Kr, a, v.id, cut_edges)
            out.extend(chain[1:])
        else:
            out.append(v.id)
    return out


def _edge_chain(Kr, a, b, cut_edges):
    """Shortest chain of cut edges from a to b (BFS)."""
    if a == b:
        return [a]
    adj = defaultdict(list)
    for u, v in cut_edges:
        adj[u].append(v)
        adj[v].append(u)
    prev = {a: None}
    frontier = [a]
    while frontier:
        nxt = []
        for u in frontier:
            for w in sorted(adj[u]):
                if w not in prev:
                    prev[w] = u
                    nxt.append(w)
        if b in prev:
            break
        frontier = nxt
    if b not in prev:
        raise HullError("anchor is not a chain of skeleton edges")
    chain = [b]
    while chain[-1] != a:
        chain.append(prev[chain[-1]])
    return chain[::-1]


# --------------------------------------------------------------- result
@dataclass
class HullResult:
    """Closed hull boundary (counterclockwise, hull on the left) and its perimeter.

    ``kind`` is "point", "segment" or "polygon". For the degenerate kinds the
    boundary is the point or the open geodesic segment, and ``perimeter`` is the
    length of the closed walk around it (twice the segment length).
    """

    K: PlanarComplex
    S: list
    boundary: GeodesicPath
    perimeter: float
    kind: str
    skeleton: object = None
    cut: object = None
    _inside: object = None

    def to_json(self):
        return {
            "kind": self.kind,
            "boundary": self.boundary.to_json(),
            "perimeter": self.perimeter,
            "contains_all": all(self.contains(s) for s in self.S),
        }

    # membership ---------------------------------------------------------
    def _classify(self):
        if self._inside is None:
            self._inside = _Inside(self.K, self.boundary, self.kind)
        return self._inside

    def contains(self, y, tol=None):
        return self._classify().contains(y, tol)

    def sample_inside(self, rng, m):
        return self._classify().sample(rng, m)


class _Inside:
    def __init__(self, K, path, kind):
        self.K = K
        self.kind = kind
        self.path = path
        if kind != "polygon":
            return
        pts = list(path.breakpoints)
        R, edges = overlay(K, [pts])
        Kr = R.child
        self.R = R
        vs = []
        for p in pts:
            v = R.to_child(p)
            if not isinstance(v, Vertex):
                raise HullError("hull breakpoint is not an overlay vertex")
            if not vs or vs[-1] != v.id:
                if vs:
                    vs.extend(_edge_chain(Kr, vs[-1], v.id, edges)[1:])
                else:
                    vs.append(v.id)
        left = set()
        for a, b in zip(vs[:-1], vs[1:]):
            fi = Kr.halfedge.get((a, b))
            if fi is not None:
                left.add(fi)
        C = cut_along(R, edges)
        comps = {C.component_of[fi] for fi in left}
        self.inside_faces = {fi for fi in range(Kr.n_faces) if C.component_of[fi] in comps}
        self.on_vertices = set(vs)
        self.edges = edges

    def contains(self, y, tol=None):
        K = self.K
        tol = K.eps * 100 if tol is None else tol
        if self.kind != "polygon":
            return _near_path(K, self.path, y, tol)
        yr = self.R.to_child(K.normalize(y))
        Kr = self.R.child
        fs = Kr.faces_of_point(yr)
        if any(fi in self.inside_faces for fi in fs):
            return True
        return _near_path(K, self.path, y, tol)

    def sample(self, rng, m):
        if self.kind != "polygon":
            bp = self.path.breakpoints
            out = []
            for _ in range(m):
                i = int(rng.integers(len(self.path.faces))) if self.path.faces else 0
                if not self.path.faces:
                    out.append(bp[0])
                    continue
                fi = self.path.faces[i]
                t = rng.random()
                X = (1 - t) * self.K.point_xy(bp[i], fi) + t * self.K.point_xy(bp[i + 1], fi)
                out.append(self.K.canonical(fi, pl.barycentric(X, self.K.charts[fi])))
            return out
        Kr = self.R.child
        faces = sorted(self.inside_faces)
        area = np.array([abs(pl.polygon_area(list(Kr.charts[fi]))) for fi in faces])
        prob = area / area.sum()
        out = []
        for _ in range(m):
            fi = faces[int(rng.choice(len(faces), p=prob))]
            r = rng.random(2)
            if r.sum() > 1:
                r = 1 - r
            b = np.array([1 - r.sum(), r[0], r[1]])
            out.append(self.R.to_parent(Kr.canonical(fi, b)))
        return out


def _near_path(K, path, y, tol):
    bp = path.breakpoints
    if len(bp) == 1:
        fs = K.common_faces(bp[0], y)
        return bool(fs) and K.distance_in_face(fs[0], bp[0], y) <= tol
    for i, fi in enumerate(path.faces):
        if fi not in K.faces_of_point(y):
            continue
        A, B = K.point_xy(bp[i], fi), K.point_xy(bp[i + 1], fi)
        if pl.seg_distance(K.point_xy(y, fi), A, B)[0] <= tol:
            return True
    return False


def _is_there_and_back(pts):
    m = len(pts) - 1  # closed: pts[0] == pts[-1]
    if m < 2 or m % 2:
        return False
    return all(pts[i] == pts[m - i] for i in range(m + 1))


def hull_side_angles(K, path):
    """Per breakpoint of a closed path: (point, hull-side angle, link length or None on the boundary)."""
    bp = list(path.breakpoints)
    if len(bp) < 3 or bp[0] != bp[-1]:
        return []
    out = []
    m = len(bp) - 1
    for i in range(m):
        a, b, c = bp[i - 1] if i > 0 else bp[m - 1], bp[i], bp[i + 1]
        tri = make_path(K, [a, b, c])
        if len(tri.breakpoints) < 3:
            continue
        _, left = breakpoint_angles(K, tri, 1)
        if isinstance(b, Vertex):
            theta = None if K.is_boundary_vertex[b.id] else K.vertex_angle_sum(b.id)
        elif isinstance(b, EdgePoint) and K.is_boundary_edge(b.u, b.v):
            theta = None
        else:
            theta = 2 * math.pi
        out.append((b, left, theta))
    return out


def convex_hull(K, S, spm=None):
    """Geodesic convex hull of the finite point set S."""
    S = [K.normalize(s) for s in S]
    if not S:
        raise HullError("empty point set")
    uniq = sorted(set(S), key=point_key)
    if len(uniq) == 1:
        path = make_path(K, uniq)
        return HullResult(K, S, path, 0.0, "point")
    if spm is None:
        x = min(v for v in range(K.n_vertices) if K.is_boundary_vertex[v])
        spm = build_spm(K, Vertex(x))
    sk = build_skeleton(K, spm, uniq)
    path, C = wrap(K, sk)
    pts = list(path.breakpoints)
    if _is_there_and_back(pts):
        m = (len(pts) - 1) // 2
        seg = make_path(K, pts[: m + 1])
        return HullResult(K, S, seg, 2 * seg.length, "segment", sk, C)
    return HullResult(K, S, path, path.length, "polygon", sk, C)


# ----------------------------------------------------------------- checks
@dataclass
class HullReport:
    violations: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def fail(self, check, msg):
        self.violations.append((check, msg))


def verify_hull(res, n_sources=20, n_targets=10, seed=0, tol=1e-9):
    """Containment, local convexity, sampled geodesic closure and cut-piece validity."""
    K = res.K
    rep = HullReport()
    bad = [s for s in res.S if not res.contains(s)]
    rep.checks["containment"] = not bad
    for s in bad:
        rep.fail("containment", f"{s} is outside the hull")
    if res.kind == "polygon":
        n = 0
        for b, left, theta in hull_side_angles(K, res.boundary):
            if theta is None:
                continue
            if left > theta - math.pi + tol:
                rep.fail("convexity", f"hull-side angle {left:.12g} at {b} exceeds {theta - math.pi:.12g}")
            n += 1
        rep.checks["convexity"] = n
    rng = np.random.default_rng(seed)
    srcs = res.sample_inside(rng, n_sources)
    tgts = res.sample_inside(rng, n_targets)
    n = 0
    for a in srcs:
        m = build_spm(K, a)
        for b in tgts:
            path, _ = shortest_path(m, b)
            bp = path.breakpoints
            probes = list(bp)
            for i, fi in enumerate(path.faces):
                X = 0.5 * (K.point_xy(bp[i], fi) + K.point_xy(bp[i + 1], fi))
                probes.append(K.canonical(fi, pl.barycentric(X, K.charts[fi])))
            for y in probes:
                if not res.contains(y, tol=K.eps * 1e3):
                    rep.fail("closure", f"path {a} -> {b} leaves the hull at {y}")
                    break
            n += 1
    rep.checks["closure"] = n
    if res.cut is not None:
        for comp in sorted({c for c in res.cut.pieces}):
            sub = res.cut.pieces[comp][0]
            r = validate(sub)
            if not r.passed:
                rep.fail("cut", f"cut piece {comp} fails validation: {r.codes()}")
        rep.checks["cut_pieces"] = len(res.cut.pieces)
    return rep
