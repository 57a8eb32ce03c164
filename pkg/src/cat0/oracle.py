"""Independent ground truth: an epsilon-net graph metric, a visibility-graph
oracle for flat instances, and deterministic instance generators."""

import math

import numpy as np
import shapely
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .complex import ComplexError, PlanarComplex, boundary, validate

# ------------------------------------------------------------ epsilon net


class EpsilonNet:
    """Edge-sampled graph approximation of the intrinsic metric.

    Every edge of length L carries k - 1 evenly spaced interior samples with
    k = 2**ceil(log2(L / eps)), so halving eps refines the net by nesting.
    Samples on the boundary of a common face are joined by their chart distance.
    """

    def __init__(self, K, eps):
        if not eps > 0:
            raise ValueError("epsilon must be positive")
        self.K = K
        self.eps = float(eps)
        n = K.n_vertices
        self.edge_samples = {}
        nxt = n
        for e in K.edges:
            L = K.edge_lengths[e]
            k = 1 if L <= eps else 2 ** int(math.ceil(math.log2(L / eps)))
            ids = list(range(nxt, nxt + k - 1))
            nxt += k - 1
            self.edge_samples[e] = (k, ids)
        self.n_samples = nxt
        # per face: node ids and chart positions of all samples on its boundary
        self.face_nodes = []
        rows, cols, w = [], [], []
        for fi, f in enumerate(K.faces):
            ch = K.charts[fi]
            ids = list(f)
            pts = [ch[0], ch[1], ch[2]]
            for j in range(3):
                a, b = f[j], f[(j + 1) % 3]
                e = (a, b) if a < b else (b, a)
                k, sids = self.edge_samples[e]
                pa, pb = (ch[j], ch[(j + 1) % 3]) if a < b else (ch[(j + 1) % 3], ch[j])
                for i, sid in enumerate(sids):
                    t = (i + 1) / k
                    ids.append(sid)
                    pts.append(pa + t * (pb - pa))
            ids = np.array(ids)
            P = np.array(pts)
            self.face_nodes.append((ids, P))
            D = np.hypot(P[:, None, 0] - P[None, :, 0], P[:, None, 1] - P[None, :, 1])
            iu, ju = np.triu_indices(len(ids), 1)
            rows.append(ids[iu])
            cols.append(ids[ju])
            w.append(D[iu, ju])
        self._rows = np.concatenate(rows)
        self._cols = np.concatenate(cols)
        self._w = np.concatenate(w)

    def distances(self, sources, targets):
        """Matrix of net distances between lists of points (sources x targets)."""
        K = self.K
        extra = list(sources) + list(targets)
        rows, cols, w = [self._rows], [self._cols], [self._w]
        ids = []
        by_face = {}
        for i, p in enumerate(extra):
            nid = self.n_samples + i
            ids.append(nid)
            for fi in K.faces_of_point(p):
                by_face.setdefault(fi, []).append((nid, K.point_xy(p, fi)))
        for fi, lst in by_face.items():
            fids, P = self.face_nodes[fi]
            for nid, xy in lst:
                d = np.hypot(P[:, 0] - xy[0], P[:, 1] - xy[1])
                rows.append(np.full(len(fids), nid))
                cols.append(fids)
                w.append(d)
            for a in range(len(lst)):
                for b in range(a + 1, len(lst)):
                    rows.append(np.array([lst[a][0]]))
                    cols.append(np.array([lst[b][0]]))
                    w.append(np.array([float(np.hypot(*(lst[a][1] - lst[b][1])))]))
        N = self.n_samples + len(extra)
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        ww = np.concatenate(w)
        # zero-length joins (coincident points) must survive the sparse format
        ww = np.maximum(ww, 1e-300)
        G = coo_matrix((ww, (r, c)), shape=(N, N)).tocsr()
        src = np.array(ids[: len(sources)])
        D = dijkstra(G, directed=False, indices=src)
        out = D[:, ids[len(sources):]]
        for i, a in enumerate(sources):
            for j, b in enumerate(targets):
                if a == b:
                    out[i, j] = 0.0
        out[out < 1e-200] = 0.0
        return out


def oracle_distance(K, a, b, eps):
    """Upper bound on d(a, b) from the epsilon-net graph."""
    if not eps > 0:
        raise ValueError("epsilon must be positive")
    return float(EpsilonNet(K, eps).distances([a], [b])[0, 0])


# -------------------------------------------------------- visibility oracle


class VisibilityOracle:
    """Exact geodesic distance inside a flat simple polygon."""

    def __init__(self, K):
        if K.flat_coordinates is None:
            raise ComplexError("visibility oracle needs a flat instance")
        self.K = K
        X = K.flat_coordinates
        self.cycle = boundary(K)
        self.poly = shapely.Polygon(X[self.cycle])
        if not self.poly.is_valid:
            raise ComplexError("boundary is not a simple polygon")
        self.region = self.poly.buffer(1e-9 * max(1.0, K.scale))
        shapely.prepare(self.region)
        self.V = X[self.cycle]
        m = len(self.cycle)
        iu, ju = np.triu_indices(m, 1)
        lines = shapely.linestrings(np.stack([self.V[iu], self.V[ju]], axis=1))
        ok = shapely.covers(self.region, lines)
        d = np.hypot(*(self.V[iu] - self.V[ju]).T)
        self._base = (iu[ok], ju[ok], d[ok])

    def xy(self, p):
        fi = self.K.faces_of_point(p)[0]
        return self.K.point_bary(p, fi) @ self.K.flat_coordinates[list(self.K.faces[fi])]

    def distances(self, sources, targets):
        m = len(self.cycle)
        pts = [self.xy(p) for p in list(sources) + list(targets)]
        rows, cols, w = [self._base[0]], [self._base[1]], [self._base[2]]
        for i, a in enumerate(pts):
            nid = m + i
            segs = shapely.linestrings(np.stack([np.broadcast_to(a, self.V.shape), self.V], axis=1))
            ok = shapely.covers(self.region, segs)
            rows.append(np.full(int(ok.sum()), nid))
            cols.append(np.nonzero(ok)[0])
            w.append(np.hypot(*(self.V[ok] - a).T))
            for j in range(i + 1, len(pts)):
                b = pts[j]
                if np.hypot(*(a - b)) == 0 or self.region.covers(shapely.LineString([a, b])):
                    rows.append(np.array([nid]))
                    cols.append(np.array([m + j]))
                    w.append(np.array([max(float(np.hypot(*(a - b))), 1e-300)]))
        N = m + len(pts)
        G = coo_matrix((np.concatenate(w), (np.concatenate(rows), np.concatenate(cols))), shape=(N, N)).tocsr()
        src = m + np.arange(len(sources))
        D = dijkstra(G, directed=False, indices=src)
        out = D[:, m + len(sources):]
        out[out < 1e-200] = 0.0
        return out


def visibility_distance(K, a, b):
    return float(VisibilityOracle(K).distances([a], [b])[0, 0])


# -------------------------------------------------------------- generators
KINDS = ("flat-convex", "flat-polygon", "cone-fan", "spindle", "curved")


def _ccw_faces(X, tris):
    out = []
    for a, b, c in tris:
        a, b, c = int(a), int(b), int(c)
        cr = (X[b, 0] - X[a, 0]) * (X[c, 1] - X[a, 1]) - (X[b, 1] - X[a, 1]) * (X[c, 0] - X[a, 0])
        out.append((a, b, c) if cr > 0 else (a, c, b))
    return out


def _triangulate_polygon(boundary_xy, interior_xy):
    import triangle

    V = np.vstack([boundary_xy, interior_xy]) if len(interior_xy) else np.asarray(boundary_xy, float)
    m = len(boundary_xy)
    seg = [[i, (i + 1) % m] for i in range(m)]
    t = triangle.triangulate({"vertices": V, "segments": seg}, "p")
    if len(t["vertices"]) != len(V):
        raise ComplexError("triangulation added Steiner points")
    X = np.asarray(t["vertices"], float)
    return X, _ccw_faces(X, t["triangles"])


def _min_angle_ok(X, faces, min_deg=5.0):
    for f in faces:
        P = X[list(f)]
        for k in range(3):
            u = P[(k + 1) % 3] - P[k]
            v = P[(k + 2) % 3] - P[k]
            c = u @ v / (np.linalg.norm(u) * np.linalg.norm(v))
            if math.degrees(math.acos(max(-1, min(1, c)))) < min_deg:
                return False
    return True


def _poisson(rng, n, sample, min_dist, tries=20000):
    pts = []
    for _ in range(tries):
        if len(pts) >= n:
            break
        p = sample()
        if p is None:
            continue
        if all(math.hypot(p[0] - q[0], p[1] - q[1]) >= min_dist for q in pts):
            pts.append(p)
    return np.array(pts).reshape(-1, 2)


def _jittered_angles(rng, m):
    step = 2 * math.pi / m
    return (np.arange(m) + rng.uniform(-0.3, 0.3, m)) * step + rng.uniform(0, step)


def _flat_convex(n, rng):
    m = max(3, n // 3)
    for _ in range(200):
        ang = _jittered_angles(rng, m)
        B = np.stack([np.cos(ang), np.sin(ang)], axis=1)

        inner = shapely.Polygon(B).buffer(-0.08)

        def samp():
            r = math.sqrt(rng.uniform())
            t = rng.uniform(0, 2 * math.pi)
            p = (r * math.cos(t), r * math.sin(t))
            return p if inner.contains(shapely.Point(p)) else None

        I = _poisson(rng, n - m, samp, 0.9 / math.sqrt(n))
        if len(I) < n - m:
            continue
        X, faces = _triangulate_polygon(B, I)
        if _min_angle_ok(X, faces, 2.0):
            return PlanarComplex(len(X), faces, flat_coordinates=X)
    raise ComplexError("could not generate flat-convex instance")


def _flat_polygon(n, rng):
    m = max(3, n // 2)
    for _ in range(500):
        ang = _jittered_angles(rng, m)
        rad = rng.uniform(0.35, 1.0, m)
        B = np.stack([rad * np.cos(ang), rad * np.sin(ang)], axis=1)
        poly = shapely.Polygon(B)
        if not poly.is_valid:
            continue
        inner = poly.buffer(-0.08)
        if inner.is_empty:
            continue
        minx, miny, maxx, maxy = inner.bounds

        def samp():
            p = (rng.uniform(minx, maxx), rng.uniform(miny, maxy))
            return p if inner.contains(shapely.Point(p)) else None

        I = _poisson(rng, n - m, samp, 0.6 / math.sqrt(n))
        if len(I) < n - m:
            continue
        try:
            X, faces = _triangulate_polygon(B, I)
        except ComplexError:
            continue
        if not _min_angle_ok(X, faces, 2.0):
            continue
        if sum(1 for v in range(m) if _reflex(B, v)) == 0:
            continue
        return PlanarComplex(len(X), faces, flat_coordinates=X)
    raise ComplexError("could not generate flat-polygon instance")


def _reflex(B, v):
    m = len(B)
    a, b, c = B[v - 1], B[v], B[(v + 1) % m]
    return (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]) < 0


def cone_fan(k):
    """k unit equilateral triangles around vertex 0; rim vertices 1..k."""
    if k < 7:
        raise ValueError("cone-fan needs k >= 7 (theta > 2*pi)")
    faces = [(1 + i, 0, 1 + (i + 1) % k) for i in range(k)]
    lengths = {}
    for f in faces:
        for j in range(3):
            u, v = f[j], f[(j + 1) % 3]
            lengths[(min(u, v), max(u, v))] = 1.0
    return PlanarComplex(k + 1, faces, lengths)


def _spindle(n, rng):
    per_ray = max(1, n // 6)
    m_arc = max(3, n // 2)
    R = 1.0
    arc = np.radians(np.linspace(30.0, 150.0, m_arc))
    B = np.vstack([[0.0, 0.0], np.stack([R * np.cos(arc), R * np.sin(arc)], axis=1)])
    I = []
    for deg in (60.0, 90.0, 120.0):
        t = math.radians(deg)
        for j in range(1, per_ray + 1):
            r = 0.92 * R * j / (per_ray + 0.5)
            I.append((r * math.cos(t), r * math.sin(t)))
    X, faces = _triangulate_polygon(B, np.array(I))
    return PlanarComplex(len(X), faces, flat_coordinates=X)


def _grow_ring(n):
    """Combinatorial {3,7}-style disk: close boundary vertices until n vertices exist."""
    faces = list(cone_fan(7).faces)
    nv = 8
    while nv < n:
        ring = boundary(PlanarComplex(nv, faces, {e: 1.0 for e in _edges_of(faces)}))
        for v in ring:
            if nv >= n:
                break
            Kc = PlanarComplex(nv, faces, {e: 1.0 for e in _edges_of(faces)})
            cyc = boundary(Kc)
            j = cyc.index(v)
            u, w = cyc[j - 1], cyc[(j + 1) % len(cyc)]
            if (u, v) not in Kc.halfedge:
                u, w = w, u
            k = max(2, 7 - sum(1 for f in faces if v in f))
            chain = [u] + list(range(nv, nv + k - 1)) + [w]
            nv += k - 1
            faces.extend((v, a, b) for a, b in zip(chain[:-1], chain[1:]))
    return nv, faces


def _curved(n, rng):
    nv, faces = _grow_ring(n)
    base = _edges_of(faces)
    for _ in range(200):
        lengths = {e: 1.0 + rng.uniform(-0.1, 0.1) for e in base}
        K = PlanarComplex(nv, faces, lengths)
        if validate(K).passed and any(
            K.angle_sums[v] > 2 * math.pi + 1e-6 for v in range(nv) if not K.is_boundary_vertex[v]
        ):
            return K
    raise ComplexError("could not generate curved instance")


def _edges_of(faces):
    es = set()
    for f in faces:
        for j in range(3):
            u, v = f[j], f[(j + 1) % 3]
            es.add((min(u, v), max(u, v)))
    return sorted(es)


def generate_instance(kind, n, seed=0):
    """Deterministic valid instance of the given kind with about n vertices."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    n = int(n)
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = np.random.default_rng(seed)
    if kind == "flat-convex":
        K = _flat_convex(n, rng)
    elif kind == "flat-polygon":
        if n < 6:
            raise ValueError("flat-polygon needs n >= 6")
        K = _flat_polygon(n, rng)
    elif kind == "cone-fan":
        K = cone_fan(n)
    elif kind == "spindle":
        if n < 12:
            raise ValueError("spindle needs n >= 12")
        K = _spindle(n, rng)
    else:
        if n < 8:
            raise ValueError("curved needs n >= 8")
        K = _curved(n, rng)
    rep = validate(K)
    if not rep.passed:
        raise ComplexError(f"generated {kind} instance failed validation: {rep.codes()}")
    return K
