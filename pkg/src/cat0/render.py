"""SVG figures: Tutte (combinatorial) views of a whole complex and isometric strips."""

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import lil_matrix
from scipy.sparse.linalg import spsolve

from . import _plane as pl
from .complex import ComplexError, boundary
from .points import point_from_json

SVG_NS = "http://www.w3.org/2000/svg"
PALETTE = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"]


@dataclass
class RenderSpec:
    mode: str = "tutte"
    spm: dict = None
    hull: dict = None
    path: dict = None
    points: list = field(default_factory=list)
    cone: int = 0
    size: int = 600


def tutte_layout(K):
    """Boundary on a convex polygon (spaced by arc length), interior by uniform barycentric averaging."""
    cyc = boundary(K)
    lens = [K.length(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]
    total = sum(lens)
    pos = np.zeros((K.n_vertices, 2))
    s = 0.0
    for v, L in zip(cyc, lens):
        a = 2 * math.pi * s / total
        pos[v] = (math.cos(a), math.sin(a))
        s += L
    fixed = set(cyc)
    inner = [v for v in range(K.n_vertices) if v not in fixed]
    if inner:
        idx = {v: i for i, v in enumerate(inner)}
        nb = {v: set() for v in inner}
        for u, v in K.edges:
            if u in nb:
                nb[u].add(v)
            if v in nb:
                nb[v].add(u)
        A = lil_matrix((len(inner), len(inner)))
        b = np.zeros((len(inner), 2))
        for v in inner:
            i = idx[v]
            A[i, i] = len(nb[v])
            for w in nb[v]:
                if w in idx:
                    A[i, idx[w]] -= 1
                else:
                    b[i] += pos[w]
        A = A.tocsr()
        pos[inner, 0] = spsolve(A, b[:, 0])
        pos[inner, 1] = spsolve(A, b[:, 1])
    return pos


def _point_xy(K, pos, p):
    fi = K.faces_of_point(p)[0]
    return K.point_bary(p, fi) @ pos[list(K.faces[fi])]


class _Canvas:
    def __init__(self, title, size, pts):
        pts = np.asarray(pts, float)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = max(float((hi - lo).max()), 1e-12)
        self.size = size
        self.pad = 0.05 * size
        self.k = (size - 2 * self.pad) / span
        self.lo = lo
        self.hi = hi
        ET.register_namespace("", SVG_NS)
        self.root = ET.Element(
            f"{{{SVG_NS}}}svg",
            {"version": "1.1", "width": str(size), "height": str(size), "viewBox": f"0 0 {size} {size}"},
        )
        ET.SubElement(self.root, f"{{{SVG_NS}}}title").text = title
        self.groups = {}

    def xy(self, p):
        x = self.pad + (p[0] - self.lo[0]) * self.k
        y = self.size - self.pad - (p[1] - self.lo[1]) * self.k
        return f"{x:.4f}", f"{y:.4f}"

    def group(self, name):
        g = self.groups.get(name)
        if g is None:
            g = self.groups[name] = ET.SubElement(self.root, f"{{{SVG_NS}}}g", {"id": name})
        return g

    def polygon(self, group, pts, **attrs):
        s = " ".join(",".join(self.xy(p)) for p in pts)
        ET.SubElement(self.group(group), f"{{{SVG_NS}}}polygon", {"points": s, **attrs})

    def line(self, group, a, b, **attrs):
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        ET.SubElement(self.group(group), f"{{{SVG_NS}}}line", {"x1": x1, "y1": y1, "x2": x2, "y2": y2, **attrs})

    def path(self, group, pts, **attrs):
        d = " ".join(("M" if i == 0 else "L") + " ".join(self.xy(p)) for i, p in enumerate(pts))
        ET.SubElement(self.group(group), f"{{{SVG_NS}}}path", {"d": d, "fill": "none", **attrs})

    def dot(self, group, p, r=3, **attrs):
        x, y = self.xy(p)
        ET.SubElement(self.group(group), f"{{{SVG_NS}}}circle", {"cx": x, "cy": y, "r": str(r), **attrs})

    def tostring(self):
        ET.indent(self.root)
        return ET.tostring(self.root, encoding="unicode", xml_declaration=True) + "\n"


def _path_pts(K, pos, pj):
    return [_point_xy(K, pos, point_from_json(b)) for b in pj["breakpoints"]]


def render_tutte(K, spec):
    pos = tutte_layout(K)
    cv = _Canvas("combinatorial view", spec.size, pos)
    if spec.spm is not None:
        for ci, c in enumerate(spec.spm["cones"]):
            color = PALETTE[ci % len(PALETTE)]
            for fi in c["faces"]:
                cv.polygon("cone-faces", pos[list(K.faces[fi])], fill=color, **{"fill-opacity": "0.15", "stroke": "none"})
    for u, v in K.edges:
        cv.line("edges", pos[u], pos[v], stroke="#555", **{"stroke-width": "0.8"})
    if spec.spm is not None:
        for ci, c in enumerate(spec.spm["cones"]):
            color = PALETTE[ci % len(PALETTE)]
            for side in ("sideP", "sideQ"):
                cv.path("cone-sides", _path_pts(K, pos, c[side]), stroke=color, **{"stroke-width": "1.6", "class": "cone-side", "data-cone": str(ci)})
        cv.dot("source", _point_xy(K, pos, point_from_json(spec.spm["source"])), r=5, fill="black")
    _overlays(K, cv, spec, lambda p: _point_xy(K, pos, p))
    return cv.tostring()


def _overlays(K, cv, spec, to_xy):
    if spec.hull is not None:
        pts = [to_xy(point_from_json(b)) for b in spec.hull["boundary"]["breakpoints"]]
        cv.path("hull", pts, stroke="#c00", **{"stroke-width": "2.2", "class": "hull"})
    if spec.path is not None:
        pts = [to_xy(point_from_json(b)) for b in spec.path["breakpoints"]]
        cv.path("query", pts, stroke="#060", **{"stroke-width": "2.2", "class": "query-path"})
    for p in spec.points:
        cv.dot("points", to_xy(point_from_json(p)), fill="#222")


def render_strip(spm, spec):
    """Isometric unfolding of one cone of a built map."""
    if not 0 <= spec.cone < len(spm.cones):
        raise ComplexError(f"no cone {spec.cone}")
    c = spm.cones[spec.cone]
    pts = np.vstack([np.asarray(ch) for ch in c.placed])
    cv = _Canvas(f"isometric strip of cone {spec.cone}", spec.size, pts)
    for ch in c.placed:
        cv.polygon("faces", ch, fill="none", stroke="#777", **{"stroke-width": "0.8"})
    for fi, poly, ch in zip(c.faces, c.polygons, c.placed):
        if len(poly) >= 3:
            placed = [pl.barycentric(np.asarray(p), spm.Kr.charts[fi]) @ ch for p in poly]
            cv.polygon("cone", placed, fill=PALETTE[spec.cone % len(PALETTE)], **{"fill-opacity": "0.25", "stroke": "none"})
    cv.path("cone-sides", [c.O, c.far_p], stroke="#000", **{"stroke-width": "1.6", "class": "cone-side"})
    cv.path("cone-sides", [c.O, c.far_q], stroke="#000", **{"stroke-width": "1.6", "class": "cone-side"})
    cv.dot("apex", c.O, r=4, fill="black")
    return cv.tostring()
