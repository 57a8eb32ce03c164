"""Single-source queries over a prebuilt shortest path map."""

import math
from dataclasses import dataclass

import numpy as np

from . import _plane as pl
from ._tol import EPS_ANGLE
from .complex import ComplexError
from .geodesy import Unfolding, make_path
from .points import Vertex
from .spm import _in_poly


class QueryError(ComplexError):
    pass


@dataclass(frozen=True)
class ConeUnfolding:
    cone: int
    unfolding: Unfolding
    fz: np.ndarray
    fp: np.ndarray
    fq: np.ndarray

    @property
    def angles(self):
        """Angles of the triangle (f(z), f(p), f(q)) at z, p and q."""
        z, p, q = self.fz, self.fp, self.fq
        return (pl.unsigned_angle(p - z, q - z), pl.unsigned_angle(z - p, q - p), pl.unsigned_angle(z - q, p - q))

    @property
    def is_acute(self):
        a, b, c = self.angles
        return a < math.pi and b <= math.pi / 2 + EPS_ANGLE and c <= math.pi / 2 + EPS_ANGLE


def _child_point(spm, y):
    spm.K.check_point(y)
    return spm.refinement.to_child(spm.K.normalize(y))


def _candidates(spm, yr):
    """(cone index, strip index) of every cone whose crossing polygon holds yr."""
    Kr = spm.Kr
    tol = Kr.eps
    best = {}
    for fi in Kr.faces_of_point(yr):
        xy = Kr.point_xy(yr, fi)
        for ci in spm.crossings.get(fi, []):
            c = spm.cones[ci]
            i = c.face_index[fi]
            m = _in_poly(c.polygons[i], xy, tol)
            if m >= -tol and (ci not in best or m > best[ci][1]):
                best[ci] = (i, m)
    return sorted((ci, i) for ci, (i, _) in best.items())


def locate_cone(spm, y):
    """Index of the cone containing y (lowest index when y lies on a shared side)."""
    cands = _candidates(spm, _child_point(spm, y))
    if not cands:
        raise QueryError(f"point {y} lies in no cone")
    return cands[0][0]


def unfold_cone(spm, cone):
    """Planar development of a cone; cached on the map."""
    ci = cone if isinstance(cone, int) else cone.index
    got = spm._unfoldings.get(ci)
    if got is None:
        c = spm.cones[ci]
        got = ConeUnfolding(ci, Unfolding(spm.Kr, c.faces, c.placed), c.O.copy(), c.far_p.copy(), c.far_q.copy())
        spm._unfoldings[ci] = got
    return got


def _path_in_cone(spm, ci, i, yr):
    c = spm.cones[ci]
    cu = unfold_cone(spm, ci)
    fi = c.faces[i]
    fy = spm.Kr.point_bary(yr, fi) @ c.placed[i]
    d = c.apex_distance + float(np.hypot(*(fy - c.O)))
    pts = spm.vertex_breakpoints(c.apex) + cu.unfolding.pull_back(c.O, fy, 0, i) + [yr]
    return pts, d


def shortest_path(spm, y, via=None):
    """(GeodesicPath in K, distance) from the map's source to y.

    ``via`` forces a particular cone among those containing y.
    """
    yr = _child_point(spm, y)
    Kr = spm.Kr
    if isinstance(yr, Vertex) and via is None:
        pts = spm.vertex_breakpoints(yr.id)
        d = spm.dist[yr.id]
    else:
        cands = _candidates(spm, yr)
        if not cands:
            raise QueryError(f"point {y} lies in no cone")
        if via is not None:
            cands = [c for c in cands if c[0] == via]
            if not cands:
                raise QueryError(f"point {y} is not in cone {via}")
        ci, i = cands[0]
        pts, d = _path_in_cone(spm, ci, i, yr)
    path = make_path(Kr, pts)
    out = make_path(spm.K, spm.to_parent_points(path.breakpoints))
    out = _pin_ends(spm, out, y)
    return out, float(d)


def _pin_ends(spm, path, y):
    """Make the endpoints exactly the source and the query point."""
    bp = list(path.breakpoints)
    bp[0] = spm.source
    if len(bp) == 1:
        bp.append(y)
    else:
        bp[-1] = spm.K.normalize(y)
    return make_path(spm.K, bp)


def distance(spm, y):
    return shortest_path(spm, y)[1]


def containing_cones(spm, y):
    return [ci for ci, _ in _candidates(spm, _child_point(spm, y))]
