"""Intrinsic point locations on a complex: a vertex, a point on an edge, or a point in a face."""

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Vertex:
    id: int

    def to_json(self):
        return {"vertex": self.id}


@dataclass(frozen=True, order=True)
class EdgePoint:
    """Point on edge (u, v), u < v, at fraction ``t`` of the way from u to v."""

    u: int
    v: int
    t: float

    def __post_init__(self):
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)
            object.__setattr__(self, "t", 1.0 - self.t)

    @property
    def edge(self):
        return (self.u, self.v)

    def to_json(self):
        return {"edge": [self.u, self.v], "t": self.t}


@dataclass(frozen=True, order=True)
class FacePoint:
    face: int
    bary: tuple

    def to_json(self):
        return {"face": self.face, "bary": list(self.bary)}


PointOnComplex = Vertex | EdgePoint | FacePoint


def point_from_json(obj):
    if not isinstance(obj, dict):
        raise ValueError(f"point must be a JSON object, got {obj!r}")
    if "vertex" in obj:
        return Vertex(int(obj["vertex"]))
    if "edge" in obj:
        u, v = obj["edge"]
        return EdgePoint(int(u), int(v), float(obj["t"]))
    if "face" in obj:
        bary = tuple(float(b) for b in obj["bary"])
        if len(bary) != 3:
            raise ValueError("face point needs three barycentric coordinates")
        return FacePoint(int(obj["face"]), bary)
    raise ValueError(f"unrecognised point {obj!r}")


def point_key(p):
    """Total order used for deterministic tie-breaking."""
    if isinstance(p, Vertex):
        return (0, p.id, 0, 0.0, 0.0, 0.0)
    if isinstance(p, EdgePoint):
        return (1, p.u, p.v, p.t, 0.0, 0.0)
    return (2, p.face, 0, *p.bary)
