"""Geodesic computations in CAT(0) planar complexes."""

from .complex import (
    ComplexError,
    FaceChart,
    PlanarComplex,
    ValidationReport,
    boundary,
    corner_angle,
    load_complex,
    parse_complex,
    serialize_complex,
    transfer,
    validate,
    vertex_angle_sum,
)
from .geodesy import GeodesicPath, Unfolding, extend_ray, is_locally_geodesic, path_length, unfold_strip
from .hull import HullResult, convex_hull, verify_hull
from .points import EdgePoint, FacePoint, Vertex, point_from_json
from .query import locate_cone, shortest_path, unfold_cone
from .spm import ShortestPathMap, build_spm, verify_spm

__all__ = [
    "ComplexError",
    "EdgePoint",
    "FaceChart",
    "FacePoint",
    "GeodesicPath",
    "HullResult",
    "PlanarComplex",
    "ShortestPathMap",
    "Unfolding",
    "ValidationReport",
    "Vertex",
    "boundary",
    "build_spm",
    "convex_hull",
    "corner_angle",
    "extend_ray",
    "is_locally_geodesic",
    "load_complex",
    "locate_cone",
    "parse_complex",
    "path_length",
    "point_from_json",
    "serialize_complex",
    "shortest_path",
    "transfer",
    "unfold_cone",
    "unfold_strip",
    "validate",
    "verify_hull",
    "verify_spm",
    "vertex_angle_sum",
]
