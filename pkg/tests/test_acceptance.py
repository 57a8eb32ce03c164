"""Acceptance criteria 1-8. Each test records one pass/fail line (printed in the summary)."""

import json
import math
import os
import subprocess
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from acceptance_log import record
from cat0 import PlanarComplex, Vertex, build_spm, convex_hull, serialize_complex, validate, verify_hull, verify_spm
from cat0 import _plane as pl
from cat0.geodesy import breakpoint_angles
from cat0.oracle import EpsilonNet, VisibilityOracle, generate_instance
from cat0.points import EdgePoint, FacePoint
from cat0.query import shortest_path
from instances import SQRT3, fan, instance_a, instance_b, instance_c, instance_d

N_SRC, N_TGT = 2, 50  # 100 random pairs per instance


def _random_points(K, rng, m):
    out = []
    for _ in range(m):
        b = rng.random(3) + 1e-3
        out.append(FacePoint(int(rng.integers(K.n_faces)), tuple(b / b.sum())))
    return out


def _flat_xy(K, p):
    fi = K.faces_of_point(p)[0]
    return K.point_bary(p, fi) @ K.flat_coordinates[list(K.faces[fi])]


@lru_cache(maxsize=None)
def _case(kind, n, seed):
    K = generate_instance(kind, n, seed)
    rng = np.random.default_rng(1000 + seed)
    src = _random_points(K, rng, N_SRC)
    tgt = _random_points(K, rng, N_TGT)
    maps = [build_spm(K, s) for s in src]
    return K, src, tgt, maps


def _flat_convex_cases():
    return [("flat-convex", 20 + (i * 3) % 31, i) for i in range(20)]


def _flat_polygon_cases():
    return [("flat-polygon", 20 + (i * 3) % 31, i) for i in range(20)]


def _curved_cases():
    return [("cone-fan", k, 0) for k in range(7, 13)] + [("curved", 100, i) for i in range(10)]


# ---------------------------------------------------------------- criterion 1
def test_criterion_1_validation():
    t = time.perf_counter()
    good = {name: validate(make()).passed for name, make in
            (("A", instance_a), ("B", instance_b), ("C", instance_c), ("D", instance_d))}
    five = validate(fan(5)).codes()
    thin = validate(PlanarComplex(3, [(0, 1, 2)], {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 3.0})).codes()
    dt = time.perf_counter() - t
    ok = all(good.values()) and five == ["CURVATURE"] and thin == ["TRIANGLE_INEQ"] and dt < 1.0
    record(1, ok, f"valid {good}, 5-fan {five}, (1,1,3) {thin}, {dt:.3f}s")
    assert ok


# ---------------------------------------------------------------- criterion 2
def test_criterion_2_flat_convex_exactness():
    t = time.perf_counter()
    worst = 0.0
    pairs = 0
    for case in _flat_convex_cases():
        K, src, tgt, maps = _case(*case)
        for s, m in zip(src, maps):
            a = _flat_xy(K, s)
            for y in tgt:
                d = shortest_path(m, y)[1]
                worst = max(worst, abs(d - math.dist(a, _flat_xy(K, y))))
                pairs += 1
    dt = time.perf_counter() - t
    ok = worst <= 1e-9 and dt < 30
    record(2, ok, f"{pairs} pairs on 20 instances, max |kernel - euclid| = {worst:.2e}, {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- criterion 3
def _bends_only_at_reflex(K, path):
    for i in range(1, len(path.breakpoints) - 1):
        b = path.breakpoints[i]
        a1, a2 = breakpoint_angles(K, path, i)
        if isinstance(b, Vertex) and K.is_boundary_vertex[b.id]:
            if K.vertex_angle_sum(b.id) > math.pi + 1e-9:
                continue
            if abs(a1 - math.pi) > 1e-7:
                return False
        elif min(a1, a2) < math.pi - 1e-7:
            return False
    return True


def test_criterion_3_simple_polygon_equivalence():
    worst = 0.0
    pairs = 0
    straight = True
    for case in _flat_polygon_cases():
        K, src, tgt, maps = _case(*case)
        vis = VisibilityOracle(K).distances(src, tgt)
        for i, m in enumerate(maps):
            for j, y in enumerate(tgt):
                path, d = shortest_path(m, y)
                worst = max(worst, abs(d - vis[i, j]))
                straight &= _bends_only_at_reflex(K, path)
                pairs += 1
    ok = worst <= 1e-9 and straight
    record(3, ok, f"{pairs} pairs, max |kernel - visibility| = {worst:.2e}, bends only at reflex vertices: {straight}")
    assert ok


# ---------------------------------------------------------------- criterion 4
def test_criterion_4_curved_oracle_band():
    over = 0.0
    rel = 0.0
    mono = True
    pairs = 0
    outside = []
    for case in _curved_cases():
        K, src, tgt, maps = _case(*case)
        kern = np.array([[shortest_path(m, y)[1] for y in tgt] for m in maps])
        eps = 0.01 * K.edge_graph_diameter()
        nets = [EpsilonNet(K, eps / f).distances(src, tgt) for f in (1, 2, 4)]
        over = max(over, float((kern - nets[0]).max()))
        r = (nets[0] - kern) / kern
        rel = max(rel, float(r.max()))
        for i, j in zip(*np.nonzero(r > 0.05)):
            fine = EpsilonNet(K, eps / 16).distances([src[i]], [tgt[j]])[0, 0]
            outside.append(f"{case[0]}({case[1]},{case[2]}) d={kern[i, j]:.4f} gap {r[i, j]:.3f}, at eps/16 {(fine - kern[i, j]) / kern[i, j]:.4f}")
        mono &= bool(np.all(nets[1] <= nets[0] + 1e-12) and np.all(nets[2] <= nets[1] + 1e-12))
        pairs += kern.size
    C = instance_c()
    m = build_spm(C, Vertex(1))
    golden = [
        (shortest_path(m, Vertex(3))[1], SQRT3),
        (shortest_path(m, Vertex(4))[1], 2.0),
        (shortest_path(m, EdgePoint(4, 5, 0.5))[1], 1 + SQRT3 / 2),
    ]
    gerr = max(abs(a - b) for a, b in golden)
    ok = over <= 1e-9 and rel <= 0.05 and mono and gerr <= 1e-9
    record(4, ok, f"{pairs} pairs, max(kernel - oracle) = {over:.2e}, max relative gap = {rel:.4f}, "
                  f"dyadic monotone: {mono}, golden error {gerr:.1e}"
                  + (f"; pairs outside the 5% band: {outside}" if outside else ""))
    assert ok


# ---------------------------------------------------------------- criterion 5
def test_criterion_5_cone_partition():
    bad = []
    n_maps = 0
    worst_ratio = 0.0
    for case in _flat_convex_cases() + _flat_polygon_cases() + _curved_cases():
        K, src, _, maps = _case(*case)
        for s, m in zip(src, maps):
            rep = verify_spm(K, m)
            n_maps += 1
            worst_ratio = max(worst_ratio, len(m.cones) / K.n_vertices)
            if not rep.passed or len(m.cones) > 6 * K.n_vertices:
                bad.append((case, s, rep.violations[:2]))
    for kind, n in (("spindle", 50), ("spindle", 100)):
        K = generate_instance(kind, n, 0)
        m = build_spm(K, Vertex(0))
        rep = verify_spm(K, m)
        n_maps += 1
        worst_ratio = max(worst_ratio, len(m.cones) / K.n_vertices)
        if not rep.passed:
            bad.append(((kind, n), Vertex(0), rep.violations[:2]))
    ok = not bad
    record(5, ok, f"{n_maps} maps verified, max cones/n = {worst_ratio:.2f}, failures: {bad[:2]}")
    assert ok


# ---------------------------------------------------------------- criterion 6
def _hull_runs():
    runs = [("L-shape", instance_d(), [Vertex(0), Vertex(1), Vertex(2), Vertex(5)]),
            ("square", instance_b(), [Vertex(i) for i in range(4)])]
    for kind, n, seed in (("flat-convex", 40, 0), ("flat-convex", 30, 1), ("flat-convex", 50, 2),
                          ("flat-polygon", 40, 0), ("flat-polygon", 30, 3),
                          ("curved", 60, 0), ("curved", 100, 1), ("cone-fan", 9, 0)):
        K = generate_instance(kind, n, seed)
        runs.append((f"{kind}({n},{seed})", K, _random_points(K, np.random.default_rng(seed), 8)))
    return runs


def test_criterion_6_hull_suite():
    notes = []
    ok = True
    for name, K, S in _hull_runs():
        res = convex_hull(K, S)
        rep = verify_hull(res, n_sources=20, n_targets=10)
        if not rep.passed:
            ok = False
            notes.append(f"{name}: {rep.violations[:2]}")
        if name == "L-shape" and abs(res.perimeter - (6 + math.sqrt(2))) > 1e-9:
            ok = False
            notes.append(f"L-shape perimeter {res.perimeter!r}")
        if name == "square" and (abs(res.perimeter - 4) > 1e-9 or set(res.boundary.breakpoints) != {Vertex(i) for i in range(4)}):
            ok = False
            notes.append("square-corners hull is not the square")
        if name.startswith("flat-convex"):
            P = np.array([_flat_xy(K, s) for s in S])
            hp = P[pl.convex_hull(P)]
            per = sum(math.dist(hp[i], hp[i - 1]) for i in range(len(hp)))
            if abs(per - res.perimeter) > 1e-9:
                ok = False
                notes.append(f"{name}: perimeter {res.perimeter!r} vs planar {per!r}")
    record(6, ok, f"{len(_hull_runs())} hull runs (containment, convexity, 200-pair closure, cut pieces valid)"
                  + (f"; {notes[:3]}" if notes else ""))
    assert ok


# ---------------------------------------------------------------- criterion 7
def _fit(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def test_criterion_7_complexity():
    t0 = time.perf_counter()
    ns, build, cross, query = [], [], [], []
    for n in (50, 100, 200, 400):
        K = generate_instance("spindle", n, 0)
        best = math.inf
        for _ in range(2 if n < 400 else 1):
            t = time.perf_counter()
            m = build_spm(K, Vertex(0))
            best = min(best, time.perf_counter() - t)
        pts = _random_points(K, np.random.default_rng(n), 200)
        t = time.perf_counter()
        for y in pts:
            shortest_path(m, y)
        query.append((time.perf_counter() - t) / len(pts))
        ns.append(K.n_vertices)
        build.append(best)
        cross.append(sum(len(v) for v in m.crossings.values()))
    ns = np.array(ns, float)
    alpha = _fit(ns, np.array(build) / np.log(ns))
    c2 = max(c / n**2 for c, n in zip(cross, ns))
    beta = _fit(ns, np.array(query))
    total = time.perf_counter() - t0
    ok = alpha <= 2.4 and c2 <= 1.0 and beta <= 1.3
    record(7, ok, f"alpha = {alpha:.2f}, crossings/n^2 <= {c2:.3f}, query exponent = {beta:.2f}, "
                  f"builds {', '.join(f'{b:.2f}s' for b in build)}, {total:.0f}s")
    assert ok


# ---------------------------------------------------------------- criterion 8
def _cli(args, cwd, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    subprocess.run([sys.executable, "-m", "cat0.cli", *args], cwd=cwd, env=env, check=True, capture_output=True)


def test_criterion_8_determinism(tmp_path):
    outs = []
    for k, hseed in enumerate((1, 2)):
        d = tmp_path / f"run{k}"
        d.mkdir()
        (d / "d.json").write_text(serialize_complex(instance_d()))
        (d / "pts.json").write_text(json.dumps([{"vertex": 0}, {"vertex": 1}, {"vertex": 2}, {"vertex": 5}]))
        _cli(["gen", "--kind", "curved", "--n", "40", "--seed", "3", "-o", "g.json"], d, hseed)
        _cli(["spm", "g.json", "--source", '{"face":3,"bary":[0.2,0.3,0.5]}', "-o", "spm.json"], d, hseed)
        _cli(["query", "g.json", "--spm", "spm.json", "--target", '{"vertex":7}', "--path-out", "path.json"], d, hseed)
        _cli(["hull", "d.json", "--points", "pts.json", "-o", "hull.json"], d, hseed)
        _cli(["render", "g.json", "--spm", "spm.json", "-o", "spm.svg"], d, hseed)
        outs.append({f: (d / f).read_bytes() for f in ("g.json", "spm.json", "path.json", "hull.json", "spm.svg")})
    same = {f: outs[0][f] == outs[1][f] for f in outs[0]}
    K = generate_instance("flat-polygon", 30, 5)
    a = json.dumps(build_spm(K, Vertex(2)).to_json())
    b = json.dumps(build_spm(K, Vertex(2)).to_json())
    ok = all(same.values()) and a == b
    record(8, ok, f"byte-identical across processes: {same}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
