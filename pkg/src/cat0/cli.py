"""The ``cat0`` command line.

Exit codes: 0 success, 1 validation failure (or an input the kernel rejects),
2 usage error (bad flags, missing files, malformed JSON).
"""

import argparse
import json
import sys

from .complex import ComplexError, load_complex, serialize_complex, validate
from .points import point_from_json


class UsageError(Exception):
    pass


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: malformed JSON at line {e.lineno} column {e.colno}") from e


def _point(text, K=None):
    try:
        p = point_from_json(json.loads(text))
    except (json.JSONDecodeError, ValueError, KeyError, TypeError) as e:
        raise UsageError(f"malformed point JSON {text!r}: {e}") from e
    if K is not None:
        try:
            K.check_point(p)
        except ComplexError as e:
            raise UsageError(str(e)) from e
        p = K.normalize(p)
    return p


def _complex(path, check=True):
    try:
        K = load_complex(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    if check:
        rep = validate(K)
        if not rep.passed:
            raise ComplexError(f"{path} is not a CAT(0) disk: {', '.join(rep.codes())}")
    return K


def _spm_for(K, args):
    from .spm import build_spm

    src = None
    if getattr(args, "spm", None):
        # the dump records the source; the map is rebuilt from it
        src = _point(json.dumps(_read_json(args.spm)["source"]), K)
    if getattr(args, "source", None):
        given = _point(args.source, K)
        if src is not None and given != src:
            raise UsageError("--source disagrees with the source recorded in --spm")
        src = given
    if src is None:
        raise UsageError("a source is required (--source or --spm)")
    return build_spm(K, src)


# ----------------------------------------------------------------- commands
def cmd_validate(args):
    K = _complex(args.file, check=False)
    rep = validate(K)
    _write(args.out, _dump(rep.to_json()))
    return 0 if rep.passed else 1


def cmd_spm(args):
    K = _complex(args.file)
    m = _spm_for(K, args)
    _write(args.out, _dump(m.to_json()))
    return 0


def cmd_query(args):
    from .query import shortest_path

    K = _complex(args.file)
    m = _spm_for(K, args)
    path, d = shortest_path(m, _point(args.target, K))
    print(f"distance={d!r}")
    if args.path_out:
        _write(args.path_out, _dump(path.to_json()))
    return 0


def cmd_hull(args):
    from .hull import convex_hull

    K = _complex(args.file)
    raw = _read_json(args.points)
    if not isinstance(raw, list) or not raw:
        raise UsageError("--points must hold a non-empty JSON list of points")
    S = [_point(json.dumps(p), K) for p in raw]
    res = convex_hull(K, S)
    _write(args.out, _dump(res.to_json()))
    return 0


def cmd_oracle(args):
    from .oracle import oracle_distance
    from .query import distance
    from .spm import build_spm

    K = _complex(args.file)
    a, b = _point(args.source, K), _point(args.target, K)
    if args.epsilon <= 0:
        raise UsageError("--epsilon must be positive")
    od = oracle_distance(K, a, b, args.epsilon)
    kd = distance(build_spm(K, a), b)
    print(f"distance={od!r}")
    print(f"kernel={kd!r}")
    return 0


def cmd_gen(args):
    from .oracle import KINDS, generate_instance

    if args.kind not in KINDS:
        raise UsageError(f"unknown kind {args.kind!r}; choose from {', '.join(KINDS)}")
    try:
        K = generate_instance(args.kind, args.n, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from e
    _write(args.out, serialize_complex(K))
    return 0


def cmd_render(args):
    from .render import RenderSpec, render_strip, render_tutte

    K = _complex(args.file)
    spec = RenderSpec(mode=args.mode, cone=args.cone, size=args.size)
    if args.spm:
        spec.spm = _read_json(args.spm)
    if args.hull:
        spec.hull = _read_json(args.hull)
    if args.path:
        spec.path = _read_json(args.path)
    if args.points:
        spec.points = _read_json(args.points)
    if args.mode == "tutte":
        svg = render_tutte(K, spec)
    else:
        if not args.spm and not args.source:
            raise UsageError("strip mode needs --spm or --source")
        svg = render_strip(_spm_for(K, args), spec)
    _write(args.out, svg)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="cat0", description="Geodesics in CAT(0) planar complexes.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="check that a complex is a CAT(0) triangulated disk")
    p.add_argument("file")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("spm", help="build and dump a shortest path map")
    p.add_argument("file")
    p.add_argument("--source", required=True)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_spm)

    p = sub.add_parser("query", help="geodesic distance and path from a source")
    p.add_argument("file")
    p.add_argument("--source")
    p.add_argument("--target", required=True)
    p.add_argument("--spm")
    p.add_argument("--path-out")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("hull", help="geodesic convex hull of a point set")
    p.add_argument("file")
    p.add_argument("--points", required=True)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("oracle", help="epsilon-net distance next to the kernel distance")
    p.add_argument("file")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="generate a test instance")
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", help="draw a complex with optional overlays as SVG")
    p.add_argument("file")
    p.add_argument("--mode", choices=("tutte", "strip"), default="tutte")
    p.add_argument("--spm")
    p.add_argument("--source")
    p.add_argument("--cone", type=int, default=0)
    p.add_argument("--hull")
    p.add_argument("--path")
    p.add_argument("--points")
    p.add_argument("--size", type=int, default=600)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_render)
    return ap


def run(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"cat0: error: {e}", file=sys.stderr)
        return 2
    except ComplexError as e:
        print(f"cat0: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
