"""Command-line surface over scenes: iterate, simulate, verify, render.

Every command reads one scene file and writes artifacts into an output
directory.  All rational values are serialized exactly, so repeated runs
with the same scene and seeds produce byte-identical files.  Exit codes:
0 ok, 2 iteration did not converge, 3 bad input, 4 a check failed.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .dynamics import run
from .geometry import ORIGIN, GeometryError, PointSeed, Region, parse_scalar, pt, scalar_str
from .operators import Collection, IterationResult, iterate
from .scene import ParseError, Scene, ValidationError, load_scene
from .render import render_svg
from .verify import (
    VerificationReport,
    contains_union_of_hulls,
    covers_translated_inner_cells,
    is_invariant_g,
    is_invariant_p,
    is_star_convex_origin,
    triangle_family_check,
)
from .voronoi import assumption_report

EXIT_OK = 0
EXIT_NOT_CONVERGED = 2
EXIT_INVALID = 3
EXIT_CHECK_FAILED = 4

VERIFY_SAMPLES = 2000


def _point_strs(p) -> list[str]:
    return [scalar_str(p.x), scalar_str(p.y)]


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _write_jsonl(path: Path, records: list[dict]) -> None:
    path.write_text("".join(json.dumps(r) + "\n" for r in records))


def _config_from_args(scene: Scene, args):
    cfg = scene.config
    patch = {}
    if args.max_iter is not None:
        patch["max_iter"] = args.max_iter
    if args.no_rounding:
        patch["rounding_enabled"] = False
    if args.epsilon is not None:
        patch["epsilon"] = parse_scalar(args.epsilon)
    for name in ("k", "r", "s"):
        value = getattr(args, name)
        if value is not None:
            patch[name] = value
    return dataclasses.replace(cfg, **patch) if patch else cfg


def _iteration_payload(name: str, op: str, res: IterationResult) -> dict:
    return {
        "collection": name,
        "operator": op,
        "converged": res.converged,
        "iterations": res.iterations,
        "stop": res.stop_reason,
        "rounding_free": res.rounding_free,
        "vertex_count": len(res.final.vertices),
        "vertices": [_point_strs(p) for p in res.final.vertices],
    }


def _run_iterations(scene: Scene, args, op: str, kind: str, out: Path) -> int:
    if not scene.collections:
        raise ValidationError("scene declares no collections", ("collections",))
    cfg = _config_from_args(scene, args)
    code = EXIT_OK
    for name, collection in scene.collections.items():
        seed = _seed_for(collection, name, kind)
        res = iterate(op, collection, seed, cfg)
        _write_json(out / f"{name}.{kind}.json", _iteration_payload(name, op, res))
        _write_jsonl(out / f"{name}.{kind}.log.jsonl", res.log_records())
        status = "converged" if res.converged else res.stop_reason
        unit = "iteration" if res.iterations == 1 else "iterations"
        print(f"{name}: {op} {status} after {res.iterations} {unit}, "
              f"{len(res.final.vertices)} vertices")
        if not res.converged:
            code = EXIT_NOT_CONVERGED
    return code


def _seed_for(collection: Collection, name: str, kind: str) -> PointSeed:
    if kind == "gset":
        return PointSeed(ORIGIN)
    common = set(collection.members[0].sites)
    for S in collection.members[1:]:
        common &= set(S.sites)
    if not common:
        raise ValidationError(
            f"members of {name!r} share no site to seed from",
            (f"collections.{name}",))
    return PointSeed(min(common, key=lambda p: p.key()))


def _cmd_min_gset(scene: Scene, args, out: Path) -> int:
    return _run_iterations(scene, args, "G" if args.convex else "g", "gset", out)


def _cmd_min_fset(scene: Scene, args, out: Path) -> int:
    return _run_iterations(scene, args, "P" if args.convex else "p", "fset", out)


def _cmd_simulate(scene: Scene, args, out: Path) -> int:
    if not scene.simulations:
        raise ValidationError("scene declares no simulations", ("simulations",))
    for name, spec in scene.simulations.items():
        provider = scene.resolve_provider(spec.provider)
        opponent = scene.resolve_opponent(spec.opponent)
        steps = spec.steps if args.steps is None else args.steps
        seed = spec.seed if args.seed is None else args.seed
        trace = run(spec.mode, provider, opponent, steps, seed=seed)
        records = trace.records()
        records.append({
            "mode": trace.mode,
            "steps": len(trace.steps),
            "final_e": _point_strs(trace.final_error),
        })
        _write_jsonl(out / f"{name}.trace.jsonl", records)
        print(f"{name}: {trace.mode} {len(trace.steps)} steps, "
              f"final e = ({scalar_str(trace.final_error.x)}, "
              f"{scalar_str(trace.final_error.y)})")
    return EXIT_OK


def _load_region(path: Path) -> Region:
    payload = json.loads(path.read_text())
    ring = [pt(parse_scalar(x), parse_scalar(y)) for x, y in payload["vertices"]]
    return Region.from_ring(ring, validate=False)


def _report_dict(rep: VerificationReport) -> dict:
    return {
        "check": rep.check,
        "passed": rep.passed,
        "witnesses": [_point_strs(w) for w in rep.witnesses],
        "notes": rep.notes,
    }


def _cmd_verify(scene: Scene, args, out: Path) -> int:
    seed = 0 if args.seed is None else args.seed
    found = False
    failed = False
    for name, collection in scene.collections.items():
        reports: list[VerificationReport] = []
        gset = out / f"{name}.gset.json"
        if gset.exists():
            Q = _load_region(gset)
            reports.append(is_invariant_g(collection, Q))
            reports.append(is_star_convex_origin(Q))
            for S in collection:
                reports.append(covers_translated_inner_cells(S, Q))
        fset = out / f"{name}.fset.json"
        if fset.exists():
            D = _load_region(fset)
            reports.append(is_invariant_p(collection, D))
            reports.append(contains_union_of_hulls(collection, D))
        if not reports:
            continue
        found = True
        _write_json(out / f"{name}.verify.json",
                    {"collection": name,
                     "checks": [_report_dict(r) for r in reports]})
        for rep in reports:
            mark = "pass" if rep.passed else "FAIL"
            print(f"{name}: {rep.check}: {mark}")
            failed = failed or not rep.passed
    for name, family in scene.triangles.items():
        found = True
        rep = triangle_family_check(family.h_max, family.t,
                                    samples=VERIFY_SAMPLES, seed=seed)
        _write_json(out / f"{name}.verify.json",
                    {"triangle_family": name, "checks": [_report_dict(rep)]})
        mark = "pass" if rep.passed else "FAIL"
        print(f"{name}: {rep.check}: {mark}")
        failed = failed or not rep.passed
    if not found:
        raise ValidationError(
            f"no artifacts to verify in {out}", ("verify",))
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _cmd_report_assumptions(scene: Scene, args, out: Path) -> int:
    if not scene.collections:
        raise ValidationError("scene declares no collections", ("collections",))
    payload = {}
    for name, collection in scene.collections.items():
        report = assumption_report(collection.members)
        payload[name] = report.as_dict()
        print(f"{name}: {report.normal_count} hull edge normals, "
              f"max hull diameter_sq = "
              f"{scalar_str(report.max_hull_diameter_sq)}")
    _write_json(out / "assumptions.json", payload)
    return EXIT_OK


def _load_trace(path: Path) -> list:
    points = []
    for line in path.read_text().splitlines():
        record = json.loads(line)
        key = "e" if "e" in record else "final_e"
        points.append(pt(parse_scalar(record[key][0]),
                         parse_scalar(record[key][1])))
    return points


def _cmd_render(scene: Scene, args, out: Path) -> int:
    site_sets = [S for c in scene.collections.values() for S in c]
    invariant = None
    for name in scene.collections:
        for kind in ("gset", "fset"):
            path = out / f"{name}.{kind}.json"
            if invariant is None and path.exists():
                invariant = _load_region(path)
    traces = []
    for name in scene.simulations:
        path = out / f"{name}.trace.jsonl"
        if path.exists():
            traces.append(_load_trace(path))
    svg = render_svg(site_sets=site_sets, invariant=invariant, traces=traces)
    target = out / f"{Path(args.scene).stem}.svg"
    target.write_text(svg)
    print(f"wrote {target}")
    return EXIT_OK


_COMMANDS = {
    "min-gset": _cmd_min_gset,
    "min-fset": _cmd_min_fset,
    "simulate": _cmd_simulate,
    "verify": _cmd_verify,
    "report-assumptions": _cmd_report_assumptions,
    "render": _cmd_render,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="errdiff",
        description="Minimal invariant sets and tracking games, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scene", required=True, help="scene file (JSON)")
        p.add_argument("--out", default=".", help="artifact directory")
        p.add_argument("--seed", type=int, default=None)

    def iteration_flags(p):
        p.add_argument("--convex", action="store_true",
                       help="iterate the convex variant")
        p.add_argument("--max-iter", type=int, default=None)
        p.add_argument("--no-rounding", action="store_true")
        p.add_argument("--epsilon", default=None, metavar="a/b")
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--r", type=int, default=None)
        p.add_argument("--s", type=int, default=None)

    for name in ("min-gset", "min-fset"):
        p = sub.add_parser(name, help=f"iterate to the minimal set ({name[4]})")
        common(p)
        iteration_flags(p)
    p = sub.add_parser("simulate", help="run the declared tracking games")
    common(p)
    p.add_argument("--steps", type=int, default=None)
    for name, text in (("verify", "check stored artifacts exactly"),
                       ("report-assumptions", "summarize boundedness data"),
                       ("render", "draw the scene and artifacts as SVG")):
        p = sub.add_parser(name, help=text)
        common(p)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scene = load_scene(args.scene)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](scene, args, out)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, ValidationError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
