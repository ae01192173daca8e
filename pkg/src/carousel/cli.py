"""Command-line front end.

Subcommands: gen (scene generators), csl (common supporting lines),
check (carousel rule deciders), fuzz (seeded campaign), render (SVG).

Exit codes: 0 ok/holds, 2 fails, 3 degenerate scene, 4 precondition
violation, 64 malformed input, 65 scene invariant violation, 66 missing
annotation layer with --no-compute, 70 internal disagreement.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict

from .constructions import (
    FuzzConfig,
    generate_corollary_scene,
    generate_fuzz_scene,
    generate_integer_scene,
    sharpness_construct,
)
from .bodies import PolygonBody
from .errors import (
    CommonLineCountTooLarge,
    CrossValidationDisagreement,
    GeometryError,
    ModeMixError,
    SceneInvariantError,
)
from .kernel import as_float_point
from .rule import (
    Scene,
    check_carousel_bruteforce,
    check_carousel_constructive,
    cross_validate,
    hull_pair_body,
    scene_csl,
    verify_scene,
)
from .render import DEFAULT_LAYERS, RenderSpec, render_scene_doc
from .sceneio import (
    DocumentError,
    canonical_dumps,
    certificate_to_doc,
    csl_to_doc,
    load_document,
    save_document,
    scene_from_doc,
    scene_to_doc,
    trace_to_doc,
)
from .sectors import sweep
from .tangency import CslLines, adjacent_pairs

EXIT_OK = 0
EXIT_FAILS = 2
EXIT_DEGENERATE = 3
EXIT_PRECONDITION = 4
EXIT_BAD_INPUT = 64
EXIT_INVARIANT = 65
EXIT_MISSING_LAYER = 66
EXIT_DISAGREEMENT = 70


def _load_scene(path: str):
    doc = load_document(path)
    scene, annotations = scene_from_doc(doc)
    scene.validate()
    return scene, doc, annotations


def _emit(doc, out_path=None):
    text = canonical_dumps(doc)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ---------------------------------------------------------------------------
# gen

def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "fuzz":
        cfg = FuzzConfig(seed=args.seed, mode=args.mode)
        scene = generate_fuzz_scene(cfg, args.index)
    elif kind == "sharpness":
        inst = sharpness_construct(args.n)
        scene = Scene(PolygonBody(inst.a0), PolygonBody(inst.a1), inst.container)
    elif kind == "integer":
        scene = generate_integer_scene(args.seed)
    elif kind in ("disks-in-triangle", "ellipses-in-pentagon", "homothets-in-triangle"):
        scene = generate_corollary_scene(kind, args.seed)
    else:
        print(f"unknown kind {kind!r}", file=sys.stderr)
        return EXIT_BAD_INPUT
    _emit(scene_to_doc(scene), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# csl

def cmd_csl(args) -> int:
    scene, _, _ = _load_scene(args.scene)
    csl = scene_csl(scene)
    _emit(csl_to_doc(csl), args.out)
    if isinstance(csl, CslLines):
        return EXIT_OK
    return EXIT_DEGENERATE


# ---------------------------------------------------------------------------
# check

def cmd_check(args) -> int:
    scene, _, _ = _load_scene(args.scene)
    csl = scene_csl(scene)
    if args.method == "brute":
        cert = check_carousel_bruteforce(scene, csl)
        out = {"certificate": certificate_to_doc(cert)}
    elif args.method == "constructive":
        cert, trace = check_carousel_constructive(scene, csl)
        out = {"certificate": certificate_to_doc(cert), "trace": trace_to_doc(trace)}
    else:
        report = cross_validate(scene, csl)
        cert = report.brute
        out = {
            "certificate": certificate_to_doc(report.brute),
            "constructive": certificate_to_doc(report.constructive),
            "trace": trace_to_doc(report.trace),
            "agree": report.agree,
        }
    _emit(out, args.out)
    if cert.degenerate_reason:
        return EXIT_DEGENERATE
    if cert.verdict == "holds":
        return EXIT_OK
    if cert.verdict == "fails":
        return EXIT_FAILS
    return EXIT_DEGENERATE


# ---------------------------------------------------------------------------
# fuzz

def _fuzz_worker(payload):
    cfg_dict, index = payload
    cfg = FuzzConfig(**cfg_dict)
    scene = generate_fuzz_scene(cfg, index)
    rec = verify_scene(scene)
    rec["index"] = index
    rec["n"] = scene.n
    return rec


def _worker_count() -> int:
    env = os.environ.get("CAROUSEL_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


def run_campaign(cfg: FuzzConfig, count: int, workers: int | None = None):
    """Verify `count` seeded scenes; deterministic regardless of workers."""
    if workers is None:
        workers = _worker_count()
    payloads = [(asdict(cfg), i) for i in range(count)]
    if workers <= 1:
        records = [_fuzz_worker(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_fuzz_worker, payloads, chunksize=32))
    records.sort(key=lambda r: r["index"])
    return records


def summarize_campaign(records) -> dict:
    counts = {"holds": 0, "fails": 0, "degenerate": 0, "fragile": 0,
              "errors": 0, "toolkit_fallbacks": 0}
    violations = []
    disagreements = []
    # tight scenes (as many common supporting lines as container vertices)
    # are the interesting boundary: even counts can defeat the rule, odd
    # counts are conjectured not to
    tight = {"odd_holds": 0, "odd_fails": 0, "even_holds": 0, "even_fails": 0}
    for rec in records:
        if rec["error"]:
            counts["errors"] += 1
            continue
        if rec["degenerate"]:
            counts["degenerate"] += 1
        if rec["fragile"]:
            counts["fragile"] += 1
        if rec["constructive_case"] == -2:
            counts["toolkit_fallbacks"] += 1
        if rec["s"] is not None and rec["s"] == rec["n"] and not rec["degenerate"] \
                and rec["verdict"] in ("holds", "fails"):
            parity = "odd" if rec["s"] % 2 else "even"
            tight[f"{parity}_{rec['verdict']}"] += 1
        if rec["verdict"] == "holds":
            counts["holds"] += 1
        elif rec["verdict"] == "fails":
            counts["fails"] += 1
            if not rec["degenerate"] and rec["s"] is not None and rec["s"] < rec["n"]:
                violations.append(rec["index"])
        if rec["cross_agree"] is False or rec["constructive_ok"] is False:
            disagreements.append(rec["index"])
    total = len(records)
    return {
        "scenes": total,
        "counts": counts,
        "degeneracy_rate": counts["degenerate"] / total if total else 0.0,
        "theorem_violations": violations,
        "constructive_disagreements": disagreements,
        "tight_scenes": tight,
    }


def cmd_fuzz(args) -> int:
    cfg_kwargs = {}
    if args.config:
        cfg_kwargs = load_document(args.config)
        cfg_kwargs = {k: tuple(v) if isinstance(v, list) else v
                      for k, v in cfg_kwargs.items()}
    cfg_kwargs.setdefault("seed", args.seed)
    cfg = FuzzConfig(**cfg_kwargs)
    records = run_campaign(cfg, args.seeds)
    report = summarize_campaign(records)
    report["seed"] = cfg.seed
    if args.dump_dir and report["theorem_violations"]:
        os.makedirs(args.dump_dir, exist_ok=True)
        for idx in report["theorem_violations"]:
            scene = generate_fuzz_scene(cfg, idx)
            save_document(os.path.join(args.dump_dir, f"violation-{idx}.json"),
                          scene_to_doc(scene))
    _emit(report, args.out)
    if report["theorem_violations"] or report["constructive_disagreements"]:
        return EXIT_FAILS
    return EXIT_OK


# ---------------------------------------------------------------------------
# render

def _sweep_points(sw, container) -> list:
    pts = [as_float_point(sw.start.location)]
    for v in sw.covered:
        pts.append(as_float_point(container.vertices[v]))
    pts.append(as_float_point(sw.end.location))
    return [[p.x, p.y] for p in pts]


def compute_annotations(scene: Scene, layers) -> dict:
    """Annotation layers derived from the scene with its own defaults."""
    ann = {}
    csl = scene_csl(scene)
    ann["csl"] = csl_to_doc(csl)
    if not isinstance(csl, CslLines) or csl.count == 0:
        return ann
    pairs = adjacent_pairs(csl)
    if "sweeps" in layers:
        hull = hull_pair_body(scene.a0, scene.a1)
        sweeps = []
        for pair in pairs:
            try:
                sw = sweep(pair.line, pair.cw_next, hull, scene.container, "L",
                           scene.tol.eps)
            except GeometryError:
                continue
            sweeps.append({"side": "L", "pair_index": pair.index,
                           "covered": list(sw.covered),
                           "points": _sweep_points(sw, scene.container)})
        ann["sweeps"] = sweeps
    if "sectors" in layers and csl.count < scene.n:
        try:
            cert, trace = check_carousel_constructive(scene, csl)
        except GeometryError:
            return ann
        if cert.verdict == "holds" and trace.case == 0 and trace.pair_index >= 0:
            from .sectors import expand_sector, sector_from_arc, NormalArc

            pair = next(p for p in pairs if p.index == trace.pair_index)
            dom = scene.body(trace.dominant)
            base = sector_from_arc(dom, NormalArc(pair.line.normal, pair.delta))
            grown = expand_sector(pair.line, pair.cw_next, dom,
                                  trace.alpha, trace.beta)
            sectors = []
            for tone, sec in (("dark", base), ("light", grown)):
                clipped = sec.clipped(scene.container, scene.tol.eps)
                if clipped is not None:
                    sectors.append({
                        "tone": tone,
                        "arc": {"start": sec.arc.start, "width": sec.arc.width},
                        "clipped": [[float(p.x), float(p.y)]
                                    for p in clipped.vertices],
                    })
            ann["sectors"] = sectors
    return ann


def cmd_render(args) -> int:
    scene, doc, annotations = _load_scene(args.scene)
    layers = tuple(args.layers.split(",")) if args.layers else DEFAULT_LAYERS
    needed = {"csl", "sweeps", "sectors"} & set(layers)
    missing = needed - set(annotations)
    if missing and args.no_compute:
        print(f"missing annotation layers: {sorted(missing)}", file=sys.stderr)
        return EXIT_MISSING_LAYER
    if missing:
        computed = compute_annotations(scene, layers)
        merged = dict(computed)
        merged.update(annotations)
        annotations = merged
    doc = dict(doc)
    doc["annotations"] = annotations
    spec = RenderSpec(width=args.width, height=args.height, layers=layers)
    svg = render_scene_doc(doc, spec)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="carousel",
                                 description="common supporting lines and the "
                                             "weak carousel rule")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a scene")
    g.add_argument("--kind", default="fuzz",
                   choices=["fuzz", "sharpness", "integer", "disks-in-triangle",
                            "ellipses-in-pentagon", "homothets-in-triangle"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--index", type=int, default=0)
    g.add_argument("--n", type=int, default=6, help="sharpness vertex count")
    g.add_argument("--mode", default="float", choices=["float", "exact"])
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("csl", help="common supporting lines of a scene")
    c.add_argument("scene")
    c.add_argument("--out")
    c.set_defaults(func=cmd_csl)

    k = sub.add_parser("check", help="decide the weak carousel rule")
    k.add_argument("scene")
    k.add_argument("--method", default="brute",
                   choices=["brute", "constructive", "both"])
    k.add_argument("--out")
    k.set_defaults(func=cmd_check)

    f = sub.add_parser("fuzz", help="seeded verification campaign")
    f.add_argument("--seeds", type=int, default=100, help="number of scenes")
    f.add_argument("--seed", type=int, default=0, help="base seed")
    f.add_argument("--config", help="JSON file with FuzzConfig fields")
    f.add_argument("--dump-dir", help="directory for offending scenes")
    f.add_argument("--out")
    f.set_defaults(func=cmd_fuzz)

    r = sub.add_parser("render", help="render a scene to SVG")
    r.add_argument("scene")
    r.add_argument("--out", required=True)
    r.add_argument("--layers", help="comma-separated layer list")
    r.add_argument("--no-compute", action="store_true",
                   help="fail instead of computing missing layers")
    r.add_argument("--width", type=int, default=720)
    r.add_argument("--height", type=int, default=720)
    r.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (SceneInvariantError, ModeMixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except CommonLineCountTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except CrossValidationDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
