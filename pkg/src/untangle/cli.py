"""Command-line entry point: ``untangle <subcommand> ...``.

Exit codes: 0 ok, 1 validation or invariant violation, 2 usage or I/O
problem, 3 a bound check failed.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import ExitStack
from fractions import Fraction
from pathlib import Path

from . import drawing as cdraw
from . import geometry as gdraw
from .drawing import Drawing, DrawingFormatError, classify_edges, stats, validate_drawing
from .generate import FAMILIES, gen_random
from .geometry import DegenerateDrawingError, GeoDrawing, ingest
from .render import RenderError, render_svg
from .separator import (DEFAULT_EXACT_CAP, DEFAULT_RESTARTS, SeparatorCapError,
                        exact_separator, find_separator, string_graph, verify_separator)
from .transforms import BLUE, RED, InvariantError, StepLog, normalize
from .untangler import DEBUG_LEVELS, untangle

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3
SEED_ENV = "UNTANGLE_SEED"


class UsageError(Exception):
    pass


class Violation(Exception):
    pass


# -- helpers ---------------------------------------------------------------

def _plain(obj):
    """Make a report JSON-safe: infinities become strings."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(_plain(payload), sort_keys=True))
    else:
        print(text)


def _kv(payload: dict) -> str:
    return "\n".join(f"{k}: {v}" for k, v in payload.items())


def _load(path: str) -> GeoDrawing | Drawing:
    """Read a .gdraw or .cdraw file; the extension wins, otherwise the shape."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    suffix = Path(path).suffix
    if suffix == ".gdraw":
        return gdraw.loads(text)
    if suffix == ".cdraw":
        return cdraw.loads(text)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DrawingFormatError(f"{path} is not JSON: {exc}") from None
    if isinstance(obj, dict) and "crossings" in obj:
        return cdraw.from_json(obj)
    return gdraw.from_json(obj)


def _combinatorial(path: str) -> Drawing:
    d = _load(path)
    return ingest(d) if isinstance(d, GeoDrawing) else d


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _distinct(*paths) -> None:
    real = [os.path.abspath(p) for p in paths if p not in (None, "-")]
    if len(set(real)) != len(real):
        raise UsageError("input, output, report and log paths must all differ")


def _edge_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise UsageError(f"expected comma-separated edge ids, got {text!r}") from None


def resolve_seed(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _pool_map(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- subcommands -----------------------------------------------------------

def cmd_gen(args) -> int:
    _distinct(args.output)
    try:
        g = gen_random(args.family, args.params, detour=args.detour, convex=args.convex,
                       seed=args.seed, box=args.box)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"bad graph family spec: {exc}") from None
    except RuntimeError as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, gdraw.dumps(g))
    summary = {"n": len(g.points), "m": len(g.edges), "seed": args.seed}
    if args.output == "-":
        print(json.dumps(summary, sort_keys=True) if args.json else _kv(summary),
              file=sys.stderr)
    else:
        _emit(args, summary, _kv(summary))
    return EXIT_OK


def _validate_one(path: str) -> dict:
    try:
        d = _load(path)
        if isinstance(d, GeoDrawing):
            d = ingest(d)
    except DegenerateDrawingError as exc:
        return {"file": path, "ok": False, "violations": [{"kind": "degenerate", "detail": str(exc)}]}
    except DrawingFormatError as exc:
        return {"file": path, "ok": False, "violations": [{"kind": "format", "detail": str(exc)}]}
    except UsageError as exc:
        return {"file": path, "error": str(exc)}
    return {"file": path, **validate_drawing(d).to_dict()}


def cmd_validate(args) -> int:
    results = _pool_map(_validate_one, args.inputs, args.jobs)
    code = EXIT_OK
    for res in results:
        if "error" in res:
            print(f"error: {res['error']}", file=sys.stderr)
            code = max(code, EXIT_USAGE)
            continue
        if not res["ok"]:
            code = max(code, EXIT_VIOLATION)
        lines = [f"{res['file']}: {'ok' if res['ok'] else 'INVALID'}"]
        lines += [f"  {v['kind']}: {v['detail']}" for v in res["violations"]]
        _emit(args, res, "\n".join(lines))
    return code


def _stats_one(path: str) -> dict:
    try:
        d = _combinatorial(path)
    except (UsageError, DrawingFormatError, DegenerateDrawingError) as exc:
        return {"file": path, "error": str(exc)}
    report = validate_drawing(d)
    if not report.ok:
        return {"file": path, "invalid": [str(v) for v in report.violations]}
    st = stats(d)
    empty, crossing = classify_edges(d)
    out = {"file": path, "n": d.n_vertices, "m": d.n_edges, **st.to_dict()}
    out["empty_edges"] = sorted(empty)
    out["crossing_edges"] = sorted(crossing)
    return out


def cmd_stats(args) -> int:
    code = EXIT_OK
    for res in _pool_map(_stats_one, args.inputs, args.jobs):
        if "error" in res:
            print(f"error: {res['error']}", file=sys.stderr)
            code = max(code, EXIT_USAGE)
        elif "invalid" in res:
            print(f"{res['file']}: invalid drawing: {res['invalid'][0]}", file=sys.stderr)
            code = max(code, EXIT_VIOLATION)
        else:
            text = (f"{res['file']}: n={res['n']} m={res['m']} cr={res['crossing_points']} "
                    f"k={res['k']} l={res['l']} max_multiplicity={res['max_multiplicity']} "
                    f"simple={res['simple']}")
            _emit(args, res, text)
    return code


def _require_valid(d: Drawing, what: str) -> None:
    report = validate_drawing(d)
    if not report.ok:
        raise Violation(f"{what} is invalid: " + "; ".join(str(v) for v in report.violations[:5]))


def cmd_separator(args) -> int:
    d = _combinatorial(args.input)
    _require_valid(d, args.input)
    h = string_graph(d)
    if args.exact:
        try:
            sep = exact_separator(h, args.exact_cap)
        except SeparatorCapError as exc:
            raise UsageError(f"{exc}; raise --exact-cap or drop --exact") from None
    else:
        sep = find_separator(h, args.exact_cap, args.restarts, seed=args.seed)
    check = verify_separator(h, sep)
    payload = {"n": h.n, "m": h.m, **sep.to_dict(), "verified": check.ok,
               "violations": [str(v) for v in check.violations]}
    text = (f"string graph: n={h.n} m={h.m}\nmethod: {sep.method}\n"
            f"f0: {list(sep.f0)}\nf1: {list(sep.f1)}\nf2: {list(sep.f2)}\n"
            f"ratio: {sep.ratio:.6g}\nbalance: {sep.balance:.6g}\n"
            f"verified: {check.ok}")
    _emit(args, payload, text)
    return EXIT_OK if check.ok else EXIT_VIOLATION


def _step_check(d: Drawing) -> None:
    report = validate_drawing(d)
    if not report.ok:
        raise InvariantError(f"surgery produced an invalid drawing: {report.violations[0]}")


def cmd_normalize(args) -> int:
    _distinct(args.input, args.output, args.log)
    d = _combinatorial(args.input)
    try:
        _require_valid(d, args.input)
    except Violation as exc:
        raise UsageError(str(exc)) from None
    red = set(_edge_list(args.red))
    if any(e >= d.n_edges for e in red):
        raise UsageError(f"--red names edges outside 0..{d.n_edges - 1}")
    _, crossing = classify_edges(d)
    col = {e: (RED if e in red else BLUE) for e in crossing | red}
    with ExitStack() as stack:
        log_to = None
        if args.log:
            log_to = StepLog(stack.enter_context(open(args.log, "w", encoding="utf-8")), keep=False)
        check = _step_check if args.debug_invariants == "step" else None
        out, steps = normalize(d, col, range(d.n_edges), log_to=log_to, check=check)
    if args.debug_invariants != "off":
        _require_valid(out, "normalized drawing")
    _write(args.output, cdraw.dumps(out))
    st = stats(out)
    payload = {"steps": steps, "crossings_in": len(d.crossings),
               "crossings_out": st.crossing_points, "max_multiplicity": st.max_multiplicity,
               "self_crossings": sum(st.self_crossings.values())}
    if args.output != "-":
        _emit(args, payload, _kv(payload))
    return EXIT_OK


def _untangle_one(job: tuple) -> dict:
    path, out_path, report_path, log_path, opts = job
    try:
        d = _combinatorial(path)
    except (UsageError, DrawingFormatError, DegenerateDrawingError) as exc:
        return {"file": path, "exit": EXIT_USAGE, "error": str(exc)}
    report = validate_drawing(d)
    if not report.ok:
        return {"file": path, "exit": EXIT_USAGE,
                "error": "invalid input: " + "; ".join(str(v) for v in report.violations[:5])}
    with ExitStack() as stack:
        log_to = None
        if log_path:
            log_to = StepLog(stack.enter_context(open(log_path, "w", encoding="utf-8")), keep=False)
        try:
            out, rep = untangle(d, exact_cap=opts["exact_cap"], restarts=opts["restarts"],
                                seed=opts["seed"], debug=opts["debug"], log_to=log_to,
                                target_c=opts["target_c"])
        except InvariantError as exc:
            return {"file": path, "exit": EXIT_VIOLATION, "error": f"invariant failed: {exc}"}
    text = cdraw.dumps(out)
    if out_path:
        _write(out_path, text)
    body = _plain(rep.to_dict())
    if report_path:
        _write(report_path, json.dumps(body, indent=1, sort_keys=True) + "\n")
    if not (rep.simple and rep.empty_edges_unchanged and rep.level_invariants_ok):
        code = EXIT_VIOLATION
    elif not rep.lemma_bound_ok or rep.theorem_bound_ok is False or rep.target_met is False:
        code = EXIT_BOUND
    else:
        code = EXIT_OK
    return {"file": path, "exit": code, "report": body}


def cmd_untangle(args) -> int:
    if len(args.inputs) > 1 and not args.out_dir:
        raise UsageError("several inputs need --out-dir")
    if args.out_dir and (args.output or args.report):
        raise UsageError("--out-dir replaces -o and --report")
    if len(args.inputs) > 1 and args.log:
        raise UsageError("--log takes a single input")
    opts = {"exact_cap": args.exact_cap, "restarts": args.restarts, "seed": args.seed,
            "debug": args.debug_invariants, "target_c": args.target_c}
    jobs = []
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for path in args.inputs:
            stem = out_dir / Path(path).stem
            out, rep = f"{stem}.untangled.cdraw", f"{stem}.report.json"
            _distinct(path, out, rep, args.log)
            jobs.append((path, out, rep, args.log, opts))
    else:
        _distinct(args.inputs[0], args.output, args.report, args.log)
        jobs.append((args.inputs[0], args.output, args.report, args.log, opts))
    code = EXIT_OK
    for res in _pool_map(_untangle_one, jobs, args.jobs):
        code = max(code, res["exit"])
        if "error" in res:
            print(f"{res['file']}: {res['error']}", file=sys.stderr)
            continue
        rep = res["report"]
        text = (f"{res['file']}: k={rep['k']} l={rep['l']} cr {rep['crossings_in']} -> "
                f"{rep['final_crossings']} levels={len(rep['levels'])} "
                f"c_hat={rep['c_hat']:.4g} simple={rep['simple']} "
                f"certified={rep['certified']} exit={res['exit']}")
        summary = {"file": res["file"], "exit": res["exit"],
                   **{k: rep[k] for k in ("k", "l", "crossings_in", "final_crossings", "c_hat",
                                          "simple", "certified", "bound_lemma", "bound_theorem")}}
        if args.output != "-":
            _emit(args, summary, text)
    return code


def cmd_render(args) -> int:
    _distinct(args.input, args.output)
    d = _load(args.input)
    coloring = None
    if args.red or args.color_classes:
        comb = ingest(d) if isinstance(d, GeoDrawing) else d
        _, crossing = classify_edges(comb)
        red = set(_edge_list(args.red))
        coloring = {e: (RED if e in red else BLUE) for e in crossing | red}
    try:
        svg = render_svg(d, coloring, width=args.width)
    except RenderError as exc:
        raise Violation(str(exc)) from None
    _write(args.output, svg)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def _params(text: str):
    try:
        return Fraction(text) if "/" in text or "." in text else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"random seed (default: ${SEED_ENV}, else 0)")
    common.add_argument("--exact-cap", type=int, default=DEFAULT_EXACT_CAP,
                        help="largest string graph searched exhaustively")
    common.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS,
                        help="restarts of the heuristic separator")
    common.add_argument("--debug-invariants", choices=DEBUG_LEVELS, default="off",
                        help="re-validate after each level or each step")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--log", metavar="PATH", help="write transformation steps as JSON lines")
    common.add_argument("--jobs", type=int, default=1, help="files processed in parallel")

    p = argparse.ArgumentParser(prog="untangle",
                                description="Redraw graph drawings so edges cross at most once.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a random geometric drawing")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("params", nargs="+", type=_params,
                   help="complete N | bipartite A B | random N P")
    g.add_argument("--convex", action="store_true", help="vertices in convex position")
    g.add_argument("--detour", type=int, default=0, help="max via-points per edge")
    g.add_argument("--box", type=int, default=100_000, help="coordinate range")
    g.add_argument("-o", "--output", default="-")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("validate", parents=[common], help="check drawing consistency")
    v.add_argument("inputs", nargs="+")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("stats", parents=[common], help="crossing counts")
    s.add_argument("inputs", nargs="+")
    s.set_defaults(func=cmd_stats)

    sp = sub.add_parser("separator", parents=[common], help="separator of the string graph")
    sp.add_argument("input")
    sp.add_argument("--exact", action="store_true", help="force the exhaustive search")
    sp.set_defaults(func=cmd_separator)

    n = sub.add_parser("normalize", parents=[common],
                       help="apply the local transformations until no pair crosses twice")
    n.add_argument("input")
    n.add_argument("-o", "--output", required=True)
    n.add_argument("--red", metavar="E,E,...", help="edges coloured red (others blue)")
    n.set_defaults(func=cmd_normalize)

    u = sub.add_parser("untangle", parents=[common], help="run the separator recursion")
    u.add_argument("inputs", nargs="+")
    u.add_argument("-o", "--output", help="output .cdraw (single input)")
    u.add_argument("--report", help="JSON report path (single input)")
    u.add_argument("--out-dir", help="directory for outputs and reports of several inputs")
    u.add_argument("--target-c", type=float, default=None,
                   help="fail with exit 3 if the measured separator ratio exceeds this")
    u.set_defaults(func=cmd_untangle)

    r = sub.add_parser("render", parents=[common], help="draw as SVG")
    r.add_argument("input")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--red", metavar="E,E,...", help="edges drawn red")
    r.add_argument("--color-classes", action="store_true",
                   help="distinguish empty and crossing edges")
    r.add_argument("--width", type=int, default=800)
    r.set_defaults(func=cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.seed = resolve_seed(args.seed)
        if args.jobs < 1 or args.restarts < 1 or args.exact_cap < 0:
            raise UsageError("--jobs and --restarts must be >= 1, --exact-cap >= 0")
        return args.func(args)
    except (UsageError, DrawingFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDrawingError as exc:
        print(f"error: degenerate geometric drawing: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Violation, InvariantError) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
