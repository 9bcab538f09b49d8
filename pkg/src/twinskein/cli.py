"""Command-line front end.

Exit codes: 0 success, 1 domain failure (validation violations or an
unresolved evaluation, distinguished by the printed code), 2 I/O or
parse errors.
"""

from __future__ import annotations

import argparse
import sys
import time

from dataclasses import dataclass

from .acceptance import run_all
from .alexander import alexander_symmetrized, conway
from .constructions import artin_spin, connect_sum_twin, table_knot, twin_closure
from .diagram import (
    DiagramError,
    ParseError,
    TWO_KNOT,
    parse as parse_diagram,
    serialize,
    validate,
)
from .laurent import LaurentError, LaurentPoly
from .skein import SkeinConfig, evaluate, export_trace

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


@dataclass
class RunReport:
    """What one command run did: outcome plus engine statistics."""

    command: str
    input_path: str
    outcome: str
    stats: str
    elapsed_ms: float

    def print_stats(self) -> None:
        print(f"stats: {self.stats} elapsed_ms={self.elapsed_ms:.1f}",
              file=sys.stderr)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _load_diagram(path: str):
    return parse_diagram(_read_input(path))


def cmd_validate(args) -> int:
    d = parse_diagram(_read_input(args.path), strict=False)
    report = validate(d)
    for v in report.violations:
        print(f"{v.code}: {v.message} @ {v.location}")
    if report.ok:
        print("ok")
        return EXIT_OK
    return EXIT_DOMAIN


def _skein_config(args) -> SkeinConfig:
    multiplier = (LaurentPoly.parse(args.multiplier)
                  if args.multiplier is not None else None)
    kwargs = dict(
        depth_budget=args.depth,
        strategy=args.strategy,
        emit_trace=args.trace is not None,
        use_memo=not args.no_memo,
        parallel=args.parallel,
    )
    if multiplier is not None:
        kwargs["multiplier"] = multiplier
    return SkeinConfig(**kwargs)


def cmd_invariant(args) -> int:
    d = _load_diagram(args.path)
    cfg = _skein_config(args)
    t0 = time.perf_counter()
    result = evaluate(d, cfg)
    elapsed = (time.perf_counter() - t0) * 1000
    report = RunReport(
        command="invariant",
        input_path=args.path,
        outcome=(result.value.render() if result.resolved
                 else f"unresolved: {result.unresolved_reason}"),
        stats=f"nodes={result.stats.nodes_expanded} "
              f"memo_hits={result.stats.memo_hits} "
              f"max_depth={result.stats.max_depth}",
        elapsed_ms=elapsed)
    report.print_stats()
    print(report.outcome)
    if not result.resolved:
        return EXIT_DOMAIN
    if args.trace is not None:
        text = export_trace(result, args.trace)
        if args.trace_out:
            with open(args.trace_out, "w", encoding="utf-8") as f:
                f.write(text + "\n")
        else:
            print(text)
    return EXIT_OK


def cmd_conway(args) -> int:
    if args.knot:
        code = table_knot(args.knot)
    else:
        if not args.path:
            raise DiagramError("conway needs a knot file or --knot NAME")
        d = _load_diagram(args.path)
        if d.mode != TWO_KNOT or d.loops():
            raise DiagramError("conway expects a knot file with a single arc")
        from .constructions import ClassicalKnotCode
        arc = next(c for c in d.components if c.is_arc)
        code = ClassicalKnotCode(arc.passages, dict(d.crossings))
    print(conway(code).render("z"))
    print(alexander_symmetrized(code).render("u"))
    return EXIT_OK


def cmd_spin(args) -> int:
    if args.construction == "artin":
        if not args.knot:
            raise DiagramError("--construction artin requires --knot NAME")
        out = artin_spin(table_knot(args.knot), cut_at=args.cut)
    else:
        if not args.path:
            raise DiagramError(
                f"--construction {args.construction} requires a fixture path")
        k2 = _load_diagram(args.path)
        out = (twin_closure(k2) if args.construction == "closure"
               else connect_sum_twin(k2))
    text = serialize(out) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.suite != "acceptance":
        raise DiagramError(f"unknown suite {args.suite!r}")
    multiplier = (LaurentPoly.parse(args.multiplier)
                  if args.multiplier is not None else None)
    cases = run_all(multiplier)
    width = max(len(c.name) for c in cases)
    all_ok = True
    for c in cases:
        status = "PASS" if c.ok else "FAIL"
        all_ok &= c.ok
        print(f"{status}  {c.name:<{width}}  {c.elapsed_ms:9.1f} ms  {c.detail}")
    print("result:", "PASS" if all_ok else "FAIL")
    return EXIT_OK if all_ok else EXIT_DOMAIN


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twinskein",
        description="Skein-calculus invariants of ribbon twins and 2-knots "
                    "presented as welded Gauss codes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a diagram file")
    p.add_argument("path", help="diagram file ('-' for stdin)")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("invariant",
                       help="evaluate the twin invariant or 2-knot polynomial")
    p.add_argument("path", help="diagram file ('-' for stdin)")
    p.add_argument("--multiplier", default=None,
                   help="skein multiplier as polynomial text (default t - t^-1)")
    p.add_argument("--depth", type=int, default=64, help="depth budget")
    p.add_argument("--strategy", choices=("descending", "first_eligible"),
                   default="descending")
    p.add_argument("--trace", choices=("json", "dot"), default=None,
                   help="emit the resolution tree")
    p.add_argument("--trace-out", default=None,
                   help="write the trace to a file instead of stdout")
    p.add_argument("--no-memo", action="store_true",
                   help="disable memoization")
    p.add_argument("--parallel", action="store_true",
                   help="evaluate skein branches concurrently")
    p.set_defaults(fn=cmd_invariant)

    p = sub.add_parser("conway",
                       help="classical Conway/Alexander oracle")
    p.add_argument("path", nargs="?", default=None,
                   help="knot file ('-' for stdin)")
    p.add_argument("--knot", default=None, help="bundled table knot name")
    p.set_defaults(fn=cmd_conway)

    p = sub.add_parser("spin", help="build a twin diagram")
    p.add_argument("path", nargs="?", default=None,
                   help="two-knot fixture (closure/connsum constructions)")
    p.add_argument("--knot", default=None,
                   help="bundled knot name (artin construction)")
    p.add_argument("--construction", required=True,
                   choices=("artin", "closure", "connsum"))
    p.add_argument("--cut", type=int, default=0,
                   help="cut position for the artin construction")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(fn=cmd_spin)

    p = sub.add_parser("corpus", help="run the bundled acceptance corpus")
    p.add_argument("--suite", default="acceptance")
    p.add_argument("--multiplier", default=None,
                   help="override the skein multiplier for the value criteria "
                        "(perturbation sanity: anything but the default "
                        "breaks them)")
    p.set_defaults(fn=cmd_corpus)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, LaurentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DiagramError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
