"""Command-line front end.

Every subcommand reads files, prints a plain-text report on stdout and
returns 0, or 1 when the computation finds a violated property or a domain
error.  Usage errors exit with 2.  ``SFK_LOG=debug`` or ``SFK_LOG=info``
turns on logging to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .contact_handles import run_script
from .diagram_core import DiagramError, enumerate_generators, has_tags, relative_gradings, validate
from .differential import differential_matrix
from .flinalg import BasisMismatch, F2Matrix, F2Vector, NotAComplex, homology, label_text
from .formats import (format_script, parse_diagram_file, parse_matrix_file, parse_open_book_file,
                      parse_route, parse_script, parse_step, serialize_diagram, serialize_open_book)
from .open_book import (check_open_book, eh_data, eh_routes_agree, handle_data, positive_stabilize,
                        stabilization_check)
from .pairings import (PairingContext, check_turnaround_duality, cotrace_is_cycle, gram_matrix, trace_descends,
                       trace_is_chain_map, trace_matrix, trace_pipeline, zigzag_identities)
from .polygons import triangle_matrix, validate_triple

log = logging.getLogger("sfkit")


class CommandFailed(Exception):
    """A check ran and its answer is negative; the report is still printed."""


def _vector_text(v: F2Vector) -> str:
    labels = v.labels()
    return " + ".join(label_text(x) for x in labels) if labels else "0"


def _is_book(path: str) -> bool:
    text = Path(path).read_text()
    return any(line.strip().split()[:1] in (["SUBPAGE"], ["ARCS"], ["MONODROMY"]) for line in text.splitlines()
               if line.strip())


def _matrix_report(m: F2Matrix, out: list[str]) -> None:
    out.append("MATRIX")
    out.append(m.triplets().rstrip("\n"))
    out.append("IMAGES")
    for g in m.domain:
        out.append(f"{label_text(g)} -> {_vector_text(F2Vector.from_labels(m.codomain, m.image(g)))}")


# ------------------------------------------------------------ commands
def cmd_validate(args, out: list[str]) -> None:
    if _is_book(args.file):
        pob = parse_open_book_file(args.file)
        check_open_book(pob)
        out.append(f"valid open book: {len(pob.arcs)} basis arcs")
        return
    d = parse_diagram_file(args.file, validate=False)
    problems = validate(d, balanced=not args.unbalanced)
    if problems:
        out += [f"problem: {p}" for p in problems]
        raise CommandFailed("invalid diagram")
    out.append(f"valid: {len(enumerate_generators(d))} generators")


def cmd_sfh(args, out: list[str]) -> None:
    d = parse_diagram_file(args.file)
    rank, reps = homology(differential_matrix(d))
    out.append(f"rank {rank}")
    out += [f"  {_vector_text(v)}" for v in reps]


def cmd_gens(args, out: list[str]) -> None:
    d = parse_diagram_file(args.file)
    gens = enumerate_generators(d, args.first, args.second)
    out.append(f"{len(gens)} generators")
    out += [f"  {label_text(g)}" for g in gens]


def cmd_grade(args, out: list[str]) -> None:
    d = parse_diagram_file(args.file)
    gens = enumerate_generators(d)
    if not gens:
        out.append("no generators")
        return
    ref = gens[0]
    tagged = has_tags(d)
    out.append(f"relative to {label_text(ref)}")
    for g in gens:
        gr = relative_gradings(d, g, ref)
        if gr is None:
            out.append(f"  {label_text(g)} unrelated")
        elif tagged:
            out.append(f"  {label_text(g)} gr={gr[0]} gr_w={gr[1]} gr_z={gr[2]} A={gr[3]}")
        else:
            out.append(f"  {label_text(g)} gr={gr[0]}")


def cmd_handle(args, out: list[str]) -> None:
    d = parse_diagram_file(args.file)
    step = parse_step(" ".join(args.step))
    new, m = run_script(d, [step])
    out.append(serialize_diagram(new).rstrip("\n"))
    _matrix_report(m, out)


def cmd_script(args, out: list[str]) -> None:
    d = parse_diagram_file(args.file)
    script = parse_script(Path(args.script).read_text(), source=args.script)
    new, m = run_script(d, script)
    out.append(serialize_diagram(new).rstrip("\n"))
    _matrix_report(m, out)


def cmd_eh(args, out: list[str]) -> None:
    pob = parse_open_book_file(args.file)
    if args.script:
        out.append(format_script(handle_data(pob)[2]).rstrip("\n"))
        return
    d, v = eh_data(pob)
    rank, _ = homology(differential_matrix(d.reversed()))
    out.append(f"generators {len(enumerate_generators(d))}")
    out.append(f"EH {_vector_text(v)}")
    out.append(f"rank {rank}")
    agree = eh_routes_agree(pob)
    out.append("via handles: agree" if agree else "via handles: DIFFER")
    if not agree:
        raise CommandFailed("the two constructions of the contact class differ")


def cmd_stabilize(args, out: list[str]) -> None:
    pob = parse_open_book_file(args.file)
    path = parse_route(args.path)
    result = stabilization_check(pob, path)
    out.append(f"ranks {result['ranks'][0]} {result['ranks'][1]}")
    out.append(f"stabilization point {result['point']}")
    out.append("isomorphic to compound stabilization: " + ("yes" if result["isomorphism"] else "no"))
    if result["agree"] is not None:
        out.append("classes agree: " + ("yes" if result["agree"] else "no"))
    if args.output:
        Path(args.output).write_text(serialize_open_book(positive_stabilize(pob, path)))
        out.append(f"wrote {args.output}")
    if result["agree"] is False or result["ranks"][0] != result["ranks"][1]:
        raise CommandFailed("stabilization changed the invariant")


def cmd_triangle(args, out: list[str]) -> None:
    t = parse_diagram_file(args.file)
    report = validate_triple(t)
    if not report.ok:
        out += [f"problem: {p}" for p in report.problems]
        raise CommandFailed("invalid triple")
    out.append(f"admissible {report.admissible} triple-nice {report.triple_nice}")
    _matrix_report(triangle_matrix(t), out)


def cmd_trace(args, out: list[str]) -> None:
    d = parse_diagram_file(args.file)
    if d.curve_ids["gamma"]:
        pipeline = trace_pipeline(d)
        kronecker = trace_matrix(PairingContext(d.pair("alpha", "beta")))
        same = pipeline.reindex(kronecker.domain, kronecker.codomain) == kronecker
        out.append("pipeline equals Kronecker pairing: " + ("yes" if same else "no"))
        _matrix_report(pipeline, out)
        if not same:
            raise CommandFailed("pipeline differs from the Kronecker pairing")
        return
    ctx = PairingContext(d)
    checks = {
        "gram is identity": gram_matrix(ctx) == F2Matrix.identity(ctx.generators),
        "trace is a chain map": trace_is_chain_map(ctx),
        "cotrace is a cycle": cotrace_is_cycle(ctx),
        "trace descends to homology": trace_descends(ctx),
        "zig-zag identities": all(zigzag_identities(ctx)),
    }
    for name, ok in checks.items():
        out.append(f"{name}: {'yes' if ok else 'no'}")
    if not all(checks.values()):
        raise CommandFailed("a pairing property failed")


def cmd_dual_check(args, out: list[str]) -> None:
    forward = parse_matrix_file(args.forward)
    turned = parse_matrix_file(args.turned)
    if check_turnaround_duality(forward, turned):
        out.append("DUAL OK")
    else:
        out.append("DUAL MISMATCH")
        raise CommandFailed("not the transpose")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sfkit", description="Sutured Floer chain-level computations.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    s = sub.add_parser("validate", help="check a diagram or open book file")
    s.add_argument("file")
    s.add_argument("--unbalanced", action="store_true", help="allow different numbers of alpha and beta curves")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("sfh", help="homology rank and cycle representatives")
    s.add_argument("file")
    s.set_defaults(func=cmd_sfh)

    s = sub.add_parser("gens", help="list generators")
    s.add_argument("file")
    s.add_argument("--first", default="alpha")
    s.add_argument("--second", default="beta")
    s.set_defaults(func=cmd_gens)

    s = sub.add_parser("grade", help="relative gradings against the first generator")
    s.add_argument("file")
    s.set_defaults(func=cmd_grade)

    s = sub.add_parser("handle", help="apply one script step, e.g. H1 e0@1/3 e0@2/3")
    s.add_argument("file")
    s.add_argument("step", nargs="+")
    s.set_defaults(func=cmd_handle)

    s = sub.add_parser("script", help="run a handle script")
    s.add_argument("file")
    s.add_argument("script")
    s.set_defaults(func=cmd_script)

    s = sub.add_parser("eh", help="contact class of a partial open book")
    s.add_argument("file")
    s.add_argument("--script", action="store_true", help="print the equivalent handle script instead")
    s.set_defaults(func=cmd_eh)

    s = sub.add_parser("stabilize", help="positive stabilization along a path")
    s.add_argument("file")
    s.add_argument("path", help="start;crossings;end")
    s.add_argument("-o", "--output", help="write the stabilized open book here")
    s.set_defaults(func=cmd_stabilize)

    s = sub.add_parser("triangle", help="triangle map of a triple diagram")
    s.add_argument("file")
    s.set_defaults(func=cmd_triangle)

    s = sub.add_parser("trace", help="trace and cotrace checks, or the trace pipeline on a triple")
    s.add_argument("file")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("dual-check", help="is the second matrix the transpose of the first")
    s.add_argument("forward")
    s.add_argument("turned")
    s.set_defaults(func=cmd_dual_check)
    return p


def _configure_logging() -> None:
    level = os.environ.get("SFK_LOG", "").lower()
    if level in ("debug", "info"):
        logging.basicConfig(level=getattr(logging, level.upper()), stream=sys.stderr,
                            format="%(levelname)s %(name)s: %(message)s")


def run_command(argv: list[str]) -> tuple[int, str]:
    """Run one command; returns (exit code, stdout text).  Usage errors raise SystemExit(2)."""
    args = build_parser().parse_args(argv)
    out: list[str] = []
    try:
        args.func(args, out)
    except CommandFailed as exc:
        out.append(f"error: {exc}")
        return 1, "\n".join(out) + "\n"
    except (DiagramError, BasisMismatch, NotAComplex, ValueError, OSError) as exc:
        out.append(f"error: {exc}")
        return 1, "\n".join(out) + "\n"
    return 0, "\n".join(out) + "\n"


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
