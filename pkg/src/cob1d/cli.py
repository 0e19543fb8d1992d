"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 failed consistency check, 3 size
above the enumeration cap.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any

from .category import Morphism, coefficient_parser, compose
from .diagrams import NDiagram, enumerate_diagrams, enumerate_orbits, max_n, orbit_cardinality
from .errors import ConsistencyError, ResourceLimitError
from .evaluation import EvaluationSpec, LinearParams, symbolic_linear_spec
from .gram import build_gram, gram_det, state_space_rank, verify_structure

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _diagram_text(x: NDiagram) -> str:
    parts = []
    for c in x.components:
        name = "arc" if len(c.endpoints) == 1 else "cup"
        parts.append(f"{name}({','.join(map(str, c.endpoints))}){'*' if c.dots else ''}")
    return " ".join(parts) if parts else "(empty)"


def _cap(args) -> int:
    return max(args.n, max_n()) if args.force else max_n()


def _spec(args, default_symbolic: bool = True) -> EvaluationSpec:
    if args.params is not None and args.symbolic:
        raise UsageError("--params and --symbolic are mutually exclusive")
    if args.params is not None:
        try:
            return LinearParams.parse(args.params, args.modulus).to_spec()
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(str(exc)) from exc
    if args.symbolic or default_symbolic:
        return symbolic_linear_spec()
    raise UsageError("this command needs --params")


def _csv(rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_enumerate(args) -> tuple[str, int]:
    diagrams = enumerate_diagrams(args.n, _cap(args))
    if args.format == "json":
        return _json([x.to_cobordism().to_dict() for x in diagrams]), EXIT_OK
    if args.format == "csv":
        rows = [["index", "a", "b", "c", "d", "encoding"]]
        rows += [[i, *x.signature.as_tuple(), x.encoding.decode()] for i, x in enumerate(diagrams)]
        return _csv(rows), EXIT_OK
    lines = [f"{i}\t{x.signature}\t{_diagram_text(x)}" for i, x in enumerate(diagrams)]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_orbits(args) -> tuple[str, int]:
    orbits = enumerate_orbits(args.n)
    rows = [{"a": s.a, "b": s.b, "c": s.c, "d": s.d, "def": s.defects, "comp": s.comp,
             "size": orbit_cardinality(s)} for s in orbits]
    if args.format == "json":
        return _json(rows), EXIT_OK
    header = ["a", "b", "c", "d", "def", "comp", "size"]
    if args.format == "csv":
        return _csv([header] + [[r[k] for k in header] for r in rows]), EXIT_OK
    lines = ["\t".join(header)] + ["\t".join(str(r[k]) for k in header) for r in rows]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_gram(args) -> tuple[str, int]:
    report = build_gram(_spec(args), args.n, args.twisted, _cap(args))
    rows = [[str(v) for v in r] for r in report.matrix.to_rows()]
    if args.format == "json":
        return _json({
            "n": report.n,
            "kind": report.kind,
            "rows": [x.to_cobordism().to_dict() for x in report.ordering],
            "columns": [x.to_cobordism().to_dict() for x in report.column_labels()],
            "matrix": rows,
            "is_lower_triangular": report.is_lower_triangular,
            "diagonal_product": str(report.diagonal_product),
            "iota_sign": report.iota_sign,
        }), EXIT_OK
    if args.format == "csv":
        return _csv(rows), EXIT_OK
    return "".join("\t".join(r) + "\n" for r in rows), EXIT_OK


def cmd_det(args) -> tuple[str, int]:
    result = gram_det(_spec(args), args.n, args.twisted, _cap(args),
                      modular_points=args.points, seed=args.seed)
    if args.format == "json":
        return _json(result.to_dict()), EXIT_OK
    return f"{result.det}\n", EXIT_OK


def cmd_rank(args) -> tuple[str, int]:
    spec = _spec(args, default_symbolic=False)
    if args.symbolic:
        raise UsageError("rank needs numeric --params")
    r = state_space_rank(spec, args.n, _cap(args))
    size = len(enumerate_diagrams(args.n, _cap(args)))
    if args.format == "json":
        return _json({"n": args.n, "rank": r, "size": size}), EXIT_OK
    return f"{r}\n", EXIT_OK


def _read_morphism(path: str, spec: EvaluationSpec) -> Morphism:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return Morphism.from_dict(data, coefficient_parser(spec))
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def cmd_compose(args) -> tuple[str, int]:
    spec = _spec(args)
    f = _read_morphism(args.first, spec)
    g = _read_morphism(args.second, spec)
    if f.m != g.n:
        raise UsageError(f"cannot compose {f.n}->{f.m} with {g.n}->{g.m}")
    h = compose(spec, f, g)
    return _json(h.to_dict()), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    report = verify_structure(args.n, _cap(args))
    status = EXIT_OK if report.passed else EXIT_CONSISTENCY
    if args.format == "text":
        lines = [f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}" for c in report.checks]
        lines.append(f"determinant: {report.determinant}")
        lines += [f"NOTE {note['kind']}: reference {note['reference']}, "
                  f"computed {note['computed']}" for note in report.notes]
        return "\n".join(lines) + "\n", status
    return _json(report.to_dict()), status


COMMANDS = {
    "enumerate": cmd_enumerate,
    "orbits": cmd_orbits,
    "gram": cmd_gram,
    "det": cmd_det,
    "rank": cmd_rank,
    "compose": cmd_compose,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default=None)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    common.add_argument("--force", action="store_true", help="ignore the enumeration cap")

    sized = _Parser(add_help=False)
    sized.add_argument("--n", type=int, required=True)

    scalars = _Parser(add_help=False)
    scalars.add_argument("--params", help='e.g. "beta0=2,beta1=1,gamma0=-1,gamma1=3/2"')
    scalars.add_argument("--symbolic", action="store_true",
                         help="use indeterminates b0,b1,g0,g1")
    scalars.add_argument("--modulus", type=int, help="reduce --params into GF(p)")

    parser = _Parser(prog="cob1d", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("enumerate", parents=[common, sized], help="list n-diagrams in order")
    sub.add_parser("orbits", parents=[common, sized], help="list orbit signatures")
    g = sub.add_parser("gram", parents=[common, sized, scalars], help="print a Gram matrix")
    g.add_argument("--twisted", action="store_true")
    d = sub.add_parser("det", parents=[common, sized, scalars], help="Gram determinant")
    d.add_argument("--twisted", action="store_true")
    d.add_argument("--points", type=int, default=0,
                   help="extra modular cross-checks at random points")
    d.add_argument("--seed", type=int, default=0)
    sub.add_parser("rank", parents=[common, sized, scalars], help="dimension of A(n)")
    c = sub.add_parser("compose", parents=[common, scalars], help="compose two morphisms")
    c.add_argument("--first", required=True, help="JSON file for f: n -> m")
    c.add_argument("--second", required=True, help="JSON file for g: m -> k")
    sub.add_parser("verify", parents=[common, sized], help="check triangular structure")
    return parser


def _emit_error(kind: str, message: str, fmt: str | None) -> None:
    if fmt == "json":
        sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    else:
        sys.stderr.write(f"cob1d: {kind}: {message}\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    fmt = None
    try:
        args = parser.parse_args(argv)
        if args.format is None:
            args.format = "json" if args.command == "verify" else "text"
        fmt = args.format
        if getattr(args, "n", 0) < 0:
            raise UsageError("--n must be nonnegative")
        out, status = COMMANDS[args.command](args)
    except UsageError as exc:
        _emit_error("usage", str(exc), fmt)
        return EXIT_USAGE
    except ConsistencyError as exc:
        _emit_error("consistency", str(exc), fmt)
        return EXIT_CONSISTENCY
    except ResourceLimitError as exc:
        _emit_error("resource", str(exc), fmt)
        return EXIT_RESOURCE
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
