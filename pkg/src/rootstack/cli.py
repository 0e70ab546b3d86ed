"""Command-line entry point: ``rootstack <command> [--input FILE] [--output FILE]``.

Exit status is 0 on success, 1 on a domain error (reported as JSON with the
error name and location) and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from . import serialize as ser
from .errors import RootStackError, SchemaError

COMMANDS = ("validate", "extend", "decompose", "equivariant", "reflection", "selfcheck")


def _jsonable(obj):
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if hasattr(obj, "as_dict"):
        return _jsonable(obj.as_dict())
    return str(obj)


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def _load(path):
    if path is None:
        raise SchemaError("this command needs --input")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from exc


def fixture_path(name: str):
    return resources.files("rootstack") / "fixtures" / name


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> dict:
    from .diagram import validate
    from .parabolic import validate_pair, window_equivalence

    doc = _load(args.input)
    if isinstance(doc, dict) and "divisors" not in doc:
        D = ser.diagram_in(doc)
        rep = validate(D)
        return {"command": "validate", "kind": "diagram", "ok": rep.ok, "diagram": rep.as_dict()}
    P = ser.pair_in(doc, check=False)
    rep = validate_pair(P)
    out = {"command": "validate", "kind": "pair", "ok": rep.ok, "pair": rep.as_dict()}
    if rep.ok:
        out["window"] = window_equivalence(P).as_dict()
    return out


def cmd_extend(args) -> dict:
    from .parabolic import evaluate, evaluate_edge

    P = ser.pair_in(_load(args.input), check=True)
    if args.point is None:
        raise SchemaError("extend needs --point")
    v = ser.parse_point_option(args.point)
    if len(v) != P.n:
        raise SchemaError(f"--point needs {P.n} coordinates")
    val = evaluate(P, v)
    edges = {}
    for i in range(P.n):
        f = evaluate_edge(P, v, i)
        edges[str(i + 1)] = ser.matrix_out(f.matrix)
    return {"command": "extend", "point": list(v), "residue": list(val.residue),
            "twist": list(val.twist), "module": ser.module_out(val.module), "edges": edges}


def cmd_decompose(args) -> dict:
    from .localize import decompose

    P = ser.pair_in(_load(args.input), check=True)
    d = decompose(P)
    out = {"command": "decompose"}
    out.update(d.as_dict())
    return out


def cmd_equivariant(args) -> dict:
    from .equivariant import change_of_basis, compare, free_graded, skyscraper_graded
    from .ring import BaseRing, Field

    if args.input is not None:
        M = ser.graded_in(_load(args.input))
        if args.r is not None and args.r != M.r:
            raise SchemaError(f"--r {args.r} disagrees with the module's r = {M.r}")
        out = {"command": "equivariant"}
        out.update(compare(M))
        return out
    if args.r is None:
        raise SchemaError("equivariant needs --input or --r")
    if args.r < 1:
        raise SchemaError("--r must be positive")
    ring = BaseRing.poly_line(Field(0))
    rows = []
    for j in range(args.r):
        for name, M in (("free", free_graded(ring, args.r, j)),
                        ("skyscraper", skyscraper_graded(ring, args.r, j))):
            rep = compare(M)
            rows.append({"module": name, "character_index": j,
                         "character": rep["character"], "decomposition": rep["decomposition"]})
    B = change_of_basis(0, args.r)
    return {"command": "equivariant", "r": args.r, "change_of_basis": [list(b) for b in B],
            "checks": rows, "ok": True}


def cmd_reflection(args) -> dict:
    from .reflection import abelian_inertia_check, close, sweep

    if args.input is None:
        reports = [sweep(p) for p in (7, 13)]
        ok = all(not r.counterexamples for r in reports)
        return {"command": "reflection", "sweep": [r.as_dict() for r in reports], "ok": ok}
    F, gens = ser.group_in(_load(args.input))
    G = close(gens, F)
    v = abelian_inertia_check(G)
    out = {"command": "reflection", "order": G.order, "reflections": len(G.reflections),
           "mirrors": [[ser.scalar_out(a) for a in m] for m in G.distinct_mirrors()]}
    out.update(v.as_dict())
    return out


def cmd_selfcheck(args) -> dict:
    from .selfcheck import run_selfcheck

    return run_selfcheck(args.seed if args.seed is not None else 0)


HANDLERS = {
    "validate": cmd_validate,
    "extend": cmd_extend,
    "decompose": cmd_decompose,
    "equivariant": cmd_equivariant,
    "reflection": cmd_reflection,
    "selfcheck": cmd_selfcheck,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rootstack",
                                     description="K-theory of root stacks via extendable pairs")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", help="input JSON document")
        p.add_argument("--output", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, help="seed for randomized checks")
        if name == "extend":
            p.add_argument("--point", help="lattice point, e.g. 5 or 1,-2")
        else:
            p.set_defaults(point=None)
        if name == "equivariant":
            p.add_argument("--r", type=int, help="order of the cyclic group")
        else:
            p.set_defaults(r=None)
    return parser


def _emit(text: str, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        report = HANDLERS[args.command](args)
    except SchemaError as exc:
        _emit(dumps({"error": {"name": exc.name, "message": str(exc),
                               "location": exc.location}}), args.output)
        return 2
    except RootStackError as exc:
        _emit(dumps({"error": {"name": exc.name, "message": str(exc),
                               "location": exc.location}}), args.output)
        return 1
    _emit(dumps(report), args.output)
    return 0 if report.get("ok", True) else 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
