"""JSON encoding of bases, modules, diagrams, pairs, graded modules and groups.

Ring elements are coefficient arrays (lowest degree first); each coefficient
is an integer or an ``"a/b"`` string.  Matrices are row-major.  Lattice
points are keyed as ``"(u1,u2)"``; edges as ``"(u)->i"`` and pseudo-periods
as ``"(a),i"`` with 1-based directions.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .diagram import BoxDiagram, BoxPoset
from .errors import SchemaError
from .parabolic import DivisorTriple, ExtendablePair
from .ring import FIELD, POLY_LINE, QUOTIENT, BaseRing, Field, FpModule, ModuleMap

SCHEMA_VERSION = 1

_POINT = re.compile(r"^\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)$")
_EDGE = re.compile(r"^(\(.*\))\s*->\s*(\d+)$")
_RHO = re.compile(r"^(\(.*\))\s*,\s*(\d+)$")


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def _fields(doc, required, optional=(), where="document"):
    _require(isinstance(doc, dict), f"{where} must be an object")
    unknown = set(doc) - set(required) - set(optional)
    _require(not unknown, f"unknown fields in {where}: {sorted(unknown)}")
    missing = [k for k in required if k not in doc]
    _require(not missing, f"missing fields in {where}: {missing}")


# ---------------------------------------------------------------------------
# scalars, elements, matrices


def scalar_out(a):
    a = Fraction(a)
    return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def scalar_in(field: Field, v):
    if isinstance(v, bool):
        raise SchemaError("booleans are not scalars")
    if isinstance(v, int):
        return field(v)
    if isinstance(v, str):
        try:
            return field(Fraction(v))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad scalar {v!r}") from exc
    raise SchemaError(f"bad scalar {v!r}")


def element_out(a):
    return [scalar_out(c) for c in a]


def element_in(ring: BaseRing, v):
    _require(isinstance(v, list), f"ring element must be a coefficient array, got {v!r}")
    try:
        return ring.element([scalar_in(ring.field, c) for c in v])
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def matrix_out(rows):
    return [[element_out(e) for e in row] for row in rows]


def matrix_in(ring, v, nrows, ncols, where="matrix"):
    _require(isinstance(v, list) and len(v) == nrows, f"{where} needs {nrows} rows")
    out = []
    for row in v:
        _require(isinstance(row, list) and len(row) == ncols, f"{where} needs {ncols} columns")
        out.append(tuple(element_in(ring, e) for e in row))
    return tuple(out)


# ---------------------------------------------------------------------------
# bases and modules


def field_out(F: Field) -> str:
    return "Q" if not F.p else f"Fp:{F.p}"


def field_in(v) -> Field:
    _require(isinstance(v, str), "field must be a string")
    if v == "Q":
        return Field(0)
    m = re.fullmatch(r"Fp:(\d+)", v)
    _require(m is not None, f"bad field {v!r}")
    try:
        return Field(int(m.group(1)))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def base_out(R: BaseRing) -> dict:
    d = {"kind": R.kind, "field": field_out(R.field)}
    if R.kind == QUOTIENT:
        d["modulus"] = element_out(R.modulus)
    return d


def base_in(doc) -> BaseRing:
    _fields(doc, ("kind", "field"), ("modulus",), "base")
    F = field_in(doc["field"])
    kind = doc["kind"]
    _require(kind in (FIELD, POLY_LINE, QUOTIENT), f"bad base kind {kind!r}")
    if kind == QUOTIENT:
        _require("modulus" in doc, "quotient base needs a modulus")
        modulus = [scalar_in(F, c) for c in doc["modulus"]]
        return BaseRing.quotient(F, modulus)
    _require("modulus" not in doc, f"{kind} takes no modulus")
    return BaseRing(kind, F)


def module_out(M: FpModule) -> dict:
    rels = [[c[i] for c in M.relations] for i in range(M.ngens)]
    return {"generators": M.ngens, "relations": matrix_out(rels)}


def module_in(ring, doc, where="module") -> FpModule:
    _fields(doc, ("generators", "relations"), (), where)
    g = doc["generators"]
    _require(isinstance(g, int) and g >= 0, f"{where}: generators must be a natural number")
    rels = doc["relations"]
    _require(isinstance(rels, list), f"{where}: relations must be a matrix")
    if g == 0:
        _require(all(r == [] for r in rels), f"{where}: relations of a zero-generator module")
        return FpModule.zero(ring)
    _require(len(rels) == g, f"{where}: relations need one row per generator")
    ncols = len(rels[0]) if rels else 0
    rows = matrix_in(ring, rels, g, ncols, where)
    cols = tuple(tuple(rows[i][j] for i in range(g)) for j in range(ncols))
    return FpModule(ring, g, cols)


# ---------------------------------------------------------------------------
# points and keys


def point_key(u) -> str:
    return "(" + ",".join(str(a) for a in u) + ")"


def point_in(s) -> tuple:
    _require(isinstance(s, str), f"bad point {s!r}")
    m = _POINT.match(s.strip())
    _require(m is not None, f"bad point {s!r}")
    return tuple(int(a) for a in m.group(1).split(","))


def parse_point_option(s: str) -> tuple:
    s = s.strip()
    if not s.startswith("("):
        s = f"({s})"
    return point_in(s)


# ---------------------------------------------------------------------------
# diagrams and pairs


def _objects_in(ring, box, doc):
    _require(isinstance(doc, dict), "objects must be an object")
    objects = {}
    for k, v in doc.items():
        u = point_in(k)
        _require(u in box, f"object at {k} outside the box")
        objects[u] = module_in(ring, v, f"object {k}")
    _require(set(objects) == set(box.points()), "objects must cover the box")
    return objects


def _edges_in(ring, box, objects, doc):
    _require(isinstance(doc, dict), "edges must be an object")
    edges = {}
    for k, v in doc.items():
        m = _EDGE.match(k)
        _require(m is not None, f"bad edge key {k!r}")
        u, i = point_in(m.group(1)), int(m.group(2)) - 1
        _require(u in box and 0 <= i < box.n and u[i] < box.r[i], f"edge {k} not in the box")
        v_pt = tuple(a + (1 if j == i else 0) for j, a in enumerate(u))
        rows = matrix_in(ring, v, objects[v_pt].ngens, objects[u].ngens, f"edge {k}")
        edges[(u, i)] = ModuleMap(objects[u], objects[v_pt], rows, False)
    _require(set(edges) == set(box.edges()), "edges must cover every box edge")
    return edges


def diagram_out(D: BoxDiagram) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "base": base_out(D.ring),
        "r": list(D.box.r),
        "objects": {point_key(u): module_out(M) for u, M in D.objects.items()},
        "edges": {f"{point_key(u)}->{i + 1}": matrix_out(f.matrix)
                  for (u, i), f in D.edges.items()},
    }


def pair_out(P: ExtendablePair) -> dict:
    d = diagram_out(P.diagram)
    d["divisors"] = [{"s": element_out(dv.section), "r": dv.r} for dv in P.divisors]
    d["rho"] = {f"{point_key(a)},{i + 1}": matrix_out(f.matrix) for (a, i), f in P.rho.items()}
    return d


def _check_version(doc):
    _require(isinstance(doc, dict), "document must be an object")
    _require(doc.get("schema") == SCHEMA_VERSION,
             f"schema version must be {SCHEMA_VERSION}, got {doc.get('schema')!r}")


def diagram_in(doc) -> BoxDiagram:
    """A bare diagram document (no divisors); validation is left to the caller."""
    _check_version(doc)
    _fields(doc, ("schema", "base", "r", "objects", "edges"), (), "diagram")
    ring = base_in(doc["base"])
    box = _box_in(doc["r"])
    objects = _objects_in(ring, box, doc["objects"])
    return BoxDiagram(box, objects, _edges_in(ring, box, objects, doc["edges"]), False)


def _box_in(r):
    _require(isinstance(r, list) and r and all(isinstance(a, int) and a >= 0 for a in r),
             "r must be a nonempty list of natural numbers")
    return BoxPoset(tuple(r))


def pair_in(doc, check: bool = False) -> ExtendablePair:
    _check_version(doc)
    _fields(doc, ("schema", "base", "divisors", "objects", "edges", "rho"), ("r",), "pair")
    ring = base_in(doc["base"])
    divs = doc["divisors"]
    _require(isinstance(divs, list) and divs, "divisors must be a nonempty list")
    divisors = []
    for dv in divs:
        _fields(dv, ("s", "r"), (), "divisor")
        _require(isinstance(dv["r"], int) and dv["r"] >= 1, "divisor index must be >= 1")
        divisors.append(DivisorTriple(element_in(ring, dv["s"]), dv["r"]))
    box = BoxPoset(tuple(d.r for d in divisors))
    if "r" in doc:
        _require(tuple(doc["r"]) == box.r, "r disagrees with the divisor indices")
    objects = _objects_in(ring, box, doc["objects"])
    edges = _edges_in(ring, box, objects, doc["edges"])
    _require(isinstance(doc["rho"], dict), "rho must be an object")
    rho = {}
    for k, v in doc["rho"].items():
        m = _RHO.match(k)
        _require(m is not None, f"bad rho key {k!r}")
        a, i = point_in(m.group(1)), int(m.group(2)) - 1
        _require(a in box and 0 <= i < box.n and a[i] == box.r[i], f"rho {k} not at a top face")
        low = tuple(x - (box.r[i] if j == i else 0) for j, x in enumerate(a))
        rows = matrix_in(ring, v, objects[low].ngens, objects[a].ngens, f"rho {k}")
        rho[(a, i)] = ModuleMap(objects[a], objects[low], rows, False)
    D = BoxDiagram(box, objects, edges, False)
    return ExtendablePair(tuple(divisors), D, rho, check)


# ---------------------------------------------------------------------------
# graded modules and groups


def graded_out(M) -> dict:
    return {"schema": SCHEMA_VERSION, "field": field_out(M.ring.field), "r": M.r,
            "pieces": [module_out(P) for P in M.pieces],
            "t_action": [matrix_out(t.matrix) for t in M.t_action]}


def graded_in(doc):
    from .equivariant import GradedLineModule

    _check_version(doc)
    _fields(doc, ("schema", "field", "r", "pieces", "t_action"), (), "graded module")
    ring = BaseRing.poly_line(field_in(doc["field"]))
    r = doc["r"]
    _require(isinstance(r, int) and r >= 1, "r must be a positive integer")
    _require(isinstance(doc["pieces"], list) and len(doc["pieces"]) == r, "need r pieces")
    _require(isinstance(doc["t_action"], list) and len(doc["t_action"]) == r, "need r t-maps")
    pieces = [module_in(ring, p, f"piece {q}") for q, p in enumerate(doc["pieces"])]
    t = []
    for q, m in enumerate(doc["t_action"]):
        tgt = pieces[(q + 1) % r]
        rows = matrix_in(ring, m, tgt.ngens, pieces[q].ngens, f"t-map {q}")
        t.append(ModuleMap(pieces[q], tgt, rows, False))
    return GradedLineModule(r, tuple(pieces), tuple(t))


def group_in(doc):
    _check_version(doc)
    _fields(doc, ("schema", "field", "dim", "generators"), (), "group")
    F = field_in(doc["field"])
    n = doc["dim"]
    _require(isinstance(n, int) and n >= 1, "dim must be a positive integer")
    gens = doc["generators"]
    _require(isinstance(gens, list) and gens, "need at least one generator")
    out = []
    for g in gens:
        _require(isinstance(g, list) and len(g) == n and
                 all(isinstance(row, list) and len(row) == n for row in g),
                 f"generators must be {n}x{n} matrices")
        out.append(tuple(tuple(scalar_in(F, v) for v in row) for row in g))
    return F, out


def decomposition_out(d) -> dict:
    return d.as_dict()
