"""Extendable pairs: box diagrams with pseudo-period isomorphisms.

With every line bundle trivialized over an affine base, a pseudo-period
isomorphism ``rho_{alpha, alpha - r_i e_i}`` is an honest invertible module
map ``F_alpha -> F_{alpha - r_i e_i}`` and the twist by ``L_u`` is pure
bookkeeping on the integer vector ``u``.
"""

from __future__ import annotations

import itertools
from dataclasses import InitVar, dataclass, field
from functools import cached_property
from typing import Dict, Tuple

from .diagram import BoxDiagram, BoxPoset, Point, shift
from .diagram import validate as validate_diagram
from .errors import CoprimalityViolation, InvalidPair, NotInvertible, RootStackError
from .ring import (
    FIELD,
    POLY_LINE,
    BaseRing,
    FpModule,
    ModuleMap,
    block_map,
    cokernel,
    direct_sum,
    image,
    inverse,
    kernel,
    lift,
)


@dataclass(frozen=True)
class DivisorTriple:
    """A trivialized line bundle with section ``s`` and root index ``r``."""

    section: tuple
    r: int

    def __post_init__(self):
        if int(self.r) < 1:
            raise ValueError("root index must be >= 1")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "section", tuple(self.section))


def check_divisors(ring: BaseRing, divisors) -> tuple:
    """Canonicalize sections and enforce the normal-crossing restrictions."""
    if ring.kind not in (FIELD, POLY_LINE):
        raise ValueError("extendable pairs are supported over Field and PolyLine bases")
    kx = ring.kx
    out = []
    for d in divisors:
        s = ring.element(d.section)
        p = ring.field.p
        if p and d.r % p == 0:
            raise CoprimalityViolation(f"root index {d.r} divisible by the characteristic")
        if ring.kind == POLY_LINE and s and not kx.is_squarefree(s):
            raise CoprimalityViolation(f"section {s} is not squarefree")
        out.append(DivisorTriple(s, d.r))
    if ring.kind == POLY_LINE:
        nonzero = [d.section for d in out if d.section]
        for a, b in itertools.combinations(nonzero, 2):
            if not kx.is_unit(kx.gcd(a, b)):
                raise CoprimalityViolation(f"sections {a} and {b} share a factor")
    return tuple(out)


@dataclass(frozen=True)
class PairReport:
    ok: bool
    failures: tuple = ()

    def as_dict(self):
        return {"ok": self.ok, "failures": [
            {"axiom": ax, "point": list(pt), "directions": [i + 1 for i in dirs]}
            for ax, pt, dirs in self.failures]}


@dataclass(frozen=True, eq=False)
class ExtendablePair:
    """Box diagram over ``prod [0, r_i]`` plus pseudo-period isomorphisms.

    ``rho[(alpha, i)]`` is defined for every box point with ``alpha_i == r_i``.
    """

    divisors: tuple
    diagram: BoxDiagram
    rho: Dict[Tuple[Point, int], ModuleMap] = field(default_factory=dict)
    check: InitVar[bool] = True

    def __post_init__(self, check):
        divisors = check_divisors(self.diagram.ring, self.divisors)
        object.__setattr__(self, "divisors", divisors)
        if tuple(d.r for d in divisors) != self.diagram.box.r:
            raise InvalidPair("box shape differs from the root indices")
        expected = {(a, i) for a in self.box.points() for i in range(self.n) if a[i] == self.r[i]}
        if set(self.rho) != expected:
            raise InvalidPair("pseudo-period maps missing or superfluous")
        for (a, i), f in self.rho.items():
            if f.source != self.objects[a] or f.target != self.objects[shift(a, i, -self.r[i])]:
                raise InvalidPair(f"rho at {a}, {i + 1} has wrong endpoints", (a, i))
        if check:
            report = validate_pair(self)
            if not report.ok:
                raise InvalidPair(f"extendable pair axioms fail: {report.as_dict()}", report)

    @property
    def box(self) -> BoxPoset:
        return self.diagram.box

    @property
    def r(self) -> tuple:
        return self.diagram.box.r

    @property
    def n(self) -> int:
        return self.diagram.n

    @property
    def ring(self) -> BaseRing:
        return self.diagram.ring

    @property
    def objects(self):
        return self.diagram.objects

    @property
    def edges(self):
        return self.diagram.edges

    @property
    def sections(self) -> tuple:
        return tuple(d.section for d in self.divisors)

    def edge(self, u, i) -> ModuleMap:
        return self.diagram.edges[(u, i)]

    def path(self, a, b) -> ModuleMap:
        return self.diagram.path(a, b)

    @cached_property
    def rho_inverse(self) -> dict:
        return {k: inverse(f) for k, f in self.rho.items()}

    def untwist(self, u: Point) -> ModuleMap:
        """``F_{u mod r} -> F_u``: inverse pseudo-periods for coordinates at ``r_i``."""
        cache = self.__dict__.setdefault("_untwist_cache", {})
        if u in cache:
            return cache[u]
        cache[u] = f = self._untwist(u)
        return f

    def _untwist(self, u):
        base = tuple(0 if a == b else a for a, b in zip(u, self.r))
        f = ModuleMap.identity(self.objects[base])
        cur = base
        for i in range(self.n):
            if u[i] == self.r[i]:
                nxt = shift(cur, i, self.r[i])
                f = self.rho_inverse[(nxt, i)] @ f
                cur = nxt
        return f

    def is_zero(self) -> bool:
        return self.diagram.is_zero()

    def __eq__(self, other):
        return (isinstance(other, ExtendablePair) and self.divisors == other.divisors
                and self.diagram == other.diagram and self.rho == other.rho)


def _sigma(P: ExtendablePair, u, i) -> ModuleMap:
    return ModuleMap.multiplication(P.objects[u], P.divisors[i].section)


def validate_pair(P: ExtendablePair) -> PairReport:
    """Exhaustive check of EX1-EX3 (plus functoriality and invertibility of rho)."""
    failures = []
    dreport = validate_diagram(P.diagram)
    for u, i, j in dreport.failing_squares:
        failures.append(("functor", u, (i, j)))
    for u, i in dreport.ill_formed_edges:
        failures.append(("edge", u, (i,)))
    if failures:
        return PairReport(False, tuple(failures))
    for (a, i), f in sorted(P.rho.items()):
        try:
            inverse(f)
        except RootStackError:
            failures.append(("rho-invertible", a, (i,)))
    r = P.r
    for a in P.box.points():
        for i in range(P.n):
            top = shift(a, i, r[i] - a[i])
            bottom = shift(a, i, -a[i])
            lhs = P.path(bottom, a) @ P.rho[(top, i)] @ P.path(a, top)
            if lhs != _sigma(P, a, i):
                failures.append(("EX1", a, (i,)))
    for a in P.box.points():
        for i in range(P.n):
            if a[i] != r[i]:
                continue
            for j in range(P.n):
                if j == i:
                    continue
                if a[j] < r[j]:
                    low = shift(a, i, -r[i])
                    lhs = P.edge(low, j) @ P.rho[(a, i)]
                    rhs = P.rho[(shift(a, j), i)] @ P.edge(a, j)
                    if lhs != rhs:
                        failures.append(("EX2", a, (i, j)))
                if j > i and a[j] == r[j]:
                    lhs = P.rho[(shift(a, i, -r[i]), j)] @ P.rho[(a, i)]
                    rhs = P.rho[(shift(a, j, -r[j]), i)] @ P.rho[(a, j)]
                    if lhs != rhs:
                        failures.append(("EX3", a, (i, j)))
    return PairReport(not failures, tuple(failures))


def make_pair(ring, divisors, objects, edges, rho, check=True) -> ExtendablePair:
    divisors = tuple(divisors)
    box = BoxPoset(tuple(d.r for d in divisors))
    D = BoxDiagram(box, dict(objects), dict(edges), check)
    return ExtendablePair(divisors, D, dict(rho), check)


# ---------------------------------------------------------------------------
# Lazy extension to Z^n


@dataclass(frozen=True)
class ParabolicValue:
    """Value of the extended sheaf at ``point``: the module ``F_residue`` twisted by ``L_twist``."""

    point: tuple
    residue: tuple
    twist: tuple
    module: FpModule


def _split(P: ExtendablePair, v):
    if len(v) != P.n:
        raise ValueError(f"point {v} has wrong dimension")
    qu = [divmod(int(a), b) for a, b in zip(v, P.r)]
    return tuple(q for _, q in qu), tuple(u for u, _ in qu)


def evaluate(P: ExtendablePair, v) -> ParabolicValue:
    q, u = _split(P, v)
    return ParabolicValue(tuple(v), q, u, P.objects[q])


def evaluate_edge(P: ExtendablePair, v, i: int) -> ModuleMap:
    """Structure map ``F^_v -> F^_{v+e_i}`` of the extension."""
    q, _ = _split(P, v)
    f = P.edge(q, i)
    if q[i] == P.r[i] - 1:
        f = P.rho[(shift(q, i), i)] @ f
    return f


def extension_path(P: ExtendablePair, a, b) -> ModuleMap:
    """Composite of extension edges from ``a`` up to ``b >= a``."""
    f = ModuleMap.identity(evaluate(P, a).module)
    cur = tuple(a)
    for i in range(P.n):
        for _ in range(b[i] - a[i]):
            f = evaluate_edge(P, cur, i) @ f
            cur = shift(cur, i)
    return f


@dataclass(frozen=True, eq=False)
class ParabolicWindow:
    """Finite window ``prod [lo_i, hi_i]`` of a parabolic sheaf."""

    divisors: tuple
    lo: tuple
    hi: tuple
    values: dict
    edges: dict

    def points(self):
        return list(itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi))))

    def __contains__(self, v):
        return all(a <= c <= b for a, c, b in zip(self.lo, v, self.hi))

    def path(self, a, b) -> ModuleMap:
        f = ModuleMap.identity(self.values[tuple(a)].module)
        cur = tuple(a)
        for i in range(len(a)):
            for _ in range(b[i] - a[i]):
                f = self.edges[(cur, i)] @ f
                cur = shift(cur, i)
        return f


def extend(P: ExtendablePair, lo=None, hi=None) -> ParabolicWindow:
    """Materialize the extension of ``P`` on a window (default ``[-r, 2r]``)."""
    lo = tuple(-a for a in P.r) if lo is None else tuple(lo)
    hi = tuple(2 * a for a in P.r) if hi is None else tuple(hi)
    pts = list(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))))
    values = {v: evaluate(P, v) for v in pts}
    edges = {}
    for v in pts:
        for i in range(P.n):
            if v[i] < hi[i]:
                edges[(v, i)] = evaluate_edge(P, v, i)
    return ParabolicWindow(P.divisors, lo, hi, values, edges)


def check_window(W: ParabolicWindow) -> PairReport:
    """Functoriality, condition (i) (``r_i`` steps = ``s_i``) and periodicity on a window."""
    failures = []
    n = len(W.lo)
    r = tuple(d.r for d in W.divisors)
    for v in W.points():
        for i in range(n):
            for j in range(i + 1, n):
                vi, vj = shift(v, i), shift(v, j)
                vij = shift(vi, j)
                if vij in W and (v, i) in W.edges and (v, j) in W.edges:
                    a = W.edges[(vi, j)] @ W.edges[(v, i)]
                    b = W.edges[(vj, i)] @ W.edges[(v, j)]
                    if a != b:
                        failures.append(("functor", v, (i, j)))
        for i in range(n):
            top = shift(v, i, r[i])
            if top in W:
                M = W.values[v].module
                if W.path(v, top) != ModuleMap.multiplication(M, W.divisors[i].section):
                    failures.append(("period-section", v, (i,)))
                if (top, i) in W.edges and W.edges[(top, i)] != W.edges[(v, i)]:
                    failures.append(("period-edge", v, (i,)))
                if W.values[top].twist != shift(W.values[v].twist, i):
                    failures.append(("period-twist", v, (i,)))
    return PairReport(not failures, tuple(failures))


def truncate(W: ParabolicWindow, check: bool = True) -> ExtendablePair:
    """Restrict a window covering the box to an extendable pair (identity pseudo-periods)."""
    divisors = W.divisors
    box = BoxPoset(tuple(d.r for d in divisors))
    if not all(p in W for p in box.points()):
        raise ValueError("window does not cover the box")
    objects = {u: W.values[u].module for u in box.points()}
    edges = {(u, i): W.edges[(u, i)] for u, i in box.edges()}
    rho = {}
    for u in box.points():
        for i in range(box.n):
            if u[i] == box.r[i]:
                low = shift(u, i, -box.r[i])
                if objects[u] != objects[low]:
                    raise InvalidPair("window values are not pseudo-periodic", (u, i))
                rho[(u, i)] = ModuleMap.identity(objects[u])
    ring = next(iter(objects.values())).ring
    D = BoxDiagram(box, objects, edges, check)
    return ExtendablePair(tuple(divisors), D, rho, check and ring is not None)


def normalize(P: ExtendablePair) -> ExtendablePair:
    """The isomorphic pair with ``F_alpha = F_{alpha mod r}`` and identity pseudo-periods."""
    zero = tuple(0 for _ in P.r)
    return truncate(extend(P, zero, P.r), check=False)


def normalization_map(P: ExtendablePair) -> "PairMap":
    """The isomorphism ``P -> normalize(P)`` built from pseudo-periods."""
    N = normalize(P)
    comps = {u: inverse(P.untwist(u)) for u in P.box.points()}
    return PairMap(P, N, comps)


def rho_order_independent(P: ExtendablePair) -> bool:
    """Whether iterated pseudo-periods to ``F_{u mod r}`` agree for every order."""
    for u in P.box.points():
        J = [i for i in range(P.n) if u[i] == P.r[i]]
        results = set()
        for order in itertools.permutations(J):
            f = ModuleMap.identity(P.objects[u])
            cur = u
            for i in order:
                f = P.rho[(cur, i)] @ f
                cur = shift(cur, i, -P.r[i])
            results.add(f.matrix)
        if len(results) > 1:
            return False
    return True


def window_equivalence(P: ExtendablePair, lo=None, hi=None) -> PairReport:
    """Window-side criterion for ``P``: the extension satisfies the parabolic
    conditions on the window and pseudo-periods identify ``P`` with the
    truncated extension as a morphism of diagrams."""
    failures = list(check_window(extend(P, lo, hi)).failures)
    if not rho_order_independent(P):
        failures.append(("rho-order", (), ()))
    else:
        try:
            theta = normalization_map(P)
            if not is_morphism(theta, check_rho=False):
                failures.append(("truncation", (), ()))
        except RootStackError:
            failures.append(("rho-invertible", (), ()))
    return PairReport(not failures, tuple(failures))


# ---------------------------------------------------------------------------
# Morphisms of pairs


@dataclass(frozen=True, eq=False)
class PairMap:
    source: ExtendablePair
    target: ExtendablePair
    components: dict

    def __matmul__(self, other: "PairMap") -> "PairMap":
        return PairMap(other.source, self.target,
                       {u: self.components[u] @ other.components[u] for u in self.components})

    def __eq__(self, other):
        return isinstance(other, PairMap) and self.components == other.components

    def is_iso(self) -> bool:
        try:
            for f in self.components.values():
                inverse(f)
        except RootStackError:
            return False
        return True


def is_morphism(phi: PairMap, check_rho: bool = True) -> bool:
    P, Q = phi.source, phi.target
    c = phi.components
    for u, i in P.box.edges():
        if Q.edge(u, i) @ c[u] != c[shift(u, i)] @ P.edge(u, i):
            return False
    if check_rho:
        for (a, i), rho in P.rho.items():
            low = shift(a, i, -P.r[i])
            if Q.rho[(a, i)] @ c[a] != c[low] @ rho:
                return False
    return True


def identity_map(P: ExtendablePair) -> PairMap:
    return PairMap(P, P, {u: ModuleMap.identity(M) for u, M in P.objects.items()})


def _rebuild(P: ExtendablePair, objects, edge_fn, rho_fn) -> ExtendablePair:
    edges = {(u, i): edge_fn(u, i) for u, i in P.box.edges()}
    rho = {k: rho_fn(*k) for k in P.rho}
    D = BoxDiagram(P.box, objects, edges, False)
    return ExtendablePair(P.divisors, D, rho, False)


def pair_kernel(phi: PairMap):
    """Pointwise kernel with lifted structure maps; returns ``(K, inclusion)``."""
    P = phi.source
    ker = {u: kernel(f) for u, f in phi.components.items()}
    objects = {u: k[0] for u, k in ker.items()}
    incl = {u: k[1] for u, k in ker.items()}

    def edge(u, i):
        return lift(P.edge(u, i) @ incl[u], incl[shift(u, i)], False)

    def rho(a, i):
        return lift(P.rho[(a, i)] @ incl[a], incl[shift(a, i, -P.r[i])], False)

    K = _rebuild(P, objects, edge, rho)
    return K, PairMap(K, P, incl)


def pair_cokernel(phi: PairMap):
    Q = phi.target
    cok = {u: cokernel(f) for u, f in phi.components.items()}
    objects = {u: c[0] for u, c in cok.items()}

    def edge(u, i):
        return ModuleMap(objects[u], objects[shift(u, i)], Q.edge(u, i).matrix, False)

    def rho(a, i):
        return ModuleMap(objects[a], objects[shift(a, i, -Q.r[i])], Q.rho[(a, i)].matrix, False)

    C = _rebuild(Q, objects, edge, rho)
    return C, PairMap(Q, C, {u: c[1] for u, c in cok.items()})


def pair_image(phi: PairMap):
    """Pointwise image, presented on the source generators; returns ``(I, P->I, I->Q)``."""
    P, Q = phi.source, phi.target
    im = {u: image(f) for u, f in phi.components.items()}
    objects = {u: t[0] for u, t in im.items()}

    def edge(u, i):
        return ModuleMap(objects[u], objects[shift(u, i)], P.edge(u, i).matrix, False)

    def rho(a, i):
        return ModuleMap(objects[a], objects[shift(a, i, -P.r[i])], P.rho[(a, i)].matrix, False)

    I = _rebuild(P, objects, edge, rho)
    onto = PairMap(P, I, {u: t[1] for u, t in im.items()})
    into = PairMap(I, Q, {u: t[2] for u, t in im.items()})
    return I, onto, into


def _block_diag(maps, source, target) -> ModuleMap:
    blocks = {(k, k): f.matrix for k, f in enumerate(maps)}
    return block_map(source, target, blocks,
                     [f.source.ngens for f in maps], [f.target.ngens for f in maps])


def prune_pair(P: ExtendablePair) -> ExtendablePair:
    """Isomorphic pair with minimal presentations at every point."""
    from .ring import minimal_presentation

    mins = {u: minimal_presentation(M) for u, M in P.objects.items()}
    if all(m[0] is M for m, M in zip(mins.values(), P.objects.values())):
        return P
    objects = {u: m[0] for u, m in mins.items()}

    def edge(u, i):
        return mins[shift(u, i)][1] @ P.edge(u, i) @ mins[u][2]

    def rho(a, i):
        return mins[shift(a, i, -P.r[i])][1] @ P.rho[(a, i)] @ mins[a][2]

    return _rebuild(P, objects, edge, rho)


def direct_sum_pairs(pairs) -> ExtendablePair:
    pairs = list(pairs)
    P0 = pairs[0]
    for P in pairs[1:]:
        if P.divisors != P0.divisors:
            raise InvalidPair("direct sum of pairs with different divisors")
    objects = {u: direct_sum([P.objects[u] for P in pairs]) for u in P0.box.points()}

    def edge(u, i):
        return _block_diag([P.edge(u, i) for P in pairs], objects[u], objects[shift(u, i)])

    def rho(a, i):
        return _block_diag([P.rho[(a, i)] for P in pairs], objects[a],
                           objects[shift(a, i, -P0.r[i])])

    return _rebuild(P0, objects, edge, rho)


def zero_pair(ring: BaseRing, divisors) -> ExtendablePair:
    divisors = tuple(divisors)
    box = BoxPoset(tuple(d.r for d in divisors))
    Z = FpModule.zero(ring)
    objects = {u: Z for u in box.points()}
    idz = ModuleMap.identity(Z)
    D = BoxDiagram(box, objects, {e: idz for e in box.edges()}, False)
    rho = {(a, i): idz for a in box.points() for i in range(box.n) if a[i] == box.r[i]}
    return ExtendablePair(divisors, D, rho, False)


def free_pair(ring: BaseRing, divisors, degree) -> ExtendablePair:
    """The graded free rank-one module generated in box degree ``degree``.

    Each ``F_u`` is free of rank one; a step in direction ``i`` is
    multiplication by ``s_i`` exactly when it wraps the residue of
    ``u - degree`` modulo ``r_i``, and by ``1`` otherwise.
    """
    divisors = tuple(divisors)
    r = tuple(d.r for d in divisors)
    box = BoxPoset(r)
    R1 = FpModule.free(ring, 1)
    one = ModuleMap.identity(R1)
    objects = {u: R1 for u in box.points()}
    edges = {}
    for u, i in box.edges():
        if (u[i] - degree[i]) % r[i] == r[i] - 1:
            edges[(u, i)] = ModuleMap.multiplication(R1, divisors[i].section)
        else:
            edges[(u, i)] = one
    rho = {(a, i): one for a in box.points() for i in range(box.n) if a[i] == r[i]}
    D = BoxDiagram(box, objects, edges, False)
    return ExtendablePair(divisors, D, rho, False)


def yoneda(Q: ExtendablePair, elements) -> PairMap:
    """Morphism ``(+)_k P_{e_k} -> Q`` sending the generator of the ``k``-th free
    pair to the vector ``m_k`` of ``F_{e_k}``, for ``elements = [(e_k, m_k), ...]``."""
    ring = Q.ring
    frees = [free_pair(ring, Q.divisors, e) for e, _ in elements]
    if frees:
        S = direct_sum_pairs(frees)
    else:
        S = zero_pair(ring, Q.divisors)
    comps = {}
    for u in Q.box.points():
        cols = []
        for e, m in elements:
            v = tuple(a + (b - a) % r for a, b, r in zip(e, u, Q.r))
            walked = extension_path(Q, e, v).apply(m)
            cols.append(Q.untwist(u).apply(walked))
        rows = tuple(tuple(c[k] for c in cols) for k in range(Q.objects[u].ngens))
        comps[u] = ModuleMap(S.objects[u], Q.objects[u], rows, False)
    return PairMap(S, Q, comps)


def reframe(P: ExtendablePair, changes) -> ExtendablePair:
    """Change generators at chosen points: ``changes[u] = (U, U_inverse)`` with
    ``U`` an invertible matrix over ``k[x]`` acting on ``F_u``'s generators."""
    ring = P.ring
    objects = dict(P.objects)
    conv = {}
    for u, (U, Uinv) in changes.items():
        M = P.objects[u]
        kx = ring.kx
        new_rel = []
        for c in M.relations:
            new_rel.append(tuple(_dot(kx, row, c) for row in U))
        N = FpModule(ring, M.ngens, tuple(new_rel))
        objects[u] = N
        to_new = ModuleMap(M, N, tuple(tuple(e for e in row) for row in U))
        to_old = ModuleMap(N, M, tuple(tuple(e for e in row) for row in Uinv))
        conv[u] = (to_new, to_old)

    def into(u):
        return conv[u][0] if u in conv else ModuleMap.identity(P.objects[u])

    def outof(u):
        return conv[u][1] if u in conv else ModuleMap.identity(P.objects[u])

    def edge(u, i):
        return into(shift(u, i)) @ P.edge(u, i) @ outof(u)

    def rho(a, i):
        return into(shift(a, i, -P.r[i])) @ P.rho[(a, i)] @ outof(a)

    return _rebuild(P, objects, edge, rho)


def _dot(kx, row, col):
    acc = ()
    for a, b in zip(row, col):
        if a and b:
            acc = kx.add(acc, kx.mul(a, b))
    return acc


# ---------------------------------------------------------------------------
# Graded modules over the local algebra  R[t^{+-1}][s]/(s_i^{r_i} - x_i t_i)


@dataclass(frozen=True, eq=False)
class GradedBoxModule:
    """Graded pieces ``M_u`` (``u`` in the box) of a graded module over the local
    algebra, with the ``s_i`` actions ``M_u -> M_{u+e_i}`` and the invertible
    ``t_i`` actions ``M_u -> M_{u + r_i e_i}`` for ``u_i == 0``."""

    divisors: tuple
    pieces: dict
    s_action: dict
    t_action: dict


def pair_from_graded(M: GradedBoxModule, check: bool = True) -> ExtendablePair:
    divisors = tuple(M.divisors)
    rho = {}
    for (u, i), t in M.t_action.items():
        top = shift(u, i, divisors[i].r)
        try:
            rho[(top, i)] = inverse(t)
        except RootStackError as exc:
            raise NotInvertible(f"t-action at {u} in direction {i + 1} is not invertible",
                                (u, i)) from exc
    ring = next(iter(M.pieces.values())).ring
    return make_pair(ring, divisors, M.pieces, M.s_action, rho, check)
