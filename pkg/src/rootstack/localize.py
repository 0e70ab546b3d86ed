"""The adjoint tower between extendable pairs and their faces, and the
recursive peel computing the ``K_0`` components of a pair.

Faces are indexed by 0-based tuples ``T`` of directions, enumerated by size
and then lexicographically.  Leaf data for ``T`` lives on the interior box
``prod_{i in T} [1, r_i - 1]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .diagram import BoxDiagram, BoxPoset, shift
from .errors import NotInKernel, SupportViolation
from .parabolic import (
    ExtendablePair,
    PairMap,
    is_morphism,
    pair_cokernel,
    pair_kernel,
    prune_pair,
)
from .ring import (
    FIELD,
    BaseRing,
    FpModule,
    G0Class,
    ModuleMap,
    block_map,
    devissage_class,
    direct_sum,
    g0_class,
)


def faces(n: int, k: int):
    """``S(k)``: the ``k``-element subsets of ``range(n)`` in lexicographic order."""
    return list(itertools.combinations(range(n), k))


def all_faces(n: int):
    return [T for k in range(1, n + 1) for T in faces(n, k)]


def interior_points(r, T):
    return list(itertools.product(*(range(1, r[i]) for i in T)))


def embed(T, w, n):
    """``iota_T``: place the coordinates ``w`` at positions ``T``, zero elsewhere."""
    u = [0] * n
    for i, a in zip(T, w):
        u[i] = a
    return tuple(u)


def project(T, u):
    return tuple(u[i] for i in T)


# ---------------------------------------------------------------------------
# pi_*, pi^*, faces


def pi_lower(P: ExtendablePair) -> FpModule:
    return P.objects[tuple(0 for _ in P.r)]


def pi_upper(M: FpModule, divisors) -> ExtendablePair:
    """Constant pair on ``M``; the last step in direction ``i`` multiplies by ``s_i``."""
    from .parabolic import check_divisors

    divisors = check_divisors(M.ring, divisors)
    box = BoxPoset(tuple(d.r for d in divisors))
    one = ModuleMap.identity(M)
    objects = {u: M for u in box.points()}
    edges = {}
    for u, i in box.edges():
        if u[i] == box.r[i] - 1:
            edges[(u, i)] = ModuleMap.multiplication(M, divisors[i].section)
        else:
            edges[(u, i)] = one
    rho = {(a, i): one for a in box.points() for i in range(box.n) if a[i] == box.r[i]}
    return ExtendablePair(divisors, BoxDiagram(box, objects, edges, False), rho, False)


def face(P: ExtendablePair, T) -> ExtendablePair:
    """Restriction along ``iota_T`` (coordinates outside ``T`` pinned at 0)."""
    T = tuple(T)
    n = P.n
    divisors = tuple(P.divisors[i] for i in T)
    box = BoxPoset(tuple(P.r[i] for i in T))
    objects = {w: P.objects[embed(T, w, n)] for w in box.points()}
    edges = {(w, j): P.edge(embed(T, w, n), T[j]) for w, j in box.edges()}
    rho = {(w, j): P.rho[(embed(T, w, n), T[j])]
           for w in box.points() for j in range(box.n) if w[j] == box.r[j]}
    return ExtendablePair(divisors, BoxDiagram(box, objects, edges, False), rho, False)


def in_kernel(P: ExtendablePair, k: int) -> bool:
    """Membership in ``ker^k``: level 0 asks ``F_0 = 0``, level ``k`` asks that
    every module of every ``k``-face vanishes."""
    if k == 0:
        return pi_lower(P).is_zero()
    for T in faces(P.n, k):
        for w in itertools.product(*(range(P.r[i] + 1) for i in T)):
            if not P.objects[embed(T, w, P.n)].is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# Leaf data and D^k


def z_base(ring: BaseRing, sections) -> BaseRing | None:
    """Base for ``Z_T``: ``None`` means ``Z_T = X``; a zero-ring quotient means empty."""
    nonzero = [s for s in sections if s]
    if not nonzero:
        return None
    kx = ring.kx
    if ring.kind == FIELD:
        return BaseRing.quotient(ring.field, (1,))
    g = nonzero[0]
    for s in nonzero[1:]:
        g = kx.gcd(g, s)
    return BaseRing.quotient(ring.field, kx.monic(g))


def leaf_class(M: FpModule, sections) -> G0Class:
    """Class of a leaf module in ``G_0(Z_T)``."""
    base = z_base(M.ring, sections)
    if base is None:
        return g0_class(M)
    if base.is_zero_ring:
        if not M.is_zero():
            raise SupportViolation("nonzero module on an empty intersection")
        return G0Class.zero(base)
    return devissage_class(M, base.modulus)


def class_base(ring: BaseRing, sections) -> BaseRing:
    base = z_base(ring, sections)
    return ring if base is None else base


@dataclass(frozen=True, eq=False)
class LeafDiagram:
    """A diagram on ``prod_{i in T} [1, r_i - 1]``; ``objects`` and ``edges`` are
    keyed by actual interior coordinates (edge direction ``j`` indexes ``T``)."""

    T: tuple
    r: tuple
    objects: dict
    edges: dict

    def __eq__(self, other):
        return (isinstance(other, LeafDiagram) and self.T == other.T and self.r == other.r
                and self.objects == other.objects and self.edges == other.edges)

    def points(self):
        return interior_points(self.r, range(len(self.T)))

    def is_zero(self) -> bool:
        return all(M.is_zero() for M in self.objects.values())


def leaf_of(P: ExtendablePair, T) -> LeafDiagram:
    """Interior part of ``face(P, T)``."""
    T = tuple(T)
    rT = tuple(P.r[i] for i in T)
    objects, edges = {}, {}
    for w in interior_points(P.r, T):
        u = embed(T, w, P.n)
        objects[w] = P.objects[u]
        for j, i in enumerate(T):
            if w[j] + 1 < rT[j]:
                edges[(w, j)] = P.edge(u, i)
    return LeafDiagram(T, rT, objects, edges)


def zero_leaf(ring: BaseRing, T, rT) -> LeafDiagram:
    Z = FpModule.zero(ring)
    pts = interior_points(rT, range(len(T)))
    edges = {(w, j): ModuleMap.identity(Z) for w in pts for j in range(len(T))
             if w[j] + 1 < rT[j]}
    return LeafDiagram(tuple(T), tuple(rT), {w: Z for w in pts}, edges)


def d_adjoint(family: dict, divisors, k: int, ring: BaseRing | None = None) -> ExtendablePair:
    """Right adjoint ``D^k`` of ``Face^k``: the pair whose module at ``u`` is the
    sum over ``T in S(k)`` of the leaf at ``pi_T(u)`` (zero when some coordinate
    of ``pi_T(u)`` is ``0`` or ``r_i``)."""
    from .parabolic import check_divisors

    if ring is None:
        ring = next(iter(next(iter(family.values())).objects.values())).ring
    divisors = check_divisors(ring, divisors)
    r = tuple(d.r for d in divisors)
    n = len(r)
    Ts = faces(n, k)
    leaves = {}
    for T in Ts:
        rT = tuple(r[i] for i in T)
        G = family.get(T) or zero_leaf(ring, T, rT)
        if G.r != rT or set(G.objects) != set(interior_points(rT, range(len(T)))):
            raise SupportViolation(f"leaf family for {T} has the wrong shape")
        for w, M in G.objects.items():
            for i in T:
                s = divisors[i].section
                if not ModuleMap.multiplication(M, s).is_zero():
                    raise SupportViolation(
                        f"leaf at {w} for face {[t + 1 for t in T]} is not killed by s_{i + 1}",
                        (T, w))
        leaves[T] = G
    box = BoxPoset(r)
    zero_m = FpModule.zero(ring)

    def piece(T, u):
        w = project(T, u)
        if all(0 < a < b for a, b in zip(w, leaves[T].r)):
            return leaves[T].objects[w]
        return zero_m

    pieces = {u: [piece(T, u) for T in Ts] for u in box.points()}
    objects = {u: direct_sum(ps, ring) for u, ps in pieces.items()}
    sizes = {u: [M.ngens for M in ps] for u, ps in pieces.items()}
    edges = {}
    for u, i in box.edges():
        v = shift(u, i)
        blocks = {}
        for b, T in enumerate(Ts):
            src, tgt = pieces[u][b], pieces[v][b]
            if src.ngens == 0 or tgt.ngens == 0:
                continue
            if i in T:
                w = project(T, u)
                blocks[(b, b)] = leaves[T].edges[(w, T.index(i))].matrix
            elif u[i] == r[i] - 1:
                blocks[(b, b)] = ModuleMap.multiplication(src, divisors[i].section).matrix
            else:
                blocks[(b, b)] = ModuleMap.identity(src).matrix
        edges[(u, i)] = block_map(objects[u], objects[v], blocks, sizes[u], sizes[v])
    rho = {(a, i): ModuleMap.identity(objects[a])
           for a in box.points() for i in range(n) if a[i] == r[i]}
    return ExtendablePair(divisors, BoxDiagram(box, objects, edges, False), rho, False)


def face_family(P: ExtendablePair, k: int) -> dict:
    return {T: leaf_of(P, T) for T in faces(P.n, k)}


# ---------------------------------------------------------------------------
# Counits


def counit(P: ExtendablePair, level: int) -> PairMap:
    """``epsilon: pi^* pi_* P -> P`` (level 0) or ``D^k Face^k P -> P``.

    Components are structure maps up from the face point followed by inverse
    pseudo-periods where a coordinate sits at ``r_i``.
    """
    n = P.n
    if level == 0:
        S = pi_upper(pi_lower(P), P.divisors)
        zero_pt = tuple(0 for _ in P.r)
        comps = {}
        for u in P.box.points():
            bar = tuple(0 if a == b else a for a, b in zip(u, P.r))
            comps[u] = P.untwist(u) @ P.path(zero_pt, bar)
        return PairMap(S, P, comps)
    if not in_kernel(P, level - 1):
        raise NotInKernel(f"counit at level {level} needs a pair in ker^{level - 1}")
    Ts = faces(n, level)
    S = d_adjoint(face_family(P, level), P.divisors, level, P.ring)
    comps = {}
    for u in P.box.points():
        bar = tuple(0 if a == b else a for a, b in zip(u, P.r))
        cols = []
        for T in Ts:
            w = project(T, u)
            if not all(0 < a < P.r[i] for a, i in zip(w, T)):
                continue
            M = P.objects[embed(T, w, n)]
            if M.ngens == 0:
                continue
            f = P.untwist(u) @ P.path(embed(T, w, n), bar)
            cols.extend(f.columns())
        rows = tuple(tuple(c[j] for c in cols) for j in range(P.objects[u].ngens))
        comps[u] = ModuleMap(S.objects[u], P.objects[u], rows, False)
    return PairMap(S, P, comps)


# ---------------------------------------------------------------------------
# Decomposition


@dataclass(frozen=True)
class KClassDecomposition:
    """``x`` in ``G_0(X)`` and, for every face ``T`` and interior point ``w``, a
    class in ``G_0(Z_T)``.  ``leaves`` is a tuple of ``((T, w), G0Class)``."""

    x: G0Class
    leaves: tuple

    @classmethod
    def zero(cls, ring: BaseRing, divisors) -> "KClassDecomposition":
        r = tuple(d.r for d in divisors)
        secs = tuple(d.section for d in divisors)
        leaves = []
        for T in all_faces(len(r)):
            base = class_base(ring, [secs[i] for i in T])
            for w in interior_points(r, T):
                leaves.append(((T, w), G0Class.zero(base)))
        return cls(G0Class.zero(ring), tuple(leaves))

    def _combine(self, other, op):
        keys = [k for k, _ in self.leaves]
        if keys != [k for k, _ in other.leaves]:
            raise ValueError("decompositions over different data")
        return KClassDecomposition(op(self.x, other.x), tuple(
            (k, op(a, b)) for (k, a), (_, b) in zip(self.leaves, other.leaves)))

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def leaf(self, T, w) -> G0Class:
        return dict(self.leaves)[(tuple(T), tuple(w))]

    def vector(self) -> tuple:
        """All integer coordinates: ``x`` then leaves in enumeration order."""
        out = list(self.x.vector)
        for _, c in self.leaves:
            out.extend(c.vector)
        return tuple(out)

    def as_dict(self) -> dict:
        return {"x": list(self.x.vector), "leaves": [
            {"T": [i + 1 for i in T], "w": list(w), "class": list(c.vector)}
            for (T, w), c in self.leaves]}


def rank_identity(r) -> tuple:
    """``(1 + sum_T prod_{l in T} (r_l - 1), prod_l r_l)``; equal for every ``r``."""
    r = tuple(r)
    lhs = 1 + sum(prod(r[i] - 1 for i in T) for T in all_faces(len(r)))
    return lhs, prod(r)


def _peel(coef_pairs, epsilon_of, level):
    """Replace each ``c [Q]`` by ``c [coker eps] - c [ker eps]``, checking both lie in ``ker^level``."""
    out = []
    for c, Q in coef_pairs:
        eps = epsilon_of(Q)
        K, _ = pair_kernel(eps)
        C, _ = pair_cokernel(eps)
        for sign, R in ((1, C), (-1, K)):
            if not in_kernel(R, level):
                raise NotInKernel(f"peel at level {level} left a pair outside ker^{level}")
            if not R.is_zero():
                out.append((sign * c, prune_pair(R)))
    return out


def decompose(P: ExtendablePair, verify: bool = False) -> KClassDecomposition:
    """Split the class of ``P`` into its ``G_0(X)`` part and leaf parts.

    The working combination starts as ``[P]``; at each level the counit of the
    relevant adjunction is peeled off.  With ``verify=True`` every counit is
    also checked to be a morphism of pairs.
    """
    n = P.n
    secs = P.sections
    result = KClassDecomposition.zero(P.ring, P.divisors)
    index = {key: pos for pos, (key, _) in enumerate(result.leaves)}
    leaves = [c for _, c in result.leaves]
    x = g0_class(pi_lower(P))

    def eps(level):
        def f(Q):
            e = counit(Q, level)
            if verify and not is_morphism(e):
                raise NotInKernel(f"counit at level {level} is not a morphism of pairs")
            return e
        return f

    combo = _peel([(1, P)], eps(0), 0)
    for level in range(1, n + 1):
        for c, Q in combo:
            for T in faces(n, level):
                tsecs = [secs[i] for i in T]
                for w in interior_points(P.r, T):
                    M = Q.objects[embed(T, w, n)]
                    if M.ngens:
                        pos = index[(T, w)]
                        leaves[pos] = leaves[pos] + leaf_class(M, tsecs) * c
        if level < n and combo:
            combo = _peel(combo, eps(level), level)
    return KClassDecomposition(x, tuple((key, c) for (key, _), c in zip(result.leaves, leaves)))


# ---------------------------------------------------------------------------
# Skyscrapers over a field with vanishing sections


def root_shapes(limit: int):
    """All ``r`` with every ``r_i >= 2`` and ``prod r_i <= limit``."""
    out = []

    def grow(prefix, p):
        if prefix:
            out.append(tuple(prefix))
        for a in range(2, limit // p + 1):
            grow(prefix + [a], p * a)

    grow([], 1)
    return out


def skyscraper_pair(ring: BaseRing, r, d) -> ExtendablePair:
    """The simple pair: ``k`` at the box points congruent to ``d`` mod ``r``,
    zero elsewhere, all edges zero, all sections zero."""
    from .parabolic import DivisorTriple

    if ring.kind != FIELD:
        raise ValueError("skyscrapers are defined over a field base")
    r = tuple(r)
    box = BoxPoset(r)
    K, Z = FpModule.free(ring, 1), FpModule.zero(ring)
    objects = {u: K if all(a % b == c for a, b, c in zip(u, r, d)) else Z
               for u in box.points()}
    edges = {(u, i): ModuleMap.zero(objects[u], objects[shift(u, i)]) for u, i in box.edges()}
    rho = {(a, i): ModuleMap.identity(objects[a])
           for a in box.points() for i in range(len(r)) if a[i] == r[i]}
    divisors = tuple(DivisorTriple((), a) for a in r)
    return ExtendablePair(divisors, BoxDiagram(box, objects, edges, False), rho, False)


def skyscraper_matrix(ring: BaseRing, r) -> list:
    """Rows ``decompose(skyscraper(d)).vector()`` for every residue ``d``."""
    return [list(decompose(skyscraper_pair(ring, r, d)).vector())
            for d in itertools.product(*(range(a) for a in r))]


def integer_det(rows) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    m = [list(map(int, row)) for row in rows]
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for c in range(n - 1):
        if m[c][c] == 0:
            swap = next((i for i in range(c + 1, n) if m[i][c]), None)
            if swap is None:
                return 0
            m[c], m[swap] = m[swap], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[i][j] * m[c][c] - m[i][c] * m[c][j]) // prev
        prev = m[c][c]
    return sign * m[n - 1][n - 1] if n else 1
