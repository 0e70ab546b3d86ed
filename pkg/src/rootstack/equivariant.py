"""``Z/r``-graded ``k[t]``-modules (``mu_r``-equivariant modules on the line)
viewed over the quotient line ``k[x]``, ``x = t^r``.

A graded module is stored by its pieces ``M_0, ..., M_{r-1}`` (modules over
``k[x]``) and the degree-one maps ``t: M_q -> M_{q+1}``; the last one wraps
around to ``M_0``.  The free module ``k[t] (x) chi_j`` has its generator in
degree ``-j mod r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List

from .errors import BadCharacteristic, GradingViolation, MismatchedClass
from .localize import decompose, integer_det
from .parabolic import (
    DivisorTriple,
    ExtendablePair,
    GradedBoxModule,
    check_divisors,
    free_pair,
    make_pair,
    normalize,
    pair_cokernel,
    pair_kernel,
    yoneda,
)
from .ring import (
    POLY_LINE,
    BaseRing,
    Field,
    FpModule,
    ModuleMap,
    cokernel,
    devissage_class,
    is_injective,
    minimal_presentation,
)

X = (0, 1)


@dataclass(frozen=True, eq=False)
class GradedLineModule:
    r: int
    pieces: tuple
    t_action: tuple

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "t_action", tuple(self.t_action))
        if self.r < 1 or len(self.pieces) != self.r or len(self.t_action) != self.r:
            raise GradingViolation("need exactly r pieces and r t-maps")
        ring = self.pieces[0].ring
        if ring.kind != POLY_LINE:
            raise GradingViolation("graded pieces must be modules over k[x]")
        if ring.field.p and self.r % ring.field.p == 0:
            raise BadCharacteristic(f"r = {self.r} is divisible by the characteristic")
        for q, t in enumerate(self.t_action):
            if t.source != self.pieces[q] or t.target != self.pieces[(q + 1) % self.r]:
                raise GradingViolation(f"t-map out of degree {q} has wrong endpoints", q)
        for q in range(self.r):
            f = ModuleMap.identity(self.pieces[q])
            for a in range(self.r):
                f = self.t_action[(q + a) % self.r] @ f
            if f != ModuleMap.multiplication(self.pieces[q], X):
                raise GradingViolation(f"t^r differs from x on the piece of degree {q}", q)

    @property
    def ring(self) -> BaseRing:
        return self.pieces[0].ring

    def __eq__(self, other):
        return (isinstance(other, GradedLineModule) and self.r == other.r
                and self.pieces == other.pieces and self.t_action == other.t_action)


def divisor(r: int):
    return [DivisorTriple(X, r)]


def to_pair(M: GradedLineModule, check: bool = False) -> ExtendablePair:
    """Pair over ``k[x]`` with divisor ``(x, r)``: ``F_q = M_q``, ``F_r = M_0``,
    edges the ``t``-maps and identity pseudo-period."""
    r = M.r
    objects = {(q,): M.pieces[q] for q in range(r)}
    objects[(r,)] = M.pieces[0]
    edges = {((q,), 0): M.t_action[q] for q in range(r)}
    rho = {((r,), 0): ModuleMap.identity(M.pieces[0])}
    return make_pair(M.ring, divisor(r), objects, edges, rho, check)


def from_pair(P: ExtendablePair) -> GradedLineModule:
    """Inverse of :func:`to_pair` (after normalizing the pseudo-period)."""
    if P.n != 1 or P.sections != (X,):
        raise GradingViolation("expected a pair over the divisor (x, r)")
    N = normalize(P)
    r = N.r[0]
    t = [N.edge((q,), 0) for q in range(r)]
    return GradedLineModule(r, tuple(N.objects[(q,)] for q in range(r)), tuple(t))


def free_graded(ring: BaseRing, r: int, j: int) -> GradedLineModule:
    """``k[t] (x) chi_j``."""
    return from_pair(free_pair(ring, check_divisors(ring, divisor(r)), ((-j) % r,)))


def skyscraper_graded(ring: BaseRing, r: int, j: int) -> GradedLineModule:
    """``k(0) (x) chi_j``: one copy of ``k[x]/(x)`` in degree ``-j mod r``, ``t = 0``."""
    d = (-j) % r
    pieces = [FpModule.cyclic(ring, X) if q == d else FpModule.zero(ring) for q in range(r)]
    t = [ModuleMap.zero(pieces[q], pieces[(q + 1) % r]) for q in range(r)]
    return GradedLineModule(r, tuple(pieces), tuple(t))


def direct_sum_graded(mods) -> GradedLineModule:
    from .parabolic import direct_sum_pairs

    return from_pair(direct_sum_pairs([to_pair(M) for M in mods]))


def graded_cokernel(M: GradedLineModule, elements) -> GradedLineModule:
    """Quotient of ``M`` by the graded submodule generated by ``elements``
    (pairs ``(degree, vector)``)."""
    P = to_pair(M)
    C, _ = pair_cokernel(yoneda(P, [((q,), v) for q, v in elements]))
    return from_pair(C)


def _generators(M: GradedLineModule):
    out = []
    for q, piece in enumerate(M.pieces):
        for g in range(piece.ngens):
            out.append(((q,), tuple((1,) if a == g else () for a in range(piece.ngens))))
    return out


def _free_multiplicities(K: ExtendablePair) -> List[int]:
    """Generator counts ``a_j`` of a graded-free pair: ``dim_k`` of the cokernel
    of ``t`` into each degree, indexed by character."""
    r = K.r[0]
    a = [0] * r
    for q in range(1, r + 1):
        C, _ = cokernel(K.edge((q - 1,), 0))
        if C.is_zero():
            continue
        dim = devissage_class(C, X).vector[0]
        a[(-q) % r] += dim
    return a


def minimize(M: GradedLineModule) -> GradedLineModule:
    """Isomorphic graded module with unit-pivot generators removed from every piece."""
    r = M.r
    mins = [minimal_presentation(P) for P in M.pieces]
    t = [mins[(q + 1) % r][1] @ M.t_action[q] @ mins[q][2] for q in range(r)]
    return GradedLineModule(r, tuple(m[0] for m in mins), tuple(t))


def character_class(M: GradedLineModule) -> tuple:
    """Class in ``K_0`` of graded modules, in the basis ``[k[t] (x) chi_j]``,
    from the two-step resolution ``0 -> K -> F -> M -> 0``."""
    M = minimize(M)
    r = M.r
    P = to_pair(M)
    # every generator of every piece is hit, so the map from F is onto
    gens = _generators(M)
    phi = yoneda(P, gens)
    K, _ = pair_kernel(phi)
    top = [0] * r
    for (q,), _ in gens:
        top[(-q) % r] += 1
    a = _free_multiplicities(K)
    ranks = {K.objects[(q,)].rank for q in range(r)}
    if ranks != {sum(a)} or not all(
            is_injective(ModuleMap.multiplication(K.objects[(q,)], X)) for q in range(r)):
        raise GradingViolation("resolution kernel is not graded free")
    return tuple(t - s for t, s in zip(top, a))


def decomposition_vector(M: GradedLineModule) -> tuple:
    return decompose(to_pair(M)).vector()


@lru_cache(maxsize=None)
def change_of_basis(p: int, r: int) -> tuple:
    """Columns ``decompose(to_pair(k[t] (x) chi_j))``; frozen per ``(field, r)``."""
    ring = BaseRing.poly_line(Field(p))
    cols = [decomposition_vector(free_graded(ring, r, j)) for j in range(r)]
    B = tuple(tuple(c[i] for c in cols) for i in range(len(cols[0])))
    if abs(integer_det(B)) != 1:
        raise MismatchedClass(f"change of basis {B} is not unimodular")
    return B


def compare(M: GradedLineModule) -> dict:
    """Check ``B . character_class(M) == decompose(to_pair(M))``."""
    B = change_of_basis(M.ring.field.p, M.r)
    char = character_class(M)
    dec = decomposition_vector(M)
    image = tuple(sum(b * c for b, c in zip(row, char)) for row in B)
    if image != dec:
        raise MismatchedClass(f"character {char} maps to {image}, decomposition is {dec}",
                              {"character": char, "decomposition": dec})
    return {"r": M.r, "character": list(char), "decomposition": list(dec),
            "change_of_basis": [list(row) for row in B], "determinant": integer_det(B), "ok": True}


# ---------------------------------------------------------------------------
# Root presentations


@dataclass(frozen=True)
class RootPresentation:
    """``A[T]/(T^n - f)`` with ``T`` in degree one: free over ``A`` on ``1, T, ..., T^{n-1}``."""

    ring: BaseRing
    f: tuple
    n: int

    @property
    def relation(self) -> tuple:
        """Coefficients of ``T^n - f`` in ``T`` (each an element of ``A``)."""
        kx = self.ring.kx
        return (kx.neg(self.f),) + ((),) * (self.n - 1) + (kx.const(1),)

    @property
    def modulus_degree(self) -> int:
        """Degree over ``k`` of the branch locus ``f = 0``."""
        return self.ring.kx.deg(self.f)

    def pieces(self):
        return [FpModule.free(self.ring, 1) for _ in range(self.n)]

    def graded_module(self) -> GradedBoxModule:
        """The algebra as a graded module over itself, ready for ``pair_from_graded``."""
        R1 = FpModule.free(self.ring, 1)
        one = ModuleMap.identity(R1)
        pieces = {(u,): R1 for u in range(self.n + 1)}
        s_action = {((u,), 0): (ModuleMap.multiplication(R1, self.f) if u == self.n - 1 else one)
                    for u in range(self.n)}
        return GradedBoxModule([DivisorTriple(self.f, self.n)], pieces, s_action,
                               {((0,), 0): one})

    def as_dict(self):
        return {"n": self.n, "f": [str(c) for c in self.f],
                "relation": [[str(c) for c in e] for e in self.relation],
                "grading": [f"T^{j}" for j in range(self.n)]}


def root_presentation(f, n: int, ring: BaseRing | None = None) -> RootPresentation:
    ring = ring or BaseRing.poly_line(Field(0))
    p = ring.field.p
    if n < 1:
        raise ValueError("root index must be positive")
    if p and n % p == 0:
        raise BadCharacteristic(f"{n}-th roots in characteristic {p} are wild")
    return RootPresentation(ring, ring.element(f), n)
