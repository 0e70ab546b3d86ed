"""Exact base rings and finitely presented modules over them.

Every base ring is handled through univariate polynomial arithmetic over a
coefficient field (the rationals or a prime field):

* ``Field``               -- the coefficient field itself (constant polynomials);
* ``PolyLine``            -- ``k[x]``;
* ``SquarefreeQuotient``  -- ``k[x]/(m)`` with ``m`` squarefree.

A module over ``k[x]/(m)`` is stored as a ``k[x]``-module whose relation
lattice contains ``m * e_j`` for every generator, so a single Hermite column
form over the Euclidean ring ``k[x]`` serves as canonical form for all three
kinds.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import (
    IllFormedMap,
    NoSolution,
    NotInvertible,
    NotSquarefree,
    NotSupportedOnDivisor,
)

FIELD = "Field"
POLY_LINE = "PolyLine"
QUOTIENT = "SquarefreeQuotient"

Poly = tuple  # coefficients, lowest degree first, no trailing zeros


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """The rationals (``p == 0``) or the prime field ``F_p``."""

    __slots__ = ("p",)

    def __init__(self, p: int = 0):
        if p and not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p == 0 else f"F_{self.p}"

    @property
    def char(self) -> int:
        return self.p

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, value):
        if self.p:
            if isinstance(value, Fraction):
                return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
            return int(value) % self.p
        return Fraction(value)

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(a, -1, self.p)
        return 1 / a

    def elements(self):
        """All elements of a prime field (brute-force enumeration helper)."""
        if not self.p:
            raise ValueError("the rationals are infinite")
        return range(self.p)

    def root_of_unity(self, order: int):
        """A primitive ``order``-th root of unity in ``F_p``, if one exists."""
        if not self.p or (self.p - 1) % order:
            raise ValueError(f"{self} has no primitive {order}-th root of unity")
        for g in range(1, self.p):
            if pow(g, order, self.p) == 1 and all(
                pow(g, order // q, self.p) != 1 for q in _prime_divisors(order)
            ):
                return g
        raise AssertionError("unreachable")


def _prime_divisors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class KX:
    """Arithmetic in ``k[x]`` on coefficient tuples (lowest degree first)."""

    def __init__(self, field: Field):
        self.k = field
        self.p = field.p
        self.one = (field.one,)

    def strip(self, coeffs) -> Poly:
        k = self.k
        c = [k(a) for a in coeffs]
        while c and not c[-1]:
            c.pop()
        return tuple(c)

    def _trim(self, c: list) -> Poly:
        while c and not c[-1]:
            c.pop()
        return tuple(c)

    def const(self, a) -> Poly:
        a = self.k(a)
        return (a,) if a else ()

    def add(self, a: Poly, b: Poly) -> Poly:
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, v in enumerate(b):
            c[i] = c[i] + v
        if self.p:
            c = [v % self.p for v in c]
        return self._trim(c)

    def neg(self, a: Poly) -> Poly:
        if self.p:
            return tuple((-v) % self.p for v in a)
        return tuple(-v for v in a)

    def sub(self, a: Poly, b: Poly) -> Poly:
        return self.add(a, self.neg(b))

    def mul(self, a: Poly, b: Poly) -> Poly:
        if not a or not b:
            return ()
        c = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if not u:
                continue
            for j, v in enumerate(b):
                c[i + j] += u * v
        if self.p:
            c = [v % self.p for v in c]
        else:
            c = [Fraction(v) for v in c]
        return self._trim(c)

    def scale(self, a: Poly, s) -> Poly:
        if not s:
            return ()
        if self.p:
            return self._trim([(v * s) % self.p for v in a])
        return tuple(v * s for v in a)

    def deg(self, a: Poly) -> int:
        return len(a) - 1

    def divmod(self, a: Poly, b: Poly):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        if len(a) < len(b):
            return (), a
        r = list(a)
        db = len(b) - 1
        inv = self.k.inv(b[-1])
        q = [self.k.zero] * (len(a) - db)
        p = self.p
        for i in range(len(a) - 1, db - 1, -1):
            c = r[i]
            if not c:
                continue
            c = (c * inv) % p if p else c * inv
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
            if p:
                for j in range(db + 1):
                    r[i - db + j] %= p
        return self._trim(q), self._trim(r[:db])

    def mod(self, a: Poly, b: Poly) -> Poly:
        return self.divmod(a, b)[1]

    def monic(self, a: Poly) -> Poly:
        if not a:
            return a
        return self.scale(a, self.k.inv(a[-1]))

    def gcd(self, a: Poly, b: Poly) -> Poly:
        while b:
            a, b = b, self.mod(a, b)
        return self.monic(a)

    def xgcd(self, a: Poly, b: Poly):
        """Return ``(g, u, v)`` with ``u*a + v*b == g`` and ``g`` monic."""
        r0, r1 = a, b
        s0, s1 = self.one, ()
        t0, t1 = (), self.one
        while r1:
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        if not r0:
            return (), (), ()
        inv = self.k.inv(r0[-1])
        return self.scale(r0, inv), self.scale(s0, inv), self.scale(t0, inv)

    def derivative(self, a: Poly) -> Poly:
        return self._trim([self.k(i * a[i]) for i in range(1, len(a))])

    def power(self, a: Poly, e: int) -> Poly:
        out = self.one
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def is_unit(self, a: Poly) -> bool:
        return len(a) == 1

    def is_squarefree(self, a: Poly) -> bool:
        return bool(a) and (len(a) == 1 or self.is_unit(self.gcd(a, self.derivative(a))))


@lru_cache(maxsize=None)
def _factor(p: int, poly: Poly) -> tuple:
    import sympy

    x = sympy.Symbol("x")
    kx = KX(Field(p))
    if len(poly) <= 1:
        return ()
    high_first = [sympy.Rational(c.numerator, c.denominator) if not p else int(c)
                  for c in reversed(poly)]
    if p:
        P = sympy.Poly(high_first, x, modulus=p)
    else:
        P = sympy.Poly(high_first, x, domain=sympy.QQ)
    factors = []
    for f, _mult in P.factor_list()[1]:
        coeffs = [sympy.Rational(c) for c in reversed(f.all_coeffs())]
        if p:
            tup = kx.strip(int(c) % p for c in coeffs)
        else:
            tup = kx.strip(Fraction(int(c.p), int(c.q)) for c in coeffs)
        factors.append(kx.monic(tup))
    return tuple(sorted(factors, key=lambda f: (len(f), f)))


@dataclass(frozen=True)
class BaseRing:
    """A computable coefficient base.

    ``modulus`` is only meaningful for ``SquarefreeQuotient``; it is stored
    monic.  The modulus ``1`` gives the zero ring, which stands in for an empty
    intersection of divisors.
    """

    kind: str
    field: Field
    modulus: Poly = ()

    def __post_init__(self):
        if self.kind not in (FIELD, POLY_LINE, QUOTIENT):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == QUOTIENT:
            kx = KX(self.field)
            m = kx.strip(self.modulus)
            if not m:
                raise NotSquarefree("quotient by zero is not a squarefree quotient")
            m = kx.monic(m)
            if len(m) > 1 and not kx.is_unit(kx.gcd(m, kx.derivative(m))):
                raise NotSquarefree(f"modulus {m} has a repeated factor")
            object.__setattr__(self, "modulus", m)
        elif self.modulus:
            raise ValueError(f"{self.kind} takes no modulus")

    @classmethod
    def of_field(cls, field: Field) -> "BaseRing":
        return cls(FIELD, field)

    @classmethod
    def poly_line(cls, field: Field) -> "BaseRing":
        return cls(POLY_LINE, field)

    @classmethod
    def quotient(cls, field: Field, modulus) -> "BaseRing":
        return cls(QUOTIENT, field, tuple(modulus))

    @cached_property
    def kx(self) -> KX:
        return KX(self.field)

    @cached_property
    def factors(self) -> tuple:
        """Monic irreducible factors of the modulus, sorted by (degree, coefficients)."""
        if self.kind != QUOTIENT:
            return ()
        return _factor(self.field.p, self.modulus)

    @property
    def class_length(self) -> int:
        return len(self.factors) if self.kind == QUOTIENT else 1

    @property
    def is_zero_ring(self) -> bool:
        return self.kind == QUOTIENT and len(self.modulus) == 1

    def element(self, coeffs) -> Poly:
        """Canonical form of a ring element given by its coefficient list."""
        kx = self.kx
        a = kx.strip(coeffs)
        if self.kind == FIELD and len(a) > 1:
            raise ValueError(f"non-constant element {a} of a field base")
        if self.kind == QUOTIENT:
            a = kx.mod(a, self.modulus)
        return a

    def __repr__(self):
        if self.kind == QUOTIENT:
            return f"{self.field}[x]/({_fmt_poly(self.modulus)})"
        if self.kind == POLY_LINE:
            return f"{self.field}[x]"
        return repr(self.field)


def _fmt_poly(a: Poly) -> str:
    if not a:
        return "0"
    terms = []
    for i, c in enumerate(a):
        if c:
            terms.append(f"{c}" if i == 0 else f"{c}*x^{i}")
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# Column echelon machinery over k[x]


def _sub_multiple(kx: KX, c: list, q: Poly, p: list, start: int) -> list:
    out = list(c)
    for r in range(start, len(c)):
        if p[r]:
            out[r] = kx.sub(c[r], kx.mul(q, p[r]))
    return out


def _echelon(kx: KX, cols, top: int):
    """Unimodular column reduction of ``cols`` on their first ``top`` rows.

    Returns ``(pivots, pivot_rows, rest)``.  ``pivots`` is the Hermite column
    form of the top block (monic pivots, entries to the left of each pivot
    reduced modulo it); ``rest`` holds the reduced columns whose top block
    vanished, which carry a kernel basis when extra tracking rows are
    appended below ``top``.
    """
    work = [list(c) for c in cols if any(c)]
    pivots: list = []
    prows: list = []
    for i in range(top):
        nz, rest = [], []
        for c in work:
            (nz if c[i] else rest).append(c)
        if not nz:
            continue
        while len(nz) > 1:
            nz.sort(key=lambda c: len(c[i]))
            p = nz[0]
            keep = [p]
            for c in nz[1:]:
                q, _ = kx.divmod(c[i], p[i])
                c = _sub_multiple(kx, c, q, p, i)
                if c[i]:
                    keep.append(c)
                elif any(c):
                    rest.append(c)
            nz = keep
        p = nz[0]
        lead = p[i][-1]
        if lead != 1:
            inv = kx.k.inv(lead)
            p = [kx.scale(e, inv) for e in p]
        for d in pivots:
            if d[i] and len(d[i]) >= len(p[i]):
                q, _ = kx.divmod(d[i], p[i])
                d[:] = _sub_multiple(kx, d, q, p, i)
        pivots.append(p)
        prows.append(i)
        work = rest
    return pivots, prows, work


def hermite(kx: KX, cols, nrows: int) -> tuple:
    """Canonical Hermite column basis of the submodule spanned by ``cols``."""
    pivots, _, _ = _echelon(kx, cols, nrows)
    return tuple(tuple(p) for p in pivots)


def _reduce(kx: KX, v, pivots, prows):
    """Reduce ``v`` modulo a Hermite basis; returns ``(remainder, quotients)``."""
    v = list(v)
    quot = []
    for p, i in zip(pivots, prows):
        if v[i]:
            q, _ = kx.divmod(v[i], p[i])
            if q:
                v = _sub_multiple(kx, v, q, p, i)
            quot.append(q)
        else:
            quot.append(())
    return v, quot


def _pivot_row(col) -> int:
    for i, e in enumerate(col):
        if e:
            return i
    raise ValueError("zero column")


# ---------------------------------------------------------------------------
# Modules and maps


@dataclass(frozen=True)
class FpModule:
    """Finitely presented module ``ring^ngens / (column span of relations)``.

    The relation columns are replaced by their canonical Hermite basis on
    construction, so equality of two instances means equality of generator
    count and relation submodule.
    """

    ring: BaseRing
    ngens: int
    relations: tuple = ()

    def __post_init__(self):
        ring = self.ring
        kx = ring.kx
        cols = []
        for col in self.relations:
            if len(col) != self.ngens:
                raise ValueError("relation column length differs from generator count")
            cols.append([ring.element(e) for e in col])
        if ring.kind == QUOTIENT:
            for j in range(self.ngens):
                e = [()] * self.ngens
                e[j] = ring.modulus
                cols.append(e)
        object.__setattr__(self, "relations", hermite(kx, cols, self.ngens))

    @classmethod
    def free(cls, ring: BaseRing, rank: int) -> "FpModule":
        return cls(ring, rank)

    @classmethod
    def zero(cls, ring: BaseRing) -> "FpModule":
        return cls(ring, 0)

    @classmethod
    def cyclic(cls, ring: BaseRing, annihilator) -> "FpModule":
        """``ring / (annihilator)``."""
        return cls(ring, 1, ((tuple(annihilator),),))

    @cached_property
    def _prows(self) -> tuple:
        return tuple(_pivot_row(c) for c in self.relations)

    @property
    def rank(self) -> int:
        return self.ngens - len(self.relations)

    def is_zero(self) -> bool:
        if len(self.relations) != self.ngens:
            return False
        return all(len(c[i]) == 1 for c, i in zip(self.relations, self._prows))

    def reduce(self, v) -> tuple:
        """Canonical representative of the vector ``v`` modulo relations."""
        v = [self.ring.element(e) for e in v]
        rem, _ = _reduce(self.ring.kx, v, self.relations, self._prows)
        return tuple(rem)

    def contains_relation(self, v) -> bool:
        return not any(self.reduce(v))

    def over(self, ring: BaseRing) -> "FpModule":
        """The same presentation read over another base with the same field."""
        return FpModule(ring, self.ngens, self.relations)

    def __repr__(self):
        return f"FpModule({self.ring!r}, gens={self.ngens}, rels={len(self.relations)})"


def _columns(matrix, ncols: int):
    return [tuple(row[j] for row in matrix) for j in range(ncols)]


def _rows(columns, nrows: int):
    return tuple(tuple(c[i] for c in columns) for i in range(nrows))


@dataclass(frozen=True)
class ModuleMap:
    """A map given on generators: column ``j`` is the image of generator ``j``.

    ``matrix`` is stored row-major (``target.ngens`` rows) with every column
    reduced to its canonical representative modulo the target relations, so
    two maps are equal exactly when they agree as module homomorphisms.
    """

    source: FpModule
    target: FpModule
    matrix: tuple
    check: InitVar[bool] = True

    def __post_init__(self, check):
        if self.source.ring != self.target.ring:
            raise IllFormedMap("source and target live over different bases")
        g, h = self.source.ngens, self.target.ngens
        if len(self.matrix) != h or any(len(row) != g for row in self.matrix):
            raise IllFormedMap(f"matrix shape does not match {h}x{g}")
        if g and h:
            cols = [self.target.reduce(c) for c in _columns(self.matrix, g)]
            object.__setattr__(self, "matrix", _rows(cols, h))
        else:
            object.__setattr__(self, "matrix", tuple(() for _ in range(h)))
        if check and not self.is_well_defined():
            raise IllFormedMap("relations of the source are not sent to relations")

    @property
    def ring(self) -> BaseRing:
        return self.source.ring

    def columns(self):
        return _columns(self.matrix, self.source.ngens)

    def apply(self, v) -> tuple:
        kx = self.ring.kx
        out = []
        for row in self.matrix:
            acc = ()
            for a, b in zip(row, v):
                if a and b:
                    acc = kx.add(acc, kx.mul(a, b))
            out.append(acc)
        if not self.target.relations:
            return tuple(out)
        return self.target.reduce(out)

    def is_well_defined(self) -> bool:
        return all(not any(self.apply(r)) for r in self.source.relations)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise IllFormedMap("composition of maps with mismatched modules")
        g, h = other.source.ngens, self.target.ngens
        if not g or not h or not self.source.ngens:
            return _raw(other.source, self.target, tuple(((),) * g for _ in range(h)))
        cols = [self.apply(c) for c in other.columns()]
        return _raw(other.source, self.target, _rows(cols, h))

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        self._same_shape(other)
        kx = self.ring.kx
        rows = tuple(tuple(kx.add(a, b) for a, b in zip(r1, r2))
                     for r1, r2 in zip(self.matrix, other.matrix))
        return ModuleMap(self.source, self.target, rows, False)

    def __neg__(self) -> "ModuleMap":
        kx = self.ring.kx
        rows = tuple(tuple(kx.neg(a) for a in r) for r in self.matrix)
        return ModuleMap(self.source, self.target, rows, False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return self + (-other)

    def scaled(self, s) -> "ModuleMap":
        kx = self.ring.kx
        s = self.ring.element(s)
        rows = tuple(tuple(kx.mul(a, s) for a in r) for r in self.matrix)
        return ModuleMap(self.source, self.target, rows, False)

    def _same_shape(self, other):
        if other.source != self.source or other.target != self.target:
            raise IllFormedMap("maps between different modules")

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)

    @classmethod
    def identity(cls, M: FpModule) -> "ModuleMap":
        cached = M.__dict__.get("_identity")
        if cached is None:
            one = M.ring.kx.one
            rows = tuple(tuple(one if i == j else () for j in range(M.ngens))
                         for i in range(M.ngens))
            cached = cls(M, M, rows, False)
            M.__dict__["_identity"] = cached
        return cached

    @classmethod
    def zero(cls, M: FpModule, N: FpModule) -> "ModuleMap":
        return _raw(M, N, tuple(((),) * M.ngens for _ in range(N.ngens)))

    @classmethod
    def multiplication(cls, M: FpModule, s) -> "ModuleMap":
        """Multiplication by the ring element ``s`` on ``M``."""
        return cls.identity(M).scaled(s)

    def __repr__(self):
        return f"ModuleMap({self.source.ngens}->{self.target.ngens})"


def _raw(source: FpModule, target: FpModule, matrix: tuple) -> ModuleMap:
    """Build a map whose matrix is already canonical (internal fast path)."""
    f = object.__new__(ModuleMap)
    object.__setattr__(f, "source", source)
    object.__setattr__(f, "target", target)
    object.__setattr__(f, "matrix", matrix)
    return f


def _augmented(f: ModuleMap):
    """Columns of ``[A | R_target]`` with identity tracking on the ``A`` block."""
    g, h = f.source.ngens, f.target.ngens
    cols = []
    for j, c in enumerate(f.columns()):
        track = [()] * g
        track[j] = f.ring.kx.one
        cols.append(list(c) + track)
    for r in f.target.relations:
        cols.append(list(r) + [()] * g)
    return cols, h


def kernel(f: ModuleMap):
    """Kernel of ``f`` as ``(K, inclusion)``; ``inclusion`` is injective."""
    kx = f.ring.kx
    g = f.source.ngens
    if not g or f.target.is_zero():
        return f.source, ModuleMap.identity(f.source)
    cols, h = _augmented(f)
    _, _, null = _echelon(kx, cols, h)
    basis = hermite(kx, [c[h:] for c in null], g)
    prows = [_pivot_row(c) for c in basis]
    rels = []
    for r in f.source.relations:
        rem, quot = _reduce(kx, r, basis, prows)
        if any(rem):
            raise IllFormedMap("source relation escapes the kernel lattice")
        rels.append(tuple(quot))
    K = FpModule(f.ring, len(basis), tuple(rels))
    incl = ModuleMap(K, f.source, _rows(basis, g), False)
    return K, incl


def cokernel(f: ModuleMap):
    """Cokernel of ``f`` as ``(C, projection)``."""
    C = FpModule(f.ring, f.target.ngens, tuple(f.target.relations) + tuple(f.columns()))
    proj = ModuleMap(f.target, C, ModuleMap.identity(f.target).matrix, False)
    return C, proj


def image(f: ModuleMap):
    """Image of ``f`` as ``(I, source -> I, I -> target)``, presented on source generators."""
    kx = f.ring.kx
    g = f.source.ngens
    cols, h = _augmented(f)
    _, _, null = _echelon(kx, cols, h)
    I = FpModule(f.ring, g, tuple(tuple(c[h:]) for c in null))
    onto = ModuleMap(f.source, I, ModuleMap.identity(f.source).matrix, False)
    into = ModuleMap(I, f.target, f.matrix, False)
    return I, onto, into


def lift(g: ModuleMap, f: ModuleMap, check: bool = True) -> ModuleMap:
    """Solve ``f o h == g`` for ``h``; raises ``NoSolution`` when impossible.

    With ``check=False`` the caller guarantees ``h`` is well defined (true
    whenever ``f`` is injective).
    """
    if g.target != f.target:
        raise IllFormedMap("lift: maps with different targets")
    kx = f.ring.kx
    n = f.source.ngens
    if not g.source.ngens or g.target.is_zero():
        return ModuleMap.zero(g.source, f.source)
    cols, h = _augmented(f)
    pivots, prows, _ = _echelon(kx, cols, h)
    out = []
    for c in g.columns():
        rem, _ = _reduce(kx, list(c) + [()] * n, pivots, prows)
        if any(rem[:h]):
            raise NoSolution("target map does not factor")
        out.append(tuple(kx.neg(e) for e in rem[h:]))
    return ModuleMap(g.source, f.source, _rows(out, n), check)


def is_injective(f: ModuleMap) -> bool:
    return kernel(f)[0].is_zero()


def is_surjective(f: ModuleMap) -> bool:
    return cokernel(f)[0].is_zero()


def inverse(f: ModuleMap) -> ModuleMap:
    if f.source == f.target and f == ModuleMap.identity(f.source):
        return f
    if not (is_injective(f) and is_surjective(f)):
        raise NotInvertible("map is not an isomorphism")
    return lift(ModuleMap.identity(f.target), f, False)


def minimal_presentation(M: FpModule):
    """Drop generators killed by relations with unit pivots.

    Returns ``(N, to_N, from_N)`` with mutually inverse isomorphisms.
    """
    kx = M.ring.kx
    g = M.ngens
    unit = {i: c for c, i in zip(M.relations, M._prows) if len(c[i]) == 1}
    if not unit:
        return M, ModuleMap.identity(M), ModuleMap.identity(M)
    keep = [j for j in range(g) if j not in unit]
    pos = {j: a for a, j in enumerate(keep)}
    expr = {}
    for j in range(g - 1, -1, -1):
        if j in pos:
            v = [()] * len(keep)
            v[pos[j]] = kx.one
        else:
            c = unit[j]
            inv = kx.k.inv(c[j][0])
            v = [()] * len(keep)
            for b in range(j + 1, g):
                if c[b]:
                    coef = kx.neg(kx.scale(c[b], inv))
                    v = [kx.add(x, kx.mul(coef, y)) for x, y in zip(v, expr[b])]
        expr[j] = v
    rels = []
    for c, i in zip(M.relations, M._prows):
        if i in unit:
            continue
        v = [()] * len(keep)
        for b in range(g):
            if c[b]:
                v = [kx.add(x, kx.mul(c[b], y)) for x, y in zip(v, expr[b])]
        rels.append(tuple(v))
    N = FpModule(M.ring, len(keep), tuple(rels))
    to_n = ModuleMap(M, N, _rows([tuple(expr[j]) for j in range(g)], len(keep)), False)
    from_n = ModuleMap(N, M, _rows([tuple(kx.one if i == j else () for i in range(g))
                                    for j in keep], g), False)
    return N, to_n, from_n


def direct_sum(modules: Sequence[FpModule], ring: BaseRing | None = None) -> FpModule:
    if not modules:
        if ring is None:
            raise ValueError("empty direct sum needs an explicit ring")
        return FpModule.zero(ring)
    ring = modules[0].ring
    total = sum(M.ngens for M in modules)
    cols = []
    off = 0
    for M in modules:
        for r in M.relations:
            col = [()] * total
            col[off:off + M.ngens] = r
            cols.append(tuple(col))
        off += M.ngens
    return FpModule(ring, total, tuple(cols))


def block_map(source: FpModule, target: FpModule, blocks, src_sizes, tgt_sizes) -> ModuleMap:
    """Assemble a map from a dict ``{(row_block, col_block): matrix}``."""
    rows = [[()] * source.ngens for _ in range(target.ngens)]
    r_off = [sum(tgt_sizes[:i]) for i in range(len(tgt_sizes))]
    c_off = [sum(src_sizes[:j]) for j in range(len(src_sizes))]
    for (bi, bj), mat in blocks.items():
        for a, row in enumerate(mat):
            for b, e in enumerate(row):
                rows[r_off[bi] + a][c_off[bj] + b] = e
    return ModuleMap(source, target, tuple(tuple(r) for r in rows), False)


# ---------------------------------------------------------------------------
# Grothendieck group classes


@dataclass(frozen=True)
class G0Class:
    """An element of ``G_0`` of a base ring, as an integer vector."""

    base: BaseRing
    vector: tuple

    @classmethod
    def zero(cls, base: BaseRing) -> "G0Class":
        return cls(base, (0,) * base.class_length)

    def _check(self, other):
        if other.base != self.base:
            raise ValueError(f"classes over different bases {self.base} / {other.base}")

    def __add__(self, other):
        self._check(other)
        return G0Class(self.base, tuple(a + b for a, b in zip(self.vector, other.vector)))

    def __sub__(self, other):
        self._check(other)
        return G0Class(self.base, tuple(a - b for a, b in zip(self.vector, other.vector)))

    def __neg__(self):
        return G0Class(self.base, tuple(-a for a in self.vector))

    def __mul__(self, c: int):
        return G0Class(self.base, tuple(c * a for a in self.vector))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.vector)


def g0_class(M: FpModule) -> G0Class:
    """Class in ``G_0`` of the base: rank for ``Field``/``PolyLine``, per-factor
    dimension over the residue field for ``SquarefreeQuotient``."""
    base = M.ring
    if base.kind != QUOTIENT:
        return G0Class(base, (M.rank,))
    kx = base.kx
    vec = []
    for f in base.factors:
        cols = list(M.relations)
        for j in range(M.ngens):
            e = [()] * M.ngens
            e[j] = f
            cols.append(e)
        basis = hermite(kx, cols, M.ngens)
        dim = sum(len(c[_pivot_row(c)]) - 1 for c in basis)
        vec.append(dim // (len(f) - 1))
    return G0Class(base, tuple(vec))


def devissage_class(M: FpModule, s) -> G0Class:
    """Class in ``G_0(k[x]/(s))`` of a module on which ``s`` acts nilpotently.

    Sums the classes of the graded pieces ``s^j M / s^(j+1) M``.
    """
    kx = M.ring.kx
    s = kx.strip(s)
    if not s:
        raise NotSquarefree("the zero section has no divisor base")
    if len(s) > 1 and not kx.is_unit(kx.gcd(s, kx.derivative(s))):
        raise NotSquarefree(f"{s} is not squarefree")
    base = BaseRing.quotient(M.ring.field, s)
    total = G0Class.zero(base)
    max_deg = max((len(c[_pivot_row(c)]) - 1 for c in M.relations), default=0)
    cap = M.ngens * max(1, max_deg) + 1
    N = M
    for _ in range(cap + 1):
        if N.is_zero():
            return total
        mult = ModuleMap.multiplication(N, s)
        piece, _ = cokernel(mult)
        if piece.is_zero() or is_injective(mult):
            raise NotSupportedOnDivisor(f"no power of {s} annihilates the module")
        total = total + g0_class(piece.over(base))
        N, _, _ = image(mult)
    raise NotSupportedOnDivisor(f"nilpotence of {s} not reached within {cap} steps")
