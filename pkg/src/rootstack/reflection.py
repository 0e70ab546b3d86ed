"""Finite matrix groups, pseudo-reflections and mirror arrangements.

Checks the linear-algebra lemma: if the mirrors of a group generated by
pseudo-reflections form a normal-crossing arrangement at the origin, the
group is abelian.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field

from .errors import ClosureCap, GeneratedByReflectionsViolation, WildCharacteristic
from .ring import Field

CAP = 10000

CONFIRMED = "Confirmed"
NOT_APPLICABLE = "NotApplicable"
FALSIFIED = "LemmaFalsified"


def _mat(F: Field, rows):
    return tuple(tuple(F(v) for v in row) for row in rows)


def _norm(F: Field, v):
    return v % F.p if F.p else v


def mat_mul(F: Field, a, b):
    n = len(a)
    return tuple(tuple(_norm(F, sum(a[i][k] * b[k][j] for k in range(n))) for j in range(n))
                 for i in range(n))


def identity(F: Field, n: int):
    return tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n))


def row_echelon(F: Field, rows):
    """Reduced row echelon form (list of nonzero rows, first entries 1)."""
    m = [list(r) for r in rows]
    out = []
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in m if r[c]), None)
        if piv is None:
            continue
        m.remove(piv)
        inv = F.inv(piv[c])
        piv = [_norm(F, v * inv) for v in piv]
        m = [[_norm(F, a - r[c] * b) for a, b in zip(r, piv)] for r in m]
        out = [[_norm(F, a - r[c] * b) for a, b in zip(r, piv)] for r in out]
        out.append(piv)
    return out


def rank(F: Field, rows) -> int:
    return len(row_echelon(F, rows))


def one_minus(F: Field, g):
    n = len(g)
    return tuple(tuple(_norm(F, (F.one if i == j else F.zero) - g[i][j]) for j in range(n))
                 for i in range(n))


def is_pseudo_reflection(F: Field, g) -> bool:
    return rank(F, one_minus(F, g)) == 1


def mirror(F: Field, g) -> tuple:
    """Normal covector of the fixed hyperplane ``ker(1 - g)``, first nonzero entry 1."""
    for row in one_minus(F, g):
        nz = next((v for v in row if v), None)
        if nz is not None:
            inv = F.inv(nz)
            return tuple(_norm(F, v * inv) for v in row)
    raise ValueError("identity has no mirror")


def inverse_matrix(F: Field, g):
    n = len(g)
    aug = [list(row) + [F.one if i == j else F.zero for j in range(n)]
           for i, row in enumerate(g)]
    red = row_echelon(F, aug)
    if len(red) < n or any(not red[i][i] for i in range(n)):
        raise ValueError("matrix is not invertible")
    red.sort(key=lambda r: next(i for i, v in enumerate(r) if v))
    return tuple(tuple(r[n:]) for r in red)


def order(F: Field, g, limit: int = CAP) -> int:
    e = identity(F, len(g))
    h = g
    for k in range(1, limit + 1):
        if h == e:
            return k
        h = mat_mul(F, h, g)
    raise ClosureCap(f"element order exceeds {limit}")


@dataclass(frozen=True)
class ReflectionGroup:
    field: Field
    dim: int
    generators: tuple
    elements: tuple
    reflections: tuple = ()
    mirrors: tuple = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_abelian(self) -> bool:
        F = self.field
        return all(mat_mul(F, a, b) == mat_mul(F, b, a)
                   for a, b in itertools.combinations(self.generators, 2))

    def distinct_mirrors(self) -> tuple:
        return tuple(sorted(set(self.mirrors)))


def _closure(F: Field, gens, n, cap):
    e = identity(F, n)
    seen = {e}
    queue = deque([e])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = mat_mul(F, a, g)
            if b not in seen:
                seen.add(b)
                if len(seen) > cap:
                    raise ClosureCap(f"closure exceeds {cap} elements")
                queue.append(b)
    return seen


def close(generators, field: Field, cap: int = CAP) -> ReflectionGroup:
    """Finite closure of invertible matrices under multiplication."""
    F = field
    gens = tuple(_mat(F, g) for g in generators)
    n = len(gens[0]) if gens else 0
    for g in gens:
        if len(g) != n or any(len(row) != n for row in g) or rank(F, g) != n:
            raise ValueError("generators must be invertible square matrices of one size")
    if not gens:
        raise ValueError("need at least one generator (the identity is allowed)")
    elements = tuple(sorted(_closure(F, gens, n, cap)))
    if F.p and len(elements) % F.p == 0:
        raise WildCharacteristic(f"group order {len(elements)} divisible by {F.p}")
    refl = tuple(g for g in elements if is_pseudo_reflection(F, g))
    return ReflectionGroup(F, n, gens, elements, refl, tuple(mirror(F, g) for g in refl))


def normal_crossing(G: ReflectionGroup) -> bool:
    normals = G.distinct_mirrors()
    if not normals:
        return True
    return len(normals) <= G.dim and rank(G.field, normals) == len(normals)


def element_abelian(G: ReflectionGroup) -> bool:
    F = G.field
    return all(mat_mul(F, a, b) == mat_mul(F, b, a)
               for a, b in itertools.combinations(G.elements, 2))


@dataclass(frozen=True)
class Verdict:
    verdict: str
    normal_crossing: bool
    abelian: bool
    order: int
    mirrors: int

    def as_dict(self):
        return {"verdict": self.verdict, "normal_crossing": self.normal_crossing,
                "abelian": self.abelian, "order": self.order, "mirrors": self.mirrors}


def abelian_inertia_check(G: ReflectionGroup) -> Verdict:
    F = G.field
    gens = G.reflections or (identity(F, G.dim),)
    if len(_closure(F, gens, G.dim, CAP)) != G.order:
        raise GeneratedByReflectionsViolation("the pseudo-reflections generate a proper subgroup")
    nc = normal_crossing(G)
    ab = G.is_abelian()
    if nc:
        verdict = CONFIRMED if ab else FALSIFIED
    else:
        verdict = NOT_APPLICABLE
    return Verdict(verdict, nc, ab, G.order, len(G.distinct_mirrors()))


# ---------------------------------------------------------------------------
# Exhaustive sweep in dimension 2 over F_p


def pseudo_reflections(p: int, dim: int = 2, max_order: int = 6):
    """All pseudo-reflections of order ``<= max_order`` in ``GL_dim(F_p)``."""
    F = Field(p)
    out = []
    for entries in itertools.product(range(p), repeat=dim * dim):
        g = tuple(tuple(entries[i * dim:(i + 1) * dim]) for i in range(dim))
        if rank(F, g) != dim or not is_pseudo_reflection(F, g):
            continue
        h, k = g, 1
        e = identity(F, dim)
        while h != e and k <= max_order:
            h = mat_mul(F, h, g)
            k += 1
        if k <= max_order:
            out.append(g)
    return out


@dataclass
class SweepReport:
    p: int
    reflections: int = 0
    pairs: int = 0
    commuting: int = 0
    third_mirror: int = 0
    closed: int = 0
    capped: int = 0
    wild: int = 0
    confirmed: int = 0
    not_applicable: int = 0
    counterexamples: list = field(default_factory=list)

    def as_dict(self):
        d = dict(self.__dict__)
        d["counterexamples"] = [[list(map(list, g)), list(map(list, h))]
                                for g, h in self.counterexamples]
        return d


def _mul2(p, a, b):
    return ((a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p,
            (a[2] * b[0] + a[3] * b[2]) % p, (a[2] * b[1] + a[3] * b[3]) % p)


def _inv2(p, a):
    d = pow((a[0] * a[3] - a[1] * a[2]) % p, -1, p)
    return (a[3] * d % p, -a[1] * d % p, -a[2] * d % p, a[0] * d % p)


def _mirror2(p, a):
    for row in (((1 - a[0]) % p, -a[1] % p), (-a[2] % p, (1 - a[3]) % p)):
        if row[0]:
            inv = pow(row[0], -1, p)
            return (1, row[1] * inv % p)
        if row[1]:
            return (0, 1)
    raise ValueError("identity has no mirror")


def _flat(g):
    return tuple(v for row in g for v in row)


def _square(g):
    return (g[0:2], g[2:4])


def _classify_pair(F: Field, g, h, mg, mh, report: SweepReport):
    """Classify one pair of 2x2 pseudo-reflections (flat tuples over ``F_p``)."""
    p = F.p
    gh, hg = _mul2(p, g, h), _mul2(p, h, g)
    if gh == hg:
        report.commuting += 1
        return "commuting"
    # h g h^-1 and g h g^-1 lie in the group and have mirrors h.V_g and g.V_h
    hi, gi = _inv2(p, h), _inv2(p, g)
    known = {mg, mh, _mirror2(p, _mul2(p, gh, gi)), _mirror2(p, _mul2(p, hg, hi))}
    if len(known) > 2:
        report.third_mirror += 1
        return "third-mirror"
    # a nontrivial unipotent commutator has order p, so p divides |G|
    c = _mul2(p, _mul2(p, gh, gi), hi)
    one = (1, 0, 0, 1)
    n = tuple((a - b) % p for a, b in zip(c, one))
    if c != one and _mul2(p, n, n) == (0, 0, 0, 0):
        report.wild += 1
        return "wild"
    try:
        G = close([_square(g), _square(h)], F)
    except ClosureCap:
        report.capped += 1
        return "capped"
    except WildCharacteristic:
        report.wild += 1
        return "wild"
    report.closed += 1
    v = abelian_inertia_check(G)
    if v.verdict == FALSIFIED:
        report.counterexamples.append((_square(g), _square(h)))
    elif v.verdict == CONFIRMED:
        report.confirmed += 1
    else:
        report.not_applicable += 1
    return v.verdict


def sweep(p: int, max_order: int = 6) -> SweepReport:
    """Every unordered pair of distinct pseudo-reflections of ``GL_2(F_p)``.

    Commuting pairs generate abelian groups and cannot contradict the lemma.
    For the rest, an explicit conjugate with a third mirror already rules out
    normal crossing; otherwise the group is closed and checked in full.
    """
    F = Field(p)
    refl = [_flat(g) for g in pseudo_reflections(p, 2, max_order)]
    mirrors = [_mirror2(p, g) for g in refl]
    report = SweepReport(p, reflections=len(refl))
    for a, b in itertools.combinations(range(len(refl)), 2):
        report.pairs += 1
        _classify_pair(F, refl[a], refl[b], mirrors[a], mirrors[b], report)
    return report


def cross_check(p: int, samples: int, seed: int, max_order: int = 6) -> int:
    """Re-run random pairs through the full closure and compare verdicts.

    Returns the number of disagreements (expected zero).
    """
    F = Field(p)
    refl = pseudo_reflections(p, 2, max_order)
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        g, h = rng.sample(refl, 2)
        scratch = SweepReport(p)
        fast = _classify_pair(F, _flat(g), _flat(h), _mirror2(p, _flat(g)),
                              _mirror2(p, _flat(h)), scratch)
        try:
            G = close([g, h], F)
        except (ClosureCap, WildCharacteristic):
            if fast not in ("commuting", "third-mirror", "capped", "wild"):
                bad += 1
            continue
        v = abelian_inertia_check(G)
        if fast == "commuting" and (v.verdict == FALSIFIED or not element_abelian(G)):
            bad += 1
        elif fast == "third-mirror" and v.verdict != NOT_APPLICABLE:
            bad += 1
        elif fast in (CONFIRMED, NOT_APPLICABLE, FALSIFIED) and fast != v.verdict:
            bad += 1
    return bad


def primitive_root_matrix(p: int, k: int):
    """``diag(zeta_k, 1)`` over ``F_p``."""
    z = Field(p).root_of_unity(k)
    return ((z, 0), (0, 1))

