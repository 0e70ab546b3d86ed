"""Seeded random generators for modules, pairs and short exact sequences.

Valid pairs are produced as cokernels of morphisms between sums of free
pairs, then optionally re-framed so that pseudo-periods are not identities.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .parabolic import (
    DivisorTriple,
    ExtendablePair,
    direct_sum_pairs,
    free_pair,
    pair_cokernel,
    pair_image,
    reframe,
    yoneda,
)
from .ring import FIELD, BaseRing, Field, FpModule


def rng_for(seed) -> random.Random:
    """Deterministic generator; composite seeds such as ``(p, k)`` go through ``repr``."""
    return random.Random(seed if isinstance(seed, (int, str)) else repr(seed))


def random_scalar(field: Field, rng: random.Random, nonzero=False):
    while True:
        if field.p:
            a = field(rng.randrange(field.p))
        else:
            a = Fraction(rng.randint(-2, 2))
        if a or not nonzero:
            return a


def random_element(ring: BaseRing, rng: random.Random, max_deg: int = 1):
    deg = 0 if ring.kind == FIELD else rng.randint(0, max_deg)
    return ring.element([random_scalar(ring.field, rng) for _ in range(deg + 1)])


def random_module(ring: BaseRing, rng: random.Random, max_gens=3, max_rels=2, max_deg=1):
    g = rng.randint(0, max_gens)
    rels = [tuple(random_element(ring, rng, max_deg) for _ in range(g))
            for _ in range(rng.randint(0, max_rels))] if g else []
    return FpModule(ring, g, tuple(rels))


def random_sections(ring: BaseRing, rng: random.Random, n: int, allow_zero=True):
    """Sections that are zero or distinct linear factors ``x - a`` (hence coprime)."""
    field = ring.field
    if ring.kind == FIELD:
        return [() for _ in range(n)]
    pool = list(range(field.p)) if field.p else list(range(-3, 4))
    roots = rng.sample(pool, n)
    out = []
    for a in roots:
        if allow_zero and rng.random() < 0.2:
            out.append(())
        else:
            out.append(ring.element([field(-a), field(1)]))
    return out


def random_divisors(ring: BaseRing, rng: random.Random, n: int, max_r: int = 4, allow_zero=True):
    secs = random_sections(ring, rng, n, allow_zero)
    p = ring.field.p
    rs = []
    for _ in range(n):
        while True:
            r = rng.randint(1, max_r)
            if not p or r % p:
                break
        rs.append(r)
    return [DivisorTriple(s, r) for s, r in zip(secs, rs)]


def _random_degree(rng, r):
    return tuple(rng.randrange(a) for a in r)


def random_free_sum(ring, divisors, rng, max_gens=2) -> ExtendablePair:
    r = tuple(d.r for d in divisors)
    frees = [free_pair(ring, divisors, _random_degree(rng, r))
             for _ in range(rng.randint(1, max_gens))]
    return direct_sum_pairs(frees)


def random_yoneda(Q: ExtendablePair, rng, max_elems=2, max_deg=1):
    elems = []
    r = Q.r
    for _ in range(rng.randint(0, max_elems)):
        e = _random_degree(rng, r)
        M = Q.objects[e]
        elems.append((e, tuple(random_element(Q.ring, rng, max_deg) for _ in range(M.ngens))))
    return yoneda(Q, elems)


def _unimodular(ring, rng, size):
    """A random invertible matrix over ``ring`` with its inverse."""
    kx = ring.kx
    U = [[ring.element([1]) if a == b else () for b in range(size)] for a in range(size)]
    Ui = [row[:] for row in U]
    for a in range(size):
        c = random_scalar(ring.field, rng, nonzero=True)
        U[a] = [kx.scale(e, c) for e in U[a]]
        ci = ring.field.inv(c)
        for row in Ui:
            row[a] = kx.scale(row[a], ci)
    if size >= 2:
        for _ in range(2):
            a, b = rng.sample(range(size), 2)
            c = random_element(ring, rng, 1)
            # row_a += c * row_b on U; column_b -= c * column_a on the inverse
            U[a] = [kx.add(x, kx.mul(c, y)) for x, y in zip(U[a], U[b])]
            for row in Ui:
                row[b] = kx.sub(row[b], kx.mul(c, row[a]))
    return tuple(tuple(r) for r in U), tuple(tuple(r) for r in Ui)


def random_reframe(P: ExtendablePair, rng, prob=0.3) -> ExtendablePair:
    changes = {}
    for u, M in P.objects.items():
        if M.ngens and rng.random() < prob:
            changes[u] = _unimodular(P.ring, rng, M.ngens)
    return reframe(P, changes) if changes else P


def random_pair(ring, divisors, rng, max_gens=2, max_rels=2, reframe_prob=0.3) -> ExtendablePair:
    """Cokernel of a random morphism into a sum of free pairs, re-framed at random."""
    B = random_free_sum(ring, divisors, rng, max_gens)
    C, _ = pair_cokernel(random_yoneda(B, rng, max_rels))
    return random_reframe(C, rng, reframe_prob) if reframe_prob else C


def random_ses(ring, divisors, rng, max_gens=2, max_rels=2):
    """``(A, B, C)`` with ``0 -> A -> B -> C -> 0`` exact, all valid pairs."""
    B = random_pair(ring, divisors, rng, max_gens, max_rels, reframe_prob=0.0)
    phi = random_yoneda(B, rng, max_rels)
    A, _, _ = pair_image(phi)
    C, _ = pair_cokernel(phi)
    return A, B, C


def random_base(rng, fields=(0, 5), kinds=("PolyLine",)):
    p = rng.choice(fields)
    kind = rng.choice(kinds)
    return BaseRing(kind, Field(p))


def all_shapes(n_max: int, r_max: int):
    for n in range(1, n_max + 1):
        yield from itertools.product(range(1, r_max + 1), repeat=n)


def random_graded(ring: BaseRing, r: int, rng, max_gens=3, max_rels=3):
    """A random ``Z/r``-graded module over the line, via a random pair on ``x``."""
    from .equivariant import divisor, from_pair

    return from_pair(random_pair(ring, divisor(r), rng, max_gens, max_rels))


def random_leaf(ring: BaseRing, divisors, T, rng, max_gens=2):
    """A leaf diagram on the interior of face ``T``: a fixed module killed by
    every ``s_i`` (``i`` in ``T``) with edges given by random scalars."""
    from .localize import LeafDiagram, interior_points
    from .ring import ModuleMap

    M = random_module(ring, rng, max_gens, 2)
    kill = [d.section for i, d in enumerate(divisors) if i in T and d.section]
    if kill and M.ngens:
        extra = tuple(tuple(s if a == b else () for b in range(M.ngens))
                      for s in kill for a in range(M.ngens))
        M = FpModule(ring, M.ngens, M.relations + extra)
    rT = tuple(divisors[i].r for i in T)
    objects, edges = {}, {}
    for w in interior_points(rT, range(len(T))):
        objects[w] = M
        for j in range(len(T)):
            if w[j] + 1 < rT[j]:
                edges[(w, j)] = ModuleMap.multiplication(M, ring.element([random_scalar(ring.field, rng)]))
    return LeafDiagram(tuple(T), rT, objects, edges)


def random_leaf_family(ring: BaseRing, divisors, k: int, rng, max_gens=2) -> dict:
    from .localize import faces

    return {T: random_leaf(ring, divisors, T, rng, max_gens) for T in faces(len(divisors), k)}
