"""A quick built-in regression run used by ``rootstack selfcheck``."""

from __future__ import annotations

import json
from importlib import resources

from .localize import (
    decompose,
    d_adjoint,
    integer_det,
    leaf_of,
    pi_lower,
    pi_upper,
    rank_identity,
    root_shapes,
    skyscraper_matrix,
)
from .ring import BaseRing, Field
from .sampling import random_divisors, random_leaf_family, random_module, rng_for

SKYSCRAPER_LIMIT = 8

CHI1_EXPECTED = {"x": [1], "leaves": [{"T": [1], "w": [1], "class": [1]}]}


def _check(name, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a selfcheck reports, it does not crash
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return {"name": name, "ok": bool(ok), "detail": detail}


def _rank_identity():
    bad = [r for r in root_shapes(64) if rank_identity(r)[0] != rank_identity(r)[1]]
    return not bad, f"{len(root_shapes(64))} shapes, {len(bad)} failures"


def _skyscrapers():
    ring = BaseRing.of_field(Field(0))
    shapes = root_shapes(SKYSCRAPER_LIMIT)
    dets = {r: integer_det(skyscraper_matrix(ring, r)) for r in shapes}
    bad = [r for r, d in dets.items() if abs(d) != 1]
    return not bad, f"{len(shapes)} shapes with prod r <= {SKYSCRAPER_LIMIT}, {len(bad)} non-unimodular"


def _adjunctions(seed):
    def run():
        bad = 0
        for k in range(20):
            rng = rng_for((seed, k))
            ring = BaseRing.poly_line(Field(rng.choice((0, 5))))
            n = rng.randint(1, 3)
            divisors = random_divisors(ring, rng, n, 4)
            M = random_module(ring, rng)
            if pi_lower(pi_upper(M, divisors)) != M:
                bad += 1
            level = rng.randint(1, n)
            family = random_leaf_family(ring, divisors, level, rng)
            P = d_adjoint(family, divisors, level, ring)
            if any(leaf_of(P, T) != G for T, G in family.items()):
                bad += 1
        return not bad, f"20 seeded inputs, {bad} failures"
    return run


def _chi1():
    from .serialize import pair_in

    text = (resources.files("rootstack") / "fixtures" / "chi1_pair.json").read_text()
    got = decompose(pair_in(json.loads(text), check=True)).as_dict()
    return got == CHI1_EXPECTED, got


def run_selfcheck(seed: int = 0) -> dict:
    checks = [
        _check("rank_identity", _rank_identity),
        _check("skyscraper_basis", _skyscrapers),
        _check("adjunction_identities", _adjunctions(seed)),
        _check("chi1_fixture", _chi1),
    ]
    return {"command": "selfcheck", "seed": seed, "ok": all(c["ok"] for c in checks),
            "checks": checks}
