import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootstack.equivariant import RootPresentation
from rootstack.errors import CoprimalityViolation
from rootstack.parabolic import (
    DivisorTriple,
    check_divisors,
    evaluate,
    evaluate_edge,
    extend,
    extension_path,
    free_pair,
    make_pair,
    normalize,
    pair_from_graded,
    reframe,
    truncate,
    validate_pair,
    window_equivalence,
    zero_pair,
)
from rootstack.ring import BaseRing, Field, FpModule, ModuleMap
from rootstack.sampling import random_divisors, random_pair, random_scalar, rng_for

QX = BaseRing.poly_line(Field(0))
X = (0, 1)


def worked_pair(second_edge=X):
    """k[x] at 0, 1, 2 with edges 1 then x, on the divisor x with r = 2."""
    R = FpModule.free(QX, 1)
    one = ModuleMap.identity(R)
    objects = {(0,): R, (1,): R, (2,): R}
    edges = {((0,), 0): one, ((1,), 0): ModuleMap.multiplication(R, second_edge)}
    return make_pair(QX, [DivisorTriple(X, 2)], objects, edges, {((2,), 0): one}, check=False)


def test_worked_pair_satisfies_ex1():
    assert validate_pair(worked_pair()).ok


def test_identity_second_edge_breaks_ex1():
    rep = validate_pair(worked_pair((1,)))
    assert not rep.ok
    assert ("EX1", (0,), (0,)) in rep.failures


def test_one_dimensional_pairs_have_no_ex2_ex3():
    for seed in range(10):
        rng = rng_for(seed)
        P = random_pair(QX, random_divisors(QX, rng, 1), rng)
        assert not [f for f in validate_pair(P).failures if f[0] in ("EX2", "EX3")]


def test_check_divisors_rejects_bad_data():
    F5 = BaseRing.poly_line(Field(5))
    with pytest.raises(CoprimalityViolation):
        check_divisors(F5, [DivisorTriple(X, 5)])
    with pytest.raises(CoprimalityViolation):
        check_divisors(QX, [DivisorTriple((0, 0, 1), 2)])
    with pytest.raises(CoprimalityViolation):
        check_divisors(QX, [DivisorTriple(X, 2), DivisorTriple((0, 1, 1), 3)])


def test_evaluate_euclidean_split():
    P = worked_pair()
    v = evaluate(P, (5,))
    assert (v.residue, v.twist) == ((1,), (2,))
    v = evaluate(P, (-1,))
    assert (v.residue, v.twist) == ((1,), (-1,))
    v = evaluate(P, (1,))
    assert (v.residue, v.twist) == ((1,), (0,))


def test_extension_edge_at_one_is_x():
    P = worked_pair()
    f = evaluate_edge(P, (1,), 0)
    assert f == ModuleMap.multiplication(P.objects[(1,)], X)


@pytest.mark.parametrize("seed", range(12))
def test_window_squares_and_periods(seed):
    rng = rng_for(seed)
    ring = BaseRing.poly_line(Field(rng.choice((0, 5))))
    divisors = random_divisors(ring, rng, rng.randint(1, 2), 3)
    P = random_pair(ring, divisors, rng)
    W = extend(P)
    for v in W.points():
        for i in range(P.n):
            top = tuple(a + (P.r[i] if k == i else 0) for k, a in enumerate(v))
            if top in W:
                s = ModuleMap.multiplication(W.values[v].module, P.divisors[i].section)
                assert W.path(v, top) == s
                assert extension_path(P, v, top) == s
    assert window_equivalence(P).ok


def test_truncate_of_zero_window_is_zero_pair():
    divisors = check_divisors(QX, [DivisorTriple(X, 2), DivisorTriple((-1, 1), 3)])
    Z = zero_pair(QX, divisors)
    assert truncate(extend(Z)) == Z


def test_truncate_extend_recovers_normalized_pairs():
    P = free_pair(QX, check_divisors(QX, [DivisorTriple(X, 3)]), (1,))
    assert truncate(extend(P)) == P
    U = ((((2,),),), (((Field(0).inv(2),),),))
    # re-frame the top point: only the pseudo-period and the last edge change
    Q = reframe(P, {(3,): (U[0], U[1])})
    assert Q != P and validate_pair(Q).ok
    assert truncate(extend(Q)) == normalize(Q)
    assert truncate(extend(Q)) != Q
    assert truncate(extend(Q)) == P


def test_graded_algebra_model():
    # A = k[x][t]/(t^2 - x) as a Z-graded module over the divisor (x, 2)
    M = RootPresentation(QX, X, 2).graded_module()
    assert validate_pair(pair_from_graded(M)).ok
    assert pair_from_graded(M) == worked_pair()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_rho_perturbation_detected_by_both_criteria(seed):
    rng = rng_for(seed)
    ring = BaseRing.poly_line(Field(5))
    divisors = random_divisors(ring, rng, rng.randint(1, 2), 3)
    P = random_pair(ring, divisors, rng, reframe_prob=0.0)
    keys = [k for k, f in P.rho.items() if f.source.ngens]
    if not keys:
        return
    key = rng.choice(keys)
    c = random_scalar(ring.field, rng, nonzero=True)
    rho = dict(P.rho)
    rho[key] = rho[key].scaled(ring.element([c]))
    Q = make_pair(ring, P.divisors, P.objects, P.edges, rho, check=False)
    assert validate_pair(Q).ok == window_equivalence(Q).ok
