import pytest

from rootstack.equivariant import free_graded, to_pair
from rootstack.errors import NotInKernel, SupportViolation
from rootstack.localize import (
    LeafDiagram,
    counit,
    d_adjoint,
    decompose,
    face,
    faces,
    in_kernel,
    integer_det,
    leaf_of,
    pi_lower,
    pi_upper,
    rank_identity,
    root_shapes,
    skyscraper_matrix,
    skyscraper_pair,
)
from rootstack.parabolic import (
    DivisorTriple,
    check_divisors,
    direct_sum_pairs,
    is_morphism,
    pair_cokernel,
    pair_kernel,
    validate_pair,
)
from rootstack.ring import BaseRing, Field, FpModule, ModuleMap, devissage_class
from rootstack.sampling import random_divisors, random_leaf_family, random_module, random_pair, rng_for

QQ = Field(0)
QX = BaseRing.poly_line(QQ)
K = BaseRing.of_field(QQ)
X = (0, 1)


def line(r=2):
    return check_divisors(QX, [DivisorTriple(X, r)])


def chi1():
    return to_pair(free_graded(QX, 2, 1))


def test_pi_lower_of_pi_upper():
    M = FpModule.cyclic(QX, (1, 1))
    assert pi_lower(pi_upper(M, line())) == M


def test_pi_lower_of_leaf_image_is_zero():
    fam = random_leaf_family(QX, line(3), 1, rng_for(1))
    assert pi_lower(d_adjoint(fam, line(3), 1)).is_zero()


def test_pi_lower_of_chi1_is_free_rank_one():
    assert pi_lower(chi1()) == FpModule.free(QX, 1)


def test_pi_upper_is_the_worked_pair():
    P = pi_upper(FpModule.free(QX, 1), line())
    R = P.objects[(0,)]
    assert P.edge((0,), 0) == ModuleMap.identity(R)
    assert P.edge((1,), 0) == ModuleMap.multiplication(R, X)
    assert validate_pair(P).ok
    assert pi_upper(FpModule.zero(QX), line()).is_zero()


def test_face_of_full_set_is_identity():
    rng = rng_for(4)
    divs = random_divisors(QX, rng, 2, 3)
    P = random_pair(QX, divs, rng)
    assert face(P, (0, 1)) == P


def test_face_of_constant_pair_is_constant():
    divs = check_divisors(QX, [DivisorTriple(X, 2), DivisorTriple((-1, 1), 3)])
    M = FpModule.cyclic(QX, (0, 0, 1))
    P = pi_upper(M, divs)
    for T in [(0,), (1,)]:
        assert face(P, T) == pi_upper(M, [divs[i] for i in T])


@pytest.mark.parametrize("seed", range(10))
def test_face_of_d_adjoint_is_identity(seed):
    rng = rng_for(seed)
    ring = BaseRing.poly_line(Field(rng.choice((0, 5))))
    n = rng.randint(1, 3)
    divs = random_divisors(ring, rng, n, 4)
    k = rng.randint(1, n)
    fam = random_leaf_family(ring, divs, k, rng)
    P = d_adjoint(fam, divs, k, ring)
    assert validate_pair(P).ok
    for T, G in fam.items():
        assert leaf_of(P, T) == G


def test_d_adjoint_rejects_unsupported_leaf():
    R = FpModule.free(QX, 1)
    G = LeafDiagram((0,), (2,), {(1,): R}, {})
    with pytest.raises(SupportViolation):
        d_adjoint({(0,): G}, line(), 1)


def test_d_adjoint_single_leaf():
    S = FpModule.cyclic(QX, X)
    G = LeafDiagram((0,), (2,), {(1,): S}, {})
    P = d_adjoint({(0,): G}, line(), 1)
    assert [P.objects[(a,)] for a in range(3)] == [FpModule.zero(QX), S, FpModule.zero(QX)]
    assert all(f.is_zero() for f in P.edges.values())


def test_d_adjoint_of_zero_leaves_is_zero():
    divs = check_divisors(QX, [DivisorTriple(X, 3)])
    G = LeafDiagram((0,), (3,), {(1,): FpModule.zero(QX), (2,): FpModule.zero(QX)},
                    {((1,), 0): ModuleMap.identity(FpModule.zero(QX))})
    assert d_adjoint({(0,): G}, divs, 1).is_zero()


def test_d_adjoint_on_square_supported_on_open_edges():
    divs = check_divisors(K, [DivisorTriple((), 2), DivisorTriple((), 2)])
    k1 = FpModule.free(K, 1)
    fam = {(0,): LeafDiagram((0,), (2,), {(1,): k1}, {}),
           (1,): LeafDiagram((1,), (2,), {(1,): k1}, {})}
    P = d_adjoint(fam, divs, 1, K)
    support = sorted(u for u, M in P.objects.items() if M.ngens)
    # the leaf at T={1} sits where u_1 = 1, the leaf at T={2} where u_2 = 1
    assert support == [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1)]
    assert P.objects[(1, 1)].ngens == 2


def test_kernel_predicates():
    M = FpModule.free(QX, 1)
    P = pi_upper(M, line())
    assert not in_kernel(P, 0) and not in_kernel(P, 1)
    fam = random_leaf_family(QX, line(3), 1, rng_for(2))
    assert in_kernel(d_adjoint(fam, line(3), 1), 0)


def test_level_zero_kernel_obeys_support_lemma():
    for seed in range(8):
        rng = rng_for(seed)
        divs = random_divisors(QX, rng, 1, 3, allow_zero=False)
        P = random_pair(QX, divs, rng)
        eps = counit(P, 0)
        for R, _ in (pair_kernel(eps), pair_cokernel(eps)):
            assert in_kernel(R, 0)
            for u, N in R.objects.items():
                if N.ngens and not N.is_zero():
                    devissage_class(N, divs[0].section)  # raises unless s acts nilpotently


def test_counit_of_pi_upper_is_iso():
    P = pi_upper(FpModule.cyclic(QX, (1, 0, 1)), line(3))
    assert counit(P, 0).is_iso()


def test_counit_of_chi1():
    P = chi1()
    eps = counit(P, 0)
    assert is_morphism(eps)
    K_, _ = pair_kernel(eps)
    C, _ = pair_cokernel(eps)
    assert K_.is_zero()
    assert C.objects[(0,)].is_zero() and C.objects[(2,)].is_zero()
    assert C.objects[(1,)] == FpModule.cyclic(QX, X)


def test_top_counit_is_identity_on_top_kernel():
    fam = random_leaf_family(QX, line(3), 1, rng_for(6))
    P = d_adjoint(fam, line(3), 1)
    assert counit(P, 1).is_iso()
    with pytest.raises(NotInKernel):
        counit(pi_upper(FpModule.free(QX, 1), line()), 1)


def test_decompose_pi_upper():
    d = decompose(pi_upper(FpModule.free(QX, 1), line()))
    assert d.as_dict() == {"x": [1], "leaves": [{"T": [1], "w": [1], "class": [0]}]}


def test_decompose_chi1():
    assert decompose(chi1(), verify=True).as_dict() == {
        "x": [1], "leaves": [{"T": [1], "w": [1], "class": [1]}]}


def test_field_example_total_length_six():
    divs = check_divisors(K, [DivisorTriple((), 2), DivisorTriple((), 3)])
    k1 = FpModule.free(K, 1)
    fam1 = {(0,): LeafDiagram((0,), (2,), {(1,): k1}, {}),
            (1,): LeafDiagram((1,), (3,), {(1,): k1, (2,): k1},
                              {((1,), 0): ModuleMap.identity(k1)})}
    fam2 = {(0, 1): LeafDiagram((0, 1), (2, 3), {(1, 1): k1, (1, 2): k1},
                                {((1, 1), 1): ModuleMap.identity(k1)})}
    P = direct_sum_pairs([pi_upper(k1, divs), d_adjoint(fam1, divs, 1, K),
                          d_adjoint(fam2, divs, 2, K)])
    d = decompose(P, verify=True)
    assert d.vector() == (1, 1, 1, 1, 1, 1)
    assert len(d.vector()) == 6 == rank_identity((2, 3))[1]


def test_rank_identity_all_small_shapes():
    shapes = root_shapes(64)
    assert len(shapes) == 440
    for r in shapes:
        lhs, rhs = rank_identity(r)
        assert lhs == rhs


def test_skyscraper_basis_small_shapes():
    for r in root_shapes(6):
        assert abs(integer_det(skyscraper_matrix(K, r))) == 1


def test_skyscraper_pairs_are_valid():
    assert validate_pair(skyscraper_pair(K, (2, 3), (1, 0))).ok


def test_integer_det():
    assert integer_det([[2, 1], [1, 1]]) == 1
    assert integer_det([[0, 1], [1, 0]]) == -1
    assert integer_det([[1, 2], [2, 4]]) == 0
    assert integer_det([]) == 1


def test_faces_enumeration():
    assert faces(3, 2) == [(0, 1), (0, 2), (1, 2)]


def test_decompose_additive_on_sums():
    rng = rng_for(11)
    divs = random_divisors(QX, rng, 2, 3)
    A, B = random_pair(QX, divs, rng), random_pair(QX, divs, rng)
    assert decompose(direct_sum_pairs([A, B])) == decompose(A) + decompose(B)


def test_random_module_pi_roundtrip():
    rng = rng_for(8)
    for _ in range(10):
        M = random_module(QX, rng)
        divs = random_divisors(QX, rng, rng.randint(1, 3), 4)
        assert pi_lower(pi_upper(M, divs)) == M


def _matrices(src, tgt, ring, p=3):
    import itertools

    for bits in itertools.product(range(p), repeat=src.ngens * tgt.ngens):
        rows = tuple(tuple(ring.element([bits[a * src.ngens + b]]) for b in range(src.ngens))
                     for a in range(tgt.ngens))
        yield ModuleMap(src, tgt, rows, False)


def _hom_set(src, tgt, ring):
    """Distinct maps (presentations differing by target relations coincide)."""
    return list({f.matrix: f for f in _matrices(src, tgt, ring)}.values())


def test_pi_adjunction_by_enumeration_over_f3():
    import itertools

    from rootstack.parabolic import PairMap

    F3 = BaseRing.of_field(Field(3))
    divs = check_divisors(F3, [DivisorTriple((), 2)])
    M = FpModule.free(F3, 1)
    checked = 0
    for seed in range(40):
        P = random_pair(F3, divs, rng_for(seed), max_gens=2, max_rels=1)
        S = pi_upper(M, divs)
        bits = sum(M.ngens * P.objects[u].ngens for u in P.box.points())
        if bits > 6 or not bits:
            continue
        pts = P.box.points()
        count = 0
        for comps in itertools.product(*(_hom_set(M, P.objects[u], F3) for u in pts)):
            if is_morphism(PairMap(S, P, dict(zip(pts, comps)))):
                count += 1
        bottom = len(_hom_set(M, pi_lower(P), F3))
        assert count == bottom
        checked += 1
    assert checked >= 5
