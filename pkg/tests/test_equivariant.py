import pytest

from rootstack.equivariant import (
    GradedLineModule,
    change_of_basis,
    character_class,
    compare,
    decomposition_vector,
    direct_sum_graded,
    free_graded,
    from_pair,
    root_presentation,
    skyscraper_graded,
    to_pair,
)
from rootstack.errors import BadCharacteristic, GradingViolation
from rootstack.localize import counit, integer_det
from rootstack.parabolic import pair_cokernel, pair_from_graded, validate_pair
from rootstack.ring import BaseRing, Field, FpModule, ModuleMap
from rootstack.sampling import random_graded, rng_for

QX = BaseRing.poly_line(Field(0))
F7X = BaseRing.poly_line(Field(7))
X = (0, 1)


def unit(r, j):
    return tuple(1 if a == j else 0 for a in range(r))


def test_chi0_is_the_worked_pair():
    P = to_pair(free_graded(QX, 2, 0))
    R = P.objects[(0,)]
    assert P.edge((0,), 0) == ModuleMap.identity(R)
    assert P.edge((1,), 0) == ModuleMap.multiplication(R, X)
    assert validate_pair(P).ok


def test_chi1_counit_cokernel_at_ramified_point():
    P = to_pair(free_graded(QX, 2, 1))
    C, _ = pair_cokernel(counit(P, 0))
    assert C.objects[(1,)] == FpModule.cyclic(QX, X)


def test_zero_module_gives_zero_pair():
    Z = FpModule.zero(QX)
    zero_map = ModuleMap.identity(Z)
    M = GradedLineModule(3, (Z, Z, Z), (zero_map,) * 3)
    assert to_pair(M).is_zero()
    assert character_class(M) == (0, 0, 0)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_character_of_free_and_skyscraper(r):
    for j in range(r):
        assert character_class(free_graded(QX, r, j)) == unit(r, j)
        expect = tuple(a - b for a, b in zip(unit(r, j), unit(r, (j - 1) % r)))
        assert character_class(skyscraper_graded(QX, r, j)) == expect


def test_character_is_additive():
    mods = [free_graded(QX, 3, 1), skyscraper_graded(QX, 3, 0), free_graded(QX, 3, 2)]
    total = tuple(sum(v) for v in zip(*(character_class(M) for M in mods)))
    assert character_class(direct_sum_graded(mods)) == total


def test_change_of_basis_r2():
    assert change_of_basis(0, 2) == ((1, 1), (0, 1))
    assert integer_det(change_of_basis(0, 2)) in (1, -1)


def test_skyscraper_chi0_r2():
    rep = compare(skyscraper_graded(QX, 2, 0))
    chi0 = decomposition_vector(free_graded(QX, 2, 0))
    chi1 = decomposition_vector(free_graded(QX, 2, 1))
    assert tuple(rep["decomposition"]) == tuple(a - b for a, b in zip(chi0, chi1))


@pytest.mark.parametrize("p", [0, 7])
@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_change_of_basis_unimodular(p, r):
    assert abs(integer_det(change_of_basis(p, r))) == 1


@pytest.mark.parametrize("seed", range(10))
def test_compare_random(seed):
    rng = rng_for(seed)
    ring = rng.choice([QX, F7X])
    M = random_graded(ring, rng.randint(2, 5), rng)
    assert compare(M)["ok"]


def test_from_pair_inverts_to_pair():
    rng = rng_for(5)
    M = random_graded(QX, 3, rng)
    assert from_pair(to_pair(M)) == M


def test_bad_t_action_rejected():
    R = FpModule.free(QX, 1)
    one = ModuleMap.identity(R)
    with pytest.raises(GradingViolation):
        GradedLineModule(2, (R, R), (one, one))


def test_wild_order_rejected():
    F3X = BaseRing.poly_line(Field(3))
    R = FpModule.free(F3X, 1)
    one = ModuleMap.identity(R)
    with pytest.raises(BadCharacteristic):
        GradedLineModule(3, (R, R, R), (one, one, ModuleMap.multiplication(R, X)))


def test_root_presentation_square_root_of_x():
    rp = root_presentation(X, 2)
    assert rp.relation == ((0, -1), (), (1,))
    assert len(rp.pieces()) == 2
    assert validate_pair(pair_from_graded(rp.graded_module())).ok


def test_root_presentation_cube_root():
    rp = root_presentation((0, -1, 1), 3)
    assert rp.modulus_degree == 2
    assert validate_pair(pair_from_graded(rp.graded_module())).ok


def test_root_presentation_wild():
    with pytest.raises(BadCharacteristic):
        root_presentation(X, 7, BaseRing.poly_line(Field(7)))
