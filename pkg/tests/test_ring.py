import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootstack.errors import NotSquarefree, NotSupportedOnDivisor
from rootstack.ring import (
    BaseRing,
    Field,
    FpModule,
    ModuleMap,
    cokernel,
    devissage_class,
    g0_class,
    image,
    inverse,
    is_injective,
    kernel,
    lift,
    minimal_presentation,
)

QQ = Field(0)
X = (0, 1)


def mult_map(M, s):
    return ModuleMap.multiplication(M, s)


def test_kernel_of_x_is_zero(kx_q):
    R = FpModule.free(kx_q, 1)
    K, incl = kernel(mult_map(R, X))
    assert K.is_zero()


def test_kernel_of_zero_map_is_everything(kx_q):
    R = FpModule.free(kx_q, 1)
    K, incl = kernel(ModuleMap.zero(R, R))
    assert K == R and incl == ModuleMap.identity(R)


def test_kernel_on_split_quotient():
    base = BaseRing.quotient(QQ, (-1, 0, 1))
    R = FpModule.free(base, 1)
    K, incl = kernel(mult_map(R, (-1, 1)))
    # factors are ordered x - 1, x + 1; the kernel (x + 1) lives on x - 1
    assert base.factors == ((-1, 1), (1, 1))
    assert g0_class(K).vector == (1, 0)
    assert (mult_map(R, (-1, 1)) @ incl).is_zero()


def test_cokernel_of_x(kx_q):
    R = FpModule.free(kx_q, 1)
    C, _ = cokernel(mult_map(R, X))
    assert C == FpModule.cyclic(kx_q, X)
    assert devissage_class(C, X).vector == (1,)


def test_cokernel_of_identity(kx_q):
    R = FpModule.free(kx_q, 2)
    assert cokernel(ModuleMap.identity(R))[0].is_zero()


def test_cokernel_of_bezout_pair(kx_q):
    R2, R = FpModule.free(kx_q, 2), FpModule.free(kx_q, 1)
    f = ModuleMap(R2, R, ((X, (-1, 1)),))
    assert cokernel(f)[0].is_zero()


def test_g0_classes(kx_q):
    assert g0_class(FpModule.free(kx_q, 1)).vector == (1,)
    assert g0_class(FpModule.cyclic(kx_q, X)).vector == (0,)
    base = BaseRing.quotient(QQ, (-1, 0, 1))
    assert g0_class(FpModule.free(base, 1)).vector == (1, 1)


def test_devissage(kx_q):
    assert devissage_class(FpModule.cyclic(kx_q, X), X).vector == (1,)
    assert devissage_class(FpModule.cyclic(kx_q, (0, 0, 1)), X).vector == (2,)
    with pytest.raises(NotSupportedOnDivisor):
        devissage_class(FpModule.free(kx_q, 1), X)


def test_squarefree_quotient_rejects_repeated_factor():
    with pytest.raises(NotSquarefree):
        BaseRing.quotient(QQ, (0, 0, 1))


def test_lift_and_inverse(kx_q):
    R = FpModule.free(kx_q, 2)
    U = ModuleMap(R, R, (((1,), X), ((), (1,))))
    Ui = inverse(U)
    assert U @ Ui == ModuleMap.identity(R)
    assert lift(U, U) == ModuleMap.identity(R)


def test_image_factorization(kx_q):
    R = FpModule.free(kx_q, 2)
    f = ModuleMap(R, R, ((X, X), ((), ())))
    I, onto, into = image(f)
    assert into @ onto == f
    assert is_injective(into)


def test_canonical_equality_of_presentations(kx_q):
    a = FpModule(kx_q, 1, (((0, 1),), ((0, 0, 1),)))
    b = FpModule(kx_q, 1, (((0, 2),),))
    assert a == b


polys = st.lists(st.integers(-2, 2), min_size=0, max_size=3).map(
    lambda c: BaseRing.poly_line(Field(5)).element([Field(5)(v) for v in c]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_kernel_cokernel_ranks(g, data):
    ring = BaseRing.poly_line(Field(5))
    M, N = FpModule.free(ring, g), FpModule.free(ring, 2)
    rows = tuple(tuple(data.draw(polys) for _ in range(g)) for _ in range(2))
    f = ModuleMap(M, N, rows)
    K, incl = kernel(f)
    C, _ = cokernel(f)
    I, _, _ = image(f)
    assert (f @ incl).is_zero()
    # rank-nullity over the fraction field
    assert K.rank + I.rank == g
    assert I.rank + C.rank == 2


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_minimal_presentation_is_isomorphic(data):
    ring = BaseRing.poly_line(Field(5))
    g = data.draw(st.integers(0, 3))
    rels = tuple(tuple(data.draw(polys) for _ in range(g)) for _ in range(data.draw(st.integers(0, 3))))
    M = FpModule(ring, g, rels)
    N, to_n, from_n = minimal_presentation(M)
    assert from_n @ to_n == ModuleMap.identity(M)
    assert to_n @ from_n == ModuleMap.identity(N)
    assert g0_class(N).vector == g0_class(M).vector
