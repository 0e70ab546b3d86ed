import pytest

from rootstack.errors import ClosureCap, GeneratedByReflectionsViolation, WildCharacteristic
from rootstack.reflection import (
    CONFIRMED,
    NOT_APPLICABLE,
    abelian_inertia_check,
    close,
    cross_check,
    is_pseudo_reflection,
    mirror,
    normal_crossing,
    primitive_root_matrix,
    pseudo_reflections,
    sweep,
)
from rootstack.ring import Field

QQ = Field(0)
F7 = Field(7)

KLEIN = [((-1, 0), (0, 1)), ((1, 0), (0, -1))]
# reflections of S_3 on the plane x + y + z = 0 (basis e1 - e2, e2 - e3)
S3 = [((-1, 1), (0, 1)), ((1, 0), (1, -1))]


def test_klein_four():
    G = close(KLEIN, QQ)
    assert G.order == 4
    assert len(G.reflections) == 2
    minus_one = ((-1, 0), (0, -1))
    assert minus_one in G.elements and not is_pseudo_reflection(QQ, minus_one)
    assert normal_crossing(G)
    assert abelian_inertia_check(G).verdict == CONFIRMED


def test_s3():
    G = close(S3, QQ)
    assert G.order == 6
    assert len(G.reflections) == 3
    assert len(G.distinct_mirrors()) == 3
    assert not normal_crossing(G)
    v = abelian_inertia_check(G)
    assert v.verdict == NOT_APPLICABLE and not v.abelian


def test_trivial_group():
    G = close([((1, 0), (0, 1))], QQ)
    assert G.order == 1
    assert normal_crossing(G)
    assert abelian_inertia_check(G).verdict == CONFIRMED


def test_cyclic_pseudo_reflection_over_f7():
    g = primitive_root_matrix(7, 3)
    G = close([g], F7)
    assert G.order == 3
    assert abelian_inertia_check(G).verdict == CONFIRMED


def test_mirror_normalized():
    assert mirror(QQ, ((-1, 0), (0, 1))) == (1, 0)


def test_not_generated_by_reflections():
    rot = ((0, -1), (1, 0))
    with pytest.raises(GeneratedByReflectionsViolation):
        abelian_inertia_check(close([rot], QQ))


def test_wild_and_capped():
    with pytest.raises(WildCharacteristic):
        close([((1, 1), (0, 1))], F7)
    with pytest.raises(ClosureCap):
        close([((1, 1), (0, 1))], QQ, cap=50)


def test_pseudo_reflection_count_f7():
    assert len(pseudo_reflections(7)) == 280


def test_sweep_f7_has_no_counterexample():
    rep = sweep(7)
    assert rep.pairs == 280 * 279 // 2
    assert rep.counterexamples == []
    assert rep.commuting + rep.third_mirror + rep.wild + rep.closed + rep.capped == rep.pairs


def test_fast_classification_agrees_with_full_closure():
    assert cross_check(7, 120, 3) == 0


def test_three_generator_subgroups_of_a_monomial_group():
    import random

    from rootstack.reflection import FALSIFIED

    # G(6,1,2) over F_7: order 72, prime to 7
    G = close([primitive_root_matrix(7, 6), ((0, 1), (1, 0))], F7)
    assert G.order == 72
    rng = random.Random(0)
    verdicts = set()
    for _ in range(40):
        H = close(rng.sample(G.reflections, 3), F7)
        v = abelian_inertia_check(H).verdict
        assert v != FALSIFIED
        verdicts.add(v)
    assert verdicts == {CONFIRMED, NOT_APPLICABLE}
