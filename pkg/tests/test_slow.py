"""Exhaustive runs measured in minutes; enabled with ``ROOTSTACK_SLOW=1``."""

from math import prod

import pytest

from rootstack.localize import integer_det, root_shapes, skyscraper_matrix
from rootstack.reflection import cross_check
from rootstack.ring import BaseRing, Field

pytestmark = pytest.mark.slow


def test_skyscraper_basis_every_shape():
    field = BaseRing.of_field(Field(0))
    bad = []
    for r in root_shapes(64):
        rows = skyscraper_matrix(field, r)
        if len(rows[0]) != prod(r) or abs(integer_det(rows)) != 1:
            bad.append(r)
    assert bad == []


@pytest.mark.parametrize("p", [7, 13])
def test_sweep_fast_path_against_full_closure(p):
    assert cross_check(p, 1000, p) == 0
