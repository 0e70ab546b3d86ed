import json

import pytest

from rootstack import serialize as ser
from rootstack.diagram import BoxDiagram, BoxPoset
from rootstack.equivariant import free_graded, skyscraper_graded
from rootstack.errors import SchemaError
from rootstack.localize import pi_upper
from rootstack.parabolic import DivisorTriple, check_divisors
from rootstack.ring import BaseRing, Field, FpModule, ModuleMap
from rootstack.sampling import random_divisors, random_graded, random_pair, rng_for

QX = BaseRing.poly_line(Field(0))


def roundtrip(doc):
    return json.loads(json.dumps(doc))


def test_worked_pair_roundtrip():
    P = pi_upper(FpModule.free(QX, 1), check_divisors(QX, [DivisorTriple((0, 1), 2)]))
    doc = ser.pair_out(P)
    Q = ser.pair_in(roundtrip(doc), check=True)
    assert Q == P
    assert ser.pair_out(Q) == doc


@pytest.mark.parametrize("p", [5, 7])
def test_random_pairs_roundtrip(p):
    ring = BaseRing.poly_line(Field(p))
    for seed in range(50):
        rng = rng_for((p, seed))
        P = random_pair(ring, random_divisors(ring, rng, rng.randint(1, 2), 3), rng)
        doc = ser.pair_out(P)
        assert ser.pair_out(ser.pair_in(roundtrip(doc), check=True)) == doc


def test_rational_scalars():
    F = Field(0)
    assert ser.scalar_out(F(3) / 4) == "3/4"
    assert ser.scalar_in(F, "-3/4") == F(-3) / 4
    with pytest.raises(SchemaError):
        ser.scalar_in(F, True)
    with pytest.raises(SchemaError):
        ser.scalar_in(F, "1/0")


def test_diagram_roundtrip():
    R = BaseRing.of_field(Field(5))
    K = FpModule.free(R, 1)
    D = BoxDiagram(BoxPoset((1,)), {(0,): K, (1,): K}, {((0,), 0): ModuleMap.identity(K)})
    assert ser.diagram_in(roundtrip(ser.diagram_out(D))) == D


def test_quotient_base_roundtrip():
    base = BaseRing.quotient(Field(0), (-1, 0, 1))
    assert ser.base_in(roundtrip(ser.base_out(base))) == base


def test_graded_roundtrip():
    for M in (free_graded(QX, 3, 1), skyscraper_graded(QX, 2, 0),
              random_graded(QX, 4, rng_for(3))):
        assert ser.graded_in(roundtrip(ser.graded_out(M))) == M


def test_unknown_field_rejected():
    P = pi_upper(FpModule.free(QX, 1), check_divisors(QX, [DivisorTriple((0, 1), 2)]))
    doc = ser.pair_out(P)
    doc["extra"] = 1
    with pytest.raises(SchemaError):
        ser.pair_in(doc)


def test_wrong_schema_version_rejected():
    doc = ser.graded_out(free_graded(QX, 2, 0))
    doc["schema"] = 2
    with pytest.raises(SchemaError):
        ser.graded_in(doc)


def test_point_keys():
    assert ser.point_key((1, -2)) == "(1,-2)"
    assert ser.point_in("(1, -2)") == (1, -2)
    assert ser.parse_point_option("5") == (5,)
    assert ser.parse_point_option("1,-2") == (1, -2)
    with pytest.raises(SchemaError):
        ser.point_in("1,2")


def test_group_document():
    F, gens = ser.group_in({"schema": 1, "field": "Fp:7", "dim": 2,
                            "generators": [[[6, 0], [0, 1]]]})
    assert F == Field(7) and gens == [((6, 0), (0, 1))]
    with pytest.raises(SchemaError):
        ser.group_in({"schema": 1, "field": "Fp:7", "dim": 2, "generators": [[[1]]]})
