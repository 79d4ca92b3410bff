import json
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valgroups import generators as gen
from valgroups import serialize as ser
from valgroups.errors import SchemaError
from valgroups.extension import KatetovMap
from valgroups.groups import FiniteAbelianGroup, enumerate_homs, subgroup_generated
from valgroups.piecewise import make_modulus, nabla
from valgroups.pv import StepFunction
from valgroups.rational import INF
from valgroups.values import validate_value

seeds = st.integers(0, 2**32)


def rt(obj):
    """Through text and back, as the CLI does."""
    return ser.loads(ser.dumps(obj))


@given(seeds, st.sampled_from([0, 2, 3]), st.sampled_from([F(1), INF]))
def test_valued_group_round_trip(seed, N, r):
    rng = gen.stream(seed, "ser")
    v = gen.random_value(rng, gen.random_shape(rng, 8, N), 3, r, N)
    back = ser.valued_group_from_json(rt(ser.valued_group_to_json(v)))
    assert back.group == v.group and back.table == v.table and back.cap == v.cap and back.exponent == v.exponent


@given(seeds)
def test_hom_and_subgroup_round_trip(seed):
    rng = gen.stream(seed, "hom")
    H, G = gen.random_shape(rng, 8), gen.random_shape(rng, 8)
    h = rng.choice(list(enumerate_homs(H, G)))
    back = ser.hom_from_json(rt(ser.hom_to_json(h)))
    assert back.mapping == h.mapping
    K = gen.random_subgroup(rng, G)
    assert set(ser.subgroup_from_json(G, rt(ser.subgroup_to_json(K))).elements) == set(K.elements)


@given(seeds)
def test_katetov_round_trip(seed):
    rng = gen.stream(seed, "kat")
    G = gen.random_value(rng, gen.random_shape(rng, 8, 0, 2), 3)
    f = gen.random_katetov(rng, G, 2)
    back = ser.katetov_from_json(G, rt(ser.katetov_to_json(f)))
    assert back.f == f.f and back.cap == f.cap


@given(seeds)
def test_metric_space_and_step_function_round_trip(seed):
    rng = gen.stream(seed, "ms")
    X = gen.random_metric_space(rng, rng.randint(1, 5))
    Y = ser.metric_space_from_json(rt(ser.metric_space_to_json(X)))
    assert (Y.points, Y.d) == (X.points, X.d)
    H = gen.random_value(rng, gen.random_shape(rng, 4, 0, 2), 3)
    u = StepFunction(H, ((F(1, 3), H.group.elements[1]), (F(5, 2), H.group.zero), (7, H.group.elements[-1])))
    assert ser.step_function_from_json(rt(ser.step_function_to_json(u))) == u


def test_pl_round_trip():
    for f in (nabla(), make_modulus([(0, 0), (1, 1)], 0)):
        back = ser.pl_from_json(rt(ser.pl_to_json(f)))
        assert back.points == f.points and back.tail_slope == f.tail_slope


def test_rationals_are_exact_strings():
    v = validate_value(FiniteAbelianGroup([3]), [0, F(1, 3), F(1, 3)])
    obj = ser.valued_group_to_json(v)
    assert obj["values"] == ["0/1", "1/3", "1/3"] and obj["cap"] == "inf"
    assert ser.rational_from_json("inf") == INF


@pytest.mark.parametrize(
    "obj, path",
    [
        ({"values": []}, "$.group"),
        ({"group": {"factors": [2]}, "values": ["0/1"]}, "$.values"),
        ({"group": {"factors": [2]}, "values": ["0/1", 1]}, "$.values[1]"),
        ({"group": {"factors": [2]}, "values": ["0/1", "a/b"]}, "$.values[1]"),
        ({"group": {"factors": [2, "x"]}, "values": []}, "$.group.factors[1]"),
        ({"group": {"factors": [4]}, "values": ["0/1", "1/1", "3/1", "1/1"]}, "$.values"),
    ],
)
def test_schema_errors_carry_paths(obj, path):
    with pytest.raises(SchemaError) as e:
        ser.valued_group_from_json(obj)
    assert e.value.path == path


def test_bad_json_text():
    with pytest.raises(SchemaError):
        ser.loads("{not json")


def test_katetov_key_mismatch():
    G = validate_value(FiniteAbelianGroup([3]), [0, 1, 1])
    with pytest.raises(SchemaError) as e:
        ser.katetov_from_json(G, {"domain": [[0]], "f": {"1": "1/1"}})
    assert e.value.path == "$.domain"


def test_dumps_is_deterministic():
    K = subgroup_generated(FiniteAbelianGroup([2, 4]), [(1, 1)])
    a = ser.dumps({"b": ser.subgroup_to_json(K), "a": 1})
    assert a == ser.dumps(json.loads(a)) and a.endswith("\n")
    assert KatetovMap  # imported for the round-trip target type
