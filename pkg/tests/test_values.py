from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valgroups.errors import AxiomViolation
from valgroups.free import standard_generators
from valgroups.groups import FiniteAbelianGroup, GroupHom, all_subgroups, automorphisms, quotient
from valgroups.oracles import completion_by_relaxation, isometric_iso_by_automorphisms, semivalue_is_largest_below
from valgroups.rational import INF
from valgroups.values import (
    CostFunction,
    Semivalue,
    ValuedGroup,
    canonical_table,
    cap_value,
    complete_cost,
    direct_sum,
    isometric_isomorphic,
    push_value,
    validate_value,
)

Z2, Z3, Z4 = (FiniteAbelianGroup([n]) for n in (2, 3, 4))
V4 = FiniteAbelianGroup([2, 2])
small_shapes = st.sampled_from([(2,), (3,), (4,), (2, 2), (5,), (6,), (2, 4), (7,), (2, 2, 2), (8,)])


def costs_for(G, draw_vals):
    costs = {}
    for x, v in zip(G.elements, draw_vals):
        if x != G.zero and x not in costs:
            costs[x] = costs[G.neg(x)] = v
    return CostFunction.from_mapping(G, costs)


@st.composite
def cost_functions(draw):
    G = FiniteAbelianGroup(draw(small_shapes))
    vals = draw(st.lists(st.one_of(st.just(INF), st.fractions(F(1, 8), 3, max_denominator=8)), min_size=G.order, max_size=G.order))
    return costs_for(G, vals)


@st.composite
def values(draw):
    c = draw(cost_functions())
    G = c.group
    fin = CostFunction(G, tuple(F(0) if x == G.zero else (v if v != INF else F(3)) for x, v in zip(G.elements, c.table)))
    return validate_value(G, complete_cost(fin).table, INF, 0)


# -- validate ------------------------------------------------------------------


def test_validate_examples():
    assert validate_value(Z2, [0, 1])((1,)) == 1
    with pytest.raises(AxiomViolation) as e:
        validate_value(Z3, [0, 1, 3])
    assert e.value.axiom == "V2"
    assert set(e.value.witness) == {(1,), (2,)}
    with pytest.raises(AxiomViolation) as e:
        validate_value(Z4, [0, 1, 3, 1])
    assert e.value.axiom == "V3" and e.value.witness == ((1,), (1,))


def test_validate_rejects_zero_and_cap_and_exponent():
    with pytest.raises(AxiomViolation) as e:
        validate_value(Z2, [0, 0])
    assert e.value.axiom == "V1"
    with pytest.raises(AxiomViolation) as e:
        validate_value(Z4, [0, 1, 2, 1], cap=1)
    assert e.value.axiom == "cap"
    with pytest.raises(AxiomViolation) as e:
        validate_value(Z4, [0, 1, 2, 1], N=2)
    assert e.value.axiom == "exponent"


# -- completion ----------------------------------------------------------------


def test_complete_cost_examples():
    c = CostFunction(Z4, (F(0), F(1), F(3), F(1)))
    assert complete_cost(c).table == (0, 1, 2, 1)
    v = (F(0), F(1), F(2), F(1))
    assert complete_cost(CostFunction(Z4, v)).table == v


def test_complete_cost_word_metric_example():
    gens = standard_generators(3)
    c = CostFunction.from_mapping(gens.group, {g: F(1) for g in gens.gens})
    s = complete_cost(c)
    assert s((1, 1, 1)) == 2
    assert s((1, 0, 0)) == 1 and s((1, 2, 0)) == 1


@given(cost_functions())
def test_completion_matches_relaxation(c):
    s = complete_cost(c)
    assert s.table == completion_by_relaxation(c)
    assert semivalue_is_largest_below(s, c)


@given(values())
def test_completion_idempotent_on_values(v):
    assert complete_cost(CostFunction(v.group, v.table)).table == v.table


# -- push / cap ------------------------------------------------------------------


def test_push_value_examples():
    s = Semivalue(Z4, (F(0), F(1, 2), F(0), F(1, 2)))
    mod2 = GroupHom.from_images(Z4, Z2, [(1,)])
    pushed = push_value(s, mod2)
    assert pushed.table == (0, F(1, 2))
    assert pushed.is_value()
    # zeros off the kernel survive and are flagged
    s2 = Semivalue(V4, (F(0), F(0), F(1), F(1)))
    assert s2((0, 1)) == 0 and not s.is_value()
    assert push_value(s2, GroupHom.from_images(V4, Z2, [(0,), (1,)])).zeros() == [(0,), (1,)]
    assert push_value(s2, GroupHom.from_images(V4, Z2, [(1,), (0,)])).is_value()
    # a genuine value stays a value after any projection
    v = validate_value(Z4, [0, 1, 2, 1])
    assert push_value(v, mod2).table == (0, 1)


@given(values(), st.data())
def test_push_value_is_fiber_minimum(v, data):
    G = v.group
    K = data.draw(st.sampled_from(all_subgroups(G)))
    Q, pi = quotient(G, K)
    pushed = push_value(v, pi)
    for y in Q.elements:
        assert pushed(y) == min(v(x) for x in G.elements if pi(x) == y)
    assert all(pushed(pi(x)) <= v(x) for x in G.elements)


def test_cap_examples():
    v = validate_value(Z4, [0, 1, 2, 1])
    assert cap_value(v, 1).table == (0, 1, 1, 1)
    assert cap_value(v, INF).table == v.table
    assert cap_value(v, F(3, 2)).table == (0, 1, F(3, 2), 1)


@given(values(), st.fractions(F(1, 8), 4, max_denominator=8))
def test_cap_preserves_value(v, r):
    c = cap_value(v, r)
    validate_value(v.group, c.table)
    assert all(a == min(b, r) for a, b in zip(c.table, v.table))


# -- isometry --------------------------------------------------------------------


def test_isometric_isomorphic_examples():
    A = validate_value(V4, {(0, 0): 0, (1, 0): 1, (0, 1): 1, (1, 1): 2})
    assert isometric_isomorphic(A, A) is not None
    assert isometric_isomorphic(validate_value(Z4, [0, 1, 1, 1]), validate_value(V4, [0, 1, 1, 1])) is None
    B = validate_value(V4, {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 1})
    iso = isometric_isomorphic(A, B)
    assert iso is not None
    assert all(B(iso(x)) == A(x) for x in V4.elements)


@given(values(), st.data())
def test_isometric_isomorphic_matches_oracle(v, data):
    autos = automorphisms(v.group)
    a = data.draw(st.sampled_from(autos))
    w = ValuedGroup(v.group, tuple(v(a(x)) for x in v.group.elements), v.cap, v.exponent)
    assert (isometric_isomorphic(v, w) is not None) == isometric_iso_by_automorphisms(v, w) is True
    assert canonical_table(v) == canonical_table(w)


def test_direct_sum_is_additive():
    A = validate_value(Z2, [0, F(1, 2)])
    B = validate_value(Z3, [0, 1, 1])
    S = direct_sum(A, B)
    assert all(S(x) == A(x[:1]) + B(x[1:]) for x in S.group.elements)
