import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valgroups.errors import BudgetError, MalformedElementError, ValuedGroupError
from valgroups.groups import (
    FiniteAbelianGroup,
    GroupHom,
    all_subgroups,
    automorphisms,
    count_homs,
    enumerate_homs,
    quotient,
    smith_normal_form,
    subgroup_generated,
)

factor_lists = st.lists(st.integers(1, 6), min_size=0, max_size=3).filter(lambda f: math.prod(f) <= 64)


def test_subgroup_examples():
    Z4 = FiniteAbelianGroup([4])
    assert set(subgroup_generated(Z4, [(2,)]).elements) == {(0,), (2,)}
    G = FiniteAbelianGroup([2, 4])
    K = subgroup_generated(G, [(1, 1)])
    assert set(K.elements) == {(0, 0), (1, 1), (0, 2), (1, 3)}
    assert set(subgroup_generated(FiniteAbelianGroup([3]), []).elements) == {(0,)}


def test_quotient_examples():
    Z4 = FiniteAbelianGroup([4])
    Q, pi = quotient(Z4, subgroup_generated(Z4, [(2,)]))
    assert Q.factors == (2,)
    assert all(pi((x,)) == (x % 2,) for x in range(4))

    V = FiniteAbelianGroup([2, 2])
    Q, _ = quotient(V, subgroup_generated(V, [(1, 1)]))
    assert Q.factors == (2,)

    G = FiniteAbelianGroup([2, 4])
    Q, pi = quotient(G, subgroup_generated(G, [(1, 2)]))
    assert Q.factors == (4,)
    assert pi.is_surjective() and pi.kernel().order == 2


def test_hom_counts():
    Z2, Z3, Z4 = (FiniteAbelianGroup([n]) for n in (2, 3, 4))
    assert {h((1,)) for h in enumerate_homs(Z2, Z4)} == {(0,), (2,)}
    assert count_homs(Z3, Z4) == 1
    assert count_homs(Z2, FiniteAbelianGroup([2, 2])) == 4


def test_malformed_elements():
    G = FiniteAbelianGroup([2, 3])
    with pytest.raises(MalformedElementError):
        G.check((1,))
    with pytest.raises(MalformedElementError):
        G.check((2, 0))


def test_order_budget():
    with pytest.raises(BudgetError):
        FiniteAbelianGroup([2] * 30)


def test_automorphisms_of_klein_group():
    assert len(automorphisms(FiniteAbelianGroup([2, 2]))) == 6
    assert len(automorphisms(FiniteAbelianGroup([4]))) == 2


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@pytest.mark.parametrize("A", [[[2, 4], [6, 8]], [[2, 0, 0], [0, 3, 0]], [[4, 6], [6, 4], [2, 2]]])
def test_smith_normal_form(A):
    U, D, V, Ui = smith_normal_form(A)
    assert _matmul(_matmul(U, A), V) == D
    assert _matmul(U, Ui) == [[int(i == j) for j in range(len(A))] for i in range(len(A))]
    k = min(len(A), len(A[0]))
    diag = [D[i][i] for i in range(k)]
    assert all(D[i][j] == 0 for i in range(len(A)) for j in range(len(A[0])) if i != j)
    assert all(d >= 0 for d in diag)
    assert all(diag[i + 1] % diag[i] == 0 for i in range(k - 1) if diag[i])


def test_smith_normal_form_example():
    assert smith_normal_form([[2, 4], [6, 8]])[1] == [[2, 0], [0, 4]]


@given(factor_lists)
def test_group_axioms(fac):
    G = FiniteAbelianGroup(fac)
    els = G.elements
    assert len(els) == G.order == len(set(els))
    for x in els[:8]:
        assert G.add(x, G.neg(x)) == G.zero
        assert G.add(x, G.zero) == x
        assert G.mul(G.exponent, x) == G.zero
        for y in els[:8]:
            assert G.add(x, y) == G.add(y, x)


@given(factor_lists, factor_lists)
def test_hom_count_formula(hf, gf):
    H, G = FiniteAbelianGroup(hf), FiniteAbelianGroup(gf)
    want = 1
    for n in H.factors:
        want *= sum(1 for g in G.elements if n % G.element_order(g) == 0)
    assert count_homs(H, G) == want
    if want <= 200:
        homs = list(enumerate_homs(H, G))
        assert len(homs) == want
        assert len({tuple(sorted(h.mapping.items())) for h in homs}) == want
        assert all(h.is_additive() for h in homs)


@given(factor_lists, st.data())
def test_quotient_postconditions(fac, data):
    G = FiniteAbelianGroup(fac)
    K = data.draw(st.sampled_from(all_subgroups(G)))
    Q, pi = quotient(G, K)
    assert Q.order * K.order == G.order
    assert pi.is_surjective()
    assert set(pi.kernel().elements) == set(K.elements)
    assert all(Q.factors[i + 1] % Q.factors[i] == 0 for i in range(len(Q.factors) - 1))


@given(factor_lists, st.data())
def test_generated_subgroup_is_closed(fac, data):
    G = FiniteAbelianGroup(fac)
    gens = data.draw(st.lists(st.sampled_from(G.elements), max_size=3))
    K = subgroup_generated(G, gens)
    els = set(K.elements)
    assert set(gens) <= els and G.zero in els
    assert all(G.sub(x, y) in els for x, y in itertools.product(els, repeat=2))
    assert G.order % K.order == 0


def test_hom_from_images_rejects_bad_orders():
    with pytest.raises(ValuedGroupError):
        GroupHom.from_images(FiniteAbelianGroup([2]), FiniteAbelianGroup([3]), [(1,)])
