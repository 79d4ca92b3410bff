from fractions import Fraction as F

from hypothesis import given
from hypothesis import strategies as st

from valgroups import generators as gen
from valgroups.amalgam import amalgamate, amalgamate_approx, amalgamate_mixed
from valgroups.groups import FiniteAbelianGroup, GroupHom, subgroup_generated
from valgroups.oracles import amalgam_fiber_value
from valgroups.rational import INF
from valgroups.values import isometric_isomorphic, validate_value

HALF = F(1, 2)
Z1, Z2, Z4 = FiniteAbelianGroup([]), FiniteAbelianGroup([2]), FiniteAbelianGroup([4])
V4 = FiniteAbelianGroup([2, 2])


def test_trivial_base_gives_direct_sum():
    D0 = validate_value(Z1, [0], N=2)
    D1 = validate_value(Z2, [0, HALF])
    D2 = validate_value(Z2, [0, 1])
    res = amalgamate(D0, D1, D2, {(): (0,)}, {(): (0,)})
    R, p1, p2 = res.result, res.psi1, res.psi2
    assert R.group.order == 4
    for x in Z2.elements:
        for y in Z2.elements:
            assert R(R.group.add(p1(x), p2(y))) == D1(x) + D2(y)


def test_glue_z2_into_z4():
    D0 = validate_value(Z2, [0, 1])
    D2 = validate_value(Z4, [0, HALF, 1, HALF])
    res = amalgamate(D0, D0, D2, {x: x for x in Z2.elements}, {(0,): (0,), (1,): (2,)})
    R = res.result
    assert R.group.factors == (4,)
    assert isometric_isomorphic(R, D2) is not None


def test_amalgam_over_everything():
    D = validate_value(V4, [0, 1, HALF, 1])
    ident = {x: x for x in V4.elements}
    res = amalgamate(D, D, D, ident, ident)
    assert isometric_isomorphic(res.result, D) is not None


@given(st.integers(0, 2**32), st.sampled_from([0, 2, 3]), st.sampled_from([F(1), INF]))
def test_a1_properties(seed, N, r):
    rng = gen.stream(seed, "a1")
    G0 = gen.random_shape(rng, 4, N)
    D0 = gen.random_value(rng, G0, 3, r, N)
    extra = (2,) if N in (0, 2) else (N,)
    D1, i1 = gen.embed_with_room(rng, D0, extra, 3, r, N)
    D2, i2 = gen.embed_with_room(rng, D0, extra, 3, r, N)
    res = amalgamate(D0, D1, D2, i1, i2, r, N)
    R, p1, p2 = res.result, res.psi1, res.psi2
    assert all(R(p1(x)) == D1(x) for x in D1.group.elements)
    assert all(R(p2(x)) == D2(x) for x in D2.group.elements)
    assert all(p1(i1(x)) == p2(i2(x)) for x in G0.elements)
    for x1 in D1.group.elements[:6]:
        for x2 in D2.group.elements[:6]:
            want = min(amalgam_fiber_value(D1, D2, i1.mapping, i2.mapping, G0.elements, x1, D2.group.neg(x2)), r)
            assert R(R.group.sub(p1(x1), p2(x2))) == want


def test_a2_exact_case():
    D = validate_value(V4, [0, 1, HALF, 1])
    full = subgroup_generated(V4, [(1, 0), (0, 1)])
    ident = {x: x for x in V4.elements}
    res = amalgamate_approx(D, full, D, ident, ident, F(1, 8))
    assert res.diagnostics["sup_distance"] == 0
    K = subgroup_generated(V4, [(1, 0)])
    res = amalgamate_approx(D, K, D, {x: x for x in K.elements}, ident, F(1, 8))
    assert res.diagnostics["sup_distance"] <= (1 + D.diameter()) * F(1, 8)


def test_a2_small_eps():
    D1 = validate_value(Z2, [0, 1])
    K = subgroup_generated(Z2, [])
    res = amalgamate_approx(D1, K, D1, {(0,): (0,)}, {(0,): (0,), (1,): (1,)}, F(1, 4))
    R, w1, w2 = res.result, res.psi1, res.psi2
    assert R(R.group.sub(w1((1,)), w2((1,)))) == HALF
    assert all(R(w1(x)) == D1(x) and R(w2(x)) == D1(x) for x in Z2.elements)
    big = amalgamate_approx(D1, K, D1, {(0,): (0,)}, {(0,): (0,), (1,): (1,)}, F(1))
    R = big.result
    assert R(R.group.sub(big.psi1((1,)), big.psi2((1,)))) == 2


def test_a3_degenerate_cases():
    D = validate_value(V4, [0, 1, HALF, 1])
    E1 = subgroup_generated(V4, [(1, 0)])
    E0 = subgroup_generated(V4, [])
    phi1 = {x: x for x in E1.elements}
    res = amalgamate_mixed(D, E1, E0, D, phi1, {V4.zero: V4.zero}, F(1, 8))
    assert res.diagnostics["sup_distance"] == 0
    assert all(res.psi2(phi1[x]) == res.psi1(x) for x in E1.elements)
    res = amalgamate_mixed(D, E1, E1, D, phi1, phi1, F(1, 8))
    assert all(res.psi1(x) == res.psi2(x) for x in E1.elements)
    assert res.diagnostics["sup_distance"] == 0


def test_a3_distinct_maps():
    D1 = validate_value(V4, [0, 1, 1, 1])
    E1 = subgroup_generated(V4, [(1, 0)])
    E2 = subgroup_generated(V4, [(0, 1)])
    phi1 = {(0, 0): (0, 0), (1, 0): (1, 0)}
    phi2 = {(0, 0): (0, 0), (0, 1): (1, 1)}
    res = amalgamate_mixed(D1, E1, E2, D1, phi1, phi2, HALF)
    assert res.diagnostics["sup_distance"] <= HALF
    R = res.result
    assert all(R(res.psi1(x)) == D1(x) and R(res.psi2(x)) == D1(x) for x in V4.elements)
    assert all(res.psi2(phi1[x]) == res.psi1(x) for x in E1.elements)


def test_hom_inputs_accepted():
    D0 = validate_value(Z2, [0, 1])
    h = GroupHom.identity(Z2)
    res = amalgamate(D0, D0, D0, h, h)
    assert res.result.group.order == 2


@given(st.integers(0, 2**32), st.sampled_from([0, 2, 3]), st.sampled_from([F(1), INF]))
def test_a1_is_symmetric(seed, N, r):
    rng = gen.stream(seed, "sym")
    D0 = gen.random_value(rng, gen.random_shape(rng, 4, N), 3, r, N)
    extra = (2,) if N in (0, 2) else (N,)
    D1, i1 = gen.embed_with_room(rng, D0, extra, 3, r, N)
    D2, i2 = gen.embed_with_room(rng, D0, extra, 3, r, N)
    a = amalgamate(D0, D1, D2, i1, i2, r, N).result
    b = amalgamate(D0, D2, D1, i2, i1, r, N).result
    assert isometric_isomorphic(a, b) is not None


def test_trivial_base_matches_direct_sum_on_small_groups():
    from valgroups.fraisse import group_shapes
    from valgroups.values import cap_value, direct_sum

    rng = gen.stream(1, "dsum")
    shapes = [s for s in group_shapes(8) if s]
    for s1 in shapes:
        for s2 in shapes:
            if len(s1) + len(s2) > 3 and rng.random() < 0.5:
                continue
            r = rng.choice((F(1), INF))
            D1 = gen.random_value(rng, FiniteAbelianGroup(s1), 3, r, 0)
            D2 = gen.random_value(rng, FiniteAbelianGroup(s2), 3, r, 0)
            D0 = validate_value(Z1, [0], r, 0)
            res = amalgamate(D0, D1, D2, {(): D1.group.zero}, {(): D2.group.zero}, r, 0)
            want = cap_value(direct_sum(D1, D2), r)
            R = res.result
            for x in D1.group.elements:
                for y in D2.group.elements:
                    assert R(R.group.add(res.psi1(x), res.psi2(y))) == want(x + y)


@given(st.integers(0, 2**32))
def test_amalgamation_order_does_not_matter(seed):
    rng = gen.stream(seed, "assoc")
    N, r = 2, F(1)
    D0 = gen.random_value(rng, gen.random_shape(rng, 2, N), 3, r, N)
    A, ia = gen.embed_with_room(rng, D0, (2,), 3, r, N)
    B, ib = gen.embed_with_room(rng, D0, (2,), 3, r, N)
    C, ic = gen.embed_with_room(rng, D0, (2,), 3, r, N)

    def glue(X, ix, Y, iy):
        res = amalgamate(D0, X, Y, ix, iy, r, N)
        return res.result, GroupHom(D0.group, res.result.group, {x: res.psi1(ix(x)) for x in D0.group.elements})

    AB, iab = glue(A, ia, B, ib)
    ABC, _ = glue(AB, iab, C, ic)
    CB, icb = glue(C, ic, B, ib)
    CBA, _ = glue(CB, icb, A, ia)
    assert isometric_isomorphic(ABC, CBA) is not None
