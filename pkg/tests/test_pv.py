from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valgroups import generators as gen
from valgroups.errors import AxiomViolation, PreconditionError
from valgroups.groups import FiniteAbelianGroup
from valgroups.piecewise import PiecewiseLinear, identity, nabla
from valgroups.pv import (
    StepFunction,
    act,
    check_kappa_norm,
    corrupted_norm,
    hat,
    minimal_L,
    nf2_witness,
    norm_q,
    norming_failures,
    norming_validate,
    subnorm_estimate,
)
from valgroups.rational import INF
from valgroups.values import ValuedGroup, validate_value

HALF = F(1, 2)
Z2 = FiniteAbelianGroup([2])
Q2 = ValuedGroup(Z2, (F(0), F(1)), 1, 2)
g = (1,)
times = st.fractions(0, 8, max_denominator=6)


@st.composite
def step_functions(draw):
    seed = draw(st.integers(0, 2**32))
    rng = gen.stream(seed, "steps")
    G = gen.random_shape(rng, 8, 0, min_order=2)
    H = gen.random_value(rng, G, 3, INF, 0)
    ts = sorted(set(draw(st.lists(st.fractions(F(1, 6), 6, max_denominator=6), min_size=1, max_size=5))))
    pieces = [(t, rng.choice(G.elements)) for t in ts]
    return StepFunction(H, tuple(pieces))


def test_norm_examples():
    assert norm_q(act(2, hat(Q2, g))) == 2
    u = hat(Q2, g) + act(F(3, 2), hat(Q2, g))
    assert u.pieces == ((1, (0,)), (F(3, 2), g))
    assert u(F(1, 2)) == Z2.zero and u(F(5, 4)) == g
    assert u.norm() == HALF


def test_hat_is_isometric():
    H = validate_value(FiniteAbelianGroup([4]), [0, HALF, 1, HALF])
    for h in H.group.elements:
        assert hat(H, h).norm() == H(h)


def test_normal_form():
    u = StepFunction(Q2, ((1, g), (2, g), (3, (0,))))
    assert u.pieces == ((2, g),)
    assert StepFunction(Q2, ((1, (0,)),)).pieces == ()
    with pytest.raises(PreconditionError):
        StepFunction(Q2, ((2, g), (1, g)))


@given(step_functions(), times)
def test_homogeneity(u, t):
    assert u.act(t).norm() == t * u.norm()


@given(step_functions(), times, times)
def test_lipschitz_in_time(u, t, s):
    H = u.host
    for h in H.group.elements[:4]:
        hh = hat(H, h)
        assert (hh.act(t) - hh.act(s)).norm() == abs(t - s) * H(h)


@given(step_functions(), step_functions())
def test_triangle_and_group_laws(u, v):
    if u.host.group != v.host.group or u.host.table != v.host.table:
        v = StepFunction(u.host, tuple((t, u.host.group.zero) for t, _ in v.pieces))
    assert (u + v).norm() <= u.norm() + v.norm()
    assert (u - u).pieces == ()
    assert (-u).norm() == u.norm()
    assert StepFunction.from_decomposition(u.host, u.decomposition()) == u


# -- norming functions -----------------------------------------------------------


def test_nabla_and_identity_certified():
    n = norming_validate(nabla())
    assert n(0) == 1 and not n.vanishes_at_zero
    i = norming_validate(identity())
    assert i(0) == 0 and i.vanishes_at_zero
    assert minimal_L(nabla()) == 1 and minimal_L(identity()) == 1


def test_square_fails_lipschitz():
    sq = PiecewiseLinear.sample(lambda x: x * x, [0, 1, 2, 3, 4], 8)
    fails = norming_failures(sq, 2)
    assert "NF4" in fails
    assert fails["NF4"] == ("slope", 1, 2, 3)
    with pytest.raises(AxiomViolation) as e:
        norming_validate(sq, 2)
    assert e.value.axiom == "NF4"


def test_half_at_zero_fails_submultiplicativity():
    k = PiecewiseLinear.from_points([(0, HALF), (1, 1)], 1)
    assert nf2_witness(k) is not None
    assert "NF2" in norming_failures(k)


def test_kappa_norm_checks():
    samples = [hat(Q2, g), hat(Q2, g).act(3)]
    ts = [HALF, 1, 2, 10]
    rep = check_kappa_norm(samples, nabla(), ts)
    assert rep.ok and rep.homogeneous
    assert check_kappa_norm(samples, identity(), ts).ok
    bad = check_kappa_norm(samples, nabla(), ts, corrupted_norm(Q2, g))
    assert not bad.ok
    t, u, lhs, rhs = bad.violations[0]
    assert lhs > rhs


def test_subnorm_estimate():
    u = hat(Q2, g)
    assert subnorm_estimate(u, norm_q, [0, HALF, 1, 2, 5]) == 1
