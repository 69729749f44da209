import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from expcond.exactnum import Surd
from expcond.polytope import Polytope, mixed_volume
from expcond.ring import (
    RingElement,
    VirtualPolytope,
    compose,
    eval_I,
    eval_L,
    in_Jvol,
    polarize,
    pushforward,
    ring_multiply,
    support_expansion,
    weighted_fan_of,
)
from expcond.tropical import fan_equivalent, zero_cone_weight

from conftest import polytopes, rand_polytope

SQUARE = Polytope([(0, 0), (1, 0), (0, 1), (1, 1)])
E1 = Polytope.segment((0, 0), (1, 0))
E2 = Polytope.segment((0, 0), (0, 1))


def P1(P, c=1):
    return RingElement.power(P, 1, c)


def same(x, y):
    return not (x - y).terms


# -- virtual polytopes ----------------------------------------------------------


def test_virtual_polytope_cancellation():
    tri = Polytope([(0, 0), (2, 0), (0, 1)])
    v = VirtualPolytope(SQUARE + tri, tri)
    assert v == VirtualPolytope(SQUARE)
    assert VirtualPolytope(SQUARE.translate((5, -3))) == VirtualPolytope(SQUARE)
    assert (VirtualPolytope(tri) - VirtualPolytope(tri)).is_zero()
    assert VirtualPolytope(SQUARE).scale(-1) == -VirtualPolytope(SQUARE)
    with pytest.raises(TypeError):
        hash(v)


# -- polarization and products --------------------------------------------------------


def test_polarize_examples():
    x = polarize([SQUARE])
    assert len(x.terms) == 1 and x.terms[0].coeff == 1 and x.terms[0].degree == 1
    assert same(polarize([SQUARE, SQUARE]), RingElement.power(SQUARE, 2))
    ab = polarize([E1, E2])
    assert sorted(t.coeff for t in ab.terms) == [Fraction(-1, 2), Fraction(-1, 2), Fraction(1, 2)]
    assert eval_I("vol", ab).exact == Fraction(1, 2)


def test_polarize_rejects_empty():
    with pytest.raises(ValueError):
        polarize([])


@given(polytopes(3, max_size=4), polytopes(3, max_size=4), polytopes(3, max_size=4))
def test_polarize_preserves_mixed_volume(A, B, C):
    assert Surd(eval_I("vol", polarize([A, B, C])).exact) == mixed_volume([A, B, C])


def test_polarize_with_virtual_factor():
    rng = random.Random(5)
    A, B, C = (rand_polytope(rng, 2, 4) for _ in range(3))
    x = polarize([VirtualPolytope(A, B), C])
    expect = mixed_volume([A, C]) - mixed_volume([B, C])
    assert Surd(eval_I("vol", x).exact) == expect


def test_virtual_diagonal_extrapolation():
    rng = random.Random(6)
    P, Q = rand_polytope(rng, 2, 5), rand_polytope(rng, 2, 5)
    x = RingElement.power(VirtualPolytope(P, Q), 2)
    expect = P.volume() - mixed_volume([P, Q]) * 2 + Q.volume()
    assert Surd(eval_I("vol", x).exact) == expect


def test_ring_multiply_examples():
    assert same(P1(SQUARE) * P1(SQUARE), RingElement.power(SQUARE, 2))
    assert same(P1(E1) * P1(E2), polarize([E1, E2]))
    big = RingElement.power(SQUARE, 2) * RingElement.power(SQUARE, 2)
    assert big.degree() == 4 and eval_I("vol", big).value == 0


def test_ring_multiply_space_mismatch():
    with pytest.raises(ValueError):
        ring_multiply(P1(SQUARE), P1(Polytope.point((0, 0, 0))))


def test_scalars_are_units():
    x = polarize([E1, E2])
    assert same(RingElement.scalar(2, 3) * x, x * 3)


def test_ring_multiply_commutative_and_associative():
    rng = random.Random(7)
    A, B, C = (rand_polytope(rng, 3, 4) for _ in range(3))
    x, y, z = P1(A), P1(B) - P1(C, 2), P1(A + C)
    assert same(x * y, y * x)
    lhs, rhs = (x * y) * z, x * (y * z)
    assert eval_I("vol", lhs).exact == eval_I("vol", rhs).exact
    assert in_Jvol(lhs - rhs)


def test_grading():
    x = P1(SQUARE) + RingElement.power(E1, 2)
    assert x.degrees == {1, 2} and not x.is_homogeneous()
    assert x.component(2).degree() == 2
    with pytest.raises(ValueError):
        x.degree()


# -- pairings ---------------------------------------------------------------------


def test_eval_I_examples():
    assert eval_I("vol", RingElement.power(SQUARE, 2)).exact == 1
    assert eval_I("vol", P1(SQUARE)).exact == 0
    assert eval_I("pseudo", P1(SQUARE)).value == pytest.approx(1 / math.pi, abs=1e-12)


def test_eval_I_unknown_form():
    with pytest.raises(ValueError):
        eval_I("area", P1(SQUARE))


def test_eval_L_examples():
    assert eval_L("vol", P1(E1), P1(E2)).exact == Fraction(1, 2)
    rng = random.Random(8)
    x, y = P1(rand_polytope(rng, 2, 5)), P1(rand_polytope(rng, 2, 5)) - P1(E1)
    assert eval_L("vol", x, y).exact == eval_L("vol", y, x).exact
    a = Polytope.segment((0, 0, 0, 0), (1, 0, 0, 0))
    b = Polytope.segment((0, 0, 0, 0), (0, 1, 0, 0))
    r = eval_L("pseudo", P1(a), P1(b))
    assert r.value == 0 and r.error_bound == 0


def test_pseudo_pairing_matches_mixed_pseudovolume():
    from expcond.pseudovolume import mixed_pseudovolume

    rng = random.Random(9)
    A, B = rand_polytope(rng, 4, 3), rand_polytope(rng, 4, 3)
    r = eval_L("pseudo", P1(A), P1(B))
    assert r.value == pytest.approx(mixed_pseudovolume([A, B]).value, abs=1e-9)


# -- fans and J_vol ---------------------------------------------------------------


def test_weighted_fan_of_examples():
    F = weighted_fan_of(P1(SQUARE))
    assert F.dim == 1 and len(F.cones) == 4
    assert all(w == Surd(1) for _, w in F.cones)
    moved = P1(SQUARE) - P1(SQUARE.translate((3, 1)))
    assert weighted_fan_of(moved).is_zero()
    Z = weighted_fan_of(polarize([E1, E2]))
    assert Z.dim == 0 and zero_cone_weight(Z) == Surd(Fraction(1, 2))


def test_weighted_fan_of_needs_homogeneous():
    with pytest.raises(ValueError):
        weighted_fan_of(P1(SQUARE) + RingElement.power(SQUARE, 2))


def test_in_Jvol_examples():
    tri = Polytope([(0, 0), (2, 0), (1, 3)])
    assert in_Jvol(P1(tri) - P1(tri.translate((1, 1))))
    assert not in_Jvol(P1(tri))
    # T1 + T2 and the three edges of the hexagon T1 + T2, each counted once
    T1 = Polytope([(0, 0), (1, 0), (0, 1)])
    T2 = Polytope([(0, 0), (-1, 0), (0, -1)])
    segs = [E1, E2, Polytope.segment((1, 0), (0, 1))]
    x = P1(T1) + P1(T2) - sum((P1(s) for s in segs[1:]), P1(segs[0]))
    assert in_Jvol(x)
    with pytest.raises(ValueError):
        in_Jvol(P1(T1) + RingElement.power(T1, 2))


def test_Jvol_membership_agrees_with_pairing_kernel():
    rng = random.Random(10)
    fam = [rand_polytope(rng, 2, 4) for _ in range(4)]
    for P in fam:
        x = P1(P) * 2 - P1(P.scale(2))
        assert in_Jvol(x)
        assert all(eval_L("vol", x, P1(Q)).exact == 0 for Q in fam)


def test_pairing_is_nondegenerate_on_family():
    rng = random.Random(11)
    fam = [rand_polytope(rng, 2, 4) for _ in range(5)] + [E1, E2]
    for P in fam:
        if weighted_fan_of(P1(P)).is_zero():
            continue
        assert any(eval_L("vol", P1(P), P1(Q)).exact != 0 for Q in fam)


def test_fan_of_product_is_independent_of_representation():
    x = P1(E1) * P1(E2)
    y = polarize([E2, E1])
    assert fan_equivalent(weighted_fan_of(x), weighted_fan_of(y))


# -- pushforward ------------------------------------------------------------------


def test_pushforward_examples():
    x = polarize([E1, SQUARE])
    assert same(pushforward([[1, 0], [0, 1]], x), x)
    y = pushforward([[1, 0]], P1(SQUARE))
    assert y.ambient_dim == 1 and same(y, P1(Polytope.segment((0,), (1,))))


def test_pushforward_dimension_checked():
    with pytest.raises(ValueError):
        pushforward([[1, 0, 0]], P1(SQUARE))


@given(st.data())
def test_pushforward_composes(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    A = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(2)]
    B = [[rng.randint(-2, 2) for _ in range(2)] for _ in range(3)]
    x = polarize([rand_polytope(rng, 3, 3), rand_polytope(rng, 3, 3)])
    lhs = pushforward(B, pushforward(A, x))
    rhs = pushforward(compose(B, A), x)
    assert same(lhs, rhs)


@pytest.mark.parametrize("t", [Fraction(2), Fraction(1, 3), Fraction(5, 2)])
def test_rescaling_scales_top_pairing(t):
    rng = random.Random(12)
    A, B = rand_polytope(rng, 2, 4), rand_polytope(rng, 2, 4)
    T = [[t, 0], [0, t]]
    x = polarize([A, B])
    assert eval_I("vol", pushforward(T, x)).exact == t**2 * eval_I("vol", x).exact
    k = P1(A) - P1(A.translate((1, 2)))
    assert in_Jvol(pushforward(T, k)) and not in_Jvol(pushforward(T, P1(A)))


# -- support-function expansion --------------------------------------------------------


def test_support_expansion_square_and_box():
    U = RingElement.power(SQUARE, 1)
    Y = Polytope([(0, 0), (2, 0), (0, 3)])
    lhs = eval_L("vol", P1(Y), U).exact * 2
    assert support_expansion(Y, U) == Surd(lhs)
    box = Polytope([(a, b, c) for a in (0, 1) for b in (0, 2) for c in (0, 1)])
    U3 = RingElement.power(box, 2)
    lhs = eval_L("vol", P1(box), U3).exact * 6
    assert support_expansion(box, U3) == Surd(lhs) == Surd(12)


def test_support_expansion_for_segment_element():
    # a segment's fan is a line, which contributes both directions
    U = P1(Polytope.segment((0, 0), (1, 1)))
    Y = rand_polytope(random.Random(3), 2, 4)
    assert support_expansion(Y, U) == Surd(eval_L("vol", P1(Y), U).exact * 2)
