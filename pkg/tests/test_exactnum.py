import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from expcond.exactnum import (
    GaussianVector,
    Subspace,
    Surd,
    complex_rotate,
    det,
    dot,
    gram_det,
    orthogonal_complement,
    rank_of,
    solve_linear,
    subspace_cosine,
    subspace_cosine_squared,
)

from conftest import small_rat


def F(*xs):
    return tuple(Fraction(x) for x in xs)


def test_complex_rotate_examples():
    assert complex_rotate(F(1, 0)) == F(0, 1)
    assert complex_rotate(F(0, 1)) == F(-1, 0)
    assert complex_rotate(F(1, 0, 0, 1)) == F(0, 1, -1, 0)


def test_complex_rotate_rejects_odd_length():
    with pytest.raises(ValueError):
        complex_rotate(F(1, 2, 3))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(*[small_rat] * (2 * n))))
def test_rotate_twice_is_negation(v):
    assert complex_rotate(complex_rotate(v)) == tuple(-a for a in v)


def test_orthogonal_complement_examples():
    assert orthogonal_complement(Subspace.span([F(1, 0)], 2)) == Subspace.span([F(0, 1)], 2)
    assert orthogonal_complement(Subspace.full(3)).dim == 0
    S = Subspace.span([F(1, 1, 0, 0)], 4)
    C = orthogonal_complement(S)
    assert C.dim == 3
    assert all(dot(a, b) == 0 for a in S.basis for b in C.basis)


@given(st.lists(st.tuples(*[small_rat] * 4), min_size=0, max_size=4))
def test_complement_dimensions_and_pairing(vs):
    S = Subspace.span(vs, 4)
    C = orthogonal_complement(S)
    assert S.dim + C.dim == 4
    assert all(dot(a, b) == 0 for a in S.basis for b in C.basis)
    assert orthogonal_complement(C) == S


def test_subspace_cosine_examples():
    A = Subspace.span([F(1, 0, 0, 0), F(0, 0, 0, 1)], 4)
    assert subspace_cosine(A, A) == 1
    assert subspace_cosine(Subspace.span([F(1, 0)], 2), Subspace.span([F(0, 1)], 2)) == 0
    iA = Subspace.span([complex_rotate(b) for b in A.basis], 4)
    assert subspace_cosine_squared(A, iA) == 0
    assert subspace_cosine(orthogonal_complement(A), iA) == 1
    line = Subspace.span([F(1, 0, 1, 0), F(0, 1, 0, 1)], 4)
    iline = Subspace.span([complex_rotate(b) for b in line.basis], 4)
    assert subspace_cosine_squared(line, iline) == 1


def test_subspace_cosine_dimension_mismatch():
    with pytest.raises(ValueError):
        subspace_cosine(Subspace.span([F(1, 0)], 2), Subspace.full(2))


def _orthonormal_oracle(A, B):
    Qa, _ = np.linalg.qr(np.array(A, dtype=float).T)
    Qb, _ = np.linalg.qr(np.array(B, dtype=float).T)
    return abs(np.linalg.det(Qa.T @ Qb))


@given(st.data())
def test_cosine_matches_orthonormal_oracle_and_is_basis_invariant(data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    m = rng.choice([2, 4, 6])
    k = rng.randint(1, m - 1)
    A = [[Fraction(rng.randint(-4, 4)) for _ in range(m)] for _ in range(k)]
    B = [[Fraction(rng.randint(-4, 4)) for _ in range(m)] for _ in range(k)]
    if rank_of(A) < k or rank_of(B) < k:
        return
    SA, SB = Subspace.span(A, m), Subspace.span(B, m)
    c = subspace_cosine(SA, SB)
    assert 0 <= c <= 1
    assert c == pytest.approx(_orthonormal_oracle(A, B), abs=1e-12)
    assert subspace_cosine_squared(SA, SB) == subspace_cosine_squared(SB, SA)
    # change of basis: mix the generators with an invertible integer matrix
    T = [[Fraction(int(i == j) + (rng.randint(-2, 2) if j > i else 0)) for j in range(k)] for i in range(k)]
    A2 = [[sum(T[i][l] * A[l][j] for l in range(k)) for j in range(m)] for i in range(k)]
    assert subspace_cosine(Subspace(m, tuple(map(tuple, A2))), SB) == pytest.approx(c, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mutually_dual_bases(n):
    # cos(A, B) * vol Pi(a) * vol Pi(b) = 1 when <a_i, b_j> = delta_ij
    rng = random.Random(n)
    m = 2 * n
    for _ in range(5):
        a = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(m)] for _ in range(n)]
        w = [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(m)] for _ in range(n)]
        G = [[dot(ai, wk) for wk in w] for ai in a]
        if rank_of(a) < n or det(G) == 0:
            continue
        # b_j = sum_k w_k M_kj with G M = I
        cols = [solve_linear(G, [int(i == j) for i in range(n)]) for j in range(n)]
        b = [tuple(sum(w[k][t] * cols[j][k] for k in range(n)) for t in range(m)) for j in range(n)]
        assert all(dot(a[i], b[j]) == int(i == j) for i in range(n) for j in range(n))
        c2 = subspace_cosine_squared(Subspace.span(a, m), Subspace.span(b, m))
        assert c2 * gram_det(a) * gram_det(b) == 1
        assert math.sqrt(c2 * gram_det(a) * gram_det(b)) == pytest.approx(1, abs=1e-9)


def test_rank_and_solve():
    assert rank_of([F(1, 0), F(0, 1)]) == 2
    assert rank_of([F(1, 2), F(2, 4)]) == 1
    assert solve_linear([[1, 1], [1, -1]], [1, 0]) == (Fraction(1, 2), Fraction(1, 2))
    assert solve_linear([[1, 1], [2, 2]], [1, 3]) is None


def test_gaussian_vector():
    v = GaussianVector.from_complex_pairs([(1, 2), ("1/2", 0)])
    assert v.n == 2
    assert v.rotate().coords == F(-2, 1, 0, "1/2")
    assert v.conjugate().to_complex() == [1 - 2j, 0.5]
    with pytest.raises(ValueError):
        GaussianVector(F(1, 2, 3))


def test_surd_normal_form_is_exact():
    assert Surd.sqrt(8) == Surd.sqrt(2) * 2
    assert Surd.sqrt(Fraction(1, 2)) == Surd.sqrt(2) / 2
    assert (Surd.sqrt(2) + Surd.sqrt(3)) * (Surd.sqrt(2) - Surd.sqrt(3)) == Surd(-1)
    assert Surd.sqrt(6) == Surd.sqrt(2) * Surd.sqrt(3)
    assert (Surd.sqrt(2) * Surd.sqrt(2)).is_rational()
    assert not (Surd.sqrt(2) + 1).is_rational()
    assert str(Surd.sqrt(2) / 2 + 1) == "1 + 1/2*sqrt(2)"


@given(
    st.lists(st.tuples(st.fractions(-5, 5, max_denominator=4), st.integers(1, 30)), max_size=4),
    st.lists(st.tuples(st.fractions(-5, 5, max_denominator=4), st.integers(1, 30)), max_size=4),
)
def test_surd_arithmetic_matches_floats(xs, ys):
    def build(ts):
        s = Surd(0)
        for c, r in ts:
            s = s + Surd.sqrt(r) * c
        return s

    x, y = build(xs), build(ys)
    fx = sum(float(c) * math.sqrt(r) for c, r in xs)
    fy = sum(float(c) * math.sqrt(r) for c, r in ys)
    assert float(x) == pytest.approx(fx, abs=1e-9)
    assert float(x * y) == pytest.approx(fx * fy, abs=1e-8)
    assert float(x - y) == pytest.approx(fx - fy, abs=1e-9)
    assert (x - x).is_zero()
