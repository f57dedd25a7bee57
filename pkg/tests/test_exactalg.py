from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from trkr.exactalg import (AlgebraError, Echelon, Poly, QMatrix, Ring, divide_exact, eval_g,
                           g_divided_differences, monomials, newton_g, poly_arith,
                           quotient_pi, rank, rank_kernel_image, solve_nullspace)

R = Ring.with_x(["x1", "x2", "x3"])
a, x1, x2, x3 = (R.var(n) for n in ("a", "x1", "x2", "x3"))


def test_bidegrees():
    assert (a * x1).bidegree() == (2, 2)
    assert (a * a * x1 * x2 * x3).bidegree() == (4, 6)
    assert R.one().bidegree() == (0, 0)


def test_add_negation_is_empty():
    p = a * x1 + x2 ** 3
    assert (p + (-p)).terms == {}


def test_substitute_a_to_one():
    assert poly_arith("substitute", a * x1 ** 2, {"a": 1}) == x1 ** 2
    assert (a * x1 + x2).specialize_a(0) == x2


def test_ring_mismatch():
    other = Ring.with_x(["y1"])
    with pytest.raises(AlgebraError):
        x1 + other.var("y1")


def test_divide_exact():
    num = x1 ** 3 - x2 ** 3
    assert divide_exact(num, x1 - x2) == x1 ** 2 + x1 * x2 + x2 ** 2
    with pytest.raises(AlgebraError):
        divide_exact(x1 ** 2 + 1, x1 - x2)


def test_quotient_pi_small_n():
    assert quotient_pi(x1, x2, 1) == x1 + x2
    assert quotient_pi(x1, x2, 2) == x1 ** 2 + x1 * x2 + x2 ** 2
    # u == v gives (N+1) u^N
    assert quotient_pi(x1, x1, 3) == 4 * x1 ** 3


def test_newton_g():
    g = newton_g(1)
    e1, e2 = (g.ring.var(n) for n in ("e1", "e2"))
    # g(x+y, xy) = x^2 + y^2 at N = 1
    assert g == e1 ** 2 - 2 * e2
    g2 = newton_g(2)
    assert g2 == e1 ** 3 - 3 * e1 * e2


@pytest.mark.parametrize("N", [1, 2, 3])
def test_newton_identity(N):
    assert eval_g(N, x1 + x2, x1 * x2) == x1 ** (N + 1) + x2 ** (N + 1)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_divided_differences(N):
    # u1 (t1 - s1) + u2 (t2 - s2) = g(t) - g(s)
    s1, s2, t1, t2 = x1 + x2, x1 * x2, x3 + a, x3 * a
    u1, u2 = g_divided_differences(N, s1, s2, t1, t2)
    assert u1 * (t1 - s1) + u2 * (t2 - s2) == eval_g(N, t1, t2) - eval_g(N, s1, s2)


def test_divided_differences_at_coinciding_arguments():
    # g = e1^2 - 2 e2 at N = 1, so the differences become the partials 2 e1 and -2
    s1, s2 = x1 + x2, x1 * x2
    v1, v2 = g_divided_differences(1, s1, s2, s1, s2)
    assert v1 == 2 * s1
    assert v2 == R.const(-2)


def test_monomials_count():
    assert len(monomials(3, 2)) == 6
    assert monomials(0, 0) == [()]
    assert monomials(2, 0) == [(0, 0)]


small = st.integers(-3, 3)
poly_terms = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1), st.integers(0, 1)),
                             small, max_size=4)


@given(poly_terms, poly_terms, poly_terms)
def test_ring_axioms(t1, t2, t3):
    p, q, r = Poly(R, t1), Poly(R, t2), Poly(R, t3)
    assert p * q == q * p
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)


@given(poly_terms, poly_terms)
def test_homogeneous_products_add_bidegrees(t1, t2):
    p, q = Poly(R, t1), Poly(R, t2)
    if p and q and p.is_homogeneous() and q.is_homogeneous():
        da, dx = p.bidegree()
        ea, ex = q.bidegree()
        assert (p * q).bidegree() == (da + ea, dx + ex)


@given(poly_terms, poly_terms)
def test_divide_exact_inverts_mul(t1, t2):
    p, q = Poly(R, t1), Poly(R, t2)
    if q:
        assert divide_exact(p * q, q) == p


# -- linear algebra, checked against sympy ----------------------------------

matrices = st.integers(0, 5).flatmap(
    lambda r: st.integers(0, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-2, 2), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_rank_matches_sympy(rows):
    if not rows or not rows[0]:
        return
    M = QMatrix.from_dense(rows)
    assert rank(M) == sympy.Matrix(rows).rank()


@given(matrices)
def test_rank_nullity(rows):
    if not rows or not rows[0]:
        return
    M = QMatrix.from_dense(rows)
    rk, kernel, image = rank_kernel_image(M)
    assert rk + len(kernel) == M.cols
    for v in kernel:
        assert not M.apply(v)
    # kernel vectors are independent
    ech = Echelon()
    assert all(ech.add(v) is not None for v in kernel)


def test_rank_kernel_examples():
    M = QMatrix.from_dense([[1, 2], [2, 4]])
    rk, kernel, image = rank_kernel_image(M)
    assert rk == 1 and len(kernel) == 1
    assert M.apply(kernel[0]) == {}
    empty = QMatrix(0, 0, [])
    assert rank_kernel_image(empty)[0] == 0


def test_fractions_stay_exact():
    M = QMatrix.from_dense([[3, 1], [1, Fraction(1, 3)]])
    assert rank(M) == 1


def test_solve_nullspace():
    basis = solve_nullspace([{0: 1, 1: -1}], 3)
    assert len(basis) == 2
    for v in basis:
        assert v.get(0, 0) == v.get(1, 0)
