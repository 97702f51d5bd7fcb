from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from transcend.exactnum import NumberField
from transcend.linalg import inverse, matmul, nullspace, poly_det, poly_rank, rank, solve
from transcend.polyseries import Poly

entry = st.integers(-5, 5).map(Fraction)


def matrices(rows, cols):
    return st.lists(st.lists(entry, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_rank_and_nullspace_match_sympy(r, c, data):
    A = data.draw(matrices(r, c))
    S = sympy.Matrix(A)
    assert rank(A, c) == S.rank()
    kernel = nullspace(A, c)
    assert len(kernel) == c - S.rank()
    for v in kernel:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)
        assert all(Fraction(x).denominator == 1 for x in v)


def test_pade_kernel_is_one_dimensional():
    # [2/2] approximant of exp: 5 equations in 6 unknowns
    e = [Fraction(1, sympy.factorial(k)) for k in range(6)]
    rows = [[e[N - k] if N >= k else 0 for k in range(3)] + [Fraction(-1) if N == k else 0
                                                                for k in range(3)]
            for N in range(5)]
    (v,) = nullspace(rows, 6)
    assert v[:3] in ([12, -6, 1], [-12, 6, -1])
    assert [x / v[0] * 12 for x in v[3:]] == [12, 6, 1]


@given(st.integers(1, 4), st.data())
def test_solve_and_inverse(n, data):
    A = data.draw(matrices(n, n))
    if sympy.Matrix(A).det() == 0:
        return
    b = data.draw(st.lists(entry, min_size=n, max_size=n))
    x = solve(A, b)
    assert [sum(a * xi for a, xi in zip(row, x)) for row in A] == b
    I = matmul(A, inverse(A))
    assert all(I[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


def test_field_nullspace():
    K = NumberField([-2, 0, 1])
    t = K.gen
    A = [[t, K.coerce(-2)], [K.coerce(1), -t]]
    assert rank(A, 2) == 1
    (v,) = nullspace(A, 2)
    assert all(not (row[0] * v[0] + row[1] * v[1]) for row in A)


def test_poly_det_and_rank():
    z = Poly.z()
    M = [[Poly([1]), z], [z, z * z]]
    assert not poly_det(M)
    assert poly_rank(M) == 1
    N = [[Poly([1]), z], [Poly([0]), Poly([1, 1])]]
    assert poly_det(N) == Poly([1, 1])
    assert poly_rank(N) == 2
