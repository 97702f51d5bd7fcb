"""Exact linear algebra: row reduction, kernels and ranks over Q or K, and
fraction-free (Bareiss) determinants and ranks over Q[z].

Rational matrices are reduced with integer rows and content removal, so kernel
vectors come out with coprime integer entries. Field matrices go through plain
Gauss-Jordan in K.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .exactnum import FieldElement
from .polyseries import Poly


def _is_rational_matrix(rows):
    return not any(isinstance(x, FieldElement) for row in rows for x in row)


def _int_row(row):
    den = 1
    for x in row:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in row]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return [a // g for a in ints] if g > 1 else ints


def _rref_int(rows, ncols):
    """Gauss-Jordan over Z with content removal. Returns (rows, pivots)."""
    rows = [r for r in (_int_row(r) for r in rows) if any(r)]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        best = None
        for i in range(rank, len(rows)):
            a = rows[i][col]
            if a and (best is None or abs(a) < best):
                piv, best = i, abs(a)
                if best == 1:
                    break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        a = prow[col]
        for i in range(len(rows)):
            if i == rank:
                continue
            b = rows[i][col]
            if b:
                g = gcd(a, b)
                fa, fb = a // g, b // g
                new = [fa * x - fb * y for x, y in zip(rows[i], prow)]
                c = 0
                for x in new:
                    c = gcd(c, x)
                    if c == 1:
                        break
                rows[i] = [x // c for x in new] if c > 1 else new
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def _rref_field(rows, ncols):
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank:
                b = rows[i][col]
                if b:
                    rows[i] = [x - b * y for x, y in zip(rows[i], prow)]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def rref(rows, ncols=None):
    """Reduced row echelon form and pivot columns. Rational input gives integer rows."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if _is_rational_matrix(rows):
        return _rref_int(rows, ncols)
    return _rref_field(rows, ncols)


def rank(rows, ncols=None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols: int):
    """Basis of {x : rows . x = 0}, one vector per free column.

    Over Q the vectors have coprime integer entries; over K the free entry is 1.
    """
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    rational = _is_rational_matrix(red)
    basis = []
    for f in free:
        if rational:
            L = 1
            for row, pc in zip(red, pivots):
                if row[f]:
                    L = lcm(L, abs(row[pc]))
            vec = [0] * ncols
            vec[f] = L
            for row, pc in zip(red, pivots):
                if row[f]:
                    vec[pc] = -row[f] * L // row[pc]
            g = 0
            for x in vec:
                g = gcd(g, x)
            basis.append([Fraction(x // g) for x in vec])
        else:
            one = next((r[f] for r in red if isinstance(r[f], FieldElement)), None)
            one = one.field.one if one is not None else Fraction(1)
            vec = [one * 0 for _ in range(ncols)]
            vec[f] = one
            for row, pc in zip(red, pivots):
                vec[pc] = -row[f]
            basis.append(vec)
    return basis


def solve(matrix, rhs):
    """Unique solution of a square nonsingular system over Q or K."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = _rref_field(aug, n + 1)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n] for row in red]


def inverse(matrix):
    n = len(matrix)
    zero = matrix[0][0] * 0
    one = zero + 1
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(matrix)]
    red, pivots = _rref_field(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def matmul(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), A[i][0] * 0)
             for j in range(len(B[0]))] for i in range(len(A))]


def _bareiss(M):
    """Fraction-free elimination over Q[z]. Returns (rank, sign, last pivot)."""
    M = [[e if isinstance(e, Poly) else Poly([e]) for e in row] for row in M]
    nrows = len(M)
    ncols = len(M[0]) if M else 0
    prev = Poly([1])
    sign = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
            sign = -sign
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                M[i][j] = (M[r][c] * M[i][j] - M[i][c] * M[r][j]).exact_div(prev)
            M[i][c] = Poly()
        prev = M[r][c]
        r += 1
        if r == nrows:
            break
    return r, sign, prev


def poly_det(M) -> Poly:
    n = len(M)
    if n == 0:
        return Poly([1])
    r, sign, last = _bareiss(M)
    if r < n:
        return Poly()
    return last * sign


def poly_rank(M) -> int:
    """Rank over Q(z) of a matrix with polynomial entries."""
    if not M:
        return 0
    return _bareiss(M)[0]
