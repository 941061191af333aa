"""Dense exact linear algebra over scalars (rationals or rational functions).

Matrices are plain lists of row lists.  Parameters are treated generically:
a nonzero rational function counts as invertible, so ranks over Q(params) are
generic ranks.  Evaluate at a witness first when a specific region matters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .field import ONE, ZERO, RatFunc, Scalar, is_zero, scalar

Matrix = List[List[Scalar]]
Vector = List[Scalar]

__all__ = [
    "AffineSpace",
    "LinAlgError",
    "as_matrix",
    "zeros",
    "identity",
    "transpose",
    "matmul",
    "matvec",
    "rref",
    "rank",
    "nullspace",
    "column_space",
    "solve_affine",
    "det",
    "inverse",
    "invert_symmetric",
    "signature",
    "is_zero_matrix",
    "matrices_equal",
    "evaluate_matrix",
]


class LinAlgError(ValueError):
    """Singular or degenerate input."""


def as_matrix(rows) -> Matrix:
    m = [[scalar(x) for x in row] for row in rows]
    if m and any(len(r) != len(m[0]) for r in m):
        raise LinAlgError("ragged matrix")
    return m


def zeros(r: int, c: int) -> Matrix:
    return [[ZERO] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out.append([_dot(row, col) for col in bt])
    return out


def _dot(u, v):
    total = ZERO
    for x, y in zip(u, v):
        if not is_zero(x) and not is_zero(y):
            total = total + x * y
    return total


def matvec(m: Matrix, v: Sequence[Scalar]) -> Vector:
    return [_dot(row, v) for row in m]


def is_zero_matrix(m) -> bool:
    return all(is_zero(x) for row in m for x in row)


def matrices_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        if any(not is_zero(x - y) for x, y in zip(ra, rb)):
            return False
    return True


def evaluate_matrix(m, assignment) -> Matrix:
    from .field import evaluate

    return [[evaluate(x, assignment) for x in row] for row in m]


def _pivot_cost(x):
    # constants first, then rational functions with few terms
    if isinstance(x, RatFunc):
        return 1 + len(x.num) + len(x.den)
    return 0


def rref(m: Matrix):
    """Reduced row-echelon form.

    Returns ``(rank, pivot_columns, reduced)``; the input is not modified.
    """
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        best = None
        for i in range(r, rows):
            if not is_zero(a[i][c]):
                cost = _pivot_cost(a[i][c])
                if best is None or cost < best[0]:
                    best = (cost, i)
                    if cost == 0:
                        break
        if best is None:
            continue
        i = best[1]
        a[r], a[i] = a[i], a[r]
        p = a[r][c]
        if not (isinstance(p, Fraction) and p == 1):
            a[r] = [x / p if not is_zero(x) else ZERO for x in a[r]]
        for i in range(rows):
            if i != r and not is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [x - f * y if not is_zero(y) else x for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return r, pivots, a


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return rref(m)[0]


def nullspace(m: Matrix, ncols: Optional[int] = None) -> List[Vector]:
    """Basis of {x : m x = 0}, one vector per free column."""
    if not m:
        n = ncols or 0
        return [[ONE if i == j else ZERO for i in range(n)] for j in range(n)]
    n = len(m[0])
    _, pivots, red = rref(m)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, pc in enumerate(pivots):
            v[pc] = -red[row][f]
        basis.append(v)
    return basis


def column_space(m: Matrix) -> List[Vector]:
    """Basis of the column span, taken from the pivot columns of ``m``."""
    if not m or not m[0]:
        return []
    _, pivots, _ = rref(m)
    return [[row[c] for row in m] for c in pivots]


@dataclass
class AffineSpace:
    """``particular + span(directions)``."""

    dim: int
    particular: Vector
    directions: List[Vector] = field(default_factory=list)

    @property
    def free_dim(self) -> int:
        return len(self.directions)

    def point(self, coeffs: Sequence[Scalar]) -> Vector:
        if len(coeffs) != len(self.directions):
            raise ValueError("need one coefficient per direction")
        v = list(self.particular)
        for c, d in zip(coeffs, self.directions):
            if is_zero(c):
                continue
            v = [x + c * y for x, y in zip(v, d)]
        return v


def solve_affine(a: Matrix, b: Sequence[Scalar], ncols: Optional[int] = None) -> Optional[AffineSpace]:
    """Solve ``a x = b`` exactly; ``None`` marks an infeasible system."""
    n = len(a[0]) if a else (ncols or 0)
    if not a:
        return AffineSpace(n, [ZERO] * n, nullspace([], n))
    aug = [list(row) + [scalar(bi)] for row, bi in zip(a, b)]
    _, pivots, red = rref(aug)
    if n in pivots:
        return None
    particular = [ZERO] * n
    for row, pc in enumerate(pivots):
        particular[pc] = red[row][n]
    free = [j for j in range(n) if j not in pivots]
    directions = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for row, pc in enumerate(pivots):
            v[pc] = -red[row][f]
        directions.append(v)
    return AffineSpace(n, particular, directions)


def _bareiss(m: Matrix) -> Fraction:
    n = len(m)
    # clear denominators row by row so the fraction-free step stays integral
    scale = Fraction(1)
    a = []
    for row in m:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        scale /= den
        a.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] * scale


def _gcd(x, y):
    from math import gcd

    return gcd(x, y)


def _cofactor_det(m: Matrix):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = ZERO
    for j in range(n):
        x = m[0][j]
        if is_zero(x):
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = x * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _elimination_det(m: Matrix):
    a = [list(row) for row in m]
    n = len(a)
    d = ONE
    for k in range(n):
        piv = None
        for i in range(k, n):
            if not is_zero(a[i][k]):
                if piv is None or _pivot_cost(a[i][k]) < _pivot_cost(a[piv][k]):
                    piv = i
        if piv is None:
            return ZERO
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            d = -d
        p = a[k][k]
        d = d * p
        for i in range(k + 1, n):
            if not is_zero(a[i][k]):
                f = a[i][k] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return d


def det(m: Matrix) -> Scalar:
    n = len(m)
    if n == 0:
        return ONE
    if any(len(row) != n for row in m):
        raise LinAlgError("determinant of a non-square matrix")
    if all(isinstance(x, Fraction) for row in m for x in row):
        return _bareiss(m)
    if n <= 5:
        return _cofactor_det(m)
    return _elimination_det(m)


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m)]
    r, pivots, red = rref(aug)
    if pivots[:n] != list(range(n)) or r < n:
        raise LinAlgError("matrix is singular")
    return [row[n:] for row in red]


def invert_symmetric(m: Matrix):
    """Return ``(inverse, det)`` for a symmetric matrix, verified by multiplication."""
    n = len(m)
    for i in range(n):
        for j in range(i + 1, n):
            if not is_zero(m[i][j] - m[j][i]):
                raise LinAlgError("matrix is not symmetric")
    d = det(m)
    if is_zero(d):
        raise LinAlgError("matrix is singular")
    inv = inverse(m)
    if not matrices_equal(matmul(m, inv), identity(n)):
        raise AssertionError("inverse failed verification")
    return inv, d


def signature(m: Matrix):
    """(positives, negatives) of a nondegenerate symmetric rational matrix."""
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    pos = neg = 0
    k = 0
    while k < n:
        if a[k][k] == 0:
            # find a nonzero diagonal entry further down, or make one
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    raise LinAlgError("degenerate symmetric matrix")
                # e_k -> e_k + e_j gives diagonal 2 a[k][j]
                for c in range(n):
                    a[k][c] += a[j][c]
                for r in range(n):
                    a[r][k] += a[r][j]
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / p
            if f:
                for c in range(k, n):
                    a[i][c] -= f * a[k][c]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
        k += 1
    return pos, neg
