"""Exact linear algebra at the Fraction boundary.

The library keeps matrices as lists of Fraction rows. Elimination, null
spaces and pseudo-inverses are delegated to sympy, whose ``Rational`` matrices
are exact; results are converted back to Fractions before they leave here.
"""
from fractions import Fraction
from typing import List, Sequence, Tuple

import sympy

from tugame.errors import LinAlgError

Matrix = List[List[Fraction]]
Vector = List[Fraction]


def _rational(value) -> sympy.Rational:
    q = Fraction(value)
    return sympy.Rational(q.numerator, q.denominator)


def _fraction(entry) -> Fraction:
    if not entry.is_Rational:
        raise LinAlgError(f"non-rational entry {entry!r}")
    return Fraction(int(entry.p), int(entry.q))


def to_sympy(rows: Sequence[Sequence[object]]) -> sympy.Matrix:
    return sympy.Matrix([[_rational(v) for v in row] for row in rows])


def column(values: Sequence[object]) -> sympy.Matrix:
    return sympy.Matrix([_rational(v) for v in values])


def from_sympy(m: sympy.Matrix) -> Matrix:
    return [[_fraction(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def vector_from_sympy(m: sympy.Matrix) -> Vector:
    return [_fraction(entry) for entry in m]


def to_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[Fraction(v) for v in row] for row in rows]


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    if not a:
        return []
    return from_sympy(to_sympy(a).T)


def dot(u: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
    if not u:
        return Fraction(0)
    return _fraction(column(u).dot(column(w)))


def matvec(a: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vector:
    return vector_from_sympy(to_sympy(a) * column(x))


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    return from_sympy(to_sympy(a) * to_sympy(b))


def rref(a: Sequence[Sequence[Fraction]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the pivot column of each nonzero row."""
    if not a:
        return [], []
    reduced, pivots = to_sympy(a).rref()
    return from_sympy(reduced), list(pivots)


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    if not a:
        return 0
    return to_sympy(a).rank()


def solve_consistent(a: Sequence[Sequence[Fraction]],
                     b: Sequence[Fraction]) -> Tuple[Vector, Matrix]:
    """One solution of a x = b plus a basis of the null space of a.

    The particular solution sets every free parameter to zero. Raises
    LinAlgError if the system is inconsistent.
    """
    if not a:
        raise LinAlgError("empty system")
    m = to_sympy(a)
    try:
        sol, params = m.gauss_jordan_solve(column(b))
    except ValueError:
        raise LinAlgError("inconsistent linear system") from None
    particular = sol.xreplace({p: 0 for p in params})
    basis = [vector_from_sympy(u) for u in m.nullspace()]
    return vector_from_sympy(particular), basis


def solve_square(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vector:
    """Unique solution of a square (or overdetermined, full column rank) system."""
    x, null = solve_consistent(a, b)
    if null:
        raise LinAlgError(f"system is rank deficient (nullity {len(null)})")
    return x


def min_norm_solution(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vector:
    """Minimum Euclidean norm point of {x : a x = b}, as a⁺ b."""
    if not a:
        raise LinAlgError("empty system")
    m = to_sympy(a)
    rhs = column(b)
    x = m.pinv() * rhs
    if m * x != rhs:
        raise LinAlgError("inconsistent linear system")
    return vector_from_sympy(x)
