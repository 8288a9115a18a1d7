"""
Exact integer and rational matrix kernel.

Matrices are ``sympy.ImmutableMatrix`` values holding ``Integer`` or
``Rational`` entries. The Hermite normal form with its unimodular
transform, integer kernels and integer solving run on plain Python integer
rows; everything else (determinants, characteristic polynomials,
adjugates, rational solving) is delegated to sympy.

HNF convention: row style, zeros below each pivot, pivots positive and the
entries above a pivot reduced into ``[0, pivot)``. The form is unique for a
given row lattice, so equal lattices have bit-equal bases.
"""

from __future__ import annotations

import logging
from typing import List, NamedTuple, Optional, Sequence, Tuple

from sympy import ZZ, ImmutableMatrix, Matrix, Rational, diag, igcd
from sympy.core.intfunc import igcdex
from sympy.polys.matrices import DomainMatrix
from sympy.utilities.misc import as_int

from blockconj.errors import NotUnimodularError, PreconditionError, VerificationError

logger = logging.getLogger(__name__)

IntMat = ImmutableMatrix
RatMat = ImmutableMatrix
Rows = List[List[int]]


class HermiteForm(NamedTuple):
    h: IntMat
    u: IntMat


class IntegerSolution(NamedTuple):
    particular: Tuple[int, ...]
    kernel: List[Tuple[int, ...]]


# =========================================
# CONSTRUCTION / CONVERSION
# =========================================

def int_matrix(rows: Sequence[Sequence[int]]) -> IntMat:
    """Build an IntMat, rejecting anything that is not an exact integer."""
    data = [[as_int(x) for x in row] for row in rows]
    if not data or not data[0]:
        raise PreconditionError("matrices need at least one row and column", module="exact_linalg")
    return ImmutableMatrix(data)


def rat_matrix(rows: Sequence[Sequence]) -> RatMat:
    return ImmutableMatrix([[Rational(x) for x in row] for row in rows])


def identity(n: int) -> IntMat:
    return ImmutableMatrix.eye(n)


def zero_matrix(rows: int, cols: int) -> IntMat:
    return ImmutableMatrix.zeros(rows, cols)


def to_rows(m: IntMat) -> Rows:
    return [[as_int(m[i, j]) for j in range(m.cols)] for i in range(m.rows)]


def is_integral(m: RatMat) -> bool:
    return all(x.is_integer for x in m)


def as_int_matrix(m: RatMat) -> IntMat:
    if not is_integral(m):
        raise PreconditionError("matrix has non-integer entries", module="exact_linalg")
    return ImmutableMatrix(m)


# =========================================
# BLOCK HELPERS
# =========================================

def block_diag(*mats: IntMat) -> IntMat:
    return ImmutableMatrix(diag(*mats))


def direct_sum(m: IntMat, k: int) -> IntMat:
    """The k-fold direct sum m ⊕ ... ⊕ m."""
    return block_diag(*([m] * k))


def block_matrix(blocks: Sequence[Sequence[IntMat]]) -> IntMat:
    return ImmutableMatrix(Matrix.vstack(*[Matrix.hstack(*row) for row in blocks]))


def split_blocks(m: IntMat, n: int) -> List[List[IntMat]]:
    """Cut a kn x ln matrix into its n x n blocks, row-block major."""
    if m.rows % n or m.cols % n:
        raise PreconditionError(f"{m.shape} is not a multiple of {n}", module="exact_linalg")
    return [
        [m[i * n:(i + 1) * n, j * n:(j + 1) * n] for j in range(m.cols // n)]
        for i in range(m.rows // n)
    ]


def evaluate_polynomial(coeffs: Sequence, m: RatMat) -> RatMat:
    """p(m) for p given constant term first (Horner)."""
    result = ImmutableMatrix.zeros(m.rows, m.cols)
    for c in reversed(list(coeffs)):
        result = result * m + Rational(c) * ImmutableMatrix.eye(m.rows)
    return ImmutableMatrix(result)


# =========================================
# HERMITE NORMAL FORM (row style, with transform)
# =========================================

def _combine(x: int, r: List[int], y: int, s: List[int]) -> List[int]:
    return [x * a + y * b for a, b in zip(r, s)]


def hnf_rows(rows: Rows, ncols: int, transform: bool = True) -> Tuple[Rows, Optional[Rows]]:
    """
    Row Hermite normal form of an integer row list.

    Args:
        rows: integer rows, all of length ``ncols``
        ncols: number of columns
        transform: also accumulate the unimodular ``u`` with ``u·m = h``

    Returns:
        (h, u) with zero rows of h at the bottom; u is None when not requested
    """
    h = [[int(v) for v in row] for row in rows]
    m = len(h)
    u = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None

    r = 0
    for c in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            b = h[i][c]
            if b == 0:
                continue
            a = h[r][c]
            x, y, g = (int(v) for v in igcdex(a, b))
            p, q = -(b // g), a // g
            h[r], h[i] = _combine(x, h[r], y, h[i]), _combine(p, h[r], q, h[i])
            if u is not None:
                u[r], u[i] = _combine(x, u[r], y, u[i]), _combine(p, u[r], q, u[i])
        pivot = h[r][c]
        if pivot == 0:
            continue
        if pivot < 0:
            h[r] = [-v for v in h[r]]
            if u is not None:
                u[r] = [-v for v in u[r]]
            pivot = -pivot
        for i in range(r):
            q = h[i][c] // pivot
            if q:
                h[i] = _combine(1, h[i], -q, h[r])
                if u is not None:
                    u[i] = _combine(1, u[i], -q, u[r])
        r += 1
    return h, u


def lattice_rows(rows: Rows, ncols: int) -> Rows:
    """Canonical (HNF, zero rows dropped) basis of the row lattice."""
    h, _ = hnf_rows(rows, ncols, transform=False)
    return [row for row in h if any(row)]


def hnf(m: IntMat) -> HermiteForm:
    """
    Row Hermite normal form with unimodular transform.

    Returns:
        HermiteForm(h, u) with u unimodular and u·m = h

    Examples:
        hnf([[2,6],[4,8]]).h -> [[2,2],[0,4]]
    """
    h, u = hnf_rows(to_rows(m), m.cols)
    return HermiteForm(ImmutableMatrix(h), ImmutableMatrix(u))


# =========================================
# KERNELS AND INTEGER SOLVING
# =========================================

def kernel_rows(rows: Rows, ncols: int) -> List[Tuple[int, ...]]:
    """Z-basis (HNF) of {x : x·m = 0} for the row list m."""
    nrows = len(rows)
    if nrows == 0:
        return []
    h, u = hnf_rows(rows, ncols)
    rank = sum(1 for row in h if any(row))
    kernel = u[rank:]
    if not kernel:
        return []
    return [tuple(row) for row in lattice_rows(kernel, nrows)]


def kernel_lattice(m: IntMat) -> List[Tuple[int, ...]]:
    """
    Left integer kernel of m.

    Examples:
        kernel_lattice([[2],[-1]]) -> [(1, 2)]
    """
    return kernel_rows(to_rows(m), m.cols)


def solve_integer_rows(rows: Rows, b: Sequence[int]) -> Optional[IntegerSolution]:
    """Integer solution of x·m = b for the row list m, or None."""
    ncols = len(b)
    h, u = hnf_rows(rows, ncols)
    residual = [int(v) for v in b]
    x = [0] * len(rows)
    for i, row in enumerate(h):
        pivot_col = next((c for c, v in enumerate(row) if v), None)
        if pivot_col is None:
            break
        y, rem = divmod(residual[pivot_col], row[pivot_col])
        if rem:
            return None
        if y:
            residual = _combine(1, residual, -y, row)
            x = _combine(1, x, y, u[i])
    if any(residual):
        return None
    rank = sum(1 for row in h if any(row))
    kernel = [tuple(row) for row in lattice_rows(u[rank:], len(rows))] if u[rank:] else []
    return IntegerSolution(tuple(x), kernel)


def solve_integer(m: IntMat, b: Sequence[int]) -> Optional[IntegerSolution]:
    """
    Solve x·m = b over the integers.

    Returns:
        IntegerSolution(particular, kernel) or None when unsolvable

    Examples:
        solve_integer([[2],[3]], (1,)) -> particular (-1, 1), kernel [(3, -2)]
        solve_integer([[2]], (3,)) -> None
    """
    return solve_integer_rows(to_rows(m), [as_int(v) for v in b])


def solve_rational(m: RatMat, b: Sequence) -> Optional[Tuple[Rational, ...]]:
    """A particular rational solution of x·m = b (free parameters set to 0), or None."""
    system = Matrix(m).T
    rhs = Matrix([Rational(v) for v in b])
    try:
        solution, params = system.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    return tuple(Rational(v) for v in solution)


def lattice_intersection(a: Rows, b: Rows, ncols: int) -> Rows:
    """HNF basis of the intersection of two integer row lattices."""
    kernel = kernel_rows(a + b, ncols)
    left = len(a)
    meet = []
    for vec in kernel:
        combo = [0] * ncols
        for coeff, row in zip(vec[:left], a):
            if coeff:
                combo = _combine(1, combo, coeff, row)
        meet.append(combo)
    return lattice_rows(meet, ncols) if meet else []


def content(values: Sequence[int]) -> int:
    g = 0
    for v in values:
        g = igcd(g, int(v))
    return g


# =========================================
# DETERMINANTS, ADJUGATES, CHARPOLYS
# =========================================

def det(m: RatMat):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise PreconditionError(f"det of non-square {m.shape}", module="exact_linalg")
    value = Matrix(m).det(method="bareiss")
    return int(value) if value.is_integer else Rational(value)


def det_rows(rows: Rows) -> int:
    """Determinant of a square integer row list over ZZ, without building a sympy Matrix."""
    n = len(rows)
    return int(DomainMatrix([[ZZ(int(v)) for v in row] for row in rows], (n, n), ZZ).det())


def adjugate(m: RatMat) -> RatMat:
    """Adjugate, checked against m·adj(m) = det(m)·I."""
    adj = ImmutableMatrix(Matrix(m).adjugate())
    if m * adj != det(m) * ImmutableMatrix.eye(m.rows):
        raise VerificationError("m·adj(m) != det(m)·I", module="exact_linalg")
    return adj


def charpoly(m: IntMat) -> Tuple[int, ...]:
    """det(tI - m) as integer coefficients, constant term first."""
    if m.rows != m.cols:
        raise PreconditionError(f"charpoly of non-square {m.shape}", module="exact_linalg")
    coeffs = Matrix(m).charpoly().all_coeffs()
    return tuple(as_int(c) for c in reversed(coeffs))


def is_unimodular(m: IntMat) -> bool:
    return m.rows == m.cols and is_integral(m) and abs(det(m)) == 1


def int_inverse(m: IntMat) -> IntMat:
    """Inverse of a unimodular integer matrix."""
    d = det(m)
    if abs(d) != 1:
        raise NotUnimodularError(f"det = {d}, expected ±1")
    return ImmutableMatrix(Matrix(m).adjugate() * d)


# =========================================
# SYLVESTER LATTICES
# =========================================

def intertwiner_basis(left: IntMat, right: IntMat) -> List[IntMat]:
    """
    Z-basis of {X : left·X = X·right}.

    The n^2 unknowns X[k][l] are flattened row-major; each contributes
    left[i][k] to equation (i, l) and -right[l][j] to equation (k, j).
    """
    p, q = left.rows, right.rows
    lrows, rrows = to_rows(left), to_rows(right)
    system = []
    for k in range(p):
        for l in range(q):
            row = [0] * (p * q)
            for i in range(p):
                row[i * q + l] += lrows[i][k]
            for j in range(q):
                row[k * q + j] -= rrows[l][j]
            system.append(row)
    basis = kernel_rows(system, p * q)
    logger.debug("[exact_linalg] intertwiner lattice of rank %d", len(basis))
    return [ImmutableMatrix(p, q, list(vec)) for vec in basis]


def lattice_coefficients(basis: Sequence[IntMat], x: IntMat) -> Optional[Tuple[int, ...]]:
    """Integer coordinates of x in the Z-span of the given matrices, or None."""
    rows = [to_rows(b.reshape(1, b.rows * b.cols))[0] for b in basis]
    target = to_rows(x.reshape(1, x.rows * x.cols))[0]
    solution = solve_integer_rows(rows, target)
    return None if solution is None else solution.particular
