"""
Matrices <-> ideals.

An integer matrix A with irreducible characteristic polynomial f has an
eigenvector u in K^n with A·u = beta·u; the Z-span of its components is
a fractional ideal, and conjugacy classes of A correspond to arithmetic
equivalence classes of ideals. Going back, multiplication by beta on a
Z-basis of an ideal gives a matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

from sympy import ImmutableMatrix

from blockconj.errors import (
    NonUnitError,
    NotUnimodularError,
    PreconditionError,
    VerificationError,
)
from blockconj.tools.exact_linalg import (
    IntMat,
    as_int_matrix,
    charpoly,
    content,
    det,
    evaluate_polynomial,
    int_matrix,
    intertwiner_basis,
    is_integral,
)
from blockconj.tools.ideal_arith import FracIdeal, ideal_from_elements, lattice_span
from blockconj.tools.number_field import FieldElem, MinPoly, express_all, mult_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Automorphism:
    """An integer matrix with det ±1 and irreducible characteristic polynomial f."""

    mat: IntMat
    f: MinPoly

    @classmethod
    def from_matrix(cls, mat, *, assume_irreducible: bool = False) -> "Automorphism":
        mat = mat if isinstance(mat, ImmutableMatrix) else int_matrix(mat)
        if mat.rows != mat.cols:
            raise PreconditionError(f"matrix is not square: {mat.shape}", module="lmt_correspondence")
        d = det(mat)
        if abs(d) != 1:
            raise NotUnimodularError(f"det = {d}, expected ±1")
        f = MinPoly.from_coeffs(charpoly(mat), assume_irreducible=assume_irreducible)
        return cls(ImmutableMatrix(mat), f)

    @classmethod
    def with_minpoly(cls, mat: IntMat, f: MinPoly) -> "Automorphism":
        """Attach an already-known field context after checking the charpoly."""
        mat = as_int_matrix(mat)
        if charpoly(mat) != f.coeffs:
            raise PreconditionError(f"charpoly of matrix is not {f}", module="lmt_correspondence")
        if abs(det(mat)) != 1:
            raise NotUnimodularError(f"det = {det(mat)}, expected ±1")
        return cls(mat, f)

    @property
    def n(self) -> int:
        return self.mat.rows


class EigenData(NamedTuple):
    u: Tuple[FieldElem, ...]
    ideal: FracIdeal


def apply_matrix(mat: IntMat, vec: Sequence[FieldElem]) -> Tuple[FieldElem, ...]:
    """mat·vec for a vector of field elements."""
    ctx = vec[0].ctx
    out = []
    for r in range(mat.rows):
        total = FieldElem.zero(ctx)
        for s in range(mat.cols):
            if mat[r, s]:
                total = total + vec[s] * mat[r, s]
        out.append(total)
    return tuple(out)


def matrix_to_ideal(A: Automorphism) -> EigenData:
    """
    Primitive integral eigenvector u with A·u = beta·u and the ideal it spans.

    u is column 0 of adj(beta·I - A); its beta^j coordinate vector is
    sum_{k>j} c_k A^(k-1-j) e_0 for f = sum c_k t^k.

    Examples:
        [[8,5],[3,2]] -> u = (beta - 2, 3)
    """
    f, n = A.f, A.n
    columns = [ImmutableMatrix.eye(n)[:, 0]]
    for _ in range(n - 1):
        columns.append(A.mat * columns[-1])

    coeff_vectors = []
    for j in range(n):
        vec = ImmutableMatrix.zeros(n, 1)
        for k in range(j + 1, n + 1):
            vec = vec + f.coeffs[k] * columns[k - 1 - j]
        coeff_vectors.append([int(v) for v in vec])

    g = content([v for vec in coeff_vectors for v in vec])
    u = tuple(
        FieldElem(tuple(coeff_vectors[j][r] // g for j in range(n)), f) for r in range(n)
    )
    beta = FieldElem.beta(f)
    if apply_matrix(A.mat, u) != tuple(beta * x for x in u):
        raise VerificationError("eigenvector relation A·u = beta·u failed", module="lmt_correspondence")
    ideal = ideal_from_elements(u)
    if lattice_span(u) != ideal:
        raise VerificationError("eigenvector components do not span a beta-stable lattice", module="lmt_correspondence")
    logger.debug("[lmt_correspondence] → ideal %s", ideal)
    return EigenData(u, ideal)


def ideal_to_matrix(
    ideal: FracIdeal, basis: Optional[Sequence[FieldElem]] = None
) -> Tuple[Automorphism, Tuple[FieldElem, ...]]:
    """
    Matrix of multiplication by beta on a Z-basis of the ideal (HNF basis by default).

    Raises:
        NonUnitError: |f(0)| != 1
    """
    f = ideal.ctx
    if not f.unit_flag:
        raise NonUnitError(f"beta is not a unit for {f}")
    basis = tuple(ideal.elements() if basis is None else basis)
    if len(basis) != f.n or lattice_span(basis) != ideal:
        raise PreconditionError("given elements are not a Z-basis of the ideal", module="lmt_correspondence")
    mat = mult_matrix(FieldElem.beta(f), basis)
    return Automorphism.with_minpoly(mat, f), basis


class IntertwinerLattice(NamedTuple):
    """Z-basis of Λ(target, source) = {X : target·X = X·source}."""

    basis: List[IntMat]
    target: Automorphism
    source: Automorphism


def intertwiner_lattice(target: Automorphism, source: Automorphism) -> IntertwinerLattice:
    if target.f != source.f:
        raise PreconditionError("matrices have different characteristic polynomials", module="lmt_correspondence")
    basis = intertwiner_basis(target.mat, source.mat)
    if len(basis) != target.n:
        raise VerificationError(f"intertwiner lattice has rank {len(basis)} != {target.n}", module="lmt_correspondence")
    return IntertwinerLattice(basis, target, source)


def phi_iso(X: IntMat, u: EigenData, v: EigenData) -> FieldElem:
    """
    The theta with X·v = theta·u, for X in Λ(A, B) where A·u = beta·u and B·v = beta·v.

    Examples:
        identity with u = v -> 1
    """
    Xv = apply_matrix(X, v.u)
    theta = Xv[0] / u.u[0]
    if any(lhs != theta * x for lhs, x in zip(Xv, u.u)):
        raise PreconditionError("matrix does not intertwine the two eigenvectors", module="lmt_correspondence")
    return theta


def matrix_of_multiplier(
    theta: FieldElem, image: Sequence[FieldElem], domain: Sequence[FieldElem]
) -> IntMat:
    """
    Integer X with X·domain = theta·image.

    Row r holds the coordinates of theta·image[r] in the basis ``domain``.
    """
    coords = express_all([theta * x for x in image], domain)
    if not is_integral(coords):
        raise PreconditionError("theta·image is not in the Z-span of domain", module="lmt_correspondence")
    return ImmutableMatrix(coords)


def _coefficient_matrix(y: FieldElem, M: Automorphism) -> IntMat:
    p_of_m = evaluate_polynomial(y.coords, M.mat)
    if not is_integral(p_of_m):
        raise PreconditionError(f"{y} does not act integrally", module="lmt_correspondence")
    return ImmutableMatrix(p_of_m)


def act_left(y: FieldElem, X: IntMat, A: Automorphism) -> IntMat:
    """y·X = p_y(A)·X for y in the coefficient ring of A's ideal."""
    return _coefficient_matrix(y, A) * X


def act_right(X: IntMat, y: FieldElem, B: Automorphism) -> IntMat:
    """X·y = X·p_y(B)."""
    return X * _coefficient_matrix(y, B)
