"""
Invariant tori of B ⊕ B and the Galois action of normalizing matrices.

A matrix M belongs to the block-diagonalizing set when M^-1·(B ⊕ B)·M is
block diagonal; its first n columns span an invariantly complemented
torus. A unimodular xi with (B ⊕ B)·xi = xi·(A ⊕ A) has A = p(B) for a
rational p, and p(beta) is a conjugate of beta.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

from sympy import ImmutableMatrix, Rational

from blockconj import config
from blockconj.errors import PreconditionError, VerificationError
from blockconj.constructions.block_conjugacy import complete_embedding, conjugacy_witness
from blockconj.constructions.lmt_correspondence import Automorphism
from blockconj.tools.exact_linalg import (
    IntMat,
    block_diag,
    direct_sum,
    evaluate_polynomial,
    int_inverse,
    intertwiner_basis,
    is_unimodular,
    rat_matrix,
    solve_rational,
)
from blockconj.tools.number_field import (
    FieldElem,
    MinPoly,
    check_root_polynomial,
    compose_polynomials,
    evaluate,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InvariantTorusWitness:
    """(B ⊕ B)·embed = embed·induced; ``complemented`` block-diagonalizes B ⊕ B when present."""

    embed: IntMat
    induced: Automorphism
    complemented: Optional[IntMat] = None


@dataclass(frozen=True)
class GaloisElement:
    """beta -> p(beta), p of degree < n, constant term first."""

    p: Tuple[Rational, ...]
    f: MinPoly

    @classmethod
    def identity(cls, f: MinPoly) -> "GaloisElement":
        return cls(tuple(Rational(int(i == 1)) for i in range(f.n)), f)

    @property
    def is_identity(self) -> bool:
        return self == GaloisElement.identity(self.f)

    @property
    def is_automorphism(self) -> bool:
        return check_root_polynomial(self.p, self.f)

    def compose(self, other: "GaloisElement") -> "GaloisElement":
        """self ∘ other, i.e. beta -> p_self(p_other(beta))."""
        return GaloisElement(compose_polynomials(self.p, other.p, self.f), self.f)

    def apply(self, x: FieldElem) -> FieldElem:
        """x = q(beta) -> q(p(beta))."""
        return evaluate(x.coords, FieldElem.from_coeffs(self.p, self.f))


def _off_diagonal_zero(C: IntMat, n: int) -> bool:
    return not any(C[:n, n:]) and not any(C[n:, :n])


def is_in_script_I(M: IntMat, B: Automorphism) -> Optional[Tuple[Automorphism, Automorphism]]:
    """
    Diagonal blocks (A, D) of M^-1·(B ⊕ B)·M when it is block diagonal, else None.

    Raises:
        NotUnimodularError: det(M) != ±1
    """
    n = B.n
    if M.shape != (2 * n, 2 * n):
        raise PreconditionError(f"expected a {2 * n}x{2 * n} matrix, got {M.shape}", module="tori_galois")
    C = int_inverse(M) * direct_sum(B.mat, 2) * M
    if not _off_diagonal_zero(C, n):
        return None
    return Automorphism.with_minpoly(C[:n, :n], B.f), Automorphism.with_minpoly(C[n:, n:], B.f)


def invariant_torus(embed: IntMat, B: Automorphism) -> InvariantTorusWitness:
    """Induced automorphism on the torus spanned by ``embed``, and a complement when the completion splits."""
    triangular = complete_embedding(embed, B, 2)
    complemented = triangular.M if not any(triangular.S) else None
    return InvariantTorusWitness(embed, triangular.A, complemented)


def act_on_script_I(M: IntMat, P: IntMat, Q: IntMat, B: Automorphism) -> Tuple[Automorphism, Automorphism]:
    """M·(P ⊕ Q) stays block-diagonalizing, with blocks P^-1·A·P and Q^-1·D·Q."""
    blocks = is_in_script_I(M, B)
    if blocks is None:
        raise PreconditionError("matrix does not block-diagonalize B ⊕ B", module="tori_galois")
    moved = is_in_script_I(M * block_diag(P, Q), B)
    A, D = blocks
    expected = (int_inverse(P) * A.mat * P, int_inverse(Q) * D.mat * Q)
    if moved is None or (moved[0].mat, moved[1].mat) != expected:
        raise VerificationError("right action does not conjugate the diagonal blocks", module="tori_galois")
    return moved


# =========================================
# CENTRALIZER OF B ⊕ B
# =========================================

def centralizer_basis(B: Automorphism) -> List[IntMat]:
    """Z-basis of {U : (B ⊕ B)·U = U·(B ⊕ B)}, rank 4n."""
    doubled = direct_sum(B.mat, 2)
    basis = intertwiner_basis(doubled, doubled)
    if len(basis) != 4 * B.n:
        raise VerificationError(f"centralizer lattice has rank {len(basis)}", module="tori_galois")
    return basis


def _commutant_polynomial(X: IntMat, B: Automorphism) -> Tuple[Rational, ...]:
    """The rational p of degree < n with p(B) = X."""
    if X * B.mat != B.mat * X:
        raise PreconditionError("matrix does not commute with B", module="tori_galois")
    n = B.n
    powers, current = [], ImmutableMatrix.eye(n)
    for _ in range(n):
        powers.append(list(current))
        current = current * B.mat
    solution = solve_rational(rat_matrix(powers), list(X))
    if solution is None or evaluate_polynomial(solution, B.mat) != X:
        raise PreconditionError("no polynomial in B represents the matrix", module="tori_galois")
    return solution


def recover_polynomial(Axi: Automorphism, B: Automorphism) -> GaloisElement:
    """
    p with p(B) = Axi; checked to be a conjugate of beta when Axi has B's charpoly.

    Examples:
        B^-1 for B = [[3,10],[5,17]] -> p(t) = 20 - t
    """
    element = GaloisElement(_commutant_polynomial(Axi.mat, B), B.f)
    if Axi.f == B.f and not element.is_automorphism:
        raise VerificationError("recovered polynomial does not map beta to a root of f", module="tori_galois")
    return element


def centralizer_entries(U: IntMat, B: Automorphism) -> Tuple[Tuple[FieldElem, FieldElem], Tuple[FieldElem, FieldElem]]:
    """The 2 x 2 matrix over K whose (i, j) entry is p(beta) for the block p(B) of U."""
    n = B.n
    if U.shape != (2 * n, 2 * n):
        raise PreconditionError(f"expected a {2 * n}x{2 * n} matrix, got {U.shape}", module="tori_galois")
    entries = [
        [FieldElem(_commutant_polynomial(U[i * n:(i + 1) * n, j * n:(j + 1) * n], B), B.f) for j in range(2)]
        for i in range(2)
    ]
    return (entries[0][0], entries[0][1]), (entries[1][0], entries[1][1])


def centralizer_witness(M: IntMat, B: Automorphism, bound: int = config.DEFAULT_BOUND) -> Optional[IntMat]:
    """
    U = V·M^-1 in the centralizer with U·M·(I;0) = V·(I;0), where
    V = Q ⊕ R conjugates the diagonal blocks of M^-1·(B ⊕ B)·M back to B.

    None when either block is not found conjugate to B within the bound.
    """
    blocks = is_in_script_I(M, B)
    if blocks is None:
        raise PreconditionError("matrix does not block-diagonalize B ⊕ B", module="tori_galois")
    A, D = blocks
    Q = conjugacy_witness(A, B, bound)
    R = conjugacy_witness(D, B, bound)
    if Q is None or R is None:
        return None
    V = block_diag(Q, R)
    U = V * int_inverse(M)
    doubled = direct_sum(B.mat, 2)
    if doubled * U != U * doubled or not is_unimodular(U):
        raise VerificationError("constructed matrix is not in the centralizer", module="tori_galois")
    n = B.n
    if any((U * M)[n:, :n]):
        raise VerificationError("constructed matrix does not move the torus onto the first factor", module="tori_galois")
    return U


# =========================================
# GALOIS ACTION
# =========================================

def check_E_membership_inverse_criterion(xi: IntMat, B: Automorphism) -> bool:
    """(B ⊕ B)·xi = xi·(B^-1 ⊕ B^-1) exactly."""
    int_inverse(xi)
    inverse = int_inverse(B.mat)
    return direct_sum(B.mat, 2) * xi == xi * direct_sum(inverse, 2)


def galois_of_xi(xi: IntMat, B: Automorphism) -> GaloisElement:
    """
    The conjugate p(beta) of beta induced by xi, where
    xi^-1·(B ⊕ B)·xi = p(B) ⊕ p(B).

    Composition reverses order: galois_of_xi(xi·eta) = galois_of_xi(xi) ∘ galois_of_xi(eta).
    """
    n = B.n
    if xi.shape != (2 * n, 2 * n):
        raise PreconditionError(f"expected a {2 * n}x{2 * n} matrix, got {xi.shape}", module="tori_galois")
    C = int_inverse(xi) * direct_sum(B.mat, 2) * xi
    if not _off_diagonal_zero(C, n) or C[:n, :n] != C[n:, n:]:
        raise PreconditionError("xi does not normalize the block structure", module="tori_galois")
    Axi = Automorphism.with_minpoly(C[:n, :n], B.f)
    element = recover_polynomial(Axi, B)
    logger.debug("[tori_galois] → galois element %s", element.p)
    return element


def find_inverse_criterion_xi(
    B: Automorphism, bound: int = 1, seed: int = config.DEFAULT_SEED
) -> Optional[IntMat]:
    """
    Unimodular xi with (B ⊕ B)·xi = xi·(B^-1 ⊕ B^-1), or None.

    The solution lattice is exact; the unimodular element is searched over
    coefficient vectors of max-norm <= bound, then XI_SAMPLES seeded draws.
    """
    inverse = int_inverse(B.mat)
    basis = intertwiner_basis(direct_sum(B.mat, 2), direct_sum(inverse, 2))
    if not basis:
        return None

    def combine(coeffs):
        total = ImmutableMatrix.zeros(2 * B.n, 2 * B.n)
        for c, X in zip(coeffs, basis):
            if c:
                total = total + c * X
        return total

    for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(basis)):
        if any(coeffs):
            xi = combine(coeffs)
            if is_unimodular(xi):
                return xi
    rng = random.Random(seed)
    for _ in range(config.XI_SAMPLES):
        xi = combine([rng.randint(-2 * bound - 1, 2 * bound + 1) for _ in basis])
        if is_unimodular(xi):
            return xi
    return None
