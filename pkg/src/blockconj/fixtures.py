"""
Worked examples as exact data.

- quadratic pair over t^2 - 10t + 1, with two hand-built two-block certificates
- inverse pair over t^2 - 20t + 1, with a matrix swapping B ⊕ B and its inverse
- cubic pair over t^3 - 23t^2 + 7t - 1 whose ideals are not weakly equivalent
- non-invertible ideals over Z + 2Z[theta] for theta^3 - theta - 1 and theta^4 - theta - 1
"""

from typing import Dict, Tuple

from blockconj.constructions.block_conjugacy import BlockCertificate
from blockconj.constructions.lmt_correspondence import Automorphism
from blockconj.tools.exact_linalg import IntMat, int_matrix
from blockconj.tools.ideal_arith import (
    FracIdeal,
    NonInvertibleFixture,
    OrderRing,
    PartitionOfUnity,
    lattice_span,
    non_invertible_fixture,
)
from blockconj.tools.number_field import FieldElem, MinPoly

# =========================
# QUADRATIC PAIR
# =========================
QUADRATIC_F = (1, -10, 1)
QUADRATIC_A = ((8, 5), (3, 2))
QUADRATIC_B = ((9, 8), (1, 1))
QUADRATIC_A_PRIME = ((-1, -4), (3, 11))
QUADRATIC_B_PRIME = ((0, 1), (-1, 10))

# (B ⊕ B)·M = M·(A ⊕ A'), det 1
QUADRATIC_M = (
    (7, 5, -3, -10),
    (1, 0, 0, -1),
    (3, 1, -2, -4),
    (0, 1, 1, 0),
)
# (A ⊕ A)·N = N·(B ⊕ B'), det -1
QUADRATIC_N = (
    (-3, -2, 2, -1),
    (-1, -2, -3, 0),
    (8, 7, 1, 2),
    (3, 3, -2, 1),
)

# =========================
# INVERSE PAIR
# =========================
INVERSE_F = (1, -20, 1)
INVERSE_B = ((3, 10), (5, 17))
# (B ⊕ B)·xi = xi·(B^-1 ⊕ B^-1), xi^2 = I
INVERSE_XI = (
    (5, 0, 0, 2),
    (7, -5, -1, 0),
    (0, 24, 5, 14),
    (-12, 0, 0, -5),
)

# =========================
# CUBIC PAIR
# =========================
CUBIC_F = (-1, 7, -23, 1)
CUBIC_A = ((-1, 2, 0), (-1, 1, 1), (-8, -6, 23))
CUBIC_B = ((0, 1, 0), (-1, 0, 2), (-11, -3, 23))
# (B ⊕ B)·embed = embed·A
CUBIC_EMBED = (
    (1, 0, 0),
    (-1, 2, 0),
    (0, 0, 1),
    (-1, 1, 0),
    (0, -1, 1),
    (-4, -3, 11),
)

# =========================
# NON-INVERTIBLE IDEALS
# =========================
THETA_CUBIC = (-1, -1, 0, 1)
THETA_QUARTIC = (-1, -1, 0, 0, 1)


def matrix(rows) -> IntMat:
    return int_matrix(rows)


def quadratic_pair() -> Tuple[Automorphism, Automorphism]:
    return Automorphism.from_matrix(matrix(QUADRATIC_A)), Automorphism.from_matrix(matrix(QUADRATIC_B))


def quadratic_certificates() -> Tuple[BlockCertificate, BlockCertificate]:
    A, B = quadratic_pair()
    A_prime = Automorphism.with_minpoly(matrix(QUADRATIC_A_PRIME), A.f)
    B_prime = Automorphism.with_minpoly(matrix(QUADRATIC_B_PRIME), A.f)
    return (
        BlockCertificate(matrix(QUADRATIC_M), B, (A, A_prime), quadratic_generators(A.f)),
        BlockCertificate(matrix(QUADRATIC_N), A, (B, B_prime)),
    )


def quadratic_generators(f: MinPoly) -> PartitionOfUnity:
    """a1 = beta - 2, a2 = 3, b1 = -(beta + 1)/3, b2 = beta."""
    beta = FieldElem.beta(f)
    return PartitionOfUnity(beta - 2, FieldElem.scalar(3, f), -(beta + 1) / 3, beta)


def inverse_pair() -> Tuple[Automorphism, IntMat]:
    return Automorphism.from_matrix(matrix(INVERSE_B)), matrix(INVERSE_XI)


def cubic_pair() -> Tuple[Automorphism, Automorphism]:
    return Automorphism.from_matrix(matrix(CUBIC_A)), Automorphism.from_matrix(matrix(CUBIC_B))


def cubic_ideal(f: MinPoly) -> FracIdeal:
    """I = Z·2 + Z·(beta + 1) + Z·(beta^2 + 1); A is beta on this basis."""
    return lattice_span(cubic_ideal_basis(f))


def cubic_ideal_basis(f: MinPoly) -> Tuple[FieldElem, ...]:
    return (
        FieldElem.scalar(2, f),
        FieldElem.from_coeffs((1, 1), f),
        FieldElem.from_coeffs((1, 0, 1), f),
    )


def cubic_order(f: MinPoly) -> OrderRing:
    """R = Z + Z·beta + Z·(beta^2 + 1)/2."""
    return OrderRing.from_ideal(lattice_span([
        FieldElem.one(f),
        FieldElem.beta(f),
        FieldElem.from_coeffs((1, 0, 1), f) / 2,
    ]))


def non_invertible(theta_coeffs=THETA_CUBIC) -> NonInvertibleFixture:
    return non_invertible_fixture(MinPoly.from_coeffs(theta_coeffs))


def wire_fixtures() -> Dict[str, Tuple]:
    """Every fixture matrix, keyed by the file stem `fixtures` writes it to."""
    return {
        "quadratic_A": QUADRATIC_A,
        "quadratic_B": QUADRATIC_B,
        "quadratic_A_prime": QUADRATIC_A_PRIME,
        "quadratic_B_prime": QUADRATIC_B_PRIME,
        "quadratic_M": QUADRATIC_M,
        "quadratic_N": QUADRATIC_N,
        "inverse_B": INVERSE_B,
        "inverse_xi": INVERSE_XI,
        "cubic_A": CUBIC_A,
        "cubic_B": CUBIC_B,
        "cubic_embed": CUBIC_EMBED,
    }
