"""
Semiconjugacies from A to C_R ⊕ ... ⊕ C_R for an ideal I over an order R.

Given generators I = a_1·R + ... + a_k·R, the stacked matrices X_i with
X_i·u = a_i·w embed Z^n into Z^{kn} and intertwine A with the k-fold sum
of C_R. Completing the embedding to a unimodular M splits Z^{kn} into the
image of I and the kernel of psi: (x_1, ..., x_k) -> sum a_i·x_i.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from sympy import ImmutableMatrix, Matrix, ilcm

from blockconj import config
from blockconj.errors import PreconditionError, SearchExhaustedError, VerificationError
from blockconj.constructions.block_conjugacy import TriangularForm, complete_embedding
from blockconj.constructions.lmt_correspondence import (
    Automorphism,
    apply_matrix,
    ideal_to_matrix,
    matrix_of_multiplier,
)
from blockconj.tools.exact_linalg import (
    IntMat,
    det,
    direct_sum,
    evaluate_polynomial,
    identity,
    int_inverse,
    int_matrix,
    is_integral,
    kernel_lattice,
    kernel_rows,
    split_blocks,
    to_rows,
)
from blockconj.tools.ideal_arith import (
    FracIdeal,
    OrderRing,
    coefficient_ring,
    ideal_from_elements,
    ideal_quotient,
    integer_combination,
)
from blockconj.tools.number_field import FieldElem

logger = logging.getLogger(__name__)

Stack = Tuple[FieldElem, ...]


@dataclass(frozen=True)
class GeneratorData:
    """Generators a_i of I over R, X_i·u = a_i·w and sum Y_i·X_i = I_n."""

    gens: Tuple[FieldElem, ...]
    X: Tuple[IntMat, ...]
    Y: Tuple[IntMat, ...]

    @property
    def k(self) -> int:
        return len(self.gens)


@dataclass(frozen=True)
class Semiconjugacy:
    ideal: FracIdeal
    order: OrderRing
    source: Automorphism
    target: Automorphism
    u: Stack
    w: Stack
    data: GeneratorData
    embed: IntMat
    triangular: TriangularForm

    @property
    def k(self) -> int:
        return self.data.k

    @property
    def n(self) -> int:
        return self.source.n


@dataclass(frozen=True)
class KernelPsiBasis:
    """
    ``vectors[i]`` stacks W_{ji}·w for j = 2..k (W = M^-1); ``rows`` are the
    last (k-1)n rows of W, a Z-basis of ker psi in coordinates on w.
    """

    vectors: Tuple[Stack, ...]
    rows: Tuple[Tuple[int, ...], ...]
    gens: Tuple[FieldElem, ...]


def _dot(coeffs: Sequence[int], vec: Sequence[FieldElem]) -> FieldElem:
    total = FieldElem.zero(vec[0].ctx)
    for c, x in zip(coeffs, vec):
        if c:
            total = total + x * c
    return total


# =========================================
# GENERATORS AND THE SEMICONJUGACY
# =========================================

def generators_over_order(I: FracIdeal, R: OrderRing, budget: int = config.GENERATOR_BUDGET) -> List[FieldElem]:
    """
    A generating set of I as an R-module: start from the HNF Z-basis and
    greedily drop elements, last first, while the R-span stays I.

    Examples:
        I = R -> [1]
    """
    ring = coefficient_ring(I)
    if not all(ring.contains(r) for r in R.elements()):
        raise PreconditionError("order does not act on the ideal", module="semiconj")
    if I == R:
        return [FieldElem.one(I.ctx)]

    gens = list(I.elements())
    spans = 0
    for i in reversed(range(len(gens))):
        if len(gens) == 1:
            break
        spans += 1
        if spans > budget:
            raise SearchExhaustedError(f"generator budget {budget} exhausted")
        trial = gens[:i] + gens[i + 1:]
        if ideal_from_elements(trial, R) == I:
            gens = trial
    logger.debug("[semiconj] → %d generators over the order", len(gens))
    return gens


def semiconjugacy_from_generators(
    I: FracIdeal, R: OrderRing, gens: Optional[Sequence[FieldElem]] = None
) -> Semiconjugacy:
    """
    Embedding of A = ideal_to_matrix(I) into the k-fold sum of C_R = ideal_to_matrix(R),
    completed so that the first block row of M^-1 is (Y_1 ... Y_k).

    Raises:
        PreconditionError: R does not act on I, or the generators do not generate
        NonUnitError: beta is not a unit
    """
    gens = tuple(gens) if gens is not None else tuple(generators_over_order(I, R))
    if ideal_from_elements(list(gens), R) != I:
        raise PreconditionError("elements do not generate the ideal over the order", module="semiconj")
    A, u = ideal_to_matrix(I)
    C, w = ideal_to_matrix(R)
    n, k = A.n, len(gens)

    X = tuple(matrix_of_multiplier(a, w, u) for a in gens)
    products = [a * x for a in gens for x in w]
    coeffs = []
    for target in u:
        found = integer_combination(products, target)
        if found is None:
            raise VerificationError("u is not in the Z-span of a_i·w_j", module="semiconj")
        coeffs.append(found)
    Y = tuple(
        int_matrix([[row[i * n + j] for j in range(n)] for row in coeffs]) for i in range(k)
    )

    total = ImmutableMatrix.zeros(n, n)
    for Yi, Xi in zip(Y, X):
        total = total + Yi * Xi
    if total != identity(n):
        raise VerificationError("sum of Y_i·X_i is not the identity", module="semiconj")

    embed = ImmutableMatrix(Matrix.vstack(*X))
    left_inverse = ImmutableMatrix(Matrix.hstack(*Y))
    if direct_sum(C.mat, k) * embed != embed * A.mat:
        raise VerificationError("embedding does not intertwine", module="semiconj")
    triangular = complete_embedding(embed, C, k, left_inverse=left_inverse)
    return Semiconjugacy(I, R, A, C, u, w, GeneratorData(gens, X, Y), embed, triangular)


def splitting_index(semi: Semiconjugacy) -> int:
    """|det| of the image of I stacked on a Z-basis of ker psi; 1 when Z^{kn} splits."""
    left_inverse = ImmutableMatrix(Matrix.hstack(*semi.data.Y))
    kernel = kernel_lattice(semi.embed)
    stacked = left_inverse.col_join(int_matrix(kernel)) if kernel else left_inverse
    return abs(det(stacked))


# =========================================
# KERNEL OF PSI
# =========================================

def kernel_psi_basis(semi: Semiconjugacy) -> KernelPsiBasis:
    """
    Kernel vectors read off the last (k-1)n rows of M^-1, checked against
    D·v_i = beta·v_i and sum a_i·v_i = 0.
    """
    n, k = semi.n, semi.k
    if k == 1:
        return KernelPsiBasis((), (), semi.data.gens)
    W = int_inverse(semi.triangular.M)
    blocks = split_blocks(W, n)
    vectors = tuple(
        tuple(x for j in range(1, k) for x in apply_matrix(blocks[j][i], semi.w)) for i in range(k)
    )

    D = semi.triangular.Aprime
    beta = FieldElem.beta(semi.ideal.ctx)
    for vec in vectors:
        if apply_matrix(D, vec) != tuple(beta * x for x in vec):
            raise VerificationError("kernel vector is not a beta-eigenvector of D", module="semiconj")
    for position in range(len(vectors[0])):
        total = FieldElem.zero(beta.ctx)
        for a, vec in zip(semi.data.gens, vectors):
            total = total + a * vec[position]
        if not total.is_zero:
            raise VerificationError("sum a_i·v_i is not zero", module="semiconj")

    rows = tuple(tuple(r) for r in to_rows(W[n:, :]))
    return KernelPsiBasis(vectors, rows, semi.data.gens)


def dependence_relations(kb: KernelPsiBasis) -> List[Tuple[FieldElem, ...]]:
    """Z-basis of the relations sum b_i·v_i = 0 with b_i in Z[beta]."""
    if not kb.vectors:
        return []
    ctx = kb.gens[0].ctx
    n = ctx.n
    beta = FieldElem.beta(ctx)

    rational_rows = []
    for vec in kb.vectors:
        power = FieldElem.one(ctx)
        for _ in range(n):
            rational_rows.append([c for x in vec for c in (power * x).coords])
            power = power * beta
    den = 1
    for row in rational_rows:
        for c in row:
            den = ilcm(den, c.q)
    rows = [[int(c * den) for c in row] for row in rational_rows]

    relations = []
    for vec in kernel_rows(rows, len(rows[0])):
        relations.append(tuple(
            FieldElem.from_coeffs(vec[i * n:(i + 1) * n], ctx) for i in range(len(kb.vectors))
        ))
    return relations


def kernel_as_multiples(kb: KernelPsiBasis, semi: Semiconjugacy) -> List[FieldElem]:
    """
    For k = 2, each kernel generator is y·(a_2, -a_1) with y in (R:I); returns the y.
    """
    if semi.k != 2:
        raise PreconditionError("only defined for two generators", module="semiconj")
    n = semi.n
    a1, a2 = semi.data.gens
    colon = ideal_quotient(semi.order, semi.ideal)
    multiples = []
    for row in kb.rows:
        first, second = _dot(row[:n], semi.w), _dot(row[n:], semi.w)
        y = first / a2
        if second != -(y * a1) or not colon.contains(y):
            raise VerificationError("kernel generator is not a multiple of (a2, -a1)", module="semiconj")
        multiples.append(y)
    return multiples


# =========================================
# THE COCYCLE theta
# =========================================

def theta(y: FieldElem, t: FieldElem, semi: Semiconjugacy) -> Tuple[FieldElem, ...]:
    """
    theta_y(t) = y·s(t) - s(y·t) in ker psi, where s(t) = s_1·(Y_1 w, ..., Y_k w)
    for t = s_1·u.

    Evaluated twice: directly, and from the upper-right block of
    M^-1·(p_y(C_R) ⊕ ... ⊕ p_y(C_R))·M acting on the kernel vectors.

    Raises:
        PreconditionError: t is not in I, or y is not in R
    """
    s1 = semi.ideal.coordinates(t)
    if s1 is None:
        raise PreconditionError("element is not in the ideal", module="semiconj")
    p_source = evaluate_polynomial(y.coords, semi.source.mat)
    p_target = evaluate_polynomial(y.coords, semi.target.mat)
    if not (is_integral(p_target) and is_integral(p_source)):
        raise PreconditionError("multiplier is not in the order", module="semiconj")

    n, k = semi.n, semi.k
    shifted = [sum(s1[r] * p_source[r, c] for r in range(n)) for c in range(n)]
    direct = []
    for Yi in semi.data.Y:
        image = apply_matrix(Yi, semi.w)
        direct.append(y * _dot(s1, image) - _dot(shifted, image))
    direct = tuple(direct)

    if k == 1:
        through_blocks = (FieldElem.zero(y.ctx),)
    else:
        M = semi.triangular.M
        lifted = int_inverse(M) * direct_sum(p_target, k) * M
        S_y = lifted[:n, n:]
        z = [sum(s1[r] * S_y[r, c] for r in range(n)) for c in range(S_y.cols)]
        vectors = kernel_psi_basis(semi).vectors
        through_blocks = tuple(_dot(z, vec) for vec in vectors)

    if direct != through_blocks:
        raise VerificationError("theta disagrees between its two evaluations", module="semiconj")
    return direct


def theta_beta(t: FieldElem, semi: Semiconjugacy) -> Tuple[FieldElem, ...]:
    return theta(FieldElem.beta(t.ctx), t, semi)
