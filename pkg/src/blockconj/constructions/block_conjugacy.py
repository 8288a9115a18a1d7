"""
Block conjugacy of toral automorphisms.

A ⊕ ... and B ⊕ ... are block conjugate when an integer M with det ±1
satisfies (B ⊕ ... ⊕ B)·M = M·(right blocks). For k = 2 this happens
exactly when the ideals of A and B are weakly equivalent, and the
certificate is built from a partition of unity a1·b1 + a2·b2 = 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from blockconj import config
from blockconj.errors import CharpolyMismatchError, PreconditionError, VerificationError
from blockconj.constructions.lmt_correspondence import (
    Automorphism,
    EigenData,
    ideal_to_matrix,
    matrix_to_ideal,
    matrix_of_multiplier,
    phi_iso,
)
from blockconj.tools.exact_linalg import (
    IntMat,
    block_diag,
    block_matrix,
    content,
    det,
    direct_sum,
    hnf,
    identity,
    int_inverse,
    int_matrix,
    is_unimodular,
    kernel_lattice,
    split_blocks,
    to_rows,
)
from blockconj.tools.ideal_arith import (
    Equivalent,
    PartitionOfUnity,
    WeakEquivWitness,
    coefficient_ring,
    ideal_mul,
    ideal_quotient,
    is_arith_equivalent_bounded,
    two_term_partition_of_unity,
    weak_equivalence_witness,
)
from blockconj.tools.number_field import FieldElem

logger = logging.getLogger(__name__)


# =========================================
# CERTIFICATES
# =========================================

@dataclass(frozen=True)
class BlockCertificate:
    """(left ⊕ ... ⊕ left)·M = M·(right_blocks[0] ⊕ ... ⊕ right_blocks[k-1])."""

    M: IntMat
    left: Automorphism
    right_blocks: Tuple[Automorphism, ...]
    generators: Optional[PartitionOfUnity] = None

    @property
    def k(self) -> int:
        return len(self.right_blocks)

    @property
    def n(self) -> int:
        return self.left.n


@dataclass(frozen=True)
class TriangularForm:
    """M^-1·(B ⊕ ... ⊕ B)·M = [[A, S], [0, A']] with A the top-left n x n block."""

    Mhat: IntMat
    A: Automorphism
    S: IntMat
    Aprime: IntMat
    M: IntMat


def verify_block_certificate(cert: BlockCertificate) -> bool:
    """Exact check of the certificate; shape problems raise, failed identities return False."""
    n, k = cert.n, cert.k
    if k == 0 or cert.M.shape != (k * n, k * n) or any(b.n != n for b in cert.right_blocks):
        raise PreconditionError(f"certificate shapes do not match (k={k}, n={n}, M {cert.M.shape})")
    if any(b.f != cert.left.f for b in cert.right_blocks):
        return False
    if abs(det(cert.M)) != 1:
        return False
    lhs = direct_sum(cert.left.mat, k) * cert.M
    rhs = cert.M * block_diag(*[b.mat for b in cert.right_blocks])
    return lhs == rhs


def _require_same_field(A: Automorphism, B: Automorphism):
    if A.f != B.f:
        raise CharpolyMismatchError(f"charpolys differ: {A.f} vs {B.f}")


# =========================================
# TWO-BLOCK CONSTRUCTION
# =========================================

def _two_block_certificate(
    left: Automorphism,
    v_data: EigenData,
    source: Automorphism,
    u_data: EigenData,
    partition: PartitionOfUnity,
    X,
) -> BlockCertificate:
    """
    (left ⊕ left)·M = M·(source ⊕ A') with A' the matrix of J·X, J = ideal of left.

    Blocks: M11·u = a1·v, M21·u = a2·v, M12·w = -b2·v, M22·w = b1·v
    where w is a Z-basis of J·X.
    """
    u, v = u_data.u, v_data.u
    a1, a2, b1, b2 = partition
    JX = ideal_mul(v_data.ideal, X)
    w = v if JX == v_data.ideal else JX.elements()
    Aprime, w = ideal_to_matrix(JX, basis=w)

    M = block_matrix([
        [matrix_of_multiplier(a1, v, u), matrix_of_multiplier(-b2, v, w)],
        [matrix_of_multiplier(a2, v, u), matrix_of_multiplier(b1, v, w)],
    ])
    return BlockCertificate(M, left, (source, Aprime), partition)


def construct_two_block(
    A: Automorphism, B: Automorphism, seed: int = config.DEFAULT_SEED
) -> Tuple[BlockCertificate, BlockCertificate]:
    """
    Two certificates: (B ⊕ B)·M = M·(A ⊕ A') and (A ⊕ A)·N = N·(B ⊕ B').

    Raises:
        PreconditionError: the ideals of A and B are not weakly equivalent
        VerificationError: a constructed certificate fails its exact check
    """
    _require_same_field(A, B)
    u_data, v_data = matrix_to_ideal(A), matrix_to_ideal(B)
    witness = weak_equivalence_witness(u_data.ideal, v_data.ideal, seed)
    if witness is None:
        raise PreconditionError("ideals are not weakly equivalent")

    first = _two_block_certificate(B, v_data, A, u_data, witness.partition, witness.X)
    swapped = PartitionOfUnity(witness.b1, witness.b2, witness.a1, witness.a2)
    second = _two_block_certificate(A, u_data, B, v_data, swapped, witness.Y)
    for cert in (first, second):
        if not verify_block_certificate(cert):
            raise VerificationError("two-block certificate does not verify")
    logger.debug("[block_conjugacy] → two-block certificates built, det %s / %s", det(first.M), det(second.M))
    return first, second


def extract_weak_equivalence(cert: BlockCertificate, seed: int = config.DEFAULT_SEED) -> WeakEquivWitness:
    """
    Read a1, a2 from the first block column of M and b1, b2 from the first
    block row of M^-1, then rebuild X, Y and R.
    """
    if not verify_block_certificate(cert):
        raise PreconditionError("certificate does not verify")
    n = cert.n
    B, A = cert.left, cert.right_blocks[0]
    u_data, v_data = matrix_to_ideal(A), matrix_to_ideal(B)
    blocks = split_blocks(cert.M, n)
    inverse_blocks = split_blocks(int_inverse(cert.M), n)

    a = [phi_iso(row[0], v_data, u_data) for row in blocks]
    b = [phi_iso(inverse_blocks[0][j], u_data, v_data) for j in range(cert.k)]
    total = FieldElem.zero(A.f)
    for ai, bi in zip(a, b):
        total = total + ai * bi
    if total != FieldElem.one(A.f):
        raise VerificationError("sum of a_i·b_i is not 1")

    I, J = u_data.ideal, v_data.ideal
    ring = coefficient_ring(I)
    if coefficient_ring(J) != ring:
        raise VerificationError("certificate ideals have different coefficient rings")
    X, Y = ideal_quotient(J, I), ideal_quotient(I, J)
    if ideal_mul(X, Y) != ring:
        raise VerificationError("(J:I)(I:J) != R for a verified certificate")

    zero = FieldElem.zero(A.f)
    if cert.k == 1:
        partition = PartitionOfUnity(a[0], zero, b[0], zero)
    elif cert.k == 2:
        partition = PartitionOfUnity(a[0], a[1], b[0], b[1])
    else:
        partition = two_term_partition_of_unity(X, Y, ring, seed)

    witness = WeakEquivWitness(X, Y, ring, *partition)
    if not witness.verify(I, J):
        raise VerificationError("extracted witness does not verify")
    return witness


def direct_sum_isomorphism(partition: PartitionOfUnity, x: FieldElem, y: FieldElem) -> Tuple[FieldElem, FieldElem]:
    """Isomorphism underlying a two-block certificate: (x, y) -> (a1·x + a2·y, -b2·x + b1·y)."""
    a1, a2, b1, b2 = partition
    return a1 * x + a2 * y, -b2 * x + b1 * y


# =========================================
# EMBEDDINGS AND EXTENSIONS
# =========================================

def complete_embedding(
    embed: IntMat,
    B: Automorphism,
    k: int,
    left_inverse: Optional[IntMat] = None,
) -> TriangularForm:
    """
    Complete a primitive kn x n embedding with (⊕B)·embed = embed·A to a
    unimodular M whose first block column is ``embed``.

    With ``left_inverse`` Y (Y·embed = I) the remaining columns span
    ker Y, which pins the first block row of M^-1 to Y. Otherwise M is
    the inverse of the HNF transform of ``embed``.

    Raises:
        PreconditionError: embed is not primitive or not a semiconjugacy
    """
    n = B.n
    if embed.shape != (k * n, n):
        raise PreconditionError(f"embedding must be {k * n} x {n}, got {embed.shape}")
    for j in range(n):
        if content(to_rows(embed[:, j].T)[0]) != 1:
            raise PreconditionError(f"column {j} of the embedding is not primitive")

    if left_inverse is None:
        form = hnf(embed)
        if form.h[:n, :] != identity(n):
            raise PreconditionError("embedding is not primitive")
        M = int_inverse(form.u)
    else:
        if left_inverse * embed != identity(n):
            raise PreconditionError("left inverse does not satisfy Y·embed = I")
        kernel = kernel_lattice(left_inverse.T)
        if len(kernel) != (k - 1) * n:
            raise VerificationError("kernel of the left inverse has the wrong rank")
        M = embed.row_join(int_matrix(kernel).T) if kernel else embed
        if not is_unimodular(M):
            raise VerificationError("completed embedding is not unimodular")

    Mhat = int_inverse(M) * direct_sum(B.mat, k) * M
    if any(Mhat[n:, :n]):
        raise PreconditionError("embedding does not intertwine: lower-left block is not zero")
    A = Automorphism.with_minpoly(Mhat[:n, :n], B.f)
    return TriangularForm(Mhat, A, Mhat[:n, n:], Mhat[n:, n:], M)


def extend_certificate(cert: BlockCertificate) -> BlockCertificate:
    """k-block certificate -> (k+1)-block certificate via M ⊕ I_n."""
    if not verify_block_certificate(cert):
        raise PreconditionError("certificate does not verify")
    extended = BlockCertificate(
        block_diag(cert.M, identity(cert.n)),
        cert.left,
        cert.right_blocks + (cert.left,),
        cert.generators,
    )
    if not verify_block_certificate(extended):
        raise VerificationError("extended certificate does not verify")
    return extended


# =========================================
# CONJUGACY AND THE TRICHOTOMY
# =========================================

def conjugacy_witness(
    A: Automorphism,
    B: Automorphism,
    bound: int,
    u_data: Optional[EigenData] = None,
    v_data: Optional[EigenData] = None,
) -> Optional[IntMat]:
    """Integer P with det ±1 and P·A = B·P, searched up to the bound, or None."""
    _require_same_field(A, B)
    u_data = u_data or matrix_to_ideal(A)
    v_data = v_data or matrix_to_ideal(B)
    found = is_arith_equivalent_bounded(u_data.ideal, v_data.ideal, bound)
    if not isinstance(found, Equivalent):
        return None
    scaled = tuple(found.alpha * x for x in u_data.u)
    P = matrix_of_multiplier(FieldElem.one(A.f), v_data.u, scaled)
    if P * A.mat != B.mat * P or not is_unimodular(P):
        raise VerificationError("conjugacy witness does not verify")
    return P


@dataclass(frozen=True)
class Conjugate:
    witness: IntMat


@dataclass(frozen=True)
class TwoBlockOnly:
    certificates: Tuple[BlockCertificate, BlockCertificate]
    conjugacy_undetermined: bool = True


@dataclass(frozen=True)
class NotBlockConjugate:
    pass


Verdict = Union[Conjugate, TwoBlockOnly, NotBlockConjugate]


@dataclass(frozen=True)
class Trichotomy:
    verdict: Verdict
    bound_used: int

    def describe(self) -> str:
        if isinstance(self.verdict, Conjugate):
            return "CONJUGATE"
        if isinstance(self.verdict, TwoBlockOnly):
            return f"TWO-BLOCK CONJUGATE (conjugacy undetermined at bound {self.bound_used})"
        return "NOT BLOCK CONJUGATE"


def decide(
    A: Automorphism,
    B: Automorphism,
    bound: int = config.DEFAULT_BOUND,
    seed: int = config.DEFAULT_SEED,
) -> Trichotomy:
    """
    Conjugate / two-block-only / not block conjugate.

    Raises:
        CharpolyMismatchError: A and B have different characteristic polynomials
    """
    _require_same_field(A, B)
    from blockconj.workflow.decision_graph import run_decision

    return run_decision(A, B, bound=bound, seed=seed)
