"""
Fractional ideals and orders of K = Q(beta), with beta-stable Z-lattices
in canonical form.

A lattice is stored as ``(den, basis)``: ``basis`` is the row HNF of the
integer coordinate rows and ``den`` is the least positive integer making
them integral. Equal lattices therefore compare bit-equal.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

from sympy import Rational, igcd, ilcm

from blockconj import config
from blockconj.errors import (
    ContextMismatchError,
    PreconditionError,
    RankDeficientError,
    SearchExhaustedError,
    VerificationError,
)
from blockconj.tools.exact_linalg import (
    det,
    det_rows,
    int_matrix,
    lattice_intersection,
    lattice_rows,
    solve_integer_rows,
)
from blockconj.tools.number_field import FieldElem, MinPoly, fe_invert

logger = logging.getLogger(__name__)


# =========================================
# LATTICE TYPES
# =========================================

@dataclass(frozen=True, eq=False)
class FracIdeal:
    den: int
    basis: Tuple[Tuple[int, ...], ...]
    ctx: MinPoly

    # an OrderRing and a FracIdeal with the same lattice are the same set
    def __eq__(self, other):
        if not isinstance(other, FracIdeal):
            return NotImplemented
        return (self.ctx, self.den, self.basis) == (other.ctx, other.den, other.basis)

    def __hash__(self):
        return hash((self.ctx, self.den, self.basis))

    @property
    def n(self) -> int:
        return self.ctx.n

    def elements(self) -> Tuple[FieldElem, ...]:
        """The HNF Z-basis as field elements."""
        return tuple(
            FieldElem(tuple(Rational(c, self.den) for c in row), self.ctx) for row in self.basis
        )

    def coordinates(self, x: FieldElem) -> Optional[Tuple[int, ...]]:
        """Integer coordinates of x on the HNF basis, or None when x is outside."""
        _same_field(self.ctx, x.ctx)
        scaled = [c * self.den for c in x.coords]
        if not all(c.is_integer for c in scaled):
            return None
        solution = solve_integer_rows([list(r) for r in self.basis], [int(c) for c in scaled])
        return None if solution is None else solution.particular

    def contains(self, x: FieldElem) -> bool:
        return self.coordinates(x) is not None

    __contains__ = contains

    def covolume(self) -> Rational:
        """Index-style volume relative to Z[beta]."""
        return Rational(abs(det(int_matrix(self.basis))), self.den ** self.n)

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        return ideal_mul(self, other)

    def __str__(self) -> str:
        rows = ", ".join("(" + ", ".join(str(v) for v in row) + ")" for row in self.basis)
        return f"1/{self.den}·<{rows}>" if self.den != 1 else f"<{rows}>"


class OrderRing(FracIdeal):
    """A subring of K that is a full lattice containing Z[beta]."""

    @classmethod
    def from_ideal(cls, lattice: FracIdeal) -> "OrderRing":
        ctx = lattice.ctx
        if not lattice.contains(FieldElem.one(ctx)):
            raise PreconditionError("lattice does not contain 1", module="ideal_arith")
        if not lattice.contains(FieldElem.beta(ctx)):
            raise PreconditionError("lattice does not contain beta", module="ideal_arith")
        if ideal_mul(lattice, lattice) != lattice:
            raise PreconditionError("lattice is not closed under products", module="ideal_arith")
        return cls(lattice.den, lattice.basis, ctx)


def power_order(ctx: MinPoly) -> OrderRing:
    """Z[beta]."""
    return OrderRing(1, tuple(tuple(int(i == j) for j in range(ctx.n)) for i in range(ctx.n)), ctx)


# =========================================
# CANONICAL FORM
# =========================================

def _same_field(a: MinPoly, b: MinPoly):
    if a != b:
        raise ContextMismatchError(f"{a} vs {b}")


def _scaled_rows(elements: Sequence[FieldElem]) -> Tuple[List[List[int]], int]:
    den = 1
    for x in elements:
        for c in x.coords:
            den = ilcm(den, c.q)
    return [[int(c * den) for c in x.coords] for x in elements], int(den)


def _canonical(rows: List[List[int]], den: int, ctx: MinPoly) -> FracIdeal:
    lattice = lattice_rows(rows, ctx.n)
    if len(lattice) != ctx.n:
        raise RankDeficientError(f"lattice has rank {len(lattice)} < {ctx.n}")
    g = den
    for row in lattice:
        for v in row:
            g = igcd(g, v)
    basis = tuple(tuple(v // g for v in row) for row in lattice)
    return FracIdeal(den // g, basis, ctx)


def _shift_row(row: List[int], ctx: MinPoly) -> List[int]:
    """Coordinates of beta·x from those of x."""
    top = row[-1]
    shifted = [0] + row[:-1]
    return [s - top * c for s, c in zip(shifted, ctx.coeffs[:-1])]


def integer_combination(elements: Sequence[FieldElem], target: FieldElem) -> Optional[Tuple[int, ...]]:
    """Integers c with sum c_i·elements[i] = target, or None."""
    rows, _ = _scaled_rows(list(elements) + [target])
    goal = rows.pop()
    solution = solve_integer_rows(rows, goal)
    return None if solution is None else solution.particular


def lattice_span(elements: Sequence[FieldElem]) -> FracIdeal:
    """Canonical form of the Z-span of full-rank elements, without saturation."""
    if not elements:
        raise PreconditionError("no elements given", module="ideal_arith")
    ctx = elements[0].ctx
    for x in elements:
        _same_field(ctx, x.ctx)
    rows, den = _scaled_rows(elements)
    return _canonical(rows, den, ctx)


def ideal_from_elements(
    generators: Sequence[FieldElem],
    scalars: Optional[OrderRing] = None,
) -> FracIdeal:
    """
    Smallest beta-stable lattice (or R-module, when an order is given)
    containing the generators.

    Raises:
        RankDeficientError: the generators span less than a full lattice
    """
    if not generators:
        raise PreconditionError("no generators given", module="ideal_arith")
    ctx = generators[0].ctx
    for x in generators:
        _same_field(ctx, x.ctx)

    if scalars is not None:
        _same_field(ctx, scalars.ctx)
        return lattice_span([g * r for g in generators for r in scalars.elements()])

    rows, den = _scaled_rows(generators)
    lattice = lattice_rows(rows, ctx.n)
    while True:
        grown = lattice_rows(lattice + [_shift_row(r, ctx) for r in lattice], ctx.n)
        if grown == lattice:
            break
        lattice = grown
    return _canonical(lattice, den, ctx)


# =========================================
# IDEAL OPERATIONS
# =========================================

def ideal_mul(a: FracIdeal, b: FracIdeal) -> FracIdeal:
    _same_field(a.ctx, b.ctx)
    return lattice_span([x * y for x in a.elements() for y in b.elements()])


def ideal_scale(ideal: FracIdeal, alpha: FieldElem) -> FracIdeal:
    """alpha·I."""
    return lattice_span([alpha * x for x in ideal.elements()])


def ideal_power(ideal: FracIdeal, k: int) -> FracIdeal:
    if k < 1:
        raise PreconditionError("power must be positive", module="ideal_arith")
    result = ideal
    for _ in range(k - 1):
        result = ideal_mul(result, ideal)
    return result


def ideal_quotient(J: FracIdeal, I: FracIdeal) -> FracIdeal:
    """
    (J : I) = {x in K : x·I ⊆ J}, the intersection of J·u^-1 over a basis u of I.
    """
    _same_field(J.ctx, I.ctx)
    n = J.n
    meet, meet_den = None, 1
    for u in I.elements():
        inverse = fe_invert(u)
        rows, den = _scaled_rows([y * inverse for y in J.elements()])
        if meet is None:
            meet, meet_den = lattice_rows(rows, n), den
            continue
        common = ilcm(meet_den, den)
        scaled_meet = [[v * (common // meet_den) for v in row] for row in meet]
        scaled_rows = [[v * (common // den) for v in row] for row in rows]
        meet, meet_den = lattice_intersection(scaled_meet, scaled_rows, n), int(common)
    return _canonical(meet, meet_den, J.ctx)


def coefficient_ring(ideal: FracIdeal) -> OrderRing:
    """(I : I), the largest order I is a module over."""
    try:
        return OrderRing.from_ideal(ideal_quotient(ideal, ideal))
    except PreconditionError as exc:
        raise VerificationError(f"(I:I) is not an order: {exc.message}", module="ideal_arith") from exc


def is_invertible(ideal: FracIdeal) -> bool:
    """I·(R:I) = R for R = (I:I)."""
    ring = coefficient_ring(ideal)
    return ideal_mul(ideal, ideal_quotient(ring, ideal)) == ring


def is_weakly_equivalent(I: FracIdeal, J: FracIdeal) -> bool:
    """
    Same coefficient ring and (I:J)(J:I) = R.

    Examples:
        I vs 3I -> True
    """
    _same_field(I.ctx, J.ctx)
    ring = coefficient_ring(I)
    if coefficient_ring(J) != ring:
        return False
    return ideal_mul(ideal_quotient(I, J), ideal_quotient(J, I)) == ring


# =========================================
# ARITHMETIC EQUIVALENCE (BOUNDED SEARCH)
# =========================================

@dataclass(frozen=True)
class Equivalent:
    alpha: FieldElem


@dataclass(frozen=True)
class NoWitnessWithinBound:
    bound: int
    examined: int


def _shell(n: int, radius: int):
    """Integer vectors of max-norm exactly ``radius``, each yielded once."""
    inner = range(-(radius - 1), radius)
    outer = range(-radius, radius + 1)
    for k in range(n):
        for head in itertools.product(inner, repeat=k):
            for pivot in (radius, -radius):
                for tail in itertools.product(outer, repeat=n - k - 1):
                    yield head + (pivot,) + tail


def is_arith_equivalent_bounded(
    I: FracIdeal, J: FracIdeal, bound: int
) -> Union[Equivalent, NoWitnessWithinBound]:
    """
    Search alpha in (J:I) with alpha·I = J over coefficient vectors of
    max-norm <= bound on the HNF basis of (J:I).

    A candidate is only tested for alpha·I = J once |N(alpha)| matches
    covol(J)/covol(I).
    """
    _same_field(I.ctx, J.ctx)
    ctx = I.ctx
    if I == J:
        return Equivalent(FieldElem.one(ctx))

    quotient = ideal_quotient(J, I)
    target = J.covolume() / I.covolume() * quotient.den ** ctx.n
    if not target.is_integer:
        return NoWitnessWithinBound(bound, 0)
    target = int(target)

    lifted = [FieldElem(tuple(Rational(c) for c in row), ctx) for row in quotient.basis]
    basis = quotient.elements()
    shifts = [
        [[int(c) for c in (x * FieldElem.from_coeffs((0,) * i + (1,), ctx)).coords] for i in range(ctx.n)]
        for x in lifted
    ]

    examined = 0
    for radius in range(1, bound + 1):
        for vec in _shell(ctx.n, radius):
            examined += 1
            mult = [
                [sum(c * m[i][j] for c, m in zip(vec, shifts)) for j in range(ctx.n)]
                for i in range(ctx.n)
            ]
            if abs(det_rows(mult)) != target:
                continue
            alpha = FieldElem.zero(ctx)
            for c, q in zip(vec, basis):
                alpha = alpha + q * c
            if ideal_scale(I, alpha) == J:
                logger.debug("[ideal_arith] → witness %s after %d candidates", alpha, examined)
                return Equivalent(alpha)
    logger.debug("[ideal_arith] → no witness up to bound %d (%d candidates)", bound, examined)
    return NoWitnessWithinBound(bound, examined)


# =========================================
# PARTITIONS OF UNITY
# =========================================

class PartitionOfUnity(NamedTuple):
    a1: FieldElem
    a2: FieldElem
    b1: FieldElem
    b2: FieldElem


def is_partition_of_unity(X: FracIdeal, Y: FracIdeal, p: PartitionOfUnity) -> bool:
    """a_i in Y, b_j in X and a1·b1 + a2·b2 = 1."""
    one = FieldElem.one(X.ctx)
    return (
        all(Y.contains(a) for a in (p.a1, p.a2))
        and all(X.contains(b) for b in (p.b1, p.b2))
        and p.a1 * p.b1 + p.a2 * p.b2 == one
    )


def _complete_partition(a1: FieldElem, a2: FieldElem, X: FracIdeal) -> Optional[PartitionOfUnity]:
    """Solve a1·b1 + a2·b2 = 1 for b1, b2 in X, or None."""
    ctx = X.ctx
    xs = X.elements()
    products = [a1 * x for x in xs]
    if not a2.is_zero:
        products += [a2 * x for x in xs]
    coeffs = integer_combination(products, FieldElem.one(ctx))
    if coeffs is None:
        return None
    b1, b2 = FieldElem.zero(ctx), FieldElem.zero(ctx)
    for j, x in enumerate(xs):
        b1 = b1 + x * coeffs[j]
        if not a2.is_zero:
            b2 = b2 + x * coeffs[len(xs) + j]
    return PartitionOfUnity(a1, a2, b1, b2)


def _combination(coeffs: Sequence[int], basis: Sequence[FieldElem]) -> FieldElem:
    total = FieldElem.zero(basis[0].ctx)
    for c, x in zip(coeffs, basis):
        if c:
            total = total + x * c
    return total


def two_term_partition_of_unity(
    X: FracIdeal, Y: FracIdeal, R: OrderRing, seed: int = 0
) -> PartitionOfUnity:
    """
    Find a1, a2 in Y and b1, b2 in X with a1·b1 + a2·b2 = 1.

    Deterministic for a fixed seed. Pairs are tried in order: unit pair,
    single basis elements of Y, pairs of basis elements, seeded random
    small combinations, then exhaustive small coefficients.

    Raises:
        SearchExhaustedError: no pair found although X·Y = R
    """
    _same_field(X.ctx, Y.ctx)
    ctx = X.ctx
    zero, one = FieldElem.zero(ctx), FieldElem.one(ctx)
    if X.contains(one) and Y.contains(one):
        return PartitionOfUnity(one, zero, one, zero)

    ys = Y.elements()
    candidates = [(a, zero) for a in ys] + list(itertools.combinations(ys, 2))
    for a1, a2 in candidates:
        found = _complete_partition(a1, a2, X)
        if found is not None:
            return found

    rng = random.Random(seed)
    for _ in range(config.PARTITION_SAMPLES):
        a1 = _combination([rng.randint(-3, 3) for _ in ys], ys)
        a2 = _combination([rng.randint(-3, 3) for _ in ys], ys)
        if a1.is_zero:
            continue
        found = _complete_partition(a1, a2, X)
        if found is not None:
            return found

    for radius in range(1, 3):
        for vec in _shell(2 * ctx.n, radius):
            a1, a2 = _combination(vec[:ctx.n], ys), _combination(vec[ctx.n:], ys)
            if a1.is_zero:
                continue
            found = _complete_partition(a1, a2, X)
            if found is not None:
                return found
    raise SearchExhaustedError(f"no two-term partition of unity for X = {X}, Y = {Y} over {R}")


@dataclass(frozen=True)
class WeakEquivWitness:
    """X = (J:I), Y = (I:J) and a partition of unity a1·b1 + a2·b2 = 1."""

    X: FracIdeal
    Y: FracIdeal
    R: OrderRing
    a1: FieldElem
    a2: FieldElem
    b1: FieldElem
    b2: FieldElem

    @property
    def partition(self) -> PartitionOfUnity:
        return PartitionOfUnity(self.a1, self.a2, self.b1, self.b2)

    def verify(self, I: FracIdeal, J: FracIdeal) -> bool:
        return (
            ideal_mul(I, self.X) == J
            and ideal_mul(J, self.Y) == I
            and ideal_mul(self.X, self.Y) == self.R
            and is_partition_of_unity(self.X, self.Y, self.partition)
        )


def weak_equivalence_witness(I: FracIdeal, J: FracIdeal, seed: int = 0) -> Optional[WeakEquivWitness]:
    """Witness of weak equivalence of I and J, or None when they are not weakly equivalent."""
    _same_field(I.ctx, J.ctx)
    ring = coefficient_ring(I)
    if coefficient_ring(J) != ring:
        return None
    X, Y = ideal_quotient(J, I), ideal_quotient(I, J)
    if ideal_mul(X, Y) != ring:
        return None
    witness = WeakEquivWitness(X, Y, ring, *two_term_partition_of_unity(X, Y, ring, seed))
    if not witness.verify(I, J):
        raise VerificationError("weak equivalence witness does not verify", module="ideal_arith")
    return witness


# =========================================
# NON-INVERTIBLE IDEAL FIXTURE
# =========================================

class NonInvertibleFixture(NamedTuple):
    R0: OrderRing
    R: OrderRing
    I: FracIdeal


def theta_of(ctx: MinPoly) -> FieldElem:
    """theta = beta/2 in the field built by ``non_invertible_fixture``."""
    return FieldElem.beta(ctx) / 2


def non_invertible_fixture(theta_minpoly: MinPoly) -> NonInvertibleFixture:
    """
    Orders R0 = Z[theta] ⊃ R = Z + 2Z[theta] and the non-invertible
    R-ideal I = Z + Z·theta + 2Z[theta], for theta a root of g.

    The field is presented through beta = 2·theta, whose minimal
    polynomial is 2^n·g(t/2).
    """
    n = theta_minpoly.n
    if n < 3:
        raise PreconditionError("needs degree at least 3", module="ideal_arith")
    coeffs = tuple(c * 2 ** (n - i) for i, c in enumerate(theta_minpoly.coeffs))
    ctx = MinPoly(coeffs, theta_minpoly.irreducibility)
    theta = theta_of(ctx)
    powers = [theta ** k for k in range(n)]

    R0 = OrderRing.from_ideal(ideal_from_elements(powers))
    R = OrderRing.from_ideal(ideal_from_elements([powers[0]] + [p * 2 for p in powers[1:]]))
    I = ideal_from_elements([powers[0], powers[1]] + [p * 2 for p in powers[2:]])
    if coefficient_ring(I) != R or is_invertible(I):
        raise VerificationError("fixture ideal lost its defining properties", module="ideal_arith")
    return NonInvertibleFixture(R0, R, I)
