"""
Arithmetic in K = Q[t]/(f) for a monic integer polynomial f.

Elements are stored as rational coordinates on the power basis
1, beta, ..., beta^(n-1), constant term first. Products and inverses go
through ``sympy.Poly`` over QQ, reduced modulo f.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Tuple, Union

from sympy import QQ, ImmutableMatrix, Matrix, Poly, Rational, Symbol, sstr
from sympy.polys.polyerrors import NotInvertible
from sympy.utilities.misc import as_int

from blockconj.errors import (
    ContextMismatchError,
    PreconditionError,
    ReducibleError,
    ZeroElementError,
)

logger = logging.getLogger(__name__)

BETA = Symbol("beta")
T = Symbol("t")

Scalar = Union[int, Rational]


# =========================================
# MINIMAL POLYNOMIAL
# =========================================

@dataclass(frozen=True)
class MinPoly:
    """Monic integer polynomial of degree n >= 2, constant term first."""

    coeffs: Tuple[int, ...]
    irreducibility: str = field(default="assumed", compare=False)

    def __post_init__(self):
        coeffs = tuple(as_int(c) for c in self.coeffs)
        if len(coeffs) < 3:
            raise PreconditionError("degree must be at least 2", module="number_field")
        if coeffs[-1] != 1:
            raise PreconditionError(f"polynomial is not monic: {coeffs}", module="number_field")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], *, assume_irreducible: bool = False) -> "MinPoly":
        """Build the field context, verifying irreducibility unless told not to."""
        if assume_irreducible:
            return cls(tuple(coeffs), "assumed")
        f = cls(tuple(coeffs), "verified")
        if not f.poly.is_irreducible:
            raise ReducibleError(f"{f} is reducible over Q")
        return f

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    @property
    def unit_flag(self) -> bool:
        """True when |f(0)| = 1, i.e. beta is a unit."""
        return abs(self.coeffs[0]) == 1

    @cached_property
    def poly(self) -> Poly:
        return Poly(list(reversed(self.coeffs)), BETA, domain=QQ)

    def __str__(self) -> str:
        return sstr(Poly(list(reversed(self.coeffs)), T).as_expr())


# =========================================
# FIELD ELEMENTS
# =========================================

def _coords_of(poly: Poly, n: int) -> Tuple[Rational, ...]:
    coeffs = [Rational(c) for c in reversed(poly.all_coeffs())]
    return tuple(coeffs + [Rational(0)] * (n - len(coeffs)))


@dataclass(frozen=True)
class FieldElem:
    coords: Tuple[Rational, ...]
    ctx: MinPoly

    def __post_init__(self):
        coords = tuple(Rational(c) for c in self.coords)
        if len(coords) != self.ctx.n:
            raise PreconditionError(
                f"expected {self.ctx.n} coordinates, got {len(coords)}", module="number_field"
            )
        object.__setattr__(self, "coords", coords)

    # ---------- constructors ----------

    @classmethod
    def from_poly(cls, poly: Poly, ctx: MinPoly) -> "FieldElem":
        reduced = Poly(poly.as_expr(), BETA, domain=QQ).rem(ctx.poly)
        return cls(_coords_of(reduced, ctx.n), ctx)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Scalar], ctx: MinPoly) -> "FieldElem":
        """Element p(beta) for p of any degree, constant term first."""
        if not coeffs:
            return cls.zero(ctx)
        poly = Poly([Rational(c) for c in reversed(list(coeffs))], BETA, domain=QQ)
        return cls(_coords_of(poly.rem(ctx.poly), ctx.n), ctx)

    @classmethod
    def scalar(cls, q: Scalar, ctx: MinPoly) -> "FieldElem":
        return cls((Rational(q),) + (Rational(0),) * (ctx.n - 1), ctx)

    @classmethod
    def zero(cls, ctx: MinPoly) -> "FieldElem":
        return cls.scalar(0, ctx)

    @classmethod
    def one(cls, ctx: MinPoly) -> "FieldElem":
        return cls.scalar(1, ctx)

    @classmethod
    def beta(cls, ctx: MinPoly) -> "FieldElem":
        return cls.from_coeffs((0, 1), ctx)

    # ---------- views ----------

    @property
    def poly(self) -> Poly:
        return Poly(list(reversed(self.coords)), BETA, domain=QQ)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @property
    def is_integral_coords(self) -> bool:
        return all(c.is_integer for c in self.coords)

    # ---------- arithmetic ----------

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.ctx != self.ctx:
                raise ContextMismatchError(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, (int, Rational)):
            return FieldElem.scalar(other, self.ctx)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(tuple(a + b for a, b in zip(self.coords, other.coords)), self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(tuple(-a for a in self.coords), self.ctx)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return FieldElem(tuple(a * other for a in self.coords), self.ctx)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return fe_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroElementError("division by zero")
            return FieldElem(tuple(a / Rational(other) for a in self.coords), self.ctx)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return fe_mul(self, fe_invert(other))

    def __pow__(self, k: int):
        base = self if k >= 0 else fe_invert(self)
        result = FieldElem.one(self.ctx)
        for _ in range(abs(k)):
            result = fe_mul(result, base)
        return result

    def __str__(self) -> str:
        return format_elem(self)


# =========================================
# CORE OPERATIONS
# =========================================

def fe_mul(x: FieldElem, y: FieldElem) -> FieldElem:
    if x.ctx != y.ctx:
        raise ContextMismatchError(f"{x.ctx} vs {y.ctx}")
    product = (x.poly * y.poly).rem(x.ctx.poly)
    return FieldElem(_coords_of(product, x.ctx.n), x.ctx)


def fe_invert(x: FieldElem) -> FieldElem:
    """Inverse via the extended Euclidean algorithm modulo f."""
    if x.is_zero:
        raise ZeroElementError("zero has no inverse")
    try:
        inverse = x.poly.invert(x.ctx.poly)
    except NotInvertible as exc:
        raise ReducibleError(f"{format_elem(x)} shares a factor with {x.ctx}") from exc
    return FieldElem(_coords_of(inverse.rem(x.ctx.poly), x.ctx.n), x.ctx)


def power_basis(ctx: MinPoly) -> Tuple[FieldElem, ...]:
    return tuple(FieldElem.from_coeffs((0,) * i + (1,), ctx) for i in range(ctx.n))


def express_all(elements: Sequence[FieldElem], basis: Sequence[FieldElem]) -> ImmutableMatrix:
    """Rows are the coordinates of each element in the given Q-basis."""
    frame = Matrix([list(b.coords) for b in basis])
    if frame.rows != frame.cols or frame.det() == 0:
        raise PreconditionError("basis is not a Q-basis of the field", module="number_field")
    values = Matrix([list(x.coords) for x in elements])
    return ImmutableMatrix(values * frame.inv())


def express_in_basis(x: FieldElem, basis: Sequence[FieldElem]) -> Tuple[Rational, ...]:
    return tuple(express_all([x], basis).row(0))


def mult_matrix(x: FieldElem, basis: Sequence[FieldElem]) -> ImmutableMatrix:
    """
    Matrix C of multiplication by x with C·basis = x·basis.

    Row i holds the coordinates of x·basis[i] in the basis.

    Examples:
        beta on (beta - 2, 3) over t^2 - 10t + 1 -> [[8,5],[3,2]]
    """
    return express_all([x * b for b in basis], basis)


def norm(x: FieldElem):
    """Field norm: the determinant of multiplication by x."""
    rows = Matrix([list((x * b).coords) for b in power_basis(x.ctx)])
    return Rational(rows.det())


def evaluate(coeffs: Sequence[Scalar], x: FieldElem) -> FieldElem:
    """p(x) for p given constant term first."""
    result = FieldElem.zero(x.ctx)
    for c in reversed(list(coeffs)):
        result = result * x + Rational(c)
    return result


def check_root_polynomial(p: Sequence[Scalar], f: MinPoly) -> bool:
    """True iff p(beta) is again a root of f."""
    return evaluate(f.coeffs, FieldElem.from_coeffs(p, f)).is_zero


def compose_polynomials(p: Sequence[Scalar], q: Sequence[Scalar], f: MinPoly) -> Tuple[Rational, ...]:
    """Coordinates of p(q(beta)) reduced modulo f."""
    return evaluate(p, FieldElem.from_coeffs(q, f)).coords


def format_elem(x: FieldElem) -> str:
    return sstr(x.poly.as_expr())
