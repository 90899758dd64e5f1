"""Exact rational functions over declared base variables.

RatFunc models a smooth function on the base in the algebraic setting: a
quotient of two Poly values kept in canonical form (numerator and
denominator reduced by their gcd, denominator monic in graded-lex order).
Equality of canonical forms therefore decides equality of the functions,
and it agrees with cross-multiplication equality.

All values are immutable; every operation returns a fresh value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContextMismatch, DivisionByZero
from .poly import Poly, divexact, poly_gcd


@dataclass(frozen=True)
class BaseContext:
    """Ordered tuple of base-variable names; the empty tuple is a point."""

    vars: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("base variable names must be distinct")
        for name in self.vars:
            if not name or not (name[0].isalpha() or name[0] == "_"):
                raise ValueError(f"invalid variable name {name!r}")

    @property
    def dim(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise KeyError(f"unknown base variable {name!r}") from None


class RatFunc:
    """Canonical quotient of two polynomials over a BaseContext."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: BaseContext, num: Poly, den: Poly):
        if den.is_zero:
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero:
            num = Poly.zero(ctx.dim)
            den = Poly.const(ctx.dim, 1)
        elif den.is_constant:
            num = num.scaled(1 / den.constant_value())
            den = Poly.const(ctx.dim, 1)
        else:
            g = poly_gcd(num, den)
            if not g.is_one:
                num = divexact(num, g)
                den = divexact(den, g)
            lc = den.leading_coeff()
            if lc != 1:
                num = num.scaled(1 / lc)
                den = den.scaled(1 / lc)
        self.ctx = ctx
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, ctx: BaseContext, value) -> "RatFunc":
        return cls(ctx, Poly.const(ctx.dim, Fraction(value)), Poly.const(ctx.dim, 1))

    @classmethod
    def zero(cls, ctx: BaseContext) -> "RatFunc":
        return cls.const(ctx, 0)

    @classmethod
    def one(cls, ctx: BaseContext) -> "RatFunc":
        return cls.const(ctx, 1)

    @classmethod
    def variable(cls, ctx: BaseContext, name: str) -> "RatFunc":
        return cls(ctx, Poly.variable(ctx.dim, ctx.index(name)),
                   Poly.const(ctx.dim, 1))

    # -- predicates ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num.is_one and self.den.is_one

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_one

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_one

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return self.num.constant_value()

    # -- arithmetic ----------------------------------------------------

    @classmethod
    def _raw(cls, ctx: BaseContext, num: Poly, den: Poly) -> "RatFunc":
        # trusted constructor: num/den already coprime with monic denominator
        out = cls.__new__(cls)
        out.ctx = ctx
        out.num = num
        out.den = den
        return out

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.ctx != self.ctx:
                raise ContextMismatch("rational functions over different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.ctx, other)
        return NotImplemented

    def _combine(self, other: "RatFunc", subtract: bool) -> "RatFunc":
        # shared denominators and coprime-part bookkeeping keep the gcd
        # canonicalization in the constructor cheap
        if self.den == other.den:
            num = self.num - other.num if subtract else self.num + other.num
            return RatFunc(self.ctx, num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_one:
            da, db = self.den, other.den
        else:
            da, db = divexact(self.den, g), divexact(other.den, g)
        lhs = self.num * db
        rhs = other.num * da
        num = lhs - rhs if subtract else lhs + rhs
        return RatFunc(self.ctx, num, self.den * db)

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._combine(other, subtract=False)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._combine(other, subtract=True)

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __neg__(self) -> "RatFunc":
        out = RatFunc.__new__(RatFunc)
        out.ctx = self.ctx
        out.num = -self.num
        out.den = self.den
        return out

    @staticmethod
    def _cancel(num: Poly, den: Poly) -> tuple[Poly, Poly]:
        g = poly_gcd(num, den)
        if g.is_one:
            return num, den
        return divexact(num, g), divexact(den, g)

    def _cross_mul(self, na: Poly, da: Poly, nb: Poly, db: Poly) -> "RatFunc":
        # inputs are two canonical fractions; cancel across before multiplying
        if na.is_zero or nb.is_zero:
            return RatFunc.zero(self.ctx)
        na, db = self._cancel(na, db)
        nb, da = self._cancel(nb, da)
        num = na * nb
        den = da * db
        lc = den.leading_coeff()
        if lc != 1:
            num, den = num.scaled(1 / lc), den.scaled(1 / lc)
        return RatFunc._raw(self.ctx, num, den)

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._cross_mul(self.num, self.den, other.num, other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("division by the zero rational function")
        return self._cross_mul(self.num, self.den, other.den, other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.const(self.ctx, other) / self

    def __pow__(self, exponent: int) -> "RatFunc":
        if exponent < 0:
            return RatFunc.one(self.ctx) / self ** (-exponent)
        return RatFunc(self.ctx, self.num ** exponent, self.den ** exponent)

    def inverse(self) -> "RatFunc":
        if self.is_zero:
            raise DivisionByZero("inverting the zero rational function")
        return RatFunc(self.ctx, self.den, self.num)

    def derivative(self, var: str) -> "RatFunc":
        return self.derivative_index(self.ctx.index(var))

    def derivative_index(self, v: int) -> "RatFunc":
        if self.den.is_one:
            out = RatFunc.__new__(RatFunc)
            out.ctx = self.ctx
            out.num = self.num.derivative(v)
            out.den = self.den
            if out.num.is_zero:
                return RatFunc.zero(self.ctx)
            return out
        num = self.num.derivative(v) * self.den - self.num * self.den.derivative(v)
        return RatFunc(self.ctx, num, self.den * self.den)

    # -- comparison ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(self.ctx, other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return (self.ctx == other.ctx and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.ctx, self.num, self.den))

    def cross_eq(self, other: "RatFunc") -> bool:
        """Cross-multiplication equality, independent of canonicalization."""
        return (self.num * other.den) == (other.num * self.den)

    # -- rendering -----------------------------------------------------

    def __str__(self) -> str:
        num = self.num.render(self.ctx.vars)
        if self.den.is_one:
            return num
        return f"({num})/({self.den.render(self.ctx.vars)})"

    def __repr__(self):
        return f"RatFunc({self})"
