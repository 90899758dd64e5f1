"""Sparse exact multivariate polynomials over the rationals.

A polynomial in ``nvars`` variables is a dict mapping exponent tuples (one
nonnegative int per variable) to nonzero Fraction coefficients; the zero
polynomial is the empty dict:

    x^2*y + 3   ->   {(2, 1): Fraction(1), (0, 0): Fraction(3)}    (nvars=2)

The monomial order used everywhere is graded lexicographic: compare total
degree first, then the exponent tuple itself, so with variables (x, y) we
have x > y.  Greatest common divisors are computed with the primitive
polynomial remainder sequence, recursing on the first variable that occurs;
every intermediate value stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .errors import DivisionByZero

Monomial = tuple[int, ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def grlex_key(mono: Monomial) -> tuple:
    return (sum(mono), mono)


class Poly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("nvars", "coeffs")

    def __init__(self, nvars: int, coeffs: dict[Monomial, Fraction] | None = None):
        # coeffs is trusted to hold no zero values; use the constructors below.
        self.nvars = nvars
        self.coeffs = {} if coeffs is None else coeffs

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return cls(nvars)
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Poly":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        mono = tuple(1 if i == index else 0 for i in range(nvars))
        return cls(nvars, {mono: _ONE})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.coeffs)

    @property
    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs.get((0,) * self.nvars) == 1

    def constant_value(self) -> Fraction:
        if self.is_zero:
            return _ZERO
        if not self.is_constant:
            raise ValueError("polynomial is not constant")
        return next(iter(self.coeffs.values()))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return max(sum(m) for m in self.coeffs)

    def deg_in(self, v: int) -> int:
        """Degree in variable v; -1 for the zero polynomial."""
        if self.is_zero:
            return -1
        return max(m[v] for m in self.coeffs)

    def leading_monomial(self) -> Monomial:
        return max(self.coeffs, key=grlex_key)

    def leading_coeff(self) -> Fraction:
        return self.coeffs[self.leading_monomial()]

    def scaled(self, factor) -> "Poly":
        f = Fraction(factor)
        if f == 0 or self.is_zero:
            return Poly(self.nvars)
        return Poly(self.nvars, {m: c * f for m, c in self.coeffs.items()})

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(self.nvars, out)

    def __sub__(self, other: "Poly") -> "Poly":
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m, _ZERO) - c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.coeffs.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return Poly(self.nvars)
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self.coeffs.items():
            for mb, cb in other.coeffs.items():
                m = tuple(a + b for a, b in zip(ma, mb))
                s = out.get(m, _ZERO) + ca * cb
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(self.nvars, out)

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise ValueError("negative exponent on a polynomial")
        result = Poly.const(self.nvars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def derivative(self, v: int) -> "Poly":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.coeffs.items():
            e = m[v]
            if e == 0:
                continue
            m2 = m[:v] + (e - 1,) + m[v + 1:]
            s = out.get(m2, _ZERO) + c * e
            if s:
                out[m2] = s
            else:
                out.pop(m2, None)
        return Poly(self.nvars, out)

    def shifted(self, v: int, k: int) -> "Poly":
        """Multiply by x_v^k."""
        if k == 0 or self.is_zero:
            return self
        return Poly(self.nvars, {m[:v] + (m[v] + k,) + m[v + 1:]: c
                                 for m, c in self.coeffs.items()})

    def coeff_of_power(self, v: int, k: int) -> "Poly":
        """Coefficient of x_v^k, as a polynomial with x_v removed (exponent 0)."""
        out = {}
        for m, c in self.coeffs.items():
            if m[v] == k:
                out[m[:v] + (0,) + m[v + 1:]] = c
        return Poly(self.nvars, out)

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        """Terms in descending graded-lex order."""
        for m in sorted(self.coeffs, key=grlex_key, reverse=True):
            yield m, self.coeffs[m]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.nvars == other.nvars
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.coeffs.items())))

    def render(self, names: tuple[str, ...]) -> str:
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for mono, coeff in self.terms():
            factors = []
            for name, e in zip(names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append(("+ " if coeff > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        names = tuple(f"x{i}" for i in range(self.nvars))
        return f"Poly({self.render(names)})"


def divexact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b; raises if b is zero or does not divide a."""
    if b.is_zero:
        raise DivisionByZero("polynomial division by zero")
    if a.is_zero:
        return Poly(a.nvars)
    if b.is_constant:
        return a.scaled(1 / b.constant_value())
    blm = b.leading_monomial()
    blc = b.coeffs[blm]
    quot: dict[Monomial, Fraction] = {}
    rem = dict(a.coeffs)
    while rem:
        mono = max(rem, key=grlex_key)
        qm = tuple(e - f for e, f in zip(mono, blm))
        if any(e < 0 for e in qm):
            raise ArithmeticError("inexact polynomial division")
        qc = rem[mono] / blc
        quot[qm] = quot.get(qm, _ZERO) + qc
        for bm, bc in b.coeffs.items():
            m2 = tuple(e + f for e, f in zip(qm, bm))
            s = rem.get(m2, _ZERO) - qc * bc
            if s:
                rem[m2] = s
            else:
                rem.pop(m2, None)
    return Poly(a.nvars, {m: c for m, c in quot.items() if c})


def monic(p: Poly) -> Poly:
    if p.is_zero:
        return p
    return p.scaled(1 / p.leading_coeff())


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    # Pseudo-remainder of a by b in the variable v (deg_v b >= 0, b nonzero).
    db = b.deg_in(v)
    lcb = b.coeff_of_power(v, db)
    r = a
    while not r.is_zero and r.deg_in(v) >= db:
        dr = r.deg_in(v)
        lcr = r.coeff_of_power(v, dr)
        r = lcb * r - (lcr * b).shifted(v, dr - db)
    return r


def _cont_pp(p: Poly, v: int) -> tuple[Poly, Poly]:
    # Content and primitive part of p with respect to the variable v.
    cont = Poly.zero(p.nvars)
    for k in range(p.deg_in(v) + 1):
        c = p.coeff_of_power(v, k)
        if not c.is_zero:
            cont = poly_gcd(cont, c)
        if cont.is_one:
            break
    return cont, divexact(p, cont)


def _eval_univariate(p: Poly, keep: int, point: list[Fraction]) -> list[Fraction]:
    """Coefficient list of p in the kept variable, other variables evaluated."""
    out = [_ZERO] * (p.deg_in(keep) + 1)
    for mono, coeff in p.coeffs.items():
        value = coeff
        for v, e in enumerate(mono):
            if v != keep and e:
                value = value * point[v] ** e
        out[mono[keep]] += value
    while out and out[-1] == 0:
        out.pop()
    return out


def _univariate_gcd_degree(u: list[Fraction], w: list[Fraction]) -> int:
    while w:
        lead = w[-1]
        r = list(u)
        while len(r) >= len(w):
            factor = r[-1] / lead
            off = len(r) - len(w)
            for i, c in enumerate(w):
                r[off + i] -= factor * c
            while r and r[-1] == 0:
                r.pop()
        u, w = w, r
    return len(u) - 1


def _provably_coprime(a: Poly, b: Poly) -> bool:
    """Specialization probe: True only with proof that gcd(a, b) = 1.

    For each variable, evaluate the other variables at integer points that
    preserve the degree of b; a trivial univariate gcd then bounds the
    degree of the true gcd in that variable by zero.
    """
    points = (2, 3, 5, 7, 11, 13, 17, 19)
    for keep in range(a.nvars):
        # a common divisor has degree at most min(deg a, deg b) in each variable
        if min(a.deg_in(keep), b.deg_in(keep)) <= 0:
            continue
        proven = False
        for attempt in range(3):
            point = [Fraction(points[(keep + attempt + v) % len(points)])
                     for v in range(a.nvars)]
            ub = _eval_univariate(b, keep, point)
            if len(ub) - 1 != b.deg_in(keep):
                continue
            ua = _eval_univariate(a, keep, point)
            if not ua:
                continue
            if _univariate_gcd_degree(ua, ub) == 0:
                proven = True
                break
        if not proven:
            return False
    return True


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via the primitive polynomial remainder sequence."""
    if a.is_zero:
        return monic(b)
    if b.is_zero:
        return monic(a)
    if a.is_constant or b.is_constant:
        return Poly.const(a.nvars, 1)
    if a.coeffs == b.coeffs:
        return monic(a)
    if _provably_coprime(a, b):
        return Poly.const(a.nvars, 1)
    v = next(i for i in range(a.nvars) if a.deg_in(i) > 0 or b.deg_in(i) > 0)
    ca, pa = _cont_pp(a, v)
    cb, pb = _cont_pp(b, v)
    c = poly_gcd(ca, cb)
    if pa.deg_in(v) < pb.deg_in(v):
        pa, pb = pb, pa
    while not pb.is_zero:
        if pb.deg_in(v) == 0:
            # a v-primitive polynomial is coprime to anything v-free
            return monic(c)
        r = _prem(pa, pb, v)
        pa, pb = pb, (r if r.is_zero else _cont_pp(r, v)[1])
    return monic(c * pa)


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero or b.is_zero:
        return Poly(a.nvars)
    return monic(divexact(a * b, poly_gcd(a, b)))
