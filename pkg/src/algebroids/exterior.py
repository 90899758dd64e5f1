"""Graded exterior algebra over a rank-n frame with RatFunc coefficients.

A GradedElement is a homogeneous degree-k element of the exterior algebra of
a rank-n bundle, tagged with a role: "multivector" (a section of the k-th
exterior power of the bundle) or "form" (of its dual).  Coefficients are
stored sparsely, keyed by strictly increasing tuples of 0-based frame
indices; an absent tuple means zero, and degree-0 elements carry a single
coefficient on the empty tuple.

Sign conventions (frozen; see docs/CONVENTIONS.md and the regression tests):

* Evaluation of a basis form on frame tuples follows the determinant
  convention, so the coefficient on an increasing tuple equals the value on
  the corresponding frame sequence.
* Single-index contraction is first-slot: contracting index j out of a
  tuple that holds j at position t multiplies by (-1)^t.  In particular
  contracting e1* out of e1^e2 gives +e2.
* Contracting a wedge of forms into a multivector composes with the last
  wedge factor acting first.  Contracting a wedge of multivectors into a
  form composes with the FIRST wedge factor acting first.  The asymmetry is
  deliberate: it is the unique pairing of choices under which the cross
  module identity checks of this package close exactly.
* The top pairing of the full frame wedge with the full dual frame wedge
  is +1 (a plain coefficient product, not routed through contraction).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import (ContextMismatch, DegreeError, RankMismatch, RoleMismatch)
from .ratfunc import BaseContext, RatFunc

MULTIVECTOR = "multivector"
FORM = "form"

IndexTuple = tuple[int, ...]


def sort_indices(indices: Iterable[int]) -> tuple[int, IndexTuple] | None:
    """Sort an index sequence, returning (sign, sorted tuple).

    Returns None if any index repeats (the wedge vanishes).
    """
    seq = list(indices)
    sign = 1
    # insertion sort, counting transpositions; lengths are tiny
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and seq[j - 1] == seq[j]:
            return None
    if len(seq) >= 2 and any(a == b for a, b in zip(seq, seq[1:])):
        return None
    return sign, tuple(seq)


class GradedElement:
    """Homogeneous element of the exterior algebra; immutable."""

    __slots__ = ("ctx", "rank", "degree", "role", "coeffs")

    def __init__(self, ctx: BaseContext, rank: int, degree: int, role: str,
                 coeffs: dict[IndexTuple, RatFunc] | None = None):
        if role not in (MULTIVECTOR, FORM):
            raise RoleMismatch(f"unknown role {role!r}")
        if not 0 <= degree <= rank:
            raise DegreeError(f"degree {degree} out of range for rank {rank}")
        self.ctx = ctx
        self.rank = rank
        self.degree = degree
        self.role = role
        self.coeffs = {} if coeffs is None else coeffs

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, ctx: BaseContext, rank: int, degree: int, role: str) -> "GradedElement":
        return cls(ctx, rank, degree, role)

    @classmethod
    def scalar(cls, ctx: BaseContext, rank: int, role: str, value: RatFunc) -> "GradedElement":
        if value.is_zero:
            return cls(ctx, rank, 0, role)
        return cls(ctx, rank, 0, role, {(): value})

    @classmethod
    def basis(cls, ctx: BaseContext, rank: int, role: str, indices: Iterable[int],
              coeff: RatFunc | int = 1) -> "GradedElement":
        """Basis element on the given 0-based indices (any order, signed)."""
        if isinstance(coeff, int):
            coeff = RatFunc.const(ctx, coeff)
        seq = tuple(indices)
        srt = sort_indices(seq)
        if srt is None or coeff.is_zero:
            return cls(ctx, rank, min(len(seq), rank), role)
        sign, tup = srt
        for i in tup:
            if not 0 <= i < rank:
                raise IndexError(f"frame index {i} out of range for rank {rank}")
        value = coeff if sign == 1 else -coeff
        return cls(ctx, rank, len(tup), role, {tup: value})

    @classmethod
    def from_terms(cls, ctx: BaseContext, rank: int, degree: int, role: str,
                   terms: dict[IndexTuple, RatFunc]) -> "GradedElement":
        coeffs = {}
        for tup, value in terms.items():
            if value.is_zero:
                continue
            if len(tup) != degree or list(tup) != sorted(set(tup)):
                raise DegreeError(f"index tuple {tup} is not increasing of length {degree}")
            coeffs[tup] = value
        return cls(ctx, rank, degree, role, coeffs)

    # -- basics -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, indices: IndexTuple) -> RatFunc:
        return self.coeffs.get(tuple(indices), RatFunc.zero(self.ctx))

    def as_scalar(self) -> RatFunc:
        if self.degree != 0:
            raise DegreeError("not a degree-0 element")
        return self.coeffs.get((), RatFunc.zero(self.ctx))

    def eval_frame(self, indices: Iterable[int]) -> RatFunc:
        """Signed coefficient lookup on an arbitrary frame index sequence."""
        srt = sort_indices(indices)
        if srt is None:
            return RatFunc.zero(self.ctx)
        sign, tup = srt
        value = self.coeffs.get(tup)
        if value is None:
            return RatFunc.zero(self.ctx)
        return value if sign == 1 else -value

    def _check_mate(self, other: "GradedElement", same_role: bool):
        if self.ctx != other.ctx:
            raise ContextMismatch("elements over different base contexts")
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")
        if same_role and self.role != other.role:
            raise RoleMismatch(f"role {self.role} vs {other.role}")
        if not same_role and self.role == other.role:
            raise RoleMismatch(f"operation needs opposite roles, both {self.role}")

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check_mate(other, same_role=True)
        if self.degree != other.degree:
            if self.is_zero:
                return other
            if other.is_zero:
                return self
            raise DegreeError(f"adding degrees {self.degree} and {other.degree}")
        out = dict(self.coeffs)
        for tup, value in other.coeffs.items():
            s = out.get(tup)
            s = value if s is None else s + value
            if s.is_zero:
                out.pop(tup, None)
            else:
                out[tup] = s
        return GradedElement(self.ctx, self.rank, self.degree, self.role, out)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        return self + (-other)

    def __neg__(self) -> "GradedElement":
        return GradedElement(self.ctx, self.rank, self.degree, self.role,
                             {t: -v for t, v in self.coeffs.items()})

    def scale(self, factor: RatFunc | int | Fraction) -> "GradedElement":
        if isinstance(factor, (int, Fraction)):
            factor = RatFunc.const(self.ctx, factor)
        if factor.is_zero:
            return GradedElement(self.ctx, self.rank, self.degree, self.role)
        return GradedElement(self.ctx, self.rank, self.degree, self.role,
                             {t: v * factor for t, v in self.coeffs.items()})

    # -- wedge ---------------------------------------------------------------

    def wedge(self, other: "GradedElement") -> "GradedElement":
        self._check_mate(other, same_role=True)
        deg = self.degree + other.degree
        if deg > self.rank:
            # graded-algebra semantics: the product of too-high degree is zero
            return GradedElement(self.ctx, self.rank, self.rank, self.role)
        out: dict[IndexTuple, RatFunc] = {}
        for ta, va in self.coeffs.items():
            for tb, vb in other.coeffs.items():
                srt = sort_indices(ta + tb)
                if srt is None:
                    continue
                sign, tup = srt
                term = va * vb
                if sign < 0:
                    term = -term
                s = out.get(tup)
                s = term if s is None else s + term
                if s.is_zero:
                    out.pop(tup, None)
                else:
                    out[tup] = s
        return GradedElement(self.ctx, self.rank, deg, self.role, out)

    # -- comparison / rendering ----------------------------------------------

    def __eq__(self, other) -> bool:
        return (isinstance(other, GradedElement)
                and self.ctx == other.ctx and self.rank == other.rank
                and self.degree == other.degree and self.role == other.role
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.ctx, self.rank, self.degree, self.role,
                     frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        letter = "e" if self.role == MULTIVECTOR else "E"
        parts = []
        for tup in sorted(self.coeffs):
            value = self.coeffs[tup]
            mono = "^".join(f"{letter}{i + 1}" for i in tup)
            text = str(value)
            negated = False
            if text.startswith("-") and "+" not in text and " - " not in text:
                negated = True
                text = text[1:]
            if not mono:
                body = text
            elif text == "1":
                body = mono
            elif ("+" in text or " - " in text or "/" in text or " " in text):
                body = f"({'-' + text if negated else text})*{mono}"
                negated = False
            else:
                body = f"{text}*{mono}"
            if not parts:
                parts.append(("-" if negated else "") + body)
            else:
                parts.append(("- " if negated else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"GradedElement<{self.role} deg {self.degree}>({self})"


def _contract_single(coeffs: dict[IndexTuple, RatFunc], index: int) -> dict:
    """First-slot contraction of one frame index out of a coefficient table."""
    out: dict[IndexTuple, RatFunc] = {}
    for tup, value in coeffs.items():
        try:
            pos = tup.index(index)
        except ValueError:
            continue
        reduced = tup[:pos] + tup[pos + 1:]
        term = value if pos % 2 == 0 else -value
        s = out.get(reduced)
        s = term if s is None else s + term
        if s.is_zero:
            out.pop(reduced, None)
        else:
            out[reduced] = s
    return out


def contract(small: GradedElement, big: GradedElement) -> GradedElement:
    """Interior product of ``small`` into ``big`` (opposite roles).

    For a form contracting a multivector the last wedge factor of the form
    acts first; for a multivector contracting a form the first wedge factor
    acts first.  Degree-0 ``small`` is plain scaling.  Requires
    deg(small) <= deg(big).
    """
    small._check_mate(big, same_role=False)
    p, q = small.degree, big.degree
    if p > q:
        raise DegreeError(f"cannot contract degree {p} into degree {q}")
    if p == 0:
        return big.scale(small.as_scalar())
    out = GradedElement(big.ctx, big.rank, q - p, big.role)
    for tup, value in small.coeffs.items():
        order = reversed(tup) if small.role == FORM else tup
        table = big.coeffs
        for index in order:
            table = _contract_single(table, index)
            if not table:
                break
        if not table:
            continue
        piece = GradedElement(big.ctx, big.rank, q - p, big.role, table).scale(value)
        out = out + piece
    return out


def top_pairing(mv: GradedElement, form: GradedElement) -> RatFunc:
    """Full pairing of a top multivector with a top form (coefficient product)."""
    if mv.role != MULTIVECTOR or form.role != FORM:
        raise RoleMismatch("top_pairing wants (multivector, form)")
    if mv.ctx != form.ctx:
        raise ContextMismatch("elements over different base contexts")
    if mv.rank != form.rank:
        raise RankMismatch(f"rank {mv.rank} vs {form.rank}")
    if mv.degree != mv.rank or form.degree != form.rank:
        raise DegreeError("top_pairing needs both elements of top degree")
    full = tuple(range(mv.rank))
    return mv.coefficient(full) * form.coefficient(full)
