"""Cocycle tests and degree-bounded exactness for 1-cochains.

Whether a closed 1-cochain is a differential is decided here by exact
linear algebra over a finite ansatz: polynomial primitives up to a total
degree bound, with candidate denominators assembled from the denominators
already present in the cochain.  A returned primitive is always reverified
against the cochain before it is reported.  A failed search is NOT a proof
of nonexactness on a positive-dimensional base, and the verdict says so;
over a point the answer is complete, since constants have zero
differential.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import NotACocycle
from .core import LieAlgebroid, d_E
from .exterior import FORM, GradedElement
from .linalg import solve
from .modular import Cochain1
from .poly import Poly, divexact, grlex_key, poly_lcm
from .ratfunc import RatFunc

EXACT = "exact-with-primitive"
NOT_EXACT_UP_TO_BOUND = "not-exact-up-to-bound"
NOT_A_COCYCLE = "not-a-cocycle"

EQUAL = "equal"
DISTINCT = "distinct"
UNDECIDED = "undecided-up-to-bound"


def is_cocycle(E: LieAlgebroid, xi: Cochain1) -> tuple[bool, GradedElement]:
    """Closedness of a 1-cochain, with the degree-2 residual."""
    residual = d_E(E, xi.as_form())
    return residual.is_zero, residual


@dataclass
class ExactnessVerdict:
    status: str
    primitive: RatFunc | None
    bound: int
    definitive: bool
    note: str

    @property
    def found(self) -> bool:
        return self.status == EXACT


def _monomials_up_to(nvars: int, bound: int):
    if nvars == 0:
        return [()]
    out = []
    for total in range(bound + 1):
        for combo in combinations_with_replacement(range(nvars), total):
            mono = [0] * nvars
            for v in combo:
                mono[v] += 1
            out.append(tuple(mono))
    return sorted(set(out), key=grlex_key)


def _denominator_candidates(E: LieAlgebroid, xi: Cochain1, bound: int) -> list[Poly]:
    base = []
    seen = set()
    for comp in xi.components:
        den = comp.den
        if den.is_one:
            continue
        key = frozenset(den.coeffs.items())
        if key not in seen:
            seen.add(key)
            base.append(den)
    one = Poly.const(E.ctx.dim, 1)
    candidates = [one]
    keys = {frozenset(one.coeffs.items())}
    max_factors = bound if base else 0
    for count in range(1, max_factors + 1):
        for combo in combinations_with_replacement(range(len(base)), count):
            prod = one
            for idx in combo:
                prod = prod * base[idx]
            if prod.total_degree() > bound:
                continue
            key = frozenset(prod.coeffs.items())
            if key not in keys:
                keys.add(key)
                candidates.append(prod)
    return candidates


def _search_with_denominator(E: LieAlgebroid, xi: Cochain1, bound: int,
                             den: Poly) -> RatFunc | None:
    ctx = E.ctx
    monos = _monomials_up_to(ctx.dim, bound)
    den_rf = RatFunc(ctx, den, Poly.const(ctx.dim, 1))
    basis: list[RatFunc] = []
    for mono in monos:
        p = Poly(ctx.dim, {mono: Fraction(1)})
        basis.append(RatFunc(ctx, p, Poly.const(ctx.dim, 1)) / den_rf)

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(E.rank):
        # equation: sum_u c_u * rho_i(mono_u / den) = xi_i, cleared of denominators
        images = [E.anchor_apply(i, b) for b in basis]
        common = Poly.const(ctx.dim, 1)
        for img in images + [xi.components[i]]:
            if not img.den.is_one:
                common = poly_lcm(common, img.den)
        cleared = [img.num * divexact(common, img.den) for img in images]
        target = xi.components[i].num * divexact(common, xi.components[i].den)
        mono_set = set(target.coeffs)
        for poly in cleared:
            mono_set.update(poly.coeffs)
        for mono in sorted(mono_set, key=grlex_key):
            rows.append([poly.coeffs.get(mono, Fraction(0)) for poly in cleared])
            rhs.append(target.coeffs.get(mono, Fraction(0)))
    if not rows:
        rows = [[Fraction(0)] * len(basis)]
        rhs = [Fraction(0)]
    sol = solve(rows, rhs)
    if sol is None:
        return None
    out = RatFunc.zero(ctx)
    for c, b in zip(sol, basis):
        if c:
            out = out + b * c
    return out


def exactness_search(E: LieAlgebroid, xi: Cochain1,
                     degree_bound: int = 6) -> ExactnessVerdict:
    """Search for a primitive of a closed 1-cochain up to a degree bound."""
    closed, residual = is_cocycle(E, xi)
    if not closed:
        return ExactnessVerdict(
            status=NOT_A_COCYCLE, primitive=None, bound=degree_bound,
            definitive=True,
            note=f"not closed: differential residual {residual}")
    point_base = E.ctx.dim == 0
    for den in _denominator_candidates(E, xi, degree_bound):
        primitive = _search_with_denominator(E, xi, degree_bound, den)
        if primitive is None:
            continue
        check = d_E(E, GradedElement.scalar(E.ctx, E.rank, FORM, primitive))
        if (xi.as_form() - check).is_zero:
            return ExactnessVerdict(
                status=EXACT, primitive=primitive, bound=degree_bound,
                definitive=True, note="primitive verified exactly")
        raise AssertionError("solver returned an unverified primitive; internal bug")
    if point_base:
        note = ("no primitive exists: over a point the differential of every "
                "0-cochain vanishes, so only the zero cochain is exact")
    else:
        note = (f"no primitive with the searched denominators up to total degree "
                f"{degree_bound}; this bounded search is a semi-decision and does "
                "not prove nonexactness")
    return ExactnessVerdict(status=NOT_EXACT_UP_TO_BOUND, primitive=None,
                            bound=degree_bound, definitive=point_base, note=note)


@dataclass
class ClassComparison:
    status: str
    verdict: ExactnessVerdict

    @property
    def equal(self) -> bool:
        return self.status == EQUAL


def classes_equal(E: LieAlgebroid, xi1: Cochain1, xi2: Cochain1,
                  degree_bound: int = 6) -> ClassComparison:
    """Same-class decision for two cocycles, as exactness of the difference."""
    for xi in (xi1, xi2):
        closed, residual = is_cocycle(E, xi)
        if not closed:
            raise NotACocycle(f"input cochain is not closed: residual {residual}")
    verdict = exactness_search(E, xi1 - xi2, degree_bound)
    if verdict.found:
        status = EQUAL
    elif verdict.definitive:
        status = DISTINCT
    else:
        status = UNDECIDED
    return ClassComparison(status=status, verdict=verdict)
