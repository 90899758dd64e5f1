"""Modular sections, relative modular sections and line-bundle representations.

The modular section of an algebroid E is the 1-cochain xi with

    <xi, x> (omega ox lam) = [x, omega] ox lam + omega ox L_{rho(x)} lam

for a nowhere-vanishing top multivector omega of E and volume form lam on
the base.  The relative modular section of a morphism phi: E -> F replaces
the base volume by the normalized dual nu of a top multivector of F:

    <eta, x> = [x, omega_E]/omega_E + L_{phi x} nu / nu.

Both are closed for the algebroid differential; a violation can only come
from inconsistent sign conventions, so it raises instead of being returned.

Line-bundle sections (top of E tensor dual top of F) are stored as a single
RatFunc coefficient against fixed reference tops, top-degree spaces being
one-dimensional over the coefficient field.  Only the differential-form
flavor is implemented; density coefficients, which matter for orientation
questions only, are outside the algebraic model.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import (ConventionError, NotAMorphism, RankMismatch,
                     VanishingSection)
from .core import (BundleMorphism, Components, LieAlgebroid, d_E, is_morphism,
                   lie_derivative, schouten, tangent_algebroid)
from .exterior import FORM, MULTIVECTOR, GradedElement
from .ratfunc import RatFunc
from .sampling import random_polynomial, random_section


@dataclass
class Cochain1:
    """A 1-cochain on an algebroid: one RatFunc per frame section."""

    algebroid: LieAlgebroid
    components: Components

    def __post_init__(self):
        if len(self.components) != self.algebroid.rank:
            raise RankMismatch(
                f"{len(self.components)} components on rank {self.algebroid.rank}")
        self.components = tuple(self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    def as_form(self) -> GradedElement:
        return self.algebroid.form(self.components)

    def pair_with(self, comps: Components) -> RatFunc:
        return sum((a * b for a, b in zip(self.components, comps)),
                   RatFunc.zero(self.algebroid.ctx))

    def __add__(self, other: "Cochain1") -> "Cochain1":
        self._mate(other)
        return Cochain1(self.algebroid,
                        tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "Cochain1") -> "Cochain1":
        self._mate(other)
        return Cochain1(self.algebroid,
                        tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "Cochain1":
        return Cochain1(self.algebroid, tuple(-c for c in self.components))

    def scale(self, factor) -> "Cochain1":
        return Cochain1(self.algebroid, tuple(c * factor for c in self.components))

    def _mate(self, other: "Cochain1"):
        if self.algebroid != other.algebroid:
            raise RankMismatch("cochains on different algebroids")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain1) and self.algebroid == other.algebroid
                and self.components == other.components)

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.components) + "]"


def pullback_cochain(phi: BundleMorphism, xi: Cochain1) -> Cochain1:
    if xi.algebroid != phi.target:
        raise RankMismatch("cochain does not live on the morphism target")
    return Cochain1(phi.source, phi.pullback_components(xi.components))


def _assert_cocycle(E: LieAlgebroid, xi: Cochain1, what: str):
    residual = d_E(E, xi.as_form())
    if not residual.is_zero:
        raise ConventionError(
            f"{what} is not closed; sign conventions are inconsistent "
            f"(residual {residual})")


def _top_coeff(elem: GradedElement, what: str) -> RatFunc:
    if elem.degree != elem.rank:
        raise VanishingSection(f"{what} must have top degree")
    coeff = elem.coefficient(tuple(range(elem.rank)))
    if coeff.is_zero:
        raise VanishingSection(f"{what} has vanishing top coefficient")
    return coeff


def _lie_ratio(F: LieAlgebroid, direction: Components, top: GradedElement,
               top_coeff: RatFunc) -> RatFunc:
    """Coefficient ratio of the Lie derivative of a top element of F.

    Returns 0 for a rank-0 algebroid, whose only sections are zero.
    """
    if F.rank == 0:
        return RatFunc.zero(F.ctx)
    if all(c.is_zero for c in direction):
        return RatFunc.zero(F.ctx)
    moved = lie_derivative(F, F.section(direction), top)
    return moved.coefficient(tuple(range(F.rank))) / top_coeff


def modular_section(E: LieAlgebroid, omega: GradedElement,
                    lam: GradedElement) -> Cochain1:
    """Modular section of E for the chosen top multivector and base volume."""
    E.require_valid()
    omega_c = _top_coeff(omega, "omega")
    if omega.role != MULTIVECTOR or omega.rank != E.rank:
        raise RankMismatch("omega must be a top multivector of the algebroid")
    tm = tangent_algebroid(E.ctx)
    if lam.role != FORM or lam.rank != tm.rank:
        raise RankMismatch("lam must be a top form over the base")
    lam_c = _top_coeff(lam, "lam")
    comps = []
    for i in range(E.rank):
        moved = schouten(E, E.frame_section(i), omega)
        t1 = moved.coefficient(tuple(range(E.rank))) / omega_c
        t2 = _lie_ratio(tm, tuple(E.anchor[i]), lam, lam_c)
        comps.append(t1 + t2)
    xi = Cochain1(E, tuple(comps))
    _assert_cocycle(E, xi, "modular section")
    return xi


def relative_modular_section(phi: BundleMorphism, omega_e: GradedElement,
                             omega_f: GradedElement) -> Cochain1:
    """Relative modular section of a morphism from chosen top multivectors.

    The top form nu of the target is normalized against omega_f so that
    their pairing is 1.
    """
    report = is_morphism(phi)
    if not report.passed:
        raise NotAMorphism(f"bundle map is not an algebroid morphism: "
                           f"{report.witness()}")
    E, F = phi.source, phi.target
    omega_e_c = _top_coeff(omega_e, "omega_E")
    if F.rank == 0:
        nu = GradedElement.scalar(F.ctx, 0, FORM, RatFunc.one(F.ctx))
        nu_c = RatFunc.one(F.ctx)
    else:
        omega_f_c = _top_coeff(omega_f, "omega_F")
        nu_c = RatFunc.one(F.ctx) / omega_f_c
        nu = F.dual_top_form(nu_c)
    comps = []
    for i in range(E.rank):
        moved = schouten(E, E.frame_section(i), omega_e)
        t1 = moved.coefficient(tuple(range(E.rank))) / omega_e_c
        t2 = _lie_ratio(F, phi.apply_frame(i), nu, nu_c)
        comps.append(t1 + t2)
    eta = Cochain1(E, tuple(comps))
    _assert_cocycle(E, eta, "relative modular section")
    return eta


# -- line-bundle representations ---------------------------------------------


@dataclass
class LineRep:
    """Representation on top(E) tensor dual-top(F) induced by a morphism.

    Reference tops fix the trivialization; sections are single RatFunc
    coefficients against ref_omega tensor ref_nu.
    """

    phi: BundleMorphism
    ref_omega: GradedElement
    ref_nu: GradedElement

    def __post_init__(self):
        self._ref_omega_c = _top_coeff(self.ref_omega, "reference omega")
        if self.phi.target.rank == 0:
            self._ref_nu_c = self.ref_nu.as_scalar()
            if self._ref_nu_c.is_zero:
                raise VanishingSection("reference nu has vanishing coefficient")
        else:
            self._ref_nu_c = _top_coeff(self.ref_nu, "reference nu")

    @property
    def source(self) -> LieAlgebroid:
        return self.phi.source

    @property
    def target(self) -> LieAlgebroid:
        return self.phi.target


def rep_apply(rep: LineRep, x: GradedElement, omega: GradedElement,
              nu: GradedElement) -> RatFunc:
    """Apply the representation along x to the section omega tensor nu.

    Both Lie-derivative terms are evaluated honestly (Schouten bracket on
    the E side, Cartan formula on the F side) and the result is reduced to
    one coefficient against the reference tops.
    """
    E, F = rep.source, rep.target
    E.require_valid()
    moved_e = schouten(E, x, omega)
    top_e = tuple(range(E.rank))
    if F.rank == 0:
        nu_c = nu.as_scalar()
        lhs = moved_e.coefficient(top_e) * nu_c
        rhs = RatFunc.zero(E.ctx)
    else:
        top_f = tuple(range(F.rank))
        nu_c = nu.coefficient(top_f)
        lhs = moved_e.coefficient(top_e) * nu_c
        comps = rep.phi.apply_section(tuple(x.coefficient((i,))
                                            for i in range(E.rank)))
        if all(c.is_zero for c in comps):
            rhs = RatFunc.zero(E.ctx)
        else:
            moved_f = lie_derivative(F, F.section(comps), nu)
            rhs = omega.coefficient(top_e) * moved_f.coefficient(top_f)
    return (lhs + rhs) / (rep._ref_omega_c * rep._ref_nu_c)


def _rep_apply_coeff(rep: LineRep, x: GradedElement, s: RatFunc) -> RatFunc:
    return rep_apply(rep, x, rep.ref_omega.scale(s), rep.ref_nu)


def characteristic_section(rep: LineRep, s: RatFunc) -> Cochain1:
    """Characteristic section of the representation at a nonvanishing s."""
    if s.is_zero:
        raise VanishingSection("characteristic section needs a nonvanishing s")
    E = rep.source
    comps = tuple(_rep_apply_coeff(rep, E.frame_section(i), s) / s
                  for i in range(E.rank))
    theta = Cochain1(E, comps)
    _assert_cocycle(E, theta, "characteristic section")
    return theta


@dataclass
class FlatnessReport:
    passed: bool
    failures: list = field(default_factory=list)
    trials: int = 0

    def witness(self) -> str:
        return "; ".join(self.failures)


def rep_flatness_check(rep: LineRep, trials: int = 3,
                       rng: random.Random | None = None) -> FlatnessReport:
    """Check the representation laws on frame data and randomized sections.

    (a) function-linearity in the direction, (b) the Leibniz rule on the
    section argument, (c) bracket compatibility of the operators.  Failures
    are reported with the offending inputs, never raised.
    """
    if rng is None:
        rng = random.Random(67)
    E = rep.source
    E.require_valid()
    report = FlatnessReport(passed=True, trials=trials)
    one = RatFunc.one(E.ctx)

    directions = [("frame " + str(i + 1), E.frame_section(i)) for i in range(E.rank)]
    for t in range(trials):
        directions.append((f"random section {t + 1}", random_section(rng, E)))
    functions = [RatFunc.const(E.ctx, 2)]
    if E.ctx.dim:
        functions.append(RatFunc.variable(E.ctx, E.ctx.vars[0]) + 1)
    for _ in range(trials):
        functions.append(random_polynomial(rng, E.ctx))
    sections = [one] + [random_polynomial(rng, E.ctx) + 3 for _ in range(trials)]

    def D(x: GradedElement, s: RatFunc) -> RatFunc:
        return _rep_apply_coeff(rep, x, s)

    for name, x in directions:
        for f in functions:
            for s in sections:
                lhs = D(x.scale(f), s)
                if lhs != f * D(x, s):
                    report.failures.append(
                        f"(a) fails for {name}, f = {f}: D_(f x) != f D_x on s = {s}")
                lhs_b = D(x, f * s)
                rhs_b = f * D(x, s) + E.anchor_apply_section(
                    tuple(x.coefficient((i,)) for i in range(E.rank)), f) * s
                if lhs_b != rhs_b:
                    report.failures.append(
                        f"(b) fails for {name}, f = {f}, s = {s}")

    pairs = [(i, j) for i in range(E.rank) for j in range(i + 1, E.rank)]
    pair_list = [(f"frames {i + 1},{j + 1}", E.frame_section(i), E.frame_section(j))
                 for i, j in pairs]
    for t in range(trials):
        pair_list.append((f"random pair {t + 1}", random_section(rng, E),
                          random_section(rng, E)))
    from .core import bracket_of_sections
    for name, x, y in pair_list:
        xc = tuple(x.coefficient((i,)) for i in range(E.rank))
        yc = tuple(y.coefficient((i,)) for i in range(E.rank))
        z = E.section(bracket_of_sections(E, xc, yc))
        for s in sections:
            lhs = D(z, s)
            rhs = D(x, D(y, s)) - D(y, D(x, s))
            if lhs != rhs:
                report.failures.append(
                    f"(c) fails for {name} on s = {s}: "
                    f"D_[x,y] = {lhs} but [D_x, D_y] = {rhs}")
    report.passed = not report.failures
    return report


def modular_rep(E: LieAlgebroid) -> LineRep:
    """The canonical representation along the anchor of E."""
    phi = BundleMorphism.anchor_morphism(E)
    tm = phi.target
    if tm.rank == 0:
        nu = GradedElement.scalar(tm.ctx, 0, FORM, RatFunc.one(tm.ctx))
    else:
        nu = tm.dual_top_form(1)
    return LineRep(phi, E.top_multivector(1), nu)
