"""Lie algebras as point-base algebroids: characters, subalgebras, measures.

Over a point the modular section of a Lie algebra is the trace character
x -> tr(ad x); for a subalgebra inclusion the relative section is the
difference of the two characters.  Both are computed here from traces and
cross-checked, value by value, against the general algebroid machinery.
Degree-1 cohomology over a point is plain linear algebra: constants are
closed, so a character class vanishes exactly when the character does.

The invariant-measure criterion is stated infinitesimally.  Group-level
hypotheses (H connected and closed in a connected G) cannot be seen from
structure constants, so reports carry the hypothesis in their wording.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ClosureError, NotACocycle
from .core import BundleMorphism, LieAlgebroid, lie_algebra_as_algebroid
from .exterior import FORM, MULTIVECTOR, GradedElement
from .linalg import in_span, rank
from .modular import Cochain1, modular_section, relative_modular_section
from .ratfunc import BaseContext, RatFunc

Constants = dict[tuple[int, int], tuple[Fraction, ...]]


def bracket_constants(constants: Constants, n: int,
                      a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * n
    for (i, j), comps in constants.items():
        factor = a[i] * b[j] - a[j] * b[i]
        if factor:
            for k, c in enumerate(comps):
                out[k] += factor * c
    return out


def check_jacobi(constants: Constants, n: int) -> list[tuple]:
    """Failing triples (i, j, k, residual) of the Jacobi identity."""
    failures = []

    def basis(i):
        v = [Fraction(0)] * n
        v[i] = Fraction(1)
        return v

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                r1 = bracket_constants(constants, n,
                                       bracket_constants(constants, n, basis(i), basis(j)),
                                       basis(k))
                r2 = bracket_constants(constants, n,
                                       bracket_constants(constants, n, basis(j), basis(k)),
                                       basis(i))
                r3 = bracket_constants(constants, n,
                                       bracket_constants(constants, n, basis(k), basis(i)),
                                       basis(j))
                res = [x + y + z for x, y, z in zip(r1, r2, r3)]
                if any(res):
                    failures.append((i, j, k, tuple(res)))
    return failures


class LieAlgebraPresentation:
    """Finite-dimensional Lie algebra given by rational structure constants."""

    __slots__ = ("n", "constants", "name", "_algebroid")

    def __init__(self, n: int, constants: Constants, name: str = ""):
        clean: Constants = {}
        for (i, j), comps in constants.items():
            if not (0 <= i < j < n):
                raise IndexError(f"constants key ({i}, {j}) must satisfy 0 <= i < j < n")
            comps = tuple(Fraction(c) for c in comps)
            if len(comps) != n:
                raise ValueError(f"bracket ({i}, {j}) needs {n} components")
            if any(comps):
                clean[(i, j)] = comps
        self.n = n
        self.constants = clean
        self.name = name
        self._algebroid = None
        # raises JacobiError with a witness when the constants are bad
        self.as_algebroid()

    def as_algebroid(self) -> LieAlgebroid:
        if self._algebroid is None:
            self._algebroid = lie_algebra_as_algebroid(self.constants, self.n,
                                                       name=self.name)
        return self._algebroid

    @property
    def ctx(self) -> BaseContext:
        return self.as_algebroid().ctx

    def bracket(self, a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
        return bracket_constants(self.constants, self.n, a, b)

    def ad_matrix(self, x: list[Fraction]) -> list[list[Fraction]]:
        """Matrix of ad_x in the chosen basis (columns are ad_x(e_j))."""
        cols = []
        for j in range(self.n):
            basis = [Fraction(0)] * self.n
            basis[j] = Fraction(1)
            cols.append(self.bracket(x, basis))
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def trace_character(self) -> tuple[Fraction, ...]:
        out = []
        for i in range(self.n):
            x = [Fraction(0)] * self.n
            x[i] = Fraction(1)
            ad = self.ad_matrix(x)
            out.append(sum(ad[k][k] for k in range(self.n)))
        return tuple(out)

    def derived_subspace_rank(self) -> int:
        vectors = [list(c) for c in self.constants.values()]
        return rank(vectors)

    def __repr__(self):
        return f"LieAlgebraPresentation({self.name or 'unnamed'}, dim={self.n})"


def modular_character(g: LieAlgebraPresentation) -> Cochain1:
    """The trace character, cross-checked against the modular section."""
    E = g.as_algebroid()
    chi = Cochain1(E, tuple(RatFunc.const(E.ctx, c) for c in g.trace_character()))
    lam = GradedElement.scalar(E.ctx, 0, FORM, RatFunc.one(E.ctx))
    xi = modular_section(E, E.top_multivector(1), lam)
    if xi != chi:
        raise AssertionError(
            "trace character and modular section disagree; internal bug")
    return chi


class SubalgebraInclusion:
    """A subalgebra of an ambient presentation, spanned by explicit vectors."""

    __slots__ = ("ambient", "basis", "induced", "_morphism")

    def __init__(self, ambient: LieAlgebraPresentation,
                 basis: list[list[Fraction]], name: str = ""):
        basis = [[Fraction(v) for v in vec] for vec in basis]
        for vec in basis:
            if len(vec) != ambient.n:
                raise ValueError("basis vector length does not match the ambient dimension")
        if rank(basis) != len(basis):
            raise ClosureError("candidate basis is linearly dependent")
        k = len(basis)
        constants: Constants = {}
        for i in range(k):
            for j in range(i + 1, k):
                w = ambient.bracket(basis[i], basis[j])
                coords = in_span(basis, w)
                if coords is None:
                    raise ClosureError(
                        f"bracket of basis vectors {i + 1} and {j + 1} leaves the span",
                        witness=(i, j, tuple(w)))
                if any(coords):
                    constants[(i, j)] = tuple(coords)
        self.ambient = ambient
        self.basis = basis
        self.induced = LieAlgebraPresentation(k, constants,
                                              name=name or f"sub({ambient.name})")
        self._morphism = None

    def as_morphism(self) -> BundleMorphism:
        if self._morphism is None:
            src = self.induced.as_algebroid()
            dst = self.ambient.as_algebroid()
            ctx = src.ctx
            matrix = tuple(
                tuple(RatFunc.const(ctx, self.basis[c][r]) for c in range(self.induced.n))
                for r in range(self.ambient.n))
            self._morphism = BundleMorphism(src, dst, matrix)
        return self._morphism

    def express(self, vectors: list[list[Fraction]]) -> list[list[Fraction]]:
        """Coordinates of ambient vectors in this subalgebra basis."""
        out = []
        for vec in vectors:
            coords = in_span(self.basis, [Fraction(v) for v in vec])
            if coords is None:
                raise ClosureError("vector does not lie in the subalgebra")
            out.append(coords)
        return out


def relative_character(inc: SubalgebraInclusion) -> Cochain1:
    """Character of the subalgebra minus the restricted ambient character.

    Cross-checked against the relative modular section of the inclusion.
    """
    h, g = inc.induced, inc.ambient
    chi_h = h.trace_character()
    chi_g = g.trace_character()
    restricted = [sum(Fraction(vec[r]) * chi_g[r] for r in range(g.n))
                  for vec in inc.basis]
    E = h.as_algebroid()
    out = Cochain1(E, tuple(RatFunc.const(E.ctx, a - b)
                            for a, b in zip(chi_h, restricted)))
    eta = relative_modular_section(inc.as_morphism(),
                                   E.top_multivector(1),
                                   g.as_algebroid().top_multivector(1))
    if eta != out:
        raise AssertionError(
            "trace-based and section-based relative characters disagree; internal bug")
    return out


@dataclass
class H1Report:
    is_cocycle: bool
    class_is_zero: bool
    derived_rank: int
    text: str


def h1_class(g: LieAlgebraPresentation, xi: Cochain1) -> H1Report:
    """Degree-1 class decision over a point.

    Constants have zero differential, so closed 1-cochains are exactly the
    functionals vanishing on the derived subalgebra and a class vanishes
    exactly when the cochain does.
    """
    E = g.as_algebroid()
    bad = []
    for (i, j), comps in g.constants.items():
        value = sum((RatFunc.const(E.ctx, c) * xi.components[k]
                     for k, c in enumerate(comps)), RatFunc.zero(E.ctx))
        if not value.is_zero:
            bad.append((i, j, value))
    if bad:
        i, j, value = bad[0]
        raise NotACocycle(
            f"cochain does not vanish on the bracket of frames {i + 1}, {j + 1} "
            f"(value {value})")
    zero = xi.is_zero
    text = ("class is zero (the cochain vanishes identically)" if zero else
            "class is nonzero: over a point only the zero cochain is exact")
    return H1Report(is_cocycle=True, class_is_zero=zero,
                    derived_rank=g.derived_subspace_rank(), text=text)


@dataclass
class ObstructionReport:
    inclusion_name: str
    cochain: Cochain1
    vanishes: bool
    verdict: str
    hypothesis: str = ("criterion applies to a connected closed subgroup of a "
                       "connected group; connectedness and closedness are "
                       "group-level hypotheses this algebraic model cannot check")


def invariant_measure_obstruction(inc: SubalgebraInclusion) -> ObstructionReport:
    """Relative character as the obstruction to an invariant measure.

    The homogeneous space of the corresponding connected groups carries an
    invariant measure exactly when the relative character vanishes.
    """
    eta = relative_character(inc)
    vanishes = eta.is_zero
    verdict = ("obstruction vanishes: an invariant measure exists on the "
               "homogeneous space" if vanishes else
               f"obstruction {eta} is nonzero: no invariant measure exists on "
               "the homogeneous space")
    return ObstructionReport(inclusion_name=inc.induced.name, cochain=eta,
                             vanishes=vanishes, verdict=verdict)


# -- stock presentations ------------------------------------------------------


def abelian(n: int, name: str = "") -> LieAlgebraPresentation:
    return LieAlgebraPresentation(n, {}, name=name or f"abelian{n}")


def affine_line() -> LieAlgebraPresentation:
    """[e1, e2] = e2: the nonabelian two-dimensional algebra."""
    return LieAlgebraPresentation(2, {(0, 1): (Fraction(0), Fraction(1))},
                                  name="aff1")


def borel_sl2() -> LieAlgebraPresentation:
    """Span of h and e in sl2: [h, e] = 2e."""
    return LieAlgebraPresentation(2, {(0, 1): (Fraction(0), Fraction(2))},
                                  name="borel")


def sl2() -> LieAlgebraPresentation:
    """Basis (h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    z = Fraction(0)
    return LieAlgebraPresentation(3, {
        (0, 1): (z, Fraction(2), z),
        (0, 2): (z, z, Fraction(-2)),
        (1, 2): (Fraction(1), z, z),
    }, name="sl2")


def heisenberg() -> LieAlgebraPresentation:
    """Basis (p, q, z): [p, q] = z."""
    z = Fraction(0)
    return LieAlgebraPresentation(3, {(0, 1): (z, z, Fraction(1))}, name="heis3")


def _matrix_unit(n: int, i: int, j: int) -> list[list[Fraction]]:
    return [[Fraction(1) if (r, c) == (i, j) else Fraction(0)
             for c in range(n)] for r in range(n)]


def special_linear(n: int) -> LieAlgebraPresentation:
    """Traceless n x n matrices.

    Basis order: the n-1 diagonal differences, then the off-diagonal matrix
    units row by row (upper triangle first).
    """
    basis: list[list[list[Fraction]]] = []
    labels: list[tuple] = []
    for k in range(n - 1):
        m = _matrix_unit(n, k, k)
        m2 = _matrix_unit(n, k + 1, k + 1)
        basis.append([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(m, m2)])
        labels.append(("h", k))
    for i in range(n):
        for j in range(i + 1, n):
            basis.append(_matrix_unit(n, i, j))
            labels.append(("e", i, j))
    for i in range(n):
        for j in range(i):
            basis.append(_matrix_unit(n, i, j))
            labels.append(("e", i, j))

    dim = len(basis)

    def flatten(m):
        return [v for row in m for v in row]

    def commutator(a, b):
        ab = [[sum(a[r][k] * b[k][c] for k in range(n)) for c in range(n)]
              for r in range(n)]
        ba = [[sum(b[r][k] * a[k][c] for k in range(n)) for c in range(n)]
              for r in range(n)]
        return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(ab, ba)]

    flat = [flatten(m) for m in basis]
    constants: Constants = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            coords = in_span(flat, flatten(commutator(basis[i], basis[j])))
            if coords is None:
                raise AssertionError("commutator left the traceless span; internal bug")
            if any(coords):
                constants[(i, j)] = tuple(coords)
    return LieAlgebraPresentation(dim, constants, name=f"sl{n}")


def sl3_upper_borel_basis() -> list[list[Fraction]]:
    """Upper-triangular traceless matrices inside the special_linear(3) basis."""
    dim = 8
    out = []
    for idx in (0, 1, 2, 3, 4):  # h1, h2, e12, e13, e23
        v = [Fraction(0)] * dim
        v[idx] = Fraction(1)
        out.append(v)
    return out


def sl3_parabolic_basis() -> list[list[Fraction]]:
    """Block upper-triangular (2+1) traceless matrices in the special_linear(3) basis."""
    dim = 8
    out = []
    for idx in (0, 1, 2, 3, 4, 5):  # h1, h2, e12, e13, e23, e21
        v = [Fraction(0)] * dim
        v[idx] = Fraction(1)
        out.append(v)
    return out
