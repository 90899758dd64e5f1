"""Exact modular-class calculus for Lie algebroids.

Everything is computed over the field of multivariate rational functions
with exact rational coefficients, so every identity check in the package
is an equality of canonical forms, never a numerical comparison.
"""

from .ratfunc import BaseContext, RatFunc
from .expr import parse_expr
from .exterior import FORM, MULTIVECTOR, GradedElement, contract, top_pairing
from .core import (BundleMorphism, LieAlgebroid, ValidationReport,
                   bracket_of_sections, d_E, is_morphism,
                   lie_algebra_as_algebroid, lie_derivative, schouten,
                   tangent_algebroid, validate_algebroid)
from .modular import (Cochain1, LineRep, characteristic_section,
                      modular_section, pullback_cochain, rep_apply,
                      rep_flatness_check, relative_modular_section)
from .twisted import (TwistedStructure, W_section, X_section, Y_section,
                      Z_section, check_twisted, cotangent_algebroid, del_pi,
                      verify_theorem41)
from .liealg import (LieAlgebraPresentation, SubalgebraInclusion, h1_class,
                     invariant_measure_obstruction, modular_character,
                     relative_character)
from .cohomology import (ClassComparison, ExactnessVerdict, classes_equal,
                         exactness_search, is_cocycle)

__version__ = "0.1.0"

__all__ = [
    "BaseContext", "RatFunc", "parse_expr",
    "FORM", "MULTIVECTOR", "GradedElement", "contract", "top_pairing",
    "BundleMorphism", "LieAlgebroid", "ValidationReport",
    "bracket_of_sections", "d_E", "is_morphism", "lie_algebra_as_algebroid",
    "lie_derivative", "schouten", "tangent_algebroid", "validate_algebroid",
    "Cochain1", "LineRep", "characteristic_section", "modular_section",
    "pullback_cochain", "rep_apply", "rep_flatness_check",
    "relative_modular_section",
    "TwistedStructure", "W_section", "X_section", "Y_section", "Z_section",
    "check_twisted", "cotangent_algebroid", "del_pi", "verify_theorem41",
    "LieAlgebraPresentation", "SubalgebraInclusion", "h1_class",
    "invariant_measure_obstruction", "modular_character", "relative_character",
    "ClassComparison", "ExactnessVerdict", "classes_equal", "exactness_search",
    "is_cocycle",
]
