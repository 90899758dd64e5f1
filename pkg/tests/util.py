"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, permutations

from algebroids import (BaseContext, GradedElement, LieAlgebroid, RatFunc,
                        check_twisted, lie_algebra_as_algebroid, parse_expr,
                        tangent_algebroid)
from algebroids.exterior import FORM, MULTIVECTOR


# -- stock objects -----------------------------------------------------------

def ctx_xy() -> BaseContext:
    return BaseContext(("x", "y"))


def ctx_r4() -> BaseContext:
    return BaseContext(("x1", "x2", "x3", "x4"))


def tangent_r2() -> LieAlgebroid:
    return tangent_algebroid(ctx_xy())


def aff1_algebroid() -> LieAlgebroid:
    return lie_algebra_as_algebroid({(0, 1): (0, 1)}, 2, name="aff1")


def sl2_algebroid() -> LieAlgebroid:
    return lie_algebra_as_algebroid({(0, 1): (0, 2, 0), (0, 2): (0, 0, -2),
                                     (1, 2): (1, 0, 0)}, 3, name="sl2")


def poisson_r2_twisted():
    """Bivector x e1^e2 on the tangent plane, zero twist."""
    E = tangent_r2()
    pi = GradedElement.basis(E.ctx, 2, MULTIVECTOR, (0, 1),
                             RatFunc.variable(E.ctx, "x"))
    return check_twisted(E, pi)


def symplectic_r2_twisted():
    E = tangent_r2()
    return check_twisted(E, GradedElement.basis(E.ctx, 2, MULTIVECTOR, (0, 1), 1))


def twisted_r4():
    """The nondegenerate twisted structure in four variables."""
    ctx = ctx_r4()
    E = tangent_algebroid(ctx)
    g = parse_expr("1/(1+x1)", ctx)
    pi = GradedElement.from_terms(ctx, 4, 2, MULTIVECTOR,
                                  {(0, 1): RatFunc.one(ctx), (2, 3): g})
    psi = GradedElement.basis(ctx, 4, FORM, (0, 2, 3), 1)
    return check_twisted(E, pi, psi)


def twisted_r3():
    ctx = BaseContext(("x", "y", "z"))
    E = tangent_algebroid(ctx)
    pi = GradedElement.basis(ctx, 3, MULTIVECTOR, (0, 1), 1)
    psi = GradedElement.basis(ctx, 3, FORM, (0, 1, 2), 1)
    return check_twisted(E, pi, psi)


# -- randomized data ---------------------------------------------------------

def rand_poly(rng: random.Random, ctx: BaseContext, max_degree: int = 2,
              terms: int = 3) -> RatFunc:
    out = RatFunc.const(ctx, rng.randint(-2, 2))
    for _ in range(terms - 1):
        term = RatFunc.const(ctx, rng.randint(-2, 2))
        for _ in range(rng.randint(0, max_degree)):
            if ctx.dim == 0:
                break
            term = term * RatFunc.variable(ctx, rng.choice(ctx.vars))
        out = out + term
    return out


def rand_element(rng: random.Random, E: LieAlgebroid, degree: int, role: str,
                 max_degree: int = 2, density: float = 0.7) -> GradedElement:
    terms = {}
    for tup in combinations(range(E.rank), degree):
        if rng.random() < density:
            terms[tup] = rand_poly(rng, E.ctx, max_degree)
    return GradedElement.from_terms(E.ctx, E.rank, degree, role, terms)


# -- brute-force exterior oracles --------------------------------------------

def perm_parity(perm) -> int:
    perm = list(perm)
    parity = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            parity = -parity
    return parity


def full_tensor(elem: GradedElement) -> dict[tuple[int, ...], RatFunc]:
    """Fully antisymmetrized coefficient table over all index orders."""
    table: dict[tuple[int, ...], RatFunc] = {}
    for tup, value in elem.coeffs.items():
        for perm in permutations(range(len(tup))):
            key = tuple(tup[i] for i in perm)
            sign = perm_parity(perm)
            table[key] = value if sign == 1 else -value
    return table


def oracle_contract(small: GradedElement, big: GradedElement) -> GradedElement:
    """Signed permutation-sum contraction, per the frozen composition orders."""
    zero = RatFunc.zero(big.ctx)
    table = full_tensor(big)
    out: dict[tuple[int, ...], RatFunc] = {}
    for tup, value in small.coeffs.items():
        seq = tuple(reversed(tup)) if small.role == FORM else tup
        for key in combinations(range(big.rank), big.degree - small.degree):
            got = table.get(seq + key)
            if got is None:
                continue
            out[key] = out.get(key, zero) + value * got
    return GradedElement.from_terms(big.ctx, big.rank, big.degree - small.degree,
                                    big.role, out)


def oracle_wedge(a: GradedElement, b: GradedElement) -> GradedElement:
    """Shuffle-sum wedge product on full tensors."""
    zero = RatFunc.zero(a.ctx)
    ta, tb = full_tensor(a), full_tensor(b)
    p, q = a.degree, b.degree
    out: dict[tuple[int, ...], RatFunc] = {}
    if p + q > a.rank:
        return GradedElement.zero(a.ctx, a.rank, a.rank, a.role)
    for key in combinations(range(a.rank), p + q):
        total = zero
        for left in combinations(range(p + q), p):
            rest = tuple(i for i in range(p + q) if i not in left)
            va = ta.get(tuple(key[i] for i in left))
            vb = tb.get(tuple(key[i] for i in rest))
            if va is None or vb is None:
                continue
            sign = perm_parity(left + rest)
            term = va * vb
            total = total + (term if sign == 1 else -term)
        if not total.is_zero:
            out[key] = total
    return GradedElement.from_terms(a.ctx, a.rank, p + q, a.role, out)


# -- divergence oracle for plane bivectors -----------------------------------

def poisson_modular_field(E: LieAlgebroid, pi: GradedElement,
                          volume_coeff: RatFunc) -> tuple[RatFunc, ...]:
    """Divergences of the Hamiltonian frame fields, computed from scratch.

    Component k is the volume divergence of the sharp image of the k-th
    coordinate differential.
    """
    n = E.rank
    P = [[RatFunc.zero(E.ctx) for _ in range(n)] for _ in range(n)]
    for (i, j), value in pi.coeffs.items():
        P[i][j] = value
        P[j][i] = -value
    out = []
    for k in range(n):
        ham = [P[k][j] for j in range(n)]  # components of sharp(dx_k)
        div = RatFunc.zero(E.ctx)
        for j in range(n):
            div = div + ham[j].derivative_index(j)
            div = div + ham[j] * volume_coeff.derivative_index(j) / volume_coeff
        out.append(div)
    return tuple(out)
