"""Seeded random polynomial data for spot checks and property trials."""

from __future__ import annotations

import random
from itertools import combinations

from .exterior import FORM, MULTIVECTOR, GradedElement
from .ratfunc import BaseContext, RatFunc


def random_polynomial(rng: random.Random, ctx: BaseContext,
                      max_degree: int = 2, terms: int = 3) -> RatFunc:
    """Random polynomial of total degree at most max_degree; may be zero."""
    out = RatFunc.const(ctx, rng.randint(-2, 2))
    for _ in range(terms - 1):
        term = RatFunc.const(ctx, rng.randint(-2, 2))
        for _ in range(rng.randint(0, max_degree)):
            if ctx.dim == 0:
                break
            term = term * RatFunc.variable(ctx, rng.choice(ctx.vars))
        out = out + term
    return out


def random_element(rng: random.Random, ctx: BaseContext, rank: int, degree: int,
                   role: str, max_degree: int = 2) -> GradedElement:
    terms = {}
    for tup in combinations(range(rank), degree):
        if rng.random() < 0.75:
            terms[tup] = random_polynomial(rng, ctx, max_degree)
    return GradedElement.from_terms(ctx, rank, degree, role, terms)


def random_section(rng: random.Random, E) -> GradedElement:
    return random_element(rng, E.ctx, E.rank, 1, MULTIVECTOR)


def random_form(rng: random.Random, E, degree: int) -> GradedElement:
    return random_element(rng, E.ctx, E.rank, degree, FORM)


def random_multivector(rng: random.Random, E, degree: int) -> GradedElement:
    return random_element(rng, E.ctx, E.rank, degree, MULTIVECTOR)
