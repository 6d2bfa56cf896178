"""Seeded random ring elements and series for the self-check suites."""
from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Any, Sequence

from .rings import EPolynomial, MotivicClass, PreLambdaRing
from .series import Factorization, TruncatedSeries, graded_lex_exponents

_EXPONENTS = (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2))
SMALL_BOX = 16
SPARSE_TERMS = 6


def random_element(ring: PreLambdaRing, rng: random.Random, max_terms: int = 2, max_coeff: int = 3) -> Any:
    """A small random element of ``ring`` (possibly zero)."""
    if ring.name == "int":
        return rng.randint(-max_coeff, max_coeff)
    count = rng.randint(0, max_terms)
    if ring.name == "motivic":
        return MotivicClass({rng.choice(_EXPONENTS): rng.randint(-max_coeff, max_coeff) for _ in range(count)})
    if ring.name == "hodge":
        return EPolynomial({(rng.choice(_EXPONENTS), rng.choice(_EXPONENTS)): rng.randint(-max_coeff, max_coeff)
                            for _ in range(count)})
    raise ValueError(f"no sampler for ring {ring.name}")


def random_unit_series(ring: PreLambdaRing, bounds: Sequence[int], rng: random.Random,
                       density: float = 0.6, max_terms: int = 2) -> TruncatedSeries:
    """A random series with constant term one."""
    exps = graded_lex_exponents(tuple(bounds))
    coeffs = {exps[0]: ring.one}
    for e in exps[1:]:
        if rng.random() < density:
            coeffs[e] = random_element(ring, rng, max_terms=max_terms)
    return TruncatedSeries(ring, bounds, coeffs)


def random_factorization(ring: PreLambdaRing, bounds: Sequence[int], rng: random.Random,
                         density: float = 0.5) -> Factorization:
    exps = graded_lex_exponents(tuple(bounds))[1:]
    return Factorization(ring, bounds, {k: random_element(ring, rng) for k in exps if rng.random() < density})


def sample_shape(bounds: Sequence[int]) -> tuple[float, int]:
    """Density and terms per coefficient for axiom samples in the box ``bounds``.

    Past SMALL_BOX exponents the series keep about SPARSE_TERMS nonzero
    coefficients, each a single monomial, so that the factors of A^m stay small.
    """
    size = math.prod(n + 1 for n in bounds)
    if size <= SMALL_BOX:
        return 0.6, 2
    return SPARSE_TERMS / (size - 1), 1


def random_axiom_sample(ring: PreLambdaRing, bounds: Sequence[int], rng: random.Random):
    from .power import AxiomSample

    density, max_terms = sample_shape(bounds)
    return AxiomSample(
        a=random_unit_series(ring, bounds, rng, density, max_terms),
        b=random_unit_series(ring, bounds, rng, density, max_terms),
        m=random_element(ring, rng, max_terms=max_terms),
        n=random_element(ring, rng, max_terms=max_terms),
        k=rng.choice((2, 3)),
    )
