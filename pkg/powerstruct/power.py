"""
The power structure: (A(t))^m for a series A in 1 + (t) and a ring element m.

Every power goes through the unique factorization
A(t) = prod_k (1 - t^k)^(-b_k), so that
(A(t))^m = prod_k (1 - t^k)^(-b_k m), expanded with the ring's sigma.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Literal, Optional, Sequence

from pydantic import BaseModel, Field, computed_field

from .rings import HODGE, INTEGERS, PreLambdaRing, euler_spec, hodge_spec
from .exceptions import ContractError
from .sampling import random_axiom_sample
from .series import (
    TruncatedSeries,
    assemble,
    factorize,
    graded_lex_exponents,
    map_coefficients,
    mul,
    substitute_power,
)

logger = logging.getLogger(__name__)

Specialization = Literal["none", "euler", "hodge"]


def power(a: TruncatedSeries, m: Any) -> TruncatedSeries:
    """(A(t))^m for A with constant term one and m any element of A's ring.

    Raises:
        NonUnitConstantError: If the constant term of A is not the ring one.
    """
    m = a.ring.coerce(m)
    return assemble(factorize(a).scaled(m))


def specialize_series(a: TruncatedSeries, which: Specialization) -> TruncatedSeries:
    """Apply the Euler characteristic (L -> 1) or Hodge-Deligne (L -> uv) map to every coefficient."""
    if which == "none":
        return a
    if which == "euler":
        return map_coefficients(a, euler_spec, INTEGERS)
    if which == "hodge":
        return map_coefficients(a, hodge_spec, HODGE)
    raise ContractError(f"unknown specialization {which!r}")


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

class Counterexample(BaseModel):
    """First coefficient at which the two sides of a property disagree."""
    case: int = Field(..., ge=0, description="Index of the failing sample")
    exponent: list[int]
    lhs: str
    rhs: str


class PropertyResult(BaseModel):
    """Outcome of one power-structure property over all samples."""
    property: int = Field(..., ge=1, le=7)
    name: str
    passed: bool
    cases: int = 0
    counterexample: Optional[Counterexample] = None


class AxiomReport(BaseModel):
    """Pass/fail table for properties 1)-7) of a power structure."""
    ring: str
    results: list[PropertyResult] = Field(default_factory=list)

    @computed_field  # type: ignore[misc]
    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


@dataclass(frozen=True)
class AxiomSample:
    """Inputs for one round of property checks."""
    a: TruncatedSeries
    b: TruncatedSeries
    m: Any
    n: Any
    k: int = 2


PROPERTY_NAMES = {
    1: "A^0 = 1",
    2: "A^1 = A",
    3: "(AB)^m = A^m B^m",
    4: "A^(m+n) = A^m A^n",
    5: "A^(mn) = (A^n)^m",
    6: "(1+t)^m = 1 + m t mod t^2",
    7: "(A(t^k))^m = A(t)^m at t -> t^k",
}


def _first_difference(lhs: TruncatedSeries, rhs: TruncatedSeries,
                      exponents: Optional[Iterable[tuple[int, ...]]] = None) -> Optional[tuple[tuple[int, ...], Any, Any]]:
    for e in exponents if exponents is not None else graded_lex_exponents(lhs.bounds):
        left, right = lhs.coefficient(e), rhs.coefficient(e)
        if left != right:
            return e, left, right
    return None


def _binomial_one_plus_t(ring: PreLambdaRing, order: int) -> TruncatedSeries:
    return TruncatedSeries(ring, (max(order, 1),), {(0,): ring.one, (1,): ring.one})


def _property_checks(ring: PreLambdaRing, s: AxiomSample) -> dict[int, Callable[[], tuple[TruncatedSeries, TruncatedSeries, Optional[Sequence]]]]:
    one = TruncatedSeries.one(ring, s.a.bounds)

    def p6():
        binom = _binomial_one_plus_t(ring, s.a.bounds[0])
        lhs = power(binom, s.m)
        expected = TruncatedSeries(ring, binom.bounds, {(0,): ring.one, (1,): s.m})
        return lhs, expected, [(0,), (1,)]

    return {
        1: lambda: (power(s.a, ring.zero), one, None),
        2: lambda: (power(s.a, ring.one), s.a, None),
        3: lambda: (power(mul(s.a, s.b), s.m), mul(power(s.a, s.m), power(s.b, s.m)), None),
        4: lambda: (power(s.a, s.m + s.n), mul(power(s.a, s.m), power(s.a, s.n)), None),
        5: lambda: (power(s.a, s.m * s.n), power(power(s.a, s.n), s.m), None),
        6: p6,
        7: lambda: (power(substitute_power(s.a, s.k), s.m), substitute_power(power(s.a, s.m), s.k), None),
    }


def verify_axioms(ring: PreLambdaRing, samples: Iterable[AxiomSample],
                  properties: Sequence[int] = tuple(PROPERTY_NAMES)) -> AxiomReport:
    """Check power-structure properties 1)-7) coefficientwise on the given samples.

    Returns:
        AxiomReport: pass/fail per property with the first counterexample found.
    """
    results = {p: PropertyResult(property=p, name=PROPERTY_NAMES[p], passed=True) for p in properties}
    for index, sample in enumerate(samples):
        m, n = ring.coerce(sample.m), ring.coerce(sample.n)
        sample = AxiomSample(sample.a, sample.b, m, n, sample.k)
        checks = _property_checks(ring, sample)
        for p in properties:
            result = results[p]
            result.cases += 1
            if not result.passed:
                continue
            lhs, rhs, exponents = checks[p]()
            diff = _first_difference(lhs, rhs, exponents)
            if diff is not None:
                exp, left, right = diff
                result.passed = False
                result.counterexample = Counterexample(
                    case=index, exponent=list(exp), lhs=str(left), rhs=str(right)
                )
                logger.warning(f"Property {p} ({PROPERTY_NAMES[p]}) failed on {ring.name} sample {index} at {exp}")
    return AxiomReport(ring=ring.name, results=[results[p] for p in properties])


def run_axiom_suite(ring: PreLambdaRing, seed: int, cases: int, bounds: Sequence[int]) -> AxiomReport:
    """Randomized axiom check over ``cases`` samples drawn with a fixed seed."""
    rng = random.Random(seed)
    samples = [random_axiom_sample(ring, tuple(bounds), rng) for _ in range(cases)]
    logger.info(f"Checking power-structure axioms over {ring.name}: {cases} cases, bounds {tuple(bounds)}")
    return verify_axioms(ring, samples)
