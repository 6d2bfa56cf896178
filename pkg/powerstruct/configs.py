"""
Finite-set oracle for the power of a series with non-negative integer coefficients.

With |M| = m and |A_i| = a_i, the coefficient of t^n in (1 + sum_i a_i t^i)^m
counts pairs (K, phi): a subset K of M and a map phi from K to the disjoint
union of the A_i with total weight n.
"""
from __future__ import annotations

import itertools
import logging
import math
from typing import Any, Iterator, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import settings
from .exceptions import GuardExceededError, ShapeMismatchError
from .power import power
from .rings import INTEGERS
from .series import TruncatedSeries, graded_lex_exponents

logger = logging.getLogger(__name__)


class FiniteCoefficientData(BaseModel):
    """|M| and the part sizes |A_i| for nonzero exponent vectors i."""
    m_size: int = Field(..., ge=0, alias="m")
    parts: dict[tuple[int, ...], int] = Field(default_factory=dict)

    model_config = ConfigDict(populate_by_name=True)

    @field_validator("m_size", mode="before")
    @classmethod
    def parse_m(cls, v: Any) -> Any:
        return int(v) if isinstance(v, str) else v

    @field_validator("parts", mode="before")
    @classmethod
    def parse_parts(cls, v: Any) -> Any:
        """Accept the JSON list [{"exp": [...], "val": "..."}] as well as a mapping."""
        if isinstance(v, list):
            out: dict[tuple[int, ...], int] = {}
            for item in v:
                if not isinstance(item, dict) or "exp" not in item or "val" not in item:
                    raise ValueError(f"expected {{\"exp\": [...], \"val\": ...}}, got {item!r}")
                exp = tuple(item["exp"])
                out[exp] = out.get(exp, 0) + int(item["val"])
            return out
        return v

    @model_validator(mode="after")
    def validate_parts(self) -> "FiniteCoefficientData":
        widths = {len(e) for e in self.parts}
        if len(widths) > 1:
            raise ValueError("all part exponents need the same number of variables")
        for exp, size in self.parts.items():
            if not exp or not any(exp) or min(exp) < 0:
                raise ValueError(f"part exponent {list(exp)} must be a nonzero non-negative vector")
            if size < 0:
                raise ValueError(f"part size at {list(exp)} is negative")
        return self

    @property
    def var_count(self) -> Optional[int]:
        return len(next(iter(self.parts))) if self.parts else None

    def to_series(self, bounds: Sequence[int]) -> TruncatedSeries:
        """1 + sum_i a_i t^i over the integers, truncated to ``bounds``."""
        bounds = tuple(bounds)
        self._check_width(bounds)
        coeffs = {(0,) * len(bounds): 1}
        for exp, size in self.parts.items():
            if all(e <= b for e, b in zip(exp, bounds)):
                coeffs[exp] = size
        return TruncatedSeries(INTEGERS, bounds, coeffs)

    def to_json(self) -> dict[str, Any]:
        return {
            "m": str(self.m_size),
            "parts": [{"exp": list(e), "val": str(v)} for e, v in sorted(self.parts.items())],
        }

    def _check_width(self, n: Sequence[int]) -> None:
        if self.var_count is not None and len(n) != self.var_count:
            raise ShapeMismatchError(f"exponent {list(n)} does not match parts in {self.var_count} variables")


def _relevant_parts(data: FiniteCoefficientData, n: Sequence[int]) -> list[tuple[tuple[int, ...], int]]:
    return [(e, a) for e, a in sorted(data.parts.items()) if a > 0 and all(x <= y for x, y in zip(e, n))]


def _multiplicity_vectors(parts: list[tuple[tuple[int, ...], int]], n: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All k with sum_i k_i * i = n."""
    if not parts:
        if not any(n):
            yield ()
        return
    (exp, _), rest = parts[0], parts[1:]
    k, remaining = 0, n
    while all(r >= 0 for r in remaining):
        for tail in _multiplicity_vectors(rest, remaining):
            yield (k,) + tail
        k += 1
        remaining = tuple(r - e for r, e in zip(remaining, exp))


def _search_size(parts: list[tuple[tuple[int, ...], int]], n: tuple[int, ...]) -> int:
    size = 1
    for exp, _ in parts:
        size *= 1 + min(x // e for x, e in zip(n, exp) if e > 0)
    return size


def config_count(data: FiniteCoefficientData, n: Sequence[int], naive: bool = False,
                 limit: Optional[int] = None) -> int:
    """Number of pairs (K, phi) of weight ``n``.

    The default walks occupancy vectors (how many points of M go to each part)
    and counts placements; ``naive=True`` enumerates the maps M -> {empty} + A
    directly.

    Raises:
        GuardExceededError: If the search space exceeds ``limit`` (CONFIG_SEARCH_LIMIT by default).
    """
    n = tuple(n)
    data._check_width(n)
    limit = limit or settings.CONFIG_SEARCH_LIMIT
    parts = _relevant_parts(data, n)
    if naive:
        return _config_count_naive(data.m_size, parts, n, limit)

    search = _search_size(parts, n)
    if search > limit:
        raise GuardExceededError(f"configuration search space {search} is above the limit {limit}")
    total = 0
    for ks in _multiplicity_vectors(parts, n):
        if sum(ks) > data.m_size:
            continue
        free, placements = data.m_size, 1
        for k, (_, a) in zip(ks, parts):
            placements *= math.comb(free, k) * a ** k
            free -= k
        total += placements
    return total


def _config_count_naive(m: int, parts: list[tuple[tuple[int, ...], int]], n: tuple[int, ...], limit: int) -> int:
    # one label per element of the disjoint union, 0 meaning "not in K"
    weights = [exp for exp, a in parts for _ in range(a)]
    search = (1 + len(weights)) ** m
    if search > limit:
        raise GuardExceededError(f"naive configuration search space {search} is above the limit {limit}")
    zero = (0,) * len(n)
    count = 0
    for labels in itertools.product(range(len(weights) + 1), repeat=m):
        total = zero
        for label in labels:
            if label:
                total = tuple(x + y for x, y in zip(total, weights[label - 1]))
        if total == n:
            count += 1
    return count


def multinomial_coefficient(data: FiniteCoefficientData, n: Sequence[int]) -> int:
    """sum over k with sum k_i i = n of m! / ((m - |k|)! prod k_i!) * prod a_i^k_i."""
    n = tuple(n)
    data._check_width(n)
    m = data.m_size
    parts = _relevant_parts(data, n)
    total = 0
    for ks in _multiplicity_vectors(parts, n):
        used = sum(ks)
        if used > m:
            continue
        term = math.factorial(m) // math.factorial(m - used)
        denominator = math.prod(math.factorial(k) for k in ks)
        weight = math.prod(a ** k for k, (_, a) in zip(ks, parts))
        total += term // denominator * weight
    return total


class ConfigMismatch(BaseModel):
    exponent: list[int]
    config_count: str
    multinomial: str
    engine: str


class CrossCheckReport(BaseModel):
    """Agreement of the configuration count, the closed multinomial sum and the engine power."""
    m: str
    bounds: list[int]
    checked: int = 0
    passed: bool = True
    mismatch: Optional[ConfigMismatch] = None


def cross_check(data: FiniteCoefficientData, bounds: Sequence[int], naive: bool = False,
                limit: Optional[int] = None) -> CrossCheckReport:
    """Compare the three counts at every exponent inside ``bounds``; stops at the first mismatch."""
    bounds = tuple(bounds)
    engine = power(data.to_series(bounds), data.m_size)
    report = CrossCheckReport(m=str(data.m_size), bounds=list(bounds))
    for n in graded_lex_exponents(bounds):
        counted = config_count(data, n, naive=naive, limit=limit)
        closed = multinomial_coefficient(data, n)
        coefficient = engine.coefficient(n)
        report.checked += 1
        if not counted == closed == coefficient:
            report.passed = False
            report.mismatch = ConfigMismatch(
                exponent=list(n), config_count=str(counted), multinomial=str(closed), engine=str(coefficient)
            )
            logger.warning(f"Configuration cross-check failed at {n}: {counted}, {closed}, {coefficient}")
            break
    return report


def random_coefficient_data(rng: Any, m_max: int = 5, var_count: int = 1, exp_max: int = 3,
                            size_max: int = 2) -> FiniteCoefficientData:
    """Small random data for the randomized cross-check suite."""
    parts = {}
    for exp in graded_lex_exponents((exp_max,) * var_count)[1:]:
        if rng.random() < 0.4:
            parts[exp] = rng.randint(0, size_max)
    return FiniteCoefficientData(m=rng.randint(0, m_max), parts=parts)
