"""
Sparse multivariate power series truncated to a box, over any pre-lambda ring.

A series in r variables with bounds (N_1, ..., N_r) stores coefficients only for
exponent vectors n with n_i <= N_i. Box truncation is closed under products:
the coefficient at n of a product only depends on coefficients at exponents
that are componentwise <= n.

The unique factorization A(t) = prod_k (1 - t^k)^(-b_k) of a series with unit
constant term is computed by :func:`factorize` and inverted by :func:`assemble`.
"""
from __future__ import annotations

import logging
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Callable, Iterator, Mapping, Optional, Sequence

from .exceptions import InvalidSeriesError, NonUnitConstantError, ShapeMismatchError
from .rings import PreLambdaRing

logger = logging.getLogger(__name__)

ExponentVector = tuple[int, ...]
Bounds = tuple[int, ...]


def _check_bounds(bounds: Sequence[int]) -> Bounds:
    bounds = tuple(bounds)
    if not bounds:
        raise InvalidSeriesError("a series needs at least one variable")
    for n in bounds:
        if isinstance(n, bool) or not isinstance(n, int) or n < 0:
            raise InvalidSeriesError(f"truncation bounds must be non-negative integers, got {bounds}")
    return bounds


def in_box(exp: ExponentVector, bounds: Bounds) -> bool:
    return all(0 <= e <= n for e, n in zip(exp, bounds))


@lru_cache(maxsize=256)
def graded_lex_exponents(bounds: Bounds) -> tuple[ExponentVector, ...]:
    """All exponent vectors in the box, by total degree and then lexicographically."""
    exps: list[ExponentVector] = [()]
    for n in bounds:
        exps = [e + (i,) for e in exps for i in range(n + 1)]
    return tuple(sorted(exps, key=lambda e: (sum(e), e)))


class TruncatedSeries:
    """Immutable box-truncated power series with a sparse coefficient map."""

    __slots__ = ("ring", "bounds", "_coeffs")

    def __init__(self, ring: PreLambdaRing, bounds: Sequence[int],
                 coeffs: Optional[Mapping[Sequence[int], Any]] = None):
        self.ring = ring
        self.bounds = _check_bounds(bounds)
        acc: dict[ExponentVector, Any] = {}
        for exp, value in (coeffs or {}).items():
            exp = tuple(exp)
            if len(exp) != len(self.bounds) or any(isinstance(e, bool) or not isinstance(e, int) for e in exp):
                raise InvalidSeriesError(f"exponent {exp} does not match {len(self.bounds)} variables")
            if not in_box(exp, self.bounds):
                raise InvalidSeriesError(f"exponent {exp} lies outside the bounds {self.bounds}")
            value = ring.coerce(value)
            if value:
                acc[exp] = value
        self._coeffs = acc

    @classmethod
    def _raw(cls, ring: PreLambdaRing, bounds: Bounds, coeffs: dict[ExponentVector, Any]) -> "TruncatedSeries":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.bounds = bounds
        obj._coeffs = {e: c for e, c in coeffs.items() if c}
        return obj

    @classmethod
    def one(cls, ring: PreLambdaRing, bounds: Sequence[int]) -> "TruncatedSeries":
        bounds = _check_bounds(bounds)
        return cls._raw(ring, bounds, {(0,) * len(bounds): ring.one})

    @classmethod
    def zero(cls, ring: PreLambdaRing, bounds: Sequence[int]) -> "TruncatedSeries":
        return cls._raw(ring, _check_bounds(bounds), {})

    @classmethod
    def from_list(cls, ring: PreLambdaRing, values: Sequence[Any], order: Optional[int] = None) -> "TruncatedSeries":
        """One-variable series with coefficients ``values[j]`` at t^j, truncated at ``order``."""
        if order is None:
            order = len(values) - 1
        return cls(ring, (order,), {(j,): v for j, v in enumerate(values) if j <= order})

    @property
    def var_count(self) -> int:
        return len(self.bounds)

    @property
    def coeffs(self) -> Mapping[ExponentVector, Any]:
        return MappingProxyType(self._coeffs)

    def coefficient(self, exp: Sequence[int] | int) -> Any:
        if isinstance(exp, int):
            exp = (exp,)
        return self._coeffs.get(tuple(exp), self.ring.zero)

    @property
    def constant_term(self) -> Any:
        return self.coefficient((0,) * self.var_count)

    def items(self) -> Iterator[tuple[ExponentVector, Any]]:
        """Nonzero coefficients in graded-lex order."""
        return iter(sorted(self._coeffs.items(), key=lambda item: (sum(item[0]), item[0])))

    def to_list(self) -> list[Any]:
        """Dense coefficient list of a one-variable series."""
        if self.var_count != 1:
            raise ShapeMismatchError("to_list needs a one-variable series")
        return [self.coefficient((j,)) for j in range(self.bounds[0] + 1)]

    def has_unit_constant(self) -> bool:
        return self.constant_term == self.ring.one

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.ring is other.ring and self.bounds == other.bounds
                and self._coeffs == other._coeffs)

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return add(self, other)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return sub(self, other)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries._raw(self.ring, self.bounds, {e: -c for e, c in self._coeffs.items()})

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return mul(self, other)

    def __repr__(self) -> str:
        terms = ", ".join(f"{e}: {c}" for e, c in self.items())
        return f"TruncatedSeries({self.ring.name}, bounds={self.bounds}, {{{terms}}})"


class Factorization:
    """Exponents b_k of A(t) = prod_k (1 - t^k)^(-b_k), keyed by nonzero k within bounds."""

    __slots__ = ("ring", "bounds", "_exps")

    def __init__(self, ring: PreLambdaRing, bounds: Sequence[int], exps: Optional[Mapping[Sequence[int], Any]] = None):
        self.ring = ring
        self.bounds = _check_bounds(bounds)
        acc: dict[ExponentVector, Any] = {}
        for k, b in (exps or {}).items():
            k = tuple(k)
            if len(k) != len(self.bounds) or not any(k) or not in_box(k, self.bounds):
                raise InvalidSeriesError(f"factor exponent {k} must be nonzero and within {self.bounds}")
            b = ring.coerce(b)
            if b:
                acc[k] = b
        self._exps = acc

    @property
    def exps(self) -> Mapping[ExponentVector, Any]:
        return MappingProxyType(self._exps)

    def scaled(self, m: Any) -> "Factorization":
        """The factorization with every exponent multiplied by ``m``."""
        m = self.ring.coerce(m)
        return Factorization(self.ring, self.bounds, {k: b * m for k, b in self._exps.items()})

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Factorization):
            return NotImplemented
        return self.ring is other.ring and self.bounds == other.bounds and self._exps == other._exps

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        terms = ", ".join(f"{k}: {b}" for k, b in sorted(self._exps.items(), key=lambda i: (sum(i[0]), i[0])))
        return f"Factorization({self.ring.name}, bounds={self.bounds}, {{{terms}}})"


def _check_same_shape(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.ring is not b.ring:
        raise ShapeMismatchError(f"series over different rings: {a.ring.name} and {b.ring.name}")
    if a.bounds != b.bounds:
        raise ShapeMismatchError(f"series bounds differ: {a.bounds} and {b.bounds}")


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    _check_same_shape(a, b)
    acc = dict(a._coeffs)
    for e, c in b._coeffs.items():
        acc[e] = acc[e] + c if e in acc else c
    return TruncatedSeries._raw(a.ring, a.bounds, acc)


def sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return add(a, -b)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product of two series with the same ring and bounds, truncated to the box."""
    _check_same_shape(a, b)
    bounds = a.bounds
    acc: dict[ExponentVector, Any] = {}
    for e1, c1 in a._coeffs.items():
        for e2, c2 in b._coeffs.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            if not all(x <= n for x, n in zip(e, bounds)):
                continue
            p = c1 * c2
            acc[e] = acc[e] + p if e in acc else p
    return TruncatedSeries._raw(a.ring, bounds, acc)


def _require_unit_constant(a: TruncatedSeries) -> None:
    if not a.has_unit_constant():
        raise NonUnitConstantError(
            f"constant term {a.constant_term} is not the {a.ring.name} one; "
            "only series in 1 + (t) are accepted"
        )


def invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series with constant term one.

    Raises:
        NonUnitConstantError: If the constant term is not the ring one.
    """
    _require_unit_constant(a)
    ring = a.ring
    exps = graded_lex_exponents(a.bounds)
    nonconstant = [(e, c) for e, c in a._coeffs.items() if any(e)]
    inv: dict[ExponentVector, Any] = {exps[0]: ring.one}
    for n in exps[1:]:
        total = ring.zero
        for m, c in nonconstant:
            d = tuple(x - y for x, y in zip(n, m))
            if min(d) < 0:
                continue
            rest = inv.get(d)
            if rest is not None:
                total = total + c * rest
        if total:
            inv[n] = -total
    return TruncatedSeries._raw(ring, a.bounds, inv)


def _placement_order(k: ExponentVector, bounds: Bounds) -> int:
    """Largest j with j*k inside the box."""
    return min(n // ki for ki, n in zip(k, bounds) if ki > 0)


def substitute_scaled(a: TruncatedSeries, c: Any, k: Sequence[int],
                      bounds: Optional[Sequence[int]] = None) -> TruncatedSeries:
    """A(c * t^k) for a one-variable series A.

    The coefficient a_j lands at exponent j*k multiplied by c^j; anything beyond
    the target bounds is dropped. Target bounds default to ``A.bounds[0] * k``.

    Raises:
        InvalidSeriesError: If k is zero or A has more than one variable.
    """
    if a.var_count != 1:
        raise InvalidSeriesError("substitute_scaled takes a one-variable series")
    k = tuple(k)
    if not k or not any(k) or min(k) < 0:
        raise InvalidSeriesError(f"substitution exponent {k} must be a nonzero non-negative vector")
    if bounds is None:
        bounds = tuple(a.bounds[0] * ki for ki in k)
    bounds = _check_bounds(bounds)
    if len(bounds) != len(k):
        raise ShapeMismatchError(f"exponent {k} does not match target bounds {bounds}")
    ring = a.ring
    c = ring.coerce(c)
    top = min(_placement_order(k, bounds), a.bounds[0])
    acc: dict[ExponentVector, Any] = {}
    power = ring.one
    for j in range(top + 1):
        coeff = a._coeffs.get((j,))
        if coeff:
            acc[tuple(j * ki for ki in k)] = coeff * power
        power = power * c
    return TruncatedSeries._raw(ring, bounds, acc)


def scale_variables(a: TruncatedSeries, c: Any) -> TruncatedSeries:
    """A(c t_1, ..., c t_r): the coefficient at n picks up c^(n_1 + ... + n_r)."""
    ring = a.ring
    c = ring.coerce(c)
    top = sum(a.bounds)
    powers = [ring.one]
    for _ in range(top):
        powers.append(powers[-1] * c)
    return TruncatedSeries._raw(ring, a.bounds, {e: v * powers[sum(e)] for e, v in a._coeffs.items()})


def substitute_power(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """A(t_1^k, ..., t_r^k) truncated to the same bounds."""
    if k < 1:
        raise InvalidSeriesError(f"substitution power must be positive, got {k}")
    acc = {}
    for e, v in a._coeffs.items():
        target = tuple(k * x for x in e)
        if in_box(target, a.bounds):
            acc[target] = v
    return TruncatedSeries._raw(a.ring, a.bounds, acc)


def truncate(a: TruncatedSeries, bounds: Sequence[int]) -> TruncatedSeries:
    """Restrict to a smaller box."""
    bounds = _check_bounds(bounds)
    if len(bounds) != a.var_count or any(n > m for n, m in zip(bounds, a.bounds)):
        raise ShapeMismatchError(f"cannot truncate bounds {a.bounds} to {bounds}")
    return TruncatedSeries._raw(a.ring, bounds, {e: v for e, v in a._coeffs.items() if in_box(e, bounds)})


def map_coefficients(a: TruncatedSeries, fn: Callable[[Any], Any], ring: PreLambdaRing) -> TruncatedSeries:
    """Apply ``fn`` to every coefficient, producing a series over ``ring``."""
    return TruncatedSeries._raw(ring, a.bounds, {e: fn(v) for e, v in a._coeffs.items()})


def sigma_series(ring: PreLambdaRing, a: Any, order: int) -> TruncatedSeries:
    """sigma_a(t) as a one-variable series truncated at ``order``."""
    a = ring.coerce(a)
    return TruncatedSeries._raw(ring, (order,), {(j,): v for j, v in enumerate(ring.sigma(a, order))})


def _placed_sigma(ring: PreLambdaRing, b: Any, k: ExponentVector, bounds: Bounds) -> TruncatedSeries:
    """(1 - t^k)^(-b) expanded inside the box."""
    top = _placement_order(k, bounds)
    return TruncatedSeries._raw(
        ring, bounds, {tuple(j * ki for ki in k): v for j, v in enumerate(ring.sigma(b, top))}
    )


def factorize(a: TruncatedSeries) -> Factorization:
    """Exponents b_k with A(t) = prod_k (1 - t^k)^(-b_k) inside the box.

    Exponents are visited in graded-lex order. b_k is the coefficient at k of the
    running remainder, which is then divided by (1 - t^k)^(-b_k); that factor
    starts at t^k, so coefficients already visited stay untouched.

    Raises:
        NonUnitConstantError: If the constant term is not the ring one.
    """
    _require_unit_constant(a)
    ring, bounds = a.ring, a.bounds
    remainder = a
    exps: dict[ExponentVector, Any] = {}
    for k in graded_lex_exponents(bounds)[1:]:
        b = remainder._coeffs.get(k)
        if not b:
            continue
        exps[k] = b
        remainder = mul(remainder, _placed_sigma(ring, -b, k, bounds))
    logger.debug(f"Factorized {ring.name} series with bounds {bounds} into {len(exps)} factors")
    return Factorization(ring, bounds, exps)


def assemble(f: Factorization) -> TruncatedSeries:
    """The product prod_k (1 - t^k)^(-b_k) inside the box, expanded with the ring's sigma."""
    ring, bounds = f.ring, f.bounds
    result = TruncatedSeries.one(ring, bounds)
    for k, b in sorted(f.exps.items(), key=lambda item: (sum(item[0]), item[0])):
        result = mul(result, _placed_sigma(ring, b, k, bounds))
    return result


def ordinary_power(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """A^k for an integer k by repeated multiplication (inverse first when k < 0).

    Kept as an independent check of the power structure on integer exponents.
    """
    base = invert(a) if k < 0 else a
    result = TruncatedSeries.one(a.ring, a.bounds)
    for _ in range(abs(k)):
        result = mul(result, base)
    return result
