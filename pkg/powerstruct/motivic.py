"""
Generating-series combinators for zero-dimensional subschemes.

Local punctual series are inputs: the module supplies the curve case (every
coefficient is a point) and the surface Hilbert-scheme product
prod_k (1 - L^(k-1) t^k)^(-1); anything else comes in as LocalSeriesData.
Global series are powers of local ones with the class of the variety as exponent.
"""
from __future__ import annotations

import logging
from typing import Any, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .exceptions import MissingLocalDataError, ShapeMismatchError
from .models import series_from_json, series_to_json
from .power import power
from .rings import MOTIVIC, MotivicClass
from .series import (
    TruncatedSeries,
    graded_lex_exponents,
    map_coefficients,
    mul,
    sigma_series,
    substitute_scaled,
    truncate,
)

logger = logging.getLogger(__name__)


def _coerce_series(value: Any) -> Any:
    if value is None or isinstance(value, TruncatedSeries):
        return value
    return series_from_json(value, MOTIVIC)


def _scale(a: TruncatedSeries, c: MotivicClass) -> TruncatedSeries:
    return map_coefficients(a, lambda v: c * v, a.ring)


class LocalSeriesData(BaseModel):
    """Punctual series of A^d at the origin used by the global combinators."""
    dimension: int = Field(..., gt=0)
    hilb_local: TruncatedSeries = Field(..., alias="hilbLocal")
    nested_local: Optional[TruncatedSeries] = Field(default=None, alias="nestedLocal")
    pair_local: Optional[TruncatedSeries] = Field(default=None, alias="pairLocal")

    model_config = ConfigDict(
        populate_by_name=True,
        arbitrary_types_allowed=True,
    )

    @field_validator("hilb_local", "nested_local", "pair_local", mode="before")
    @classmethod
    def parse_series(cls, v: Any) -> Any:
        """Accept series objects or their JSON form."""
        return _coerce_series(v)

    @field_validator("hilb_local")
    @classmethod
    def validate_hilb_local(cls, v: TruncatedSeries) -> TruncatedSeries:
        if v.var_count != 1:
            raise ValueError("hilbLocal must be a one-variable series")
        if not v.has_unit_constant():
            raise ValueError("hilbLocal must have constant term one")
        return v

    @field_validator("nested_local")
    @classmethod
    def validate_nested_local(cls, v: Optional[TruncatedSeries]) -> Optional[TruncatedSeries]:
        if v is None:
            return v
        if not v.has_unit_constant():
            raise ValueError("nestedLocal must have constant term one")
        for exp, _ in v.items():
            if any(a > b for a, b in zip(exp, exp[1:])):
                raise ValueError(f"nestedLocal has a coefficient at {exp}, which is not non-decreasing")
        return v

    @field_validator("pair_local")
    @classmethod
    def validate_pair_local(cls, v: Optional[TruncatedSeries]) -> Optional[TruncatedSeries]:
        if v is not None and v.var_count != 1:
            raise ValueError("pairLocal must be a one-variable series")
        return v

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"dimension": self.dimension, "hilbLocal": series_to_json(self.hilb_local)}
        if self.nested_local is not None:
            out["nestedLocal"] = series_to_json(self.nested_local)
        if self.pair_local is not None:
            out["pairLocal"] = series_to_json(self.pair_local)
        return out


# Monomials in (t1, t2, t3) whose t0-series make up the nested package
SLOT_MONOMIALS: dict[str, tuple[int, int, int]] = {
    "hilb": (0, 0, 0),
    "f": (1, 0, 0),
    "f_prime": (0, 1, 0),
    "t": (1, 1, 0),
    "z_pair": (0, 0, 1),
    "z_1pair": (1, 0, 1),
    "g": (0, 1, 1),
    "f_pair": (1, 1, 1),
}


class NestedPackage(BaseModel):
    """The eight t0-series read off the t1, t2, t3 monomials of the global nested series."""
    hilb: TruncatedSeries
    f: TruncatedSeries
    f_prime: TruncatedSeries
    t: TruncatedSeries
    z_pair: TruncatedSeries
    z_1pair: TruncatedSeries
    g: TruncatedSeries
    f_pair: TruncatedSeries

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def validate_f_slots(self) -> "NestedPackage":
        """The t1 and t2 slots both count pairs (point, subscheme through it)."""
        if self.f != self.f_prime:
            raise ValueError("the t1 and t2 slots of the nested package differ")
        return self

    def slots(self) -> dict[str, TruncatedSeries]:
        return {name: getattr(self, name) for name in SLOT_MONOMIALS}


# ---------------------------------------------------------------------------
# local series
# ---------------------------------------------------------------------------

def kapranov_zeta(a: MotivicClass, order: int) -> TruncatedSeries:
    """zeta_X(t) = 1 + [X] t + [S^2 X] t^2 + ... for the class ``a``."""
    return sigma_series(MOTIVIC, a, order)


def hilb_local_curve(order: int) -> TruncatedSeries:
    """Punctual Hilbert series of a smooth curve: 1/(1 - t)."""
    return sigma_series(MOTIVIC, MOTIVIC.one, order)


def hilb_local_surface(order: int) -> TruncatedSeries:
    """Punctual Hilbert series of a smooth surface: prod_{k>=1} (1 - L^(k-1) t^k)^(-1)."""
    geometric = sigma_series(MOTIVIC, MOTIVIC.one, order)
    result = TruncatedSeries.one(MOTIVIC, (order,))
    for k in range(1, order + 1):
        result = mul(result, substitute_scaled(geometric, MotivicClass.lefschetz(k - 1), (k,), (order,)))
    return result


def pair_local_surface(order: int) -> TruncatedSeries:
    """Candidate punctual incidence series sum_k [Z^(k-1,k)_{A^2,0}] t^k = t/(1 - L t) * hilb_local_surface.

    It is the local series for which the t3 slot of :func:`cheah_main` agrees with
    :func:`incidence_series` on surfaces.
    """
    prefactor = TruncatedSeries(MOTIVIC, (order,), {
        (j + 1,): MotivicClass.lefschetz(j) for j in range(order)
    })
    return mul(prefactor, hilb_local_surface(order))


def nested_d1_local(r: int, bounds: Sequence[int]) -> TruncatedSeries:
    """Punctual nested series of a curve: every non-decreasing n has coefficient one."""
    bounds = tuple(bounds)
    if len(bounds) != r:
        raise ShapeMismatchError(f"depth {r} needs {r} bounds, got {bounds}")
    coeffs = {
        exp: MOTIVIC.one for exp in graded_lex_exponents(bounds)
        if all(a <= b for a, b in zip(exp, exp[1:]))
    }
    return TruncatedSeries(MOTIVIC, bounds, coeffs)


def local_data_for_dimension(dimension: int, order: int) -> LocalSeriesData:
    """The local data this module can supply itself (curves and surfaces)."""
    if dimension == 1:
        return LocalSeriesData(dimension=1, hilb_local=hilb_local_curve(order), pair_local=None)
    if dimension == 2:
        return LocalSeriesData(dimension=2, hilb_local=hilb_local_surface(order),
                               pair_local=pair_local_surface(order))
    raise MissingLocalDataError(f"no built-in local series for dimension {dimension}; supply them as data")


# ---------------------------------------------------------------------------
# global series
# ---------------------------------------------------------------------------

def hilb_global(x: MotivicClass, local: TruncatedSeries, order: int) -> TruncatedSeries:
    """Generating series of Hilbert schemes of points: (local series)^[X]."""
    return power(truncate(local, (order,)), x)


def goettsche_series(x: MotivicClass, order: int) -> TruncatedSeries:
    """Hilbert schemes of points on a smooth surface of class ``x``."""
    return hilb_global(x, hilb_local_surface(order), order)


def nested_global(x: MotivicClass, local: TruncatedSeries, bounds: Optional[Sequence[int]] = None) -> TruncatedSeries:
    """Generating series of nested Hilbert schemes: (local nested series)^[X]."""
    if bounds is not None:
        local = truncate(local, bounds)
    return power(local, x)


def build_cheah_local(local: LocalSeriesData, order: int) -> TruncatedSeries:
    """The four-variable local series f_d(t0, t1, t2, t3) with bounds (order, 1, 1, 1).

    Built from the punctual Hilbert coefficients H_k and incidence coefficients
    P_k = [Z^(k-1,k)_{A^d,0}] (the constant term of pairLocal is ignored).
    """
    if local.pair_local is None:
        raise MissingLocalDataError("the nested package needs pairLocal data")
    hilb = truncate(local.hilb_local, (order,))
    pair = truncate(local.pair_local, (order,))
    coeffs: dict[tuple[int, ...], MotivicClass] = {}

    def place(k: int, markers: tuple[int, int, int], value: MotivicClass) -> None:
        if value:
            coeffs[(k,) + markers] = value

    for k in range(order + 1):
        h, p = hilb.coefficient(k), pair.coefficient(k)
        place(k, (0, 0, 0), h)
        if k >= 1:
            place(k, (0, 0, 1), p)
            place(k, (0, 1, 0), h)
            place(k, (0, 1, 1), p)
            place(k, (1, 0, 0), h)
            place(k, (1, 1, 0), h)
        if k >= 2:
            place(k, (1, 0, 1), p)
            place(k, (1, 1, 1), p)
    return TruncatedSeries(MOTIVIC, (order, 1, 1, 1), coeffs)


def cheah_main(local: LocalSeriesData, x: MotivicClass, order: int) -> NestedPackage:
    """The nested package (f_d)^[X] mod (t1^2, t2^2, t3^2), split into its eight t0-series.

    Raises:
        MissingLocalDataError: If ``local`` has no pairLocal series.
    """
    f = build_cheah_local(local, order)
    global_series = power(f, x)
    logger.debug(f"Nested package for [X] = {x} computed to order {order}")
    slots = {}
    for name, markers in SLOT_MONOMIALS.items():
        slots[name] = TruncatedSeries(MOTIVIC, (order,), {
            (n,): global_series.coefficient((n,) + markers) for n in range(order + 1)
        })
    return NestedPackage(**slots)


def incidence_series(s: MotivicClass, order: int) -> TruncatedSeries:
    """sum_n [Z^(n-1,n)_S] t^n = [S] t/(1 - L t) * (prod_k (1 - L^(k-1) t^k)^(-1))^[S]."""
    prefactor = TruncatedSeries(MOTIVIC, (order,), {
        (j + 1,): s * MotivicClass.lefschetz(j) for j in range(order)
    })
    return mul(prefactor, power(hilb_local_surface(order), s))


def li_qin_series(s: MotivicClass, x: MotivicClass, c: MotivicClass, local: LocalSeriesData,
                  m_local: TruncatedSeries, order: int) -> TruncatedSeries:
    """[S] * (hilbLocal)^([X] - [C]) * (mLocal)^[C] for a curve fibration X -> S with fibre C."""
    hilb_part = power(truncate(local.hilb_local, (order,)), x - c)
    fibre_part = power(truncate(m_local, (order,)), c)
    return _scale(mul(hilb_part, fibre_part), s)
