"""Pydantic models for the JSON formats read and written by the engine."""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic.functional_validators import BeforeValidator
from typing_extensions import Annotated

from .exceptions import InvalidSeriesError, ParseError
from .rings import EPolynomial, MotivicClass, PreLambdaRing, as_fraction, format_fraction, get_ring, parse_class
from .series import TruncatedSeries


def _decimal_string(value: Any) -> str:
    if isinstance(value, bool):
        raise ValueError("booleans are not integers")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return str(int(value.strip()))
    raise ValueError(f"expected an integer or decimal string, got {value!r}")


def _rational_string(value: Any) -> str:
    try:
        return format_fraction(as_fraction(value.strip() if isinstance(value, str) else value))
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ValueError(f"expected a rational 'p/q', got {value!r}") from e


# Integers and rationals travel as strings so arbitrary precision survives every consumer
DecimalStr = Annotated[str, BeforeValidator(_decimal_string)]
RationalStr = Annotated[str, BeforeValidator(_rational_string)]

RingName = Literal["int", "motivic", "hodge"]


class MotivicTerm(BaseModel):
    """One term c * L^e."""
    e: RationalStr
    c: DecimalStr


class MotivicClassModel(BaseModel):
    """JSON form of a MotivicClass."""
    terms: list[MotivicTerm] = Field(default_factory=list)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"terms": [{"e": "0/1", "c": "1"}, {"e": "1/2", "c": "-2"}]}
        }
    )

    def to_class(self) -> MotivicClass:
        return MotivicClass([(Fraction(t.e), int(t.c)) for t in self.terms])

    @classmethod
    def from_class(cls, a: MotivicClass) -> "MotivicClassModel":
        return cls(terms=[MotivicTerm(e=format_fraction(e), c=str(c)) for e, c in a.terms])


class EPolynomialTerm(BaseModel):
    """One term c * u^p v^q."""
    p: RationalStr
    q: RationalStr
    c: DecimalStr


class EPolynomialModel(BaseModel):
    """JSON form of an EPolynomial."""
    terms: list[EPolynomialTerm] = Field(default_factory=list)

    def to_polynomial(self) -> EPolynomial:
        return EPolynomial([((Fraction(t.p), Fraction(t.q)), int(t.c)) for t in self.terms])

    @classmethod
    def from_polynomial(cls, a: EPolynomial) -> "EPolynomialModel":
        return cls(terms=[
            EPolynomialTerm(p=format_fraction(p), q=format_fraction(q), c=str(c)) for (p, q), c in a.terms
        ])


def element_to_json(ring: PreLambdaRing, value: Any) -> Any:
    """JSON value of a ring element: decimal string, class object or E-polynomial object."""
    if ring.name == "int":
        return str(value)
    if ring.name == "motivic":
        return MotivicClassModel.from_class(value).model_dump()
    return EPolynomialModel.from_polynomial(value).model_dump()


def element_from_json(ring: PreLambdaRing, obj: Any) -> Any:
    """Inverse of :func:`element_to_json`; class literals are accepted for the motivic ring."""
    if ring.name == "int":
        return int(_decimal_string(obj))
    if ring.name == "motivic":
        if isinstance(obj, (str, int)) and not isinstance(obj, bool):
            return parse_class(str(obj))
        return MotivicClassModel.model_validate(obj).to_class()
    if isinstance(obj, (str, int)) and not isinstance(obj, bool):
        return EPolynomial.constant(int(_decimal_string(obj)))
    return EPolynomialModel.model_validate(obj).to_polynomial()


def default_var_names(count: int) -> list[str]:
    return ["t"] if count == 1 else [f"t{i + 1}" for i in range(count)]


class SeriesCoefficient(BaseModel):
    exp: list[int]
    val: Any


class SeriesModel(BaseModel):
    """JSON form of a TruncatedSeries; the constant term is always listed."""
    ring: RingName = "motivic"
    vars: list[str] = Field(default_factory=list)
    bounds: list[int] = Field(..., min_length=1)
    coeffs: list[SeriesCoefficient] = Field(default_factory=list)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "ring": "motivic",
                "vars": ["t"],
                "bounds": [2],
                "coeffs": [
                    {"exp": [0], "val": {"terms": [{"e": "0/1", "c": "1"}]}},
                    {"exp": [1], "val": {"terms": [{"e": "1/1", "c": "1"}]}},
                ],
            }
        }
    )

    @field_validator("bounds")
    @classmethod
    def validate_bounds(cls, v: list[int]) -> list[int]:
        if any(n < 0 for n in v):
            raise ValueError("bounds must be non-negative")
        return v

    @model_validator(mode="after")
    def validate_shape(self) -> "SeriesModel":
        if self.vars and len(self.vars) != len(self.bounds):
            raise ValueError(f"{len(self.vars)} variable names for {len(self.bounds)} bounds")
        for c in self.coeffs:
            if len(c.exp) != len(self.bounds):
                raise ValueError(f"exponent {c.exp} does not match {len(self.bounds)} variables")
        return self

    def to_series(self, ring: Optional[PreLambdaRing] = None) -> TruncatedSeries:
        ring = ring or get_ring(self.ring)
        coeffs: dict[tuple[int, ...], Any] = {}
        for c in self.coeffs:
            exp = tuple(c.exp)
            value = element_from_json(ring, c.val)
            coeffs[exp] = coeffs[exp] + value if exp in coeffs else value
        return TruncatedSeries(ring, self.bounds, coeffs)

    @classmethod
    def from_series(cls, s: TruncatedSeries, var_names: Optional[Sequence[str]] = None) -> "SeriesModel":
        constant = (0,) * s.var_count
        coeffs = [SeriesCoefficient(exp=list(constant), val=element_to_json(s.ring, s.constant_term))]
        coeffs += [
            SeriesCoefficient(exp=list(e), val=element_to_json(s.ring, v))
            for e, v in s.items() if e != constant
        ]
        return cls(
            ring=s.ring.name,
            vars=list(var_names) if var_names else default_var_names(s.var_count),
            bounds=list(s.bounds),
            coeffs=coeffs,
        )


def series_to_json(s: TruncatedSeries, var_names: Optional[Sequence[str]] = None) -> dict[str, Any]:
    return SeriesModel.from_series(s, var_names).model_dump()


def series_from_json(obj: Any, ring: Optional[PreLambdaRing] = None) -> TruncatedSeries:
    """Read a series document.

    Raises:
        ValidationError: If the document does not have the series shape.
        ParseError: If a coefficient lies outside the declared box.
    """
    model = SeriesModel.model_validate(obj)
    try:
        return model.to_series(ring)
    except InvalidSeriesError as e:
        raise ParseError(f"malformed series document: {e}") from e


def dumps(obj: Any) -> str:
    """Deterministic JSON text (terms are already sorted by the models)."""
    return json.dumps(obj, indent=2, ensure_ascii=False)
