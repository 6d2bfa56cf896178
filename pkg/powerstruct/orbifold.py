"""
Orbifold classes [X, G] and the generating series of the wreath products (X^n, G_n).

    sum_n [X^n, G_n] t^n = prod_{r>=1} (1 - L^((r-1)d/2) t^r)^(-[X, G])

Shifts are input data: an OrbifoldDatum lists, for every conjugacy class of G,
the classes of the quotients X^g_a / C(g) of fixed components together with
their shift numbers.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .models import element_from_json, element_to_json
from .rings import HODGE, INTEGERS, MOTIVIC, EPolynomial, MotivicClass, as_fraction, euler_spec, format_fraction, hodge_spec
from .series import TruncatedSeries, mul, scale_variables, sigma_series, substitute_scaled
from .wreath import FiniteGroupAction, count_orbits

logger = logging.getLogger(__name__)


class FixedComponent(BaseModel):
    """One fixed component: the class [X^g_a / C(g)] and its shift F^g_a."""
    component_class: MotivicClass = Field(..., alias="class")
    shift: Fraction = Fraction(0)

    model_config = ConfigDict(populate_by_name=True, arbitrary_types_allowed=True)

    @field_validator("component_class", mode="before")
    @classmethod
    def parse_class(cls, v: Any) -> Any:
        if isinstance(v, MotivicClass):
            return v
        return element_from_json(MOTIVIC, v)

    @field_validator("shift", mode="before")
    @classmethod
    def parse_shift(cls, v: Any) -> Fraction:
        try:
            return as_fraction(v)
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ValueError(f"shift must be a rational 'p/q', got {v!r}") from e

    def to_json(self) -> dict[str, Any]:
        return {"class": element_to_json(MOTIVIC, self.component_class), "shift": format_fraction(self.shift)}


class OrbifoldDatum(BaseModel):
    """Fixed-component data of a G-variety X of dimension d, G of order m.

    ``classes[0]`` belongs to the identity class and carries shift 0 throughout.
    """
    m: int = Field(..., gt=0)
    d: int = Field(..., gt=0)
    classes: list[list[FixedComponent]] = Field(..., min_length=1)

    @field_validator("m", "d", mode="before")
    @classmethod
    def parse_decimal(cls, v: Any) -> Any:
        return int(v) if isinstance(v, str) else v

    @model_validator(mode="after")
    def validate_shifts(self) -> "OrbifoldDatum":
        for c, components in enumerate(self.classes):
            for comp in components:
                if not 0 <= comp.shift < self.d:
                    raise ValueError(f"shift {comp.shift} outside [0, {self.d})")
                if (comp.shift * self.m).denominator != 1:
                    raise ValueError(f"shift {comp.shift} is not a multiple of 1/{self.m}")
                if c == 0 and comp.shift != 0:
                    raise ValueError("fixed components of the identity class have shift 0")
        return self

    def to_json(self) -> dict[str, Any]:
        return {
            "m": str(self.m),
            "d": str(self.d),
            "classes": [[comp.to_json() for comp in components] for components in self.classes],
        }


def orbifold_class(datum: OrbifoldDatum) -> MotivicClass:
    """[X, G] = sum_c sum_a [X^g_a / C(g)] L^(F^g_a)."""
    total = MOTIVIC.zero
    for components in datum.classes:
        for comp in components:
            total = total + comp.component_class * MotivicClass.lefschetz(comp.shift)
    return total


def orbifold_euler(datum: OrbifoldDatum) -> int:
    """chi(X, G)."""
    return euler_spec(orbifold_class(datum))


def orbifold_e_function(datum: OrbifoldDatum) -> EPolynomial:
    """E_orb(X, G; u, v): the image of [X, G] under L -> uv."""
    return hodge_spec(orbifold_class(datum))


def wreath_series(datum: OrbifoldDatum, order: int) -> TruncatedSeries:
    """prod_r sigma_[X,G](L^((r-1)d/2) t^r), truncated at ``order``."""
    x = orbifold_class(datum)
    result = TruncatedSeries.one(MOTIVIC, (order,))
    for r in range(1, order + 1):
        weight = MotivicClass.lefschetz(Fraction((r - 1) * datum.d, 2))
        result = mul(result, substitute_scaled(sigma_series(MOTIVIC, x, order // r), weight, (r,), (order,)))
    return result


def wreath_series_exponent_form(datum: OrbifoldDatum, order: int) -> TruncatedSeries:
    """prod_r (1 - (L^(d/2) t)^r)^(-L^(-d/2) [X, G]), the same series written with a rescaled variable."""
    half = Fraction(datum.d, 2)
    y = MotivicClass.lefschetz(-half) * orbifold_class(datum)
    result = TruncatedSeries.one(MOTIVIC, (order,))
    for r in range(1, order + 1):
        result = mul(result, substitute_scaled(sigma_series(MOTIVIC, y, order // r), MOTIVIC.one, (r,), (order,)))
    return scale_variables(result, MotivicClass.lefschetz(half))


def wreath_series_euler(chi: int, order: int) -> TruncatedSeries:
    """prod_r (1 - t^r)^(-chi) over the integers."""
    result = TruncatedSeries.one(INTEGERS, (order,))
    for r in range(1, order + 1):
        result = mul(result, substitute_scaled(sigma_series(INTEGERS, chi, order // r), 1, (r,), (order,)))
    return result


def wreath_series_hodge(datum: OrbifoldDatum, order: int) -> TruncatedSeries:
    """prod_r prod_{p,q} (1 - u^p v^q t^r (uv)^((r-1)d/2))^(-e^{p,q}(X, G)), built from E_orb directly."""
    e = orbifold_e_function(datum)
    result = TruncatedSeries.one(HODGE, (order,))
    for r in range(1, order + 1):
        weight = EPolynomial.uv(Fraction((r - 1) * datum.d, 2))
        result = mul(result, substitute_scaled(sigma_series(HODGE, e, order // r), weight, (r,), (order,)))
    return result


def euler_datum(action: FiniteGroupAction, d: int = 1) -> OrbifoldDatum:
    """The chi-level datum of a finite action.

    Every orbit of C(g) on X^g becomes a component of class one and shift zero,
    so only euler_spec of the resulting class is meaningful.
    """
    classes = []
    for members in action.conjugacy_classes:
        g = members[0]
        fixed = action.fixed_points(g)
        orbits = count_orbits(action.centralizer(g), fixed, action.apply) if fixed else 0
        classes.append([FixedComponent(component_class=MOTIVIC.one) for _ in range(orbits)])
    logger.debug(f"Extracted chi-level datum with {sum(map(len, classes))} components")
    return OrbifoldDatum(m=action.order, d=d, classes=classes)
