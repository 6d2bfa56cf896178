"""
Exact coefficient rings and their pre-lambda data.

Three rings are provided:

* the integers (plain ``int``), with sigma_k(t) = (1 - t)^(-k);
* :class:`MotivicClass`, finite sums ``sum c_e L^e`` with rational exponents,
  a formal surrogate for classes in the Grothendieck ring with L^(1/m) adjoined,
  with the Kapranov sigma ``prod_e (1 - L^e t)^(-c_e)``;
* :class:`EPolynomial`, Hodge-Deligne polynomials ``sum e^{p,q} u^p v^q`` with
  rational exponents and sigma ``prod_{p,q} (1 - u^p v^q t)^(-e^{p,q})``.

Ring elements are immutable and carry the ring operations as Python operators.
The :class:`PreLambdaRing` objects ``INTEGERS``, ``MOTIVIC`` and ``HODGE`` bundle
the zero, the one, coercion and sigma for the series engine.
"""
from __future__ import annotations

import logging
import re
from abc import ABC, abstractmethod
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Any, Iterable, Mapping, Optional, Union

import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .config import settings
from .exceptions import ContractError, ParseError

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or ``'p/q'`` string to an exact Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"cannot read {value!r} as an exact rational")


def format_fraction(value: Fraction) -> str:
    """Render a rational as ``'p/q'``, always with a denominator."""
    return f"{value.numerator}/{value.denominator}"


class _SparseTerms:
    """Canonical finite sum of integer multiples of monomials.

    Terms are kept sorted with no zero coefficient, so equality is structural.
    Subclasses fix the monomial key type through ``_normalize_key``,
    ``_add_keys`` and ``_scale_key``.
    """

    __slots__ = ("_terms", "_hash")
    _ZERO_KEY: Any = None

    def __init__(self, terms: Optional[Union[Mapping[Any, int], Iterable[tuple[Any, int]]]] = None):
        acc: dict[Any, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for key, coeff in items:
                if isinstance(coeff, bool) or not isinstance(coeff, int):
                    raise TypeError(f"coefficients must be integers, got {coeff!r}")
                key = self._normalize_key(key)
                acc[key] = acc.get(key, 0) + coeff
        self._terms = tuple(sorted((k, c) for k, c in acc.items() if c))
        self._hash: Optional[int] = None

    @classmethod
    def _from_dict(cls, acc: Mapping[Any, int]):
        obj = cls.__new__(cls)
        obj._terms = tuple(sorted((k, c) for k, c in acc.items() if c))
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value: int):
        return cls._from_dict({cls._ZERO_KEY: value})

    @staticmethod
    def _normalize_key(key: Any) -> Any:
        raise NotImplementedError

    @staticmethod
    def _add_keys(a: Any, b: Any) -> Any:
        raise NotImplementedError

    @staticmethod
    def _scale_key(key: Any, j: int) -> Any:
        raise NotImplementedError

    @property
    def terms(self) -> tuple[tuple[Any, int], ...]:
        """Sorted ``(key, coefficient)`` pairs with nonzero coefficients."""
        return self._terms

    def coefficient(self, key: Any) -> int:
        key = self._normalize_key(key)
        for k, c in self._terms:
            if k == key:
                return c
        return 0

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self._terms[0][0] == self._ZERO_KEY)

    def _coerce(self, other: Any):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return self.constant(other)
        return None

    def __add__(self, other: Any):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc = dict(self._terms)
        for k, c in other._terms:
            acc[k] = acc.get(k, 0) + c
        return self._from_dict(acc)

    __radd__ = __add__

    def __neg__(self):
        return self._from_dict({k: -c for k, c in self._terms})

    def __sub__(self, other: Any):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        acc: dict[Any, int] = {}
        add_keys = self._add_keys
        for k1, c1 in self._terms:
            for k2, c2 in other._terms:
                k = add_keys(k1, k2)
                acc[k] = acc.get(k, 0) + c1 * c2
        return self._from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            # Only units (signed monomials) have inverses in these rings
            if len(self._terms) == 1 and self._terms[0][1] in (1, -1):
                key, coeff = self._terms[0]
                return self._from_dict({self._scale_key(key, n): coeff ** -n})
            raise ContractError(f"{self} is not a unit; negative powers are undefined")
        result = self.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            if not self._terms:
                self._hash = hash(0)
            elif self.is_constant():
                # keep hash(c) == hash(constant(c)) since they compare equal
                self._hash = hash(self._terms[0][1])
            else:
                self._hash = hash((type(self).__name__, self._terms))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"{type(self).__name__}('{self}')"


def _format_power(symbol: str, exponent: Fraction) -> str:
    if exponent == 1:
        return symbol
    if exponent.denominator == 1 and exponent > 0:
        return f"{symbol}^{exponent.numerator}"
    return f"{symbol}^{{{exponent}}}"


def _join_terms(pieces: list[tuple[int, str]]) -> str:
    """Join ``(coefficient, monomial)`` pieces into ``1 + 2*L - L^{1/2}`` style text."""
    if not pieces:
        return "0"
    out = []
    for i, (coeff, mono) in enumerate(pieces):
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            out.append(f"-{body}" if sign == "-" else body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


class MotivicClass(_SparseTerms):
    """Exact finite sum ``sum c_e L^e`` with rational exponents e and integer coefficients."""

    __slots__ = ()
    _ZERO_KEY = Fraction(0)

    @staticmethod
    def _normalize_key(key: Any) -> Fraction:
        return as_fraction(key)

    @staticmethod
    def _add_keys(a: Fraction, b: Fraction) -> Fraction:
        return a + b

    @staticmethod
    def _scale_key(key: Fraction, j: int) -> Fraction:
        return key * j

    @classmethod
    def lefschetz(cls, exponent: RationalLike = 1, coeff: int = 1) -> "MotivicClass":
        """The class ``coeff * L^exponent``."""
        return cls._from_dict({as_fraction(exponent): coeff})

    def euler(self) -> int:
        """Image under L -> 1."""
        return sum(c for _, c in self._terms)

    def hodge(self) -> "EPolynomial":
        """Image under L -> uv."""
        return EPolynomial._from_dict({(e, e): c for e, c in self._terms})

    def substitute_lefschetz(self, value: int) -> Fraction:
        """Evaluate at L = value (a nonzero integer); exact rational result.

        Only meaningful when every exponent is an integer.
        """
        if any(e.denominator != 1 for e, _ in self._terms):
            raise ContractError("fractional powers of L cannot be evaluated at an integer")
        return sum((Fraction(value) ** int(e) * c for e, c in self._terms), Fraction(0))

    def __str__(self) -> str:
        return _join_terms([(c, "" if e == 0 else _format_power("L", e)) for e, c in self._terms])


class EPolynomial(_SparseTerms):
    """Hodge-Deligne polynomial ``sum e^{p,q} u^p v^q`` with rational exponents."""

    __slots__ = ()
    _ZERO_KEY = (Fraction(0), Fraction(0))

    @staticmethod
    def _normalize_key(key: Any) -> tuple[Fraction, Fraction]:
        p, q = key
        return (as_fraction(p), as_fraction(q))

    @staticmethod
    def _add_keys(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
        return (a[0] + b[0], a[1] + b[1])

    @staticmethod
    def _scale_key(key: tuple[Fraction, Fraction], j: int) -> tuple[Fraction, Fraction]:
        return (key[0] * j, key[1] * j)

    @classmethod
    def uv(cls, exponent: RationalLike = 1, coeff: int = 1) -> "EPolynomial":
        """The polynomial ``coeff * (uv)^exponent``."""
        e = as_fraction(exponent)
        return cls._from_dict({(e, e): coeff})

    def evaluate_at_one(self) -> int:
        """Value at u = v = 1 (the Euler characteristic)."""
        return sum(c for _, c in self._terms)

    def hodge_numbers(self) -> dict[tuple[Fraction, Fraction], int]:
        return dict(self._terms)

    def __str__(self) -> str:
        pieces = []
        for (p, q), c in self._terms:
            mono = ""
            if p == q and p != 0:
                mono = _format_power("(uv)", p)
            else:
                if p != 0:
                    mono += _format_power("u", p)
                if q != 0:
                    mono += ("*" if mono else "") + _format_power("v", q)
            pieces.append((c, mono))
        return _join_terms(pieces)


# ---------------------------------------------------------------------------
# sigma providers
# ---------------------------------------------------------------------------

def _inverse_binomial_coefficient(c: int, j: int) -> int:
    """Coefficient of t^j in (1 - t)^(-c)."""
    if j == 0:
        return 1
    if c >= 0:
        return comb(c + j - 1, j)
    return (-1) ** j * comb(-c, j)


def _check_order(order: int) -> None:
    if isinstance(order, bool) or not isinstance(order, int) or order < 0:
        raise ContractError(f"truncation order must be a non-negative integer, got {order!r}")


@lru_cache(maxsize=settings.SIGMA_CACHE_SIZE)
def sigma_int(k: int, order: int) -> tuple[int, ...]:
    """Coefficients of (1 - t)^(-k) up to t^order.

    For k < 0 this is the polynomial (1 - t)^|k|, truncated.
    """
    _check_order(order)
    return tuple(_inverse_binomial_coefficient(k, j) for j in range(order + 1))


def _sigma_sparse(a: _SparseTerms, order: int) -> tuple:
    cls = type(a)
    one = cls.constant(1)
    zero = cls.constant(0)
    result = [one] + [zero] * order
    for key, c in a.terms:
        factor = [cls._from_dict({cls._scale_key(key, j): _inverse_binomial_coefficient(c, j)})
                  for j in range(order + 1)]
        product = [zero] * (order + 1)
        for i, ri in enumerate(result):
            if not ri:
                continue
            for j in range(order + 1 - i):
                if factor[j]:
                    product[i + j] = product[i + j] + ri * factor[j]
        result = product
    return tuple(result)


@lru_cache(maxsize=settings.SIGMA_CACHE_SIZE)
def sigma_motivic(a: MotivicClass, order: int) -> tuple[MotivicClass, ...]:
    """Kapranov zeta coefficients 1, [X], [S^2 X], ... of ``a`` up to t^order."""
    _check_order(order)
    return _sigma_sparse(a, order)


@lru_cache(maxsize=settings.SIGMA_CACHE_SIZE)
def sigma_epoly(p: EPolynomial, order: int) -> tuple[EPolynomial, ...]:
    """Coefficients of prod (1 - u^p v^q t)^(-e^{p,q}) up to t^order."""
    _check_order(order)
    return _sigma_sparse(p, order)


def euler_spec(a: MotivicClass) -> int:
    """Euler characteristic specialization: every power of L goes to 1."""
    return a.euler()


def hodge_spec(a: MotivicClass) -> EPolynomial:
    """Hodge-Deligne specialization: L^e goes to (uv)^e."""
    return a.hodge()


# ---------------------------------------------------------------------------
# ring objects
# ---------------------------------------------------------------------------

class PreLambdaRing(ABC):
    """A coefficient ring together with its pre-lambda structure.

    Elements support ``+``, unary ``-``, ``*`` and ``==``; the ring object supplies
    the constants, coercion of plain integers and the sigma series.
    """

    name: str = ""

    @property
    @abstractmethod
    def zero(self) -> Any: ...

    @property
    @abstractmethod
    def one(self) -> Any: ...

    @abstractmethod
    def contains(self, value: Any) -> bool: ...

    @abstractmethod
    def sigma(self, a: Any, order: int) -> tuple:
        """Coefficients of sigma_a(t) = 1 + a t + ... up to t^order."""

    def coerce(self, value: Any) -> Any:
        if self.contains(value):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return self.one * value
        raise ContractError(f"{value!r} is not an element of the {self.name} ring")

    def __repr__(self) -> str:
        return f"<{self.name} ring>"


class IntegerRing(PreLambdaRing):
    name = "int"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def contains(self, value: Any) -> bool:
        return isinstance(value, int) and not isinstance(value, bool)

    def sigma(self, a: int, order: int) -> tuple[int, ...]:
        return sigma_int(a, order)


class MotivicRing(PreLambdaRing):
    name = "motivic"
    _ZERO = MotivicClass()
    _ONE = MotivicClass.constant(1)

    @property
    def zero(self) -> MotivicClass:
        return self._ZERO

    @property
    def one(self) -> MotivicClass:
        return self._ONE

    def contains(self, value: Any) -> bool:
        return isinstance(value, MotivicClass)

    def coerce(self, value: Any) -> MotivicClass:
        if isinstance(value, str):
            return parse_class(value)
        return super().coerce(value)

    def sigma(self, a: MotivicClass, order: int) -> tuple[MotivicClass, ...]:
        return sigma_motivic(a, order)


class HodgeRing(PreLambdaRing):
    name = "hodge"
    _ZERO = EPolynomial()
    _ONE = EPolynomial.constant(1)

    @property
    def zero(self) -> EPolynomial:
        return self._ZERO

    @property
    def one(self) -> EPolynomial:
        return self._ONE

    def contains(self, value: Any) -> bool:
        return isinstance(value, EPolynomial)

    def sigma(self, a: EPolynomial, order: int) -> tuple[EPolynomial, ...]:
        return sigma_epoly(a, order)


INTEGERS = IntegerRing()
MOTIVIC = MotivicRing()
HODGE = HodgeRing()

RINGS: dict[str, PreLambdaRing] = {ring.name: ring for ring in (INTEGERS, MOTIVIC, HODGE)}


def get_ring(name: str) -> PreLambdaRing:
    try:
        return RINGS[name]
    except KeyError:
        raise ContractError(f"unknown ring {name!r}; expected one of {sorted(RINGS)}") from None


# ---------------------------------------------------------------------------
# class literals
# ---------------------------------------------------------------------------

_L = sp.Symbol("L")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)
# Integers, L, grouping and arithmetic only; nothing else ever reaches parse_expr.
_LITERAL_CHARS = re.compile(r"[0-9L\s+\-*/^(){}]+")


def parse_class(text: str) -> MotivicClass:
    """Parse a class literal such as ``"1+L+2*L^2-L^{-1}+L^{1/2}"``.

    Braces group exponents, ``^`` is a power. The expression is expanded with
    sympy and every resulting term must be an integer times a rational power of L.

    Raises:
        ParseError: If the text is not such an expression.
    """
    source = text.strip().replace("{", "(").replace("}", ")")
    if not source:
        raise ParseError("empty class literal")
    if not _LITERAL_CHARS.fullmatch(source):
        raise ParseError(f"class literal {text!r} may only contain integers, L, + - * / ^ and brackets")
    try:
        expr = parse_expr(source, local_dict={"L": _L}, transformations=_TRANSFORMATIONS)
        expr = sp.expand(sp.sympify(expr))
    except Exception as e:
        raise ParseError(f"cannot parse class literal {text!r}: {e}") from e

    if expr.free_symbols - {_L}:
        raise ParseError(f"class literal {text!r} may only use the symbol L")

    terms: dict[Fraction, int] = {}
    for term in sp.Add.make_args(expr):
        coeff, exponent = term.as_coeff_exponent(_L)
        if not (coeff.is_Integer and exponent.is_Rational):
            raise ParseError(f"term {term} of {text!r} is not an integer times a rational power of L")
        e = as_fraction(exponent)
        terms[e] = terms.get(e, 0) + int(coeff)
    result = MotivicClass(terms)
    logger.debug(f"Parsed class literal {text!r} as {result}")
    return result
