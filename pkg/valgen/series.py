"""
Series Module
Truncated generalized power series in t with rational exponents, the computable
fragment of k((t^Q)) used to define embedding valuations
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Mapping, Tuple, Union

from valgen.core_algebra import (
    INF,
    BivarPoly,
    FieldElement,
    FieldSpec,
    Poly,
    Value,
    as_bivariate,
    value_min,
)
from valgen.errors import FieldMismatch, ParseError, PrecisionExhausted, PreconditionError
from valgen.parsing import parse_series_terms, parse_squares

logger = logging.getLogger(__name__)

Exponent = Fraction


@dataclass(frozen=True)
class GenSeries:
    """Finitely supported series with an exclusive precision bound on trusted exponents"""

    field: FieldSpec
    support: Tuple[Tuple[Exponent, FieldElement], ...] = ()
    precision: Value = INF

    def __post_init__(self):
        precision = Value.of(self.precision)
        if precision.kind == "minus_infinity":
            raise PreconditionError("series precision cannot be -inf")
        merged: Dict[Fraction, FieldElement] = {}
        for exponent, c in self.support:
            e = Fraction(exponent)
            merged[e] = self.field.add(merged.get(e, self.field.zero), self.field.element(c))
        cleaned = tuple(
            sorted((e, c) for e, c in merged.items() if c != 0 and Value.of(e) < precision)
        )
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "support", cleaned)

    @classmethod
    def exact(cls, field: FieldSpec, terms: Mapping[Any, Any]) -> "GenSeries":
        return cls(field, tuple(terms.items()), INF)

    @classmethod
    def zero(cls, field: FieldSpec) -> "GenSeries":
        """The exact zero series"""
        return cls(field, (), INF)

    @classmethod
    def unknown(cls, field: FieldSpec, precision: Union[int, Fraction, Value]) -> "GenSeries":
        """Nothing known below the precision"""
        return cls(field, (), Value.of(precision))

    @classmethod
    def constant(cls, field: FieldSpec, c: FieldElement) -> "GenSeries":
        return cls(field, ((Fraction(0), c),), INF)

    @classmethod
    def monomial(cls, field: FieldSpec, exponent: Union[int, Fraction], c: FieldElement = 1) -> "GenSeries":
        return cls(field, ((Fraction(exponent), c),), INF)

    @classmethod
    def squares(cls, field: FieldSpec, precision: int) -> "GenSeries":
        """
        Truncation of t + t^4 + t^9 + ... keeping every exponent below the precision

        Args:
            field: Coefficient field
            precision: Exclusive bound on trusted exponents

        Returns:
            GenSeries with precision `precision`
        """
        terms = []
        i = 1
        while i * i < precision:
            terms.append((Fraction(i * i), 1))
            i += 1
        return cls(field, tuple(terms), Value.of(precision))

    @classmethod
    def parse(cls, text: str, field: FieldSpec) -> "GenSeries":
        """Parse a literal such as `t^(1) + t^(9/2)`, `1 + t` or `squares(17)`"""
        n = parse_squares(text)
        if n is not None:
            return cls.squares(field, n)
        terms, precision = parse_series_terms(text)
        try:
            support = tuple((e, field.element(c)) for e, c in terms)
        except PreconditionError as e:
            raise ParseError(f"Bad coefficient in series {text!r}", text=text) from e
        return cls(field, support, INF if precision is None else Value.of(precision))

    @property
    def is_exact(self) -> bool:
        return not self.precision.is_finite

    @property
    def is_exact_zero(self) -> bool:
        return self.is_exact and not self.support

    def lead(self) -> Value:
        """Smallest support exponent, or the precision when nothing is known"""
        return Value.of(self.support[0][0]) if self.support else self.precision

    def coefficient(self, exponent: Union[int, Fraction]) -> FieldElement:
        e = Fraction(exponent)
        if not Value.of(e) < self.precision:
            raise PrecisionExhausted(
                f"coefficient of t^({e}) is beyond precision {self.precision}",
                precision=self.precision,
            )
        for exp, c in self.support:
            if exp == e:
                return c
        return self.field.zero

    def scale(self, c: FieldElement) -> "GenSeries":
        if self.field.element(c) == 0:
            return GenSeries.zero(self.field)
        return GenSeries(self.field, tuple((e, self.field.mul(c, a)) for e, a in self.support), self.precision)

    def __add__(self, other: "GenSeries") -> "GenSeries":
        return series_add(self, other)

    def __sub__(self, other: "GenSeries") -> "GenSeries":
        return series_add(self, other.scale(self.field.neg(self.field.one)))

    def __mul__(self, other: "GenSeries") -> "GenSeries":
        return series_mul(self, other)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "terms": [[str(e), self.field.format_element(c)] for e, c in self.support],
            "precision": str(self.precision),
        }

    def __str__(self) -> str:
        pieces = []
        for e, c in self.support:
            negative = self.field.kind == "rationals" and c < 0
            magnitude = -c if negative else c
            if e == 0:
                body = self.field.format_element(magnitude)
            elif magnitude == 1:
                body = f"t^({e})"
            else:
                body = f"{self.field.format_element(magnitude)}*t^({e})"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        if self.precision.is_finite:
            order = f"O(t^({self.precision}))"
            pieces.append(f" + {order}" if pieces else order)
        return "".join(pieces) or "0"


def _check_fields(a: GenSeries, b: GenSeries) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"Series over {a.field} and {b.field}", left=a.field, right=b.field)


def series_add(a: GenSeries, b: GenSeries) -> GenSeries:
    """
    Add two series; the result is trusted below the smaller precision

    Args:
        a: First summand
        b: Second summand over the same field

    Returns:
        Sum with precision min(prec_a, prec_b)
    """
    _check_fields(a, b)
    precision = value_min([a.precision, b.precision])
    return GenSeries(a.field, a.support + b.support, precision)


def series_mul(a: GenSeries, b: GenSeries) -> GenSeries:
    """
    Multiply two series

    Args:
        a: First factor
        b: Second factor over the same field

    Returns:
        Product with precision min(prec_a + lead_b, prec_b + lead_a)
    """
    _check_fields(a, b)
    k = a.field
    precision = value_min([a.precision + b.lead(), b.precision + a.lead()])
    products: Dict[Fraction, FieldElement] = {}
    for e1, c1 in a.support:
        for e2, c2 in b.support:
            e = e1 + e2
            products[e] = k.add(products.get(e, k.zero), k.mul(c1, c2))
    return GenSeries(k, tuple(products.items()), precision)


def leading_exponent(a: GenSeries) -> Value:
    """
    The induced valuation of a series: its smallest exponent

    Args:
        a: Series

    Returns:
        Smallest support exponent, +inf for the exact zero series
    """
    if a.support:
        return Value.of(a.support[0][0])
    if a.is_exact:
        return INF
    raise PrecisionExhausted(
        f"no support below precision {a.precision}; leading exponent undetermined",
        precision=a.precision,
    )


def leading_coefficient(a: GenSeries) -> FieldElement:
    if a.support:
        return a.support[0][1]
    if a.is_exact:
        raise PreconditionError("the zero series has no leading coefficient")
    raise PrecisionExhausted(f"no support below precision {a.precision}", precision=a.precision)


def embed_eval(p: Union[Poly, BivarPoly], images: Mapping[str, GenSeries]) -> GenSeries:
    """
    Evaluate a polynomial at series images of its variables

    Args:
        p: Polynomial in x (Poly) or in x, y (BivarPoly)
        images: Series for each variable of p, keyed by `x` / `y`

    Returns:
        The image series, with precision propagated through each product and sum
    """
    bivariate = as_bivariate(p)
    k = bivariate.field
    needed = {"x"} if not bivariate.uses_y else {"x", "y"}
    if bivariate.is_constant:
        needed = set()
    missing = sorted(v for v in needed if v not in images)
    if missing:
        raise PreconditionError(f"no series image for {missing}", missing=missing)
    for name in needed:
        if images[name].field != k:
            raise FieldMismatch(f"image of {name} is over {images[name].field}, polynomial over {k}")

    powers: Dict[Tuple[str, int], GenSeries] = {}

    def power(name: str, n: int) -> GenSeries:
        if n == 0:
            return GenSeries.constant(k, 1)
        if (name, n) not in powers:
            powers[(name, n)] = series_mul(power(name, n - 1), images[name])
        return powers[(name, n)]

    total = GenSeries.zero(k)
    for (i, j), c in bivariate.terms:
        term = series_mul(power("x", i), power("y", j)) if j else power("x", i)
        total = series_add(total, term.scale(c))
    return total
