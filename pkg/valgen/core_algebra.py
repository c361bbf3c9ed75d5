"""
Core Algebra Module
Exact field arithmetic over Q and F_p, univariate and bivariate polynomials,
the value group Q ∪ {±inf}, and Q-expansions
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import isprime

from valgen.errors import FieldMismatch, NonMonicDivisor, ParseError, PreconditionError

logger = logging.getLogger(__name__)

FINITE = "finite"
PLUS_INFINITY = "plus_infinity"
MINUS_INFINITY = "minus_infinity"

_ORDER_RANK = {MINUS_INFINITY: -1, FINITE: 0, PLUS_INFINITY: 1}


@total_ordering
@dataclass(frozen=True, eq=False)
class Value:
    """Element of Q ∪ {+inf, -inf}; -inf is only the epsilon-of-a-constant sentinel"""

    kind: str
    q: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in _ORDER_RANK:
            raise ValueError(f"Unknown value kind: {self.kind}")
        if self.kind != FINITE and self.q != 0:
            object.__setattr__(self, "q", Fraction(0))

    @classmethod
    def of(cls, number: Union[int, Fraction, str, "Value"]) -> "Value":
        """Build a finite value from an int, a Fraction or a rational string"""
        if isinstance(number, Value):
            return number
        if isinstance(number, str):
            return cls.parse(number)
        return cls(FINITE, Fraction(number))

    @classmethod
    def parse(cls, text: str) -> "Value":
        """Parse `4`, `9/2`, `-1/3`, `inf` or `-inf`"""
        cleaned = str(text).strip()
        if cleaned in ("inf", "+inf", "oo"):
            return INF
        if cleaned == "-inf":
            return NEG_INF
        try:
            return cls(FINITE, Fraction(cleaned))
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Cannot parse value: {text!r}", text=text) from e

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    @property
    def num(self) -> int:
        return self.q.numerator

    @property
    def den(self) -> int:
        return self.q.denominator

    def _key(self) -> Tuple[int, Fraction]:
        return (_ORDER_RANK[self.kind], self.q)

    def __eq__(self, other: Any) -> bool:
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self.is_finite:
            return hash(self.q)
        return hash(self.kind)

    def __lt__(self, other: Any) -> bool:
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        return self._key() < other._key()

    def __add__(self, other: Any) -> "Value":
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        if MINUS_INFINITY in (self.kind, other.kind):
            raise PreconditionError("minus infinity is never an operand of addition")
        if PLUS_INFINITY in (self.kind, other.kind):
            return INF
        return Value(FINITE, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "Value":
        other = _coerce_value(other)
        if other is None:
            return NotImplemented
        if not other.is_finite or self.kind == MINUS_INFINITY:
            raise PreconditionError(f"Cannot subtract {other} from {self}")
        if self.kind == PLUS_INFINITY:
            return INF
        return Value(FINITE, self.q - other.q)

    def __mul__(self, scalar: Union[int, Fraction]) -> "Value":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if scalar < 0:
            raise PreconditionError("values are only scaled by nonnegative numbers")
        if not self.is_finite:
            # 0 * inf counts as the empty sum
            return ZERO if scalar == 0 else self
        return Value(FINITE, self.q * scalar)

    __rmul__ = __mul__

    def __truediv__(self, divisor: int) -> "Value":
        if not isinstance(divisor, int) or divisor <= 0:
            raise PreconditionError("values are only divided by positive integers")
        if not self.is_finite:
            return self
        return Value(FINITE, self.q / divisor)

    def __str__(self) -> str:
        if self.kind == PLUS_INFINITY:
            return "inf"
        if self.kind == MINUS_INFINITY:
            return "-inf"
        return str(self.q)

    def __repr__(self) -> str:
        return f"Value({self})"


def _coerce_value(other: Any) -> Optional[Value]:
    if isinstance(other, Value):
        return other
    if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
        return Value(FINITE, Fraction(other))
    return None


INF = Value(PLUS_INFINITY)
NEG_INF = Value(MINUS_INFINITY)
ZERO = Value(FINITE, Fraction(0))


def value_min(values: Sequence[Value]) -> Value:
    """Minimum of a sequence of values; the empty minimum is +inf"""
    return min(values, default=INF)


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------

RATIONALS = "rationals"
PRIME_FIELD = "prime_field"

FieldElement = Union[int, Fraction]


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: Q or F_p"""

    kind: str
    characteristic: int = 0

    def __post_init__(self):
        if self.kind == PRIME_FIELD:
            if not isprime(self.characteristic):
                raise PreconditionError(
                    f"F_p needs a prime characteristic, got {self.characteristic}",
                    characteristic=self.characteristic,
                )
        elif self.kind == RATIONALS:
            object.__setattr__(self, "characteristic", 0)
        else:
            raise PreconditionError(f"Unknown field kind: {self.kind}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(RATIONALS)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(PRIME_FIELD, p)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse `Q` or `Fp:7`"""
        cleaned = text.strip()
        if cleaned in ("Q", "QQ"):
            return cls.rationals()
        if cleaned.startswith("Fp:"):
            try:
                p = int(cleaned[3:])
            except ValueError as e:
                raise ParseError(f"Bad field spec: {text!r}", text=text) from e
            return cls.prime(p)
        raise ParseError(f"Bad field spec: {text!r}", text=text)

    @property
    def is_finite(self) -> bool:
        return self.kind == PRIME_FIELD

    def element(self, number: Union[int, Fraction, str]) -> FieldElement:
        """Coerce a number into this field"""
        if isinstance(number, str):
            try:
                number = Fraction(number.strip())
            except (ValueError, ZeroDivisionError) as e:
                raise ParseError(f"Bad field element: {number!r}") from e
        if self.kind == RATIONALS:
            return Fraction(number)
        p = self.characteristic
        if isinstance(number, Fraction):
            if number.denominator % p == 0:
                raise PreconditionError(f"{number} has no image in F_{p}")
            return number.numerator * pow(number.denominator, -1, p) % p
        return int(number) % p

    @property
    def zero(self) -> FieldElement:
        return self.element(0)

    @property
    def one(self) -> FieldElement:
        return self.element(1)

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == RATIONALS:
            return a + b
        return (a + b) % self.characteristic

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == RATIONALS:
            return a - b
        return (a - b) % self.characteristic

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.kind == RATIONALS:
            return a * b
        return (a * b) % self.characteristic

    def neg(self, a: FieldElement) -> FieldElement:
        if self.kind == RATIONALS:
            return -a
        return (-a) % self.characteristic

    def inv(self, a: FieldElement) -> FieldElement:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == RATIONALS:
            return 1 / Fraction(a)
        return pow(a, -1, self.characteristic)

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.mul(a, self.inv(b))

    def elements(self) -> List[FieldElement]:
        """All elements of a finite field, 0 first"""
        if not self.is_finite:
            raise PreconditionError("Q has no finite element list")
        return list(range(self.characteristic))

    def units(self) -> List[FieldElement]:
        return [a for a in self.elements() if a != 0]

    def format_element(self, a: FieldElement) -> str:
        return str(a)

    def __str__(self) -> str:
        if self.kind == RATIONALS:
            return "Q"
        return f"Fp:{self.characteristic}"


def _check_same_field(a: FieldSpec, b: FieldSpec) -> None:
    if a != b:
        raise FieldMismatch(f"Field mismatch: {a} vs {b}", left=a, right=b)


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial over a FieldSpec, lowest degree first"""

    field: FieldSpec
    coeffs: Tuple[FieldElement, ...] = ()

    def __post_init__(self):
        normalized = [self.field.element(c) for c in self.coeffs]
        while normalized and normalized[-1] == 0:
            normalized.pop()
        object.__setattr__(self, "coeffs", tuple(normalized))

    @classmethod
    def zero(cls, field: FieldSpec) -> "Poly":
        return cls(field, ())

    @classmethod
    def constant(cls, field: FieldSpec, c: Union[int, Fraction]) -> "Poly":
        return cls(field, (c,))

    @classmethod
    def x(cls, field: FieldSpec) -> "Poly":
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field: FieldSpec, degree: int, c: Union[int, Fraction] = 1) -> "Poly":
        return cls(field, (0,) * degree + (c,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> Optional[int]:
        """Degree, or None for the zero polynomial"""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self) -> FieldElement:
        if self.is_zero:
            raise PreconditionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def is_monic(self) -> bool:
        return not self.is_zero and self.leading == 1

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coefficient(self, i: int) -> FieldElement:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def _coerce(self, other: Any) -> "Poly":
        if isinstance(other, Poly):
            _check_same_field(self.field, other.field)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.field, other)
        raise TypeError(f"Cannot combine Poly with {type(other).__name__}")

    def __add__(self, other: Any) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        k = self.field
        return Poly(k, tuple(k.add(self.coefficient(i), other.coefficient(i)) for i in range(n)))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other: Any) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "Poly":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.field)
        k = self.field
        out = [k.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = k.add(out[i + j], k.mul(a, b))
        return Poly(k, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            raise PreconditionError("negative powers are not polynomials")
        result = Poly.constant(self.field, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: FieldElement) -> "Poly":
        return Poly(self.field, tuple(self.field.mul(c, a) for a in self.coeffs))

    def monic(self) -> "Poly":
        return self.scale(self.field.inv(self.leading))

    def evaluate(self, a: FieldElement) -> FieldElement:
        k = self.field
        acc = k.zero
        for c in reversed(self.coeffs):
            acc = k.add(k.mul(acc, a), c)
        return acc

    def sort_key(self) -> Tuple[int, Tuple[FieldElement, ...]]:
        """Degree first, then the coefficient vector from the top"""
        return (-1 if self.is_zero else self.degree, tuple(reversed(self.coeffs)))

    def to_bivariate(self) -> "BivarPoly":
        return BivarPoly.from_dict(self.field, {(i, 0): c for i, c in enumerate(self.coeffs)})

    def __str__(self) -> str:
        return format_terms(self.field, [((i,), c) for i, c in enumerate(self.coeffs)], ("x",))

    def __repr__(self) -> str:
        return f"Poly[{self.field}]({self})"


# ---------------------------------------------------------------------------
# Bivariate polynomials
# ---------------------------------------------------------------------------

Monomial = Tuple[int, int]


@dataclass(frozen=True)
class BivarPoly:
    """Sparse polynomial in x, y; terms are stored sorted by exponent pair"""

    field: FieldSpec
    terms: Tuple[Tuple[Monomial, FieldElement], ...] = ()

    def __post_init__(self):
        merged: Dict[Monomial, FieldElement] = {}
        for (i, j), c in self.terms:
            if i < 0 or j < 0:
                raise PreconditionError("negative exponents are not polynomials")
            merged[(i, j)] = self.field.add(merged.get((i, j), self.field.zero), self.field.element(c))
        cleaned = tuple(sorted((m, c) for m, c in merged.items() if c != 0))
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_dict(cls, field: FieldSpec, mapping: Dict[Monomial, Any]) -> "BivarPoly":
        return cls(field, tuple(mapping.items()))

    @classmethod
    def zero(cls, field: FieldSpec) -> "BivarPoly":
        return cls(field, ())

    @classmethod
    def constant(cls, field: FieldSpec, c: Union[int, Fraction]) -> "BivarPoly":
        return cls(field, (((0, 0), c),))

    @classmethod
    def x(cls, field: FieldSpec) -> "BivarPoly":
        return cls(field, (((1, 0), 1),))

    @classmethod
    def y(cls, field: FieldSpec) -> "BivarPoly":
        return cls(field, (((0, 1), 1),))

    @classmethod
    def monomial(cls, field: FieldSpec, i: int, j: int, c: Union[int, Fraction] = 1) -> "BivarPoly":
        return cls(field, (((i, j), c),))

    def as_dict(self) -> Dict[Monomial, FieldElement]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> Optional[int]:
        """Total degree, or None for the zero polynomial"""
        if self.is_zero:
            return None
        return max(i + j for (i, j), _ in self.terms)

    @property
    def is_constant(self) -> bool:
        return self.is_zero or self.degree == 0

    @property
    def is_monomial(self) -> bool:
        """A single term with coefficient 1"""
        return len(self.terms) == 1 and self.terms[0][1] == 1

    @property
    def uses_y(self) -> bool:
        return any(j > 0 for (_, j), _ in self.terms)

    def to_univariate(self) -> Poly:
        if self.uses_y:
            raise PreconditionError(f"{self} is not a polynomial in x alone")
        mapping = {i: c for (i, _), c in self.terms}
        top = max(mapping, default=-1)
        return Poly(self.field, tuple(mapping.get(i, 0) for i in range(top + 1)))

    def _coerce(self, other: Any) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            _check_same_field(self.field, other.field)
            return other
        if isinstance(other, Poly):
            _check_same_field(self.field, other.field)
            return other.to_bivariate()
        if isinstance(other, (int, Fraction)):
            return BivarPoly.constant(self.field, other)
        raise TypeError(f"Cannot combine BivarPoly with {type(other).__name__}")

    def __add__(self, other: Any) -> "BivarPoly":
        other = self._coerce(other)
        return BivarPoly(self.field, self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self) -> "BivarPoly":
        return BivarPoly(self.field, tuple((m, self.field.neg(c)) for m, c in self.terms))

    def __sub__(self, other: Any) -> "BivarPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "BivarPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "BivarPoly":
        other = self._coerce(other)
        k = self.field
        out = []
        for (i1, j1), a in self.terms:
            for (i2, j2), b in other.terms:
                out.append(((i1 + i2, j1 + j2), k.mul(a, b)))
        return BivarPoly(k, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BivarPoly":
        if exponent < 0:
            raise PreconditionError("negative powers are not polynomials")
        result = BivarPoly.constant(self.field, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: FieldElement) -> "BivarPoly":
        return BivarPoly(self.field, tuple((m, self.field.mul(c, a)) for m, a in self.terms))

    def sort_key(self) -> Tuple[int, Tuple[Tuple[Monomial, FieldElement], ...]]:
        return (-1 if self.is_zero else self.degree, self.terms)

    def __str__(self) -> str:
        return format_terms(self.field, list(self.terms), ("x", "y"))

    def __repr__(self) -> str:
        return f"BivarPoly[{self.field}]({self})"


AnyPoly = Union[Poly, BivarPoly]


def as_bivariate(f: AnyPoly) -> BivarPoly:
    return f.to_bivariate() if isinstance(f, Poly) else f


def format_terms(field: FieldSpec, terms: List[Tuple[Tuple[int, ...], FieldElement]], names: Tuple[str, ...]) -> str:
    """
    Render polynomial terms in the text grammar the parser reads back

    Args:
        field: Coefficient field
        terms: (exponent tuple, coefficient) pairs
        names: Variable names matching the exponent tuple positions

    Returns:
        Text such as `x^2*y - 3*x + 5/2`
    """
    nonzero = [(e, c) for e, c in terms if c != 0]
    if not nonzero:
        return "0"
    # descending total degree, then descending first exponent
    nonzero.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)

    pieces = []
    for exps, c in nonzero:
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        monomial = "*".join(factors)

        negative = field.kind == RATIONALS and c < 0
        magnitude = -c if negative else c
        if not monomial:
            body = field.format_element(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{field.format_element(magnitude)}*{monomial}"

        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


# ---------------------------------------------------------------------------
# Division and expansions
# ---------------------------------------------------------------------------


def poly_divrem_any(f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    """
    Division with remainder by any nonzero divisor

    Args:
        f: Dividend
        g: Nonzero divisor

    Returns:
        (quotient, remainder) with f = q*g + r and r = 0 or deg(r) < deg(g)
    """
    _check_same_field(f.field, g.field)
    if g.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    k = f.field
    remainder = list(f.coeffs)
    dg = g.degree
    lead_inv = k.inv(g.leading)
    quotient = [k.zero] * max(len(remainder) - dg, 0)
    for shift in range(len(remainder) - dg - 1, -1, -1):
        c = remainder[shift + dg]
        if c == 0:
            continue
        factor = k.mul(c, lead_inv)
        quotient[shift] = factor
        for j, b in enumerate(g.coeffs):
            remainder[shift + j] = k.sub(remainder[shift + j], k.mul(factor, b))
    return Poly(k, tuple(quotient)), Poly(k, tuple(remainder))


def poly_divrem(f: Poly, g: Poly) -> Tuple[Poly, Poly]:
    """
    Division with remainder by a monic divisor of degree at least one

    Args:
        f: Dividend
        g: Monic divisor, deg(g) >= 1

    Returns:
        (quotient, remainder) with f = q*g + r exactly
    """
    if g.is_zero or g.degree < 1:
        raise NonMonicDivisor(f"divisor {g} has degree < 1", divisor=g)
    if not g.is_monic:
        raise NonMonicDivisor(f"divisor {g} is not monic", divisor=g)
    return poly_divrem_any(f, g)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd by Euclid's algorithm; gcd(0, 0) = 0"""
    _check_same_field(f.field, g.field)
    a, b = f, g
    while not b.is_zero:
        a, b = b, poly_divrem_any(a, b)[1]
    return a if a.is_zero else a.monic()


@dataclass(frozen=True)
class Expansion:
    """Base-Q positional expansion f = sum f_i Q^i; only nonzero parts are listed"""

    base: Poly
    parts: Tuple[Tuple[Poly, int], ...] = ()

    def reconstruct(self) -> Poly:
        total = Poly.zero(self.base.field)
        for f_i, i in self.parts:
            total = total + f_i * self.base ** i
        return total

    def coefficient(self, i: int) -> Poly:
        for f_i, j in self.parts:
            if j == i:
                return f_i
        return Poly.zero(self.base.field)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "base": str(self.base),
            "parts": [{"index": i, "coefficient": str(f_i)} for f_i, i in self.parts],
        }


def q_expansion(f: Poly, Q: Poly) -> Expansion:
    """
    Compute the Q-expansion of f

    Args:
        f: Polynomial to expand
        Q: Monic base polynomial of degree at least one

    Returns:
        Expansion whose nonzero parts have degree < deg(Q)
    """
    if Q.is_zero or Q.degree < 1 or not Q.is_monic:
        raise NonMonicDivisor(f"expansion base {Q} must be monic of degree >= 1", divisor=Q)
    _check_same_field(f.field, Q.field)

    parts = []
    current = f
    i = 0
    while not current.is_zero:
        current, r = poly_divrem(current, Q)
        if not r.is_zero:
            parts.append((r, i))
        i += 1
    return Expansion(Q, tuple(parts))


# ---------------------------------------------------------------------------
# Enumeration and linear algebra over the field
# ---------------------------------------------------------------------------


def enumerate_polys(field: FieldSpec, degree: int, coefficients: Sequence[FieldElement], monic: bool = False) -> Iterator[Poly]:
    """
    Enumerate all polynomials of exactly the given degree

    Args:
        field: Coefficient field
        degree: Exact degree
        coefficients: Values the lower coefficients range over, in order
        monic: Restrict the leading coefficient to 1

    Yields:
        Polynomials ordered by leading coefficient, then lexicographically from the constant term
    """
    leads = [field.one] if monic else [c for c in coefficients if field.element(c) != 0]
    for lead in leads:
        for lower in product(coefficients, repeat=degree):
            yield Poly(field, tuple(lower) + (lead,))


def solve_linear_combination(field: FieldSpec, columns: Sequence[Dict[Any, FieldElement]], target: Dict[Any, FieldElement]) -> Optional[List[FieldElement]]:
    """
    Find z with sum z_j * columns[j] = target for sparse coordinate vectors

    Args:
        field: Field the coordinates live in
        columns: Sparse vectors (key -> element)
        target: Sparse target vector

    Returns:
        A solution list (free variables set to zero), or None when none exists
    """
    keys = sorted({key for col in columns for key in col} | set(target), key=repr)
    n = len(columns)
    rows = [
        [field.element(col.get(key, 0)) for col in columns] + [field.element(target.get(key, 0))]
        for key in keys
    ]

    pivots = []
    r = 0
    for c in range(n):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, a) for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [field.sub(a, field.mul(factor, b)) for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1

    if any(all(a == 0 for a in row[:n]) and row[n] != 0 for row in rows):
        return None

    solution = [field.zero] * n
    for i, c in enumerate(pivots):
        solution[c] = rows[i][n]
    return solution
