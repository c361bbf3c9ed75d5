"""
Parsing Module
Text grammar for polynomials (`3*x^2 - x + 5/2`, `x^2*y - y^3`) and
generalized power series literals (`t^(1) + t^(9/2)`, `squares(17)`)
"""

import logging
import re
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from valgen.core_algebra import BivarPoly, FieldSpec, Poly
from valgen.errors import ParseError, PreconditionError

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> List[str]:
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if not match:
            raise ParseError(f"Unexpected character at {pos} in {text!r}", text=text)
        token = match.group(1) or match.group(2) or match.group(3)
        tokens.append("^" if token == "**" else token)
        pos = match.end()
    return tokens


class _PolyParser:
    """Recursive descent over expr := term (('+'|'-') term)*"""

    def __init__(self, text: str, field: FieldSpec, variables: Tuple[str, ...]):
        self.text = text
        self.field = field
        self.variables = variables
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise ParseError(f"Unexpected end of input in {self.text!r}", text=self.text)
        self.pos += 1
        return token

    def expect(self, token: str) -> None:
        got = self.take()
        if got != token:
            raise ParseError(f"Expected {token!r}, got {got!r} in {self.text!r}", text=self.text)

    def parse(self) -> BivarPoly:
        if not self.tokens:
            raise ParseError("Empty polynomial", text=self.text)
        result = self.expr()
        if self.peek() is not None:
            raise ParseError(f"Trailing input {self.peek()!r} in {self.text!r}", text=self.text)
        return result

    def expr(self) -> BivarPoly:
        acc = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> BivarPoly:
        acc = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant or rhs.is_zero:
                    raise ParseError(f"Division only by nonzero constants in {self.text!r}", text=self.text)
                acc = acc.scale(self.field.inv(rhs.as_dict()[(0, 0)]))
        return acc

    def unary(self) -> BivarPoly:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> BivarPoly:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exponent = self.take()
            if not exponent.isdigit():
                raise ParseError(f"Exponents must be nonnegative integers in {self.text!r}", text=self.text)
            base = base ** int(exponent)
        return base

    def atom(self) -> BivarPoly:
        token = self.take()
        if token.isdigit():
            return BivarPoly.constant(self.field, int(token))
        if token == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if token in self.variables:
            return BivarPoly.x(self.field) if token == "x" else BivarPoly.y(self.field)
        raise ParseError(f"Unknown symbol {token!r} in {self.text!r}", text=self.text)


def parse_bivariate(text: str, field: FieldSpec) -> BivarPoly:
    """
    Parse a polynomial in x and y

    Args:
        text: Polynomial text, e.g. `x^2*y - y^3`
        field: Coefficient field

    Returns:
        Parsed BivarPoly
    """
    try:
        return _PolyParser(text, field, ("x", "y")).parse()
    except PreconditionError as e:
        raise ParseError(f"Cannot parse {text!r}: {e.message}", text=text) from e
    except ZeroDivisionError as e:
        raise ParseError(f"Division by zero in {text!r}", text=text) from e


def parse_poly(text: str, field: FieldSpec) -> Poly:
    """
    Parse a univariate polynomial in x

    Args:
        text: Polynomial text, e.g. `3*x^2 - x + 5/2`
        field: Coefficient field

    Returns:
        Parsed Poly
    """
    try:
        return _PolyParser(text, field, ("x",)).parse().to_univariate()
    except PreconditionError as e:
        raise ParseError(f"Cannot parse {text!r}: {e.message}", text=text) from e
    except ZeroDivisionError as e:
        raise ParseError(f"Division by zero in {text!r}", text=text) from e


def parse_any(text: str, field: FieldSpec, bivariate: bool) -> Union[Poly, BivarPoly]:
    """Parse as BivarPoly when the ring is k[x,y], as Poly otherwise"""
    return parse_bivariate(text, field) if bivariate else parse_poly(text, field)


# ---------------------------------------------------------------------------
# Series literals
# ---------------------------------------------------------------------------

_SQUARES = re.compile(r"^\s*squares\(\s*(\d+)\s*\)\s*$")
_SERIES_TERM = re.compile(
    r"^(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?t(?:\s*\^\s*(?:\(\s*(?P<exp>-?\d+(?:/\d+)?)\s*\)|(?P<iexp>\d+)))?$"
)
_ORDER_TERM = re.compile(r"^O\(\s*t\s*\^\s*\(?\s*(?P<prec>-?\d+(?:/\d+)?)\s*\)?\s*\)$")


def parse_squares(text: str) -> Optional[int]:
    """Return N for the builtin `squares(N)`, None for any other literal"""
    match = _SQUARES.match(text)
    return int(match.group(1)) if match else None


def _split_signed_terms(text: str) -> List[Tuple[int, str]]:
    terms = []
    depth = 0
    sign = 1
    current = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and not current.rstrip().endswith(("^", "*")):
            if current.strip():
                terms.append((sign, current.strip()))
            elif ch == "-" and terms:
                raise ParseError(f"Doubled sign in series literal {text!r}", text=text)
            sign = -1 if ch == "-" else 1
            current = ""
            continue
        current += ch
    if current.strip():
        terms.append((sign, current.strip()))
    return terms


def parse_series_terms(text: str) -> Tuple[List[Tuple[Fraction, Fraction]], Optional[Fraction]]:
    """
    Parse a series literal into (exponent, coefficient) pairs and an optional precision

    Args:
        text: Literal such as `1 + t^(1)`, `2*t^(3/2) - t^4 + O(t^(9))`

    Returns:
        (terms, precision) where precision is None for exact series
    """
    terms: List[Tuple[Fraction, Fraction]] = []
    precision: Optional[Fraction] = None
    pieces = _split_signed_terms(text)
    if not pieces:
        raise ParseError("Empty series literal", text=text)

    for sign, piece in pieces:
        order = _ORDER_TERM.match(piece)
        if order:
            if sign < 0 or precision is not None:
                raise ParseError(f"Bad order term in {text!r}", text=text)
            precision = Fraction(order.group("prec"))
            continue
        if re.fullmatch(r"\d+(?:/\d+)?", piece):
            terms.append((Fraction(0), sign * Fraction(piece)))
            continue
        match = _SERIES_TERM.match(piece)
        if not match:
            raise ParseError(f"Bad series term {piece!r} in {text!r}", text=text)
        coef = Fraction(match.group("coef")) if match.group("coef") else Fraction(1)
        raw_exp = match.group("exp") or match.group("iexp") or "1"
        terms.append((Fraction(raw_exp), sign * coef))
    return terms, precision
