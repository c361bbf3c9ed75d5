from fractions import Fraction

import pytest

from conftest import F3, QQ, B, P
from valgen.core_algebra import BivarPoly, Poly
from valgen.errors import ParseError
from valgen.parsing import parse_any, parse_series_terms, parse_squares


def test_parse_univariate():
    assert P("3*x^2 - x + 5/2") == Poly(QQ, (Fraction(5, 2), -1, 3))
    assert P("(x + 1)^2") == P("x^2 + 2*x + 1")
    assert P("x**3") == P("x^3")
    assert P("-(x - 1)") == P("1 - x")
    assert P("x/2") == Poly(QQ, (0, Fraction(1, 2)))


def test_parse_over_prime_field():
    assert P("x + 4", F3) == P("x + 1", F3)
    assert P("x/2", F3) == P("2*x", F3)


def test_parse_bivariate():
    f = B("x^2*y - y^3")
    assert f.as_dict() == {(2, 1): 1, (0, 3): -1}
    assert parse_any("y - x", QQ, bivariate=True) == BivarPoly.y(QQ) - BivarPoly.x(QQ)
    assert isinstance(parse_any("x", QQ, bivariate=False), Poly)


@pytest.mark.parametrize("text", ["", "x +", "x^y", "2 @ x", "x/0", "x/x", "(x + 1", "z"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        P(text)


def test_univariate_rejects_y():
    with pytest.raises(ParseError):
        P("x*y")


def test_series_terms():
    terms, precision = parse_series_terms("2*t^(3/2) - t^4 + O(t^(9))")
    assert terms == [(Fraction(3, 2), 2), (Fraction(4), -1)]
    assert precision == 9
    terms, precision = parse_series_terms("1 + t")
    assert terms == [(Fraction(0), 1), (Fraction(1), 1)]
    assert precision is None
    terms, _ = parse_series_terms("t^(-1/2)")
    assert terms == [(Fraction(-1, 2), 1)]


def test_series_terms_rejects():
    with pytest.raises(ParseError):
        parse_series_terms("")
    with pytest.raises(ParseError):
        parse_series_terms("t^(1) + s")


def test_parse_squares():
    assert parse_squares("squares(17)") == 17
    assert parse_squares(" squares( 5 ) ") == 5
    assert parse_squares("t^(1)") is None
