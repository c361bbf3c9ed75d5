from fractions import Fraction

import pytest

from conftest import F3, QQ, B, P
from valgen.core_algebra import INF, Value
from valgen.errors import FieldMismatch, PrecisionExhausted, PreconditionError
from valgen.series import GenSeries, embed_eval, leading_coefficient, leading_exponent


def test_parse_and_str():
    s = GenSeries.parse("t^(1) + t^(9/2)", QQ)
    assert s.support == ((Fraction(1), 1), (Fraction(9, 2), 1))
    assert s.is_exact
    assert str(s) == "t^(1) + t^(9/2)"
    assert str(GenSeries.parse("1 - 2*t + O(t^(3))", QQ)) == "1 - 2*t^(1) + O(t^(3))"
    assert str(GenSeries.zero(QQ)) == "0"


def test_squares_truncation():
    s = GenSeries.squares(QQ, 17)
    assert [e for e, _ in s.support] == [1, 4, 9, 16]
    assert s.precision == Value.of(17)
    assert GenSeries.parse("squares(10)", QQ).support == ((1, 1), (4, 1), (9, 1))


def test_terms_beyond_precision_are_dropped():
    s = GenSeries(QQ, ((1, 1), (5, 1)), Value.of(3))
    assert s.support == ((Fraction(1), 1),)
    with pytest.raises(PrecisionExhausted):
        s.coefficient(4)
    assert s.coefficient(2) == 0


def test_add_takes_min_precision():
    a = GenSeries(QQ, ((1, 1),), Value.of(5))
    b = GenSeries(QQ, ((1, -1), (2, 3)), Value.of(4))
    total = a + b
    assert total.support == ((Fraction(2), 3),)
    assert total.precision == Value.of(4)


def test_mul_precision():
    a = GenSeries(QQ, ((1, 1),), Value.of(5))
    b = GenSeries.exact(QQ, {2: 1})
    product = a * b
    assert product.support == ((Fraction(3), 1),)
    assert product.precision == Value.of(7)
    assert (GenSeries.exact(QQ, {0: 1}) * GenSeries.exact(QQ, {1: 1})).is_exact


def test_leading_exponent():
    assert leading_exponent(GenSeries.parse("t^(2) + t^(3)", QQ)) == Value.of(2)
    assert leading_exponent(GenSeries.zero(QQ)) == INF
    with pytest.raises(PrecisionExhausted):
        leading_exponent(GenSeries.unknown(QQ, 4))
    assert leading_coefficient(GenSeries.parse("3*t^(2)", QQ)) == 3
    with pytest.raises(PreconditionError):
        leading_coefficient(GenSeries.zero(QQ))


def test_embed_eval_univariate():
    images = {"x": GenSeries.parse("1 + t", QQ)}
    image = embed_eval(P("x^2 - 1"), images)
    assert image.support == ((Fraction(1), 2), (Fraction(2), 1))
    assert embed_eval(P("x - 1"), images).support == ((Fraction(1), 1),)
    assert embed_eval(P("7"), {}).support == ((Fraction(0), 7),)


def test_embed_eval_bivariate_cancellation():
    images = {"x": GenSeries.parse("t", QQ), "y": GenSeries.squares(QQ, 17)}
    image = embed_eval(B("y - x"), images)
    assert leading_exponent(image) == Value.of(4)
    assert image.precision == Value.of(17)
    image = embed_eval(B("y - x - x^4 - x^9 - x^16"), images)
    with pytest.raises(PrecisionExhausted):
        leading_exponent(image)


def test_embed_eval_errors():
    with pytest.raises(PreconditionError):
        embed_eval(B("y"), {"x": GenSeries.parse("t", QQ)})
    with pytest.raises(FieldMismatch):
        embed_eval(P("x", F3), {"x": GenSeries.parse("t", QQ)})
