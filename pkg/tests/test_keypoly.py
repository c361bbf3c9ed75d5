from math import comb

import pytest
import sympy

from conftest import F2, F3, QQ, UNIVARIATE_FIXTURES, P
from valgen.core_algebra import NEG_INF, Value, poly_divrem
from valgen.errors import NonMonicDivisor, PreconditionError
from valgen.genseq import random_poly
from valgen.keypoly import (
    RootFixture,
    compare_key_pair,
    delta_from_fixture,
    enumerate_monic,
    epsilon,
    hasse_derivative,
    is_irreducible,
    is_key,
    truncation_transfer,
)
from valgen.valuation import EmbeddingSpec, value_of


def test_hasse_derivative():
    assert hasse_derivative(P("x^3"), 1) == P("3*x^2")
    assert hasse_derivative(P("x^4"), 2) == P("6*x^2")
    assert hasse_derivative(P("x^2 + 5"), 3).is_zero
    assert hasse_derivative(P("x^2", F2), 1).is_zero
    assert hasse_derivative(P("x^2", F2), 2) == P("1", F2)
    with pytest.raises(PreconditionError):
        hasse_derivative(P("x"), 0)


def test_hasse_composition(rng):
    for _ in range(20):
        f = random_poly(rng, QQ, 6, 4)
        for i in range(1, 3):
            for j in range(1, 3):
                composed = hasse_derivative(hasse_derivative(f, j), i)
                assert composed == hasse_derivative(f, i + j) * comb(i + j, i)


def test_epsilon_examples(gauss_q, gauss_f2):
    report = epsilon(gauss_q, P("x^2 + x"))
    assert report.epsilon == Value.of(1)
    assert report.indices == (1,)
    assert str(report) == "epsilon=1 indices=[1]"

    assert epsilon(gauss_q, P("x^2")).indices == (1, 2)
    assert epsilon(gauss_q, P("x^2 + 1")).epsilon == Value.of(0)
    assert epsilon(gauss_f2, P("x^2", F2)).indices == (2,)


def test_epsilon_of_constants_and_zero(gauss_q):
    report = epsilon(gauss_q, P("7"))
    assert report.epsilon == NEG_INF
    assert report.indices == ()
    with pytest.raises(PreconditionError):
        epsilon(gauss_q, P("0"))


def test_epsilon_gauss_closed_form(gauss_q, rng):
    # for the gauss valuation with gamma = 1 over Q, epsilon is 1 at a root 0 and 0 otherwise
    for _ in range(100):
        f = random_poly(rng, QQ, 4, 3)
        expected = Value.of(1) if f.coefficient(0) == 0 else Value.of(0)
        assert epsilon(gauss_q, f).epsilon == expected


@pytest.mark.parametrize("fixture", UNIVARIATE_FIXTURES)
def test_epsilon_of_product_is_max(fixture, request, rng):
    spec = request.getfixturevalue(fixture)
    field = spec.field
    c = field.element(2 if field.is_finite else 15)
    for _ in range(300):
        f = random_poly(rng, field, 3, 3)
        g = random_poly(rng, field, 3, 3)
        assert epsilon(spec, f * g).epsilon == max(epsilon(spec, f).epsilon, epsilon(spec, g).epsilon)
        assert epsilon(spec, f.scale(c)).epsilon == epsilon(spec, f).epsilon


def test_is_key_examples(gauss_f3):
    assert is_key(gauss_f3, P("x", F3)) == (True, None)
    assert is_key(gauss_f3, P("x - 1", F3)) == (True, None)
    assert is_key(gauss_f3, P("x^2", F3)) == (False, P("x", F3))
    key, witness = is_key(gauss_f3, P("x^2 + 1", F3), max_workers=1)
    assert not key
    assert witness == P("x", F3)


def test_is_key_domain(gauss_q, gauss_f3):
    with pytest.raises(PreconditionError):
        is_key(gauss_q, P("x"))
    with pytest.raises(NonMonicDivisor):
        is_key(gauss_f3, P("2*x", F3))
    with pytest.raises(NonMonicDivisor):
        is_key(gauss_f3, P("1", F3))


def test_is_key_worker_counts_agree(gauss_f3):
    for Q in enumerate_monic(F3, 3):
        assert is_key(gauss_f3, Q, max_workers=1) == is_key(gauss_f3, Q, max_workers=3, batch_size=2)


def _sympy_irreducible(Q):
    x = sympy.symbols("x")
    return sympy.Poly(list(reversed(Q.coeffs)), x, modulus=Q.field.characteristic).is_irreducible


F3_SPECS = [
    pytest.param(None, id="gauss_f3"),
    pytest.param(EmbeddingSpec.of(F3, {"x": "1 + t"}), id="shifted_f3"),
    pytest.param(EmbeddingSpec.of(F3, {"x": "t^(1/2) + t"}), id="half_f3"),
]


@pytest.mark.parametrize("spec", F3_SPECS)
def test_key_polynomials_are_irreducible(spec, gauss_f3):
    spec = spec or gauss_f3
    for degree in range(1, 4):
        for Q in enumerate_monic(F3, degree):
            key, witness = is_key(spec, Q)
            if key:
                assert _sympy_irreducible(Q)
            else:
                assert witness.degree < degree
                assert epsilon(spec, witness).epsilon >= epsilon(spec, Q).epsilon


@pytest.mark.parametrize("spec", F3_SPECS)
def test_key_polynomial_bounds_products_of_lower_degree(spec, gauss_f3, rng):
    spec = spec or gauss_f3
    keys = [Q for degree in range(1, 4) for Q in enumerate_monic(F3, degree) if is_key(spec, Q) == (True, None)]
    assert keys
    for Q in keys:
        eps = epsilon(spec, Q).epsilon
        for _ in range(10):
            f = random_poly(rng, F3, Q.degree - 1, min_degree=0)
            g = random_poly(rng, F3, Q.degree - 1, min_degree=0)
            fg = f * g
            value = value_of(spec, fg)
            # derivatives of fg drop by less than k * epsilon(Q)
            for k in range(1, fg.degree + 2):
                assert value_of(spec, hasse_derivative(fg, k)) > value - eps * k
            # fg = qQ + r with nu(r) = nu(fg) < nu(qQ)
            q, r = poly_divrem(fg, Q)
            assert value_of(spec, r) == value
            if not q.is_zero:
                assert value < value_of(spec, q * Q)


def test_is_irreducible_matches_sympy():
    for degree in range(1, 5):
        for Q in enumerate_monic(F3, degree):
            assert is_irreducible(Q) == _sympy_irreducible(Q)
    for Q in enumerate_monic(F2, 4):
        assert is_irreducible(Q) == _sympy_irreducible(Q)


def test_is_irreducible_preconditions():
    with pytest.raises(PreconditionError):
        is_irreducible(P("x^2 + 1"))
    with pytest.raises(PreconditionError):
        is_irreducible(P("1", F3))


def test_compare_key_pair(gauss_q):
    report = compare_key_pair(gauss_q, P("x"), P("x - 1"))
    assert report.statements == {
        "degree_orders_epsilon": None,
        "epsilon_orders_truncation": None,
        "equal_degree_equivalence": True,
    }
    assert report.holds

    report = compare_key_pair(gauss_q, P("x - 1"), P("x"))
    assert report.statements["epsilon_orders_truncation"] is True
    assert report.statements["equal_degree_equivalence"] is True
    assert report.truncated == Value.of(0)
    assert report.to_dict()["nu_Q(Q2)"] == "0"


def test_compare_key_pair_over_f3(gauss_f3):
    keys = [Q for Q in enumerate_monic(F3, 1)]
    for Q in keys:
        for Q2 in keys:
            assert compare_key_pair(gauss_f3, Q, Q2).holds


def test_truncation_transfer(gauss_q):
    assert truncation_transfer(gauss_q, P("x - 1"), P("x"), P("x + 1")) is True
    assert truncation_transfer(gauss_q, P("x - 1"), P("x"), P("x^2 + x")) is None
    assert truncation_transfer(gauss_q, P("x"), P("x - 1"), P("x + 1")) is None


def test_truncation_transfer_never_fails(shifted_spec, rng):
    keys = [P("x"), P("x - 1"), P("x + 1"), P("x - 2")]
    for _ in range(50):
        f = random_poly(rng, QQ, 3, 3)
        for Q in keys:
            for Q2 in keys:
                assert truncation_transfer(shifted_spec, Q, Q2, f) is not False


def test_delta_from_fixture(gauss_q):
    fixture = RootFixture(P("x^2 + x"), (("0", 1), ("-1", 0)))
    assert delta_from_fixture(fixture) == Value.of(1)
    assert delta_from_fixture(fixture) == epsilon(gauss_q, P("x^2 + x")).epsilon

    conjugates = RootFixture(P("x^2 + 1"), (("i", 0), ("-i", 0)))
    assert delta_from_fixture(conjugates) == epsilon(gauss_q, P("x^2 + 1")).epsilon


def test_delta_fixture_errors():
    with pytest.raises(PreconditionError):
        RootFixture(P("x^2"), (("0", 1),))
    with pytest.raises(PreconditionError):
        delta_from_fixture(RootFixture())
