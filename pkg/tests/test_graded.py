from fractions import Fraction
from functools import reduce
from itertools import product

import pytest

from config.config import config
from conftest import ALL_FIXTURES, F2, QQ, B, P, sample_for
from valgen.core_algebra import Value
from valgen.errors import NotCentered, PreconditionError
from valgen.graded import (
    RESIDUE_MISMATCH,
    VALUE_NOT_IN_SEMIGROUP,
    WITNESS_LIMIT_REACHED,
    gs3_witness,
    homogeneous_generators,
    initial_equal,
    initial_form,
    initial_subset_select,
    monomial_product,
    semigroup_membership,
    semigroup_witnesses,
)
from valgen.valuation import MonomialBivariateSpec, graded_coordinates, value_of


def test_initial_form(gauss_q):
    form = initial_form(gauss_q, P("x^2 + 2*x"))
    assert form.grade == Value.of(1)
    assert form.equals(gauss_q, initial_form(gauss_q, P("2*x + 5*x^3")))
    assert not form.equals(gauss_q, initial_form(gauss_q, P("x")))
    assert form.to_dict() == {"representative": "x^2 + 2*x", "grade": "1"}
    with pytest.raises(PreconditionError):
        initial_form(gauss_q, P("0"))


def test_initial_equal(squares_spec, gauss_q):
    assert initial_equal(squares_spec, B("y"), B("x"))
    assert not initial_equal(squares_spec, B("y"), B("2*x"))
    assert not initial_equal(gauss_q, P("x"), P("x^2"))
    with pytest.raises(PreconditionError):
        initial_equal(gauss_q, P("0"), P("x"))


@pytest.mark.parametrize("fixture", ["gauss_q", "gauss_f3", "shifted_spec", "squares_spec"])
def test_initial_form_calculus(fixture, request, rng):
    spec = request.getfixturevalue(fixture)
    for _ in range(300):
        f = sample_for(spec, rng)
        g = sample_for(spec, rng)
        h = sample_for(spec, rng) * f * f
        if value_of(spec, h) <= value_of(spec, f):
            continue
        # a higher-value tail does not change the initial form, and products respect it
        assert initial_equal(spec, f + h, f)
        assert initial_equal(spec, (f + h) * g, f * g)
        assert initial_form(spec, f * g).grade == value_of(spec, f) + value_of(spec, g)


def test_subset_select_examples(gauss_q, gauss_f2):
    assert initial_subset_select(gauss_q, P("3*x"), [P("x"), P("x"), P("x")]) == (0, 1, 2)
    parts = [P("x + x^2"), P("x - x^2"), P("-x")]
    assert initial_subset_select(gauss_q, P("x"), parts) == (0,)
    parts = [P("x"), P("x + x^2"), P("-x - x^2 + x^3")]
    assert initial_subset_select(gauss_q, P("x"), parts) == (0,)


def test_subset_select_characteristic_two(gauss_f2):
    x = P("x", F2)
    assert initial_subset_select(gauss_f2, x, [x, x, x]) == (0,)


def test_subset_select_preconditions(gauss_q):
    with pytest.raises(PreconditionError):
        initial_subset_select(gauss_q, P("x"), [])
    with pytest.raises(PreconditionError):
        initial_subset_select(gauss_q, P("x"), [P("x"), P("x^2")])
    with pytest.raises(PreconditionError):
        initial_subset_select(gauss_q, P("x"), [P("2*x")])


POSITIVE_ELEMENT = {
    "gauss_q": "x",
    "gauss_f3": "x",
    "shifted_spec": "x - 1",
    "squares_spec": "x",
    "padic_gauss": "3",
    "truncated_gauss": "3",
}


def _positive(fixture, spec):
    text = POSITIVE_ELEMENT[fixture]
    return B(text) if spec.bivariate else P(text, spec.field)


def _higher_tail(spec, rng, f, w):
    return sample_for(spec, rng, max_degree=1) * f * w


def _units(field, rng, count):
    pool = field.units() if field.is_finite else [field.element(c) for c in (-3, -2, -1, 1, 2, 3)]
    return [pool[int(i)] for i in rng.integers(0, len(pool), size=count)]


def _vanishing_units(field, rng, count):
    """Nonzero coefficients with zero sum; empty when count is 0"""
    if count == 0:
        return []
    while True:
        coeffs = _units(field, rng, count - 1)
        last = field.neg(reduce(field.add, coeffs, field.zero))
        if last != 0:
            return coeffs + [last]


@pytest.mark.parametrize("fixture", ["gauss_q", "gauss_f3", "shifted_spec", "squares_spec"])
def test_subset_select_finds_constructed_prefix(fixture, request, rng):
    spec = request.getfixturevalue(fixture)
    field = spec.field
    w = _positive(fixture, spec)
    for _ in range(100):
        u = sample_for(spec, rng, max_degree=2)
        prefix_len = int(rng.integers(1, 4))
        # c_i * u + (higher tail); the suffix after the prefix cancels at the grade of u
        coeffs = []
        total = field.zero
        while len(coeffs) < prefix_len:
            c = _units(field, rng, 1)[0]
            if field.add(total, c) != 0:
                coeffs.insert(0, c)
                total = field.add(total, c)
        coeffs += _vanishing_units(field, rng, int(rng.choice([0, 2, 3])))

        parts = [u.scale(c) + _higher_tail(spec, rng, u, w) for c in coeffs]
        f = u.scale(total) + _higher_tail(spec, rng, u, w)
        assert initial_subset_select(spec, f, parts) == tuple(range(prefix_len))


def _nonzero(coordinates):
    return {k: v for k, v in coordinates.items() if v != 0}


@pytest.mark.parametrize("fixture", ["gauss_q", "gauss_f3", "shifted_spec", "squares_spec"])
def test_initial_form_of_sum_is_sum_of_initial_forms(fixture, request, rng):
    spec = request.getfixturevalue(fixture)
    field = spec.field
    w = _positive(fixture, spec)
    checked = 0
    for _ in range(300):
        f = sample_for(spec, rng, max_degree=2)
        g = sample_for(spec, rng, max_degree=2)
        total = f + g
        gamma = value_of(spec, f)
        if total.is_zero or value_of(spec, g) != gamma or value_of(spec, total) != gamma:
            continue
        checked += 1
        cf, cg = graded_coordinates(spec, f, gamma), graded_coordinates(spec, g, gamma)
        expected = {k: field.add(cf.get(k, field.zero), cg.get(k, field.zero)) for k in set(cf) | set(cg)}
        assert _nonzero(graded_coordinates(spec, total, gamma)) == _nonzero(expected)
        assert initial_subset_select(spec, total, [f, g]) == (0, 1)
        # replacing f and g by other representatives of their initial forms
        f2 = f + _higher_tail(spec, rng, f, w)
        g2 = g + _higher_tail(spec, rng, g, w)
        assert initial_equal(spec, f2 + g2, total)
    assert checked > 0


@pytest.mark.parametrize("fixture", ["gauss_q", "gauss_f3", "shifted_spec", "squares_spec"])
def test_cancelling_sum_is_not_a_sum_of_initial_forms(fixture, request, rng):
    spec = request.getfixturevalue(fixture)
    w = _positive(fixture, spec)
    for _ in range(100):
        f = sample_for(spec, rng, max_degree=2)
        g = -f + _higher_tail(spec, rng, f, w)
        total = f + g
        assert value_of(spec, g) == value_of(spec, f) < value_of(spec, total)
        with pytest.raises(PreconditionError):
            initial_subset_select(spec, total, [f, g])


@pytest.mark.parametrize("fixture", ALL_FIXTURES)
def test_initial_equal_is_an_equivalence(fixture, request, rng):
    spec = request.getfixturevalue(fixture)
    w = _positive(fixture, spec)
    for _ in range(100):
        f = sample_for(spec, rng, max_degree=2)
        g = sample_for(spec, rng, max_degree=2)
        assert initial_equal(spec, f, f)
        assert initial_equal(spec, f, g) == initial_equal(spec, g, f)

        f2 = f + _higher_tail(spec, rng, f, w)
        f3 = f2 + _higher_tail(spec, rng, f2, w)
        assert initial_equal(spec, f, f2) and initial_equal(spec, f2, f3)
        assert initial_equal(spec, f, f3)
        assert initial_equal(spec, f3, f)


def test_semigroup_examples():
    gens = [Value.of(3), Value.of(5)]
    assert semigroup_membership(gens, Value.of(7)) is None
    witness = semigroup_membership(gens, Value.of(8))
    assert witness.multiplicities == (1, 1)
    assert witness.value == Value.of(8)
    assert witness.to_dict() == {"0": 1, "1": 1}
    assert semigroup_membership(gens, Value.of(15)).multiplicities == (0, 3)
    assert [w.multiplicities for w in semigroup_witnesses(gens, Value.of(15))] == [(0, 3), (5, 0)]


def test_semigroup_rational_and_zero_generators():
    witness = semigroup_membership([Value.of("1/2"), Value.of(3)], Value.of("7/2"))
    assert witness.multiplicities == (1, 1)
    assert semigroup_membership([Value.of(0), Value.of(2)], Value.of(4)).multiplicities == (0, 2)
    assert semigroup_membership([Value.of(2)], Value.of(0)).multiplicities == (0,)
    assert semigroup_membership([], Value.of(1)) is None


def test_semigroup_rejects_bad_inputs():
    with pytest.raises(PreconditionError):
        semigroup_membership([Value.of(-1)], Value.of(2))
    with pytest.raises(PreconditionError):
        semigroup_membership([Value.of(1)], Value.parse("inf"))


def _brute_force(gens, target):
    ranges = [range(target // g + 1) for g in gens]
    return sorted(
        lam for lam in product(*ranges) if sum(n * g for n, g in zip(lam, gens)) == target
    )


def test_semigroup_matches_brute_force(rng):
    for _ in range(200):
        size = int(rng.integers(1, 4))
        gens = [int(g) for g in rng.integers(1, 10, size=size)]
        target = int(rng.integers(0, 41))
        expected = _brute_force(gens, target)
        values = [Value.of(g) for g in gens]

        witness = semigroup_membership(values, Value.of(target))
        if not expected:
            assert witness is None
            continue
        assert witness.multiplicities == expected[0]
        assert witness.value == Value.of(target)
        found = semigroup_witnesses(values, Value.of(target), limit=100000)
        assert [w.multiplicities for w in found] == expected


def test_semigroup_witness_limit():
    found = semigroup_witnesses([Value.of(1), Value.of(1)], Value.of(50), limit=5)
    assert len(found) == 5


def test_monomial_product():
    assert monomial_product([P("x"), P("x - 1")], [2, 1], P("1")) == P("x^3 - x^2")
    assert monomial_product([P("x")], [0], P("1")) == P("1")
    assert monomial_product([P("x"), B("y")], [1, 1], P("1")) == B("x*y")


def test_homogeneous_generators(gauss_q, squares_spec):
    pairs = homogeneous_generators(gauss_q, [P("x")], Value.of(2))
    assert [(w.multiplicities, m) for w, m in pairs] == [((2,), P("x^2"))]

    pairs = homogeneous_generators(squares_spec, [B("x"), B("y")], Value.of(2))
    assert [m for _, m in pairs] == [B("y^2"), B("x*y"), B("x^2")]


def test_gs3_witness_examples(squares_spec):
    Qset = [B("x")]
    result = gs3_witness(squares_spec, Qset, B("y"))
    assert result.ok
    assert result.z == 1
    assert result.monomial == B("x")
    assert result.to_dict() == {"ok": True, "z": "1", "multiplicities": {"0": 1}, "monomial": "x"}

    result = gs3_witness(squares_spec, Qset, B("y - x"))
    assert result.monomial == B("x^4")
    assert gs3_witness(squares_spec, Qset, B("2*y")).z == 2


def test_gs3_witness_failures(gauss_q):
    result = gs3_witness(gauss_q, [P("x^2")], P("x"))
    assert not result.ok
    assert result.reason == VALUE_NOT_IN_SEMIGROUP
    assert result.to_dict() == {"ok": False, "reason": VALUE_NOT_IN_SEMIGROUP}

    spec = MonomialBivariateSpec(QQ, 1, 1)
    assert gs3_witness(spec, [B("x")], B("y")).reason == RESIDUE_MISMATCH


def test_gs3_witness_reports_the_search_limit(monkeypatch):
    spec = MonomialBivariateSpec(QQ, 1, 1)
    Qset = [B("x"), B("y")]
    # exponent vectors of value 2 in order: y^2, x*y, x^2
    assert gs3_witness(spec, Qset, B("x^2"), limit=1).reason == WITNESS_LIMIT_REACHED
    assert gs3_witness(spec, Qset, B("x^2"), limit=3).monomial == B("x^2")
    assert gs3_witness(spec, Qset, B("x^2 + y^2"), limit=3).reason == RESIDUE_MISMATCH

    monkeypatch.setattr(config, "WITNESS_SEARCH_LIMIT", 2)
    assert gs3_witness(spec, Qset, B("x^2")).reason == WITNESS_LIMIT_REACHED
    assert gs3_witness(spec, Qset, B("x*y")).ok


def test_gs3_witness_preconditions(gauss_q, padic_gauss):
    with pytest.raises(NotCentered):
        gs3_witness(padic_gauss, [P("x")], P("x"))
    with pytest.raises(PreconditionError):
        gs3_witness(gauss_q, [P("x")], P("0"))


def test_gs3_witness_reproduces_initial_form(gauss_q, rng):
    Qset = [P("x")]
    for _ in range(50):
        f = sample_for(gauss_q, rng)
        result = gs3_witness(gauss_q, Qset, f)
        assert result.ok
        assert initial_equal(gauss_q, f, result.monomial.scale(result.z))
        assert result.z == Fraction(f.coeffs[next(i for i, c in enumerate(f.coeffs) if c != 0)])
