"""Shared fixtures: the valuation fixtures and seeded polynomial generators"""

import numpy as np
import pytest

from config.config import TestingConfig, apply_config
from valgen.core_algebra import BivarPoly, FieldSpec, Poly
from valgen.genseq import random_bivariate, random_poly, squares_embedding
from valgen.parsing import parse_bivariate, parse_poly
from valgen.valuation import EmbeddingSpec, GaussSpec, PAdicSpec, TrivialSpec, TruncationSpec

apply_config(TestingConfig())

QQ = FieldSpec.rationals()
F2 = FieldSpec.prime(2)
F3 = FieldSpec.prime(3)


def P(text, field=QQ):
    return parse_poly(text, field)


def B(text, field=QQ):
    return parse_bivariate(text, field)


@pytest.fixture
def gauss_q():
    return GaussSpec(TrivialSpec(QQ), 1)


@pytest.fixture
def gauss_f3():
    return GaussSpec(TrivialSpec(F3), 1)


@pytest.fixture
def gauss_f2():
    return GaussSpec(TrivialSpec(F2), 1)


@pytest.fixture
def padic_gauss():
    return GaussSpec(PAdicSpec(3), "1/2")


@pytest.fixture
def squares_spec():
    return squares_embedding(QQ, 17)


@pytest.fixture
def shifted_spec():
    return EmbeddingSpec.of(QQ, {"x": "1 + t"})


@pytest.fixture
def truncated_gauss():
    return TruncationSpec(GaussSpec(PAdicSpec(3), 1), P("x - 1"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


UNIVARIATE_FIXTURES = ["gauss_q", "gauss_f3", "padic_gauss", "shifted_spec", "truncated_gauss"]
ALL_FIXTURES = UNIVARIATE_FIXTURES + ["squares_spec"]


def sample_for(spec, rng, max_degree=3, bound=3):
    """A random nonzero polynomial in the ring the spec lives on"""
    if spec.bivariate:
        return random_bivariate(rng, spec.field, min(max_degree, 2), bound)
    return random_poly(rng, spec.field, max_degree, bound, min_degree=0)


@pytest.fixture
def sample(rng):
    def draw(spec, max_degree=3, bound=3):
        return sample_for(spec, rng, max_degree, bound)

    return draw


