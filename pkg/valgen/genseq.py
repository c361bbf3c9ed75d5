"""
Generating Sequence Module
Completeness, the GS1* decomposition, the GS1*/GS2/GS3 corpus checkers,
theorem cross-checks and the squares-series counterexample
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.config import config
from valgen.core_algebra import (
    ZERO,
    BivarPoly,
    FieldElement,
    FieldSpec,
    Poly,
    Value,
    as_bivariate,
    enumerate_polys,
    poly_divrem_any,
    poly_gcd,
    q_expansion,
    solve_linear_combination,
)
from valgen.errors import CertificateError, NoEligibleQ, NonMonicDivisor, PreconditionError, UnsupportedShape
from valgen.graded import (
    monomial_product,
    require_centered,
    semigroup_membership,
    semigroup_witnesses,
    gs3_witness,
)
from valgen.keypoly import epsilon, is_key
from valgen.series import GenSeries
from valgen.valuation import (
    EmbeddingSpec,
    SeriesImage,
    ValuationSpec,
    graded_coordinates,
    is_centered,
    nu_Q,
    value_of,
)
from valgen.workers import batched_map

logger = logging.getLogger(__name__)

AnyPoly = Union[Poly, BivarPoly]

PASS = "pass"
FAIL = "fail"


# ---------------------------------------------------------------------------
# Monomials and certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialExpr:
    """Q^lambda as a map from positions in Qset to positive exponents; empty is 1"""

    exponents: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: Dict[int, int] = {}
        for index, power in self.exponents:
            if power < 0:
                raise PreconditionError(f"negative exponent {power} in monomial")
            merged[index] = merged.get(index, 0) + power
        object.__setattr__(self, "exponents", tuple(sorted((i, n) for i, n in merged.items() if n)))

    @classmethod
    def of(cls, mapping: Dict[int, int]) -> "MonomialExpr":
        return cls(tuple(mapping.items()))

    def as_map(self) -> Dict[int, int]:
        return dict(self.exponents)

    def times(self, index: int, power: int) -> "MonomialExpr":
        return MonomialExpr(self.exponents + ((index, power),))

    def degree(self, Qset: Sequence[Poly]) -> int:
        return sum(Qset[i].degree * n for i, n in self.exponents)

    def evaluate(self, Qset: Sequence[AnyPoly], like: AnyPoly) -> AnyPoly:
        multiplicities = [0] * len(Qset)
        for i, n in self.exponents:
            multiplicities[i] = n
        return monomial_product(Qset, multiplicities, like)

    def format(self, Qset: Sequence[AnyPoly]) -> str:
        if not self.exponents:
            return "1"
        pieces = []
        for i, n in self.exponents:
            base = str(Qset[i])
            base = f"({base})" if " " in base else base
            pieces.append(base if n == 1 else f"{base}^{n}")
        return "*".join(pieces)


@dataclass(frozen=True)
class GS1StarCert:
    """f = sum a_i Q^lambda_i with nu(a_i Q^lambda_i) >= nu(f) and deg(Q) <= deg(f) for used Q"""

    terms: Tuple[Tuple[FieldElement, MonomialExpr], ...]

    def reconstruct(self, Qset: Sequence[Poly], field: FieldSpec) -> Poly:
        total = Poly.zero(field)
        like = Poly.constant(field, 1)
        for a, lam in self.terms:
            total = total + lam.evaluate(Qset, like).scale(a)
        return total

    def to_dict(self, Qset: Sequence[Poly], field: FieldSpec) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "terms": [
                {"coefficient": field.format_element(a), "monomial": lam.format(Qset)}
                for a, lam in self.terms
            ]
        }

    def format(self, Qset: Sequence[Poly], field: FieldSpec) -> str:
        return " + ".join(f"{field.format_element(a)}*{lam.format(Qset)}" for a, lam in self.terms) or "0"


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    clause: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _check_qset(Qset: Sequence[Poly]) -> None:
    for Q in Qset:
        if not isinstance(Q, Poly) or Q.is_zero or Q.degree < 1 or not Q.is_monic:
            raise NonMonicDivisor(f"Qset members must be monic of degree >= 1, got {Q}", divisor=Q)


def _eligible(spec: ValuationSpec, Qset: Sequence[Poly], f: Poly) -> List[int]:
    value = value_of(spec, f)
    return [j for j, Q in enumerate(Qset) if Q.degree <= f.degree and nu_Q(spec, Q, f) == value]


def gs1star_decompose(spec: ValuationSpec, Qset: Sequence[Poly], f: Poly) -> GS1StarCert:
    """
    Build a GS1* certificate for f by recursive Q-expansion

    Picks q in Qset with deg(q) <= deg(f) and nu_q(f) = nu(f) (least degree, then least
    epsilon, then smallest coefficients), expands f in q, decomposes each coefficient and
    adds i to the exponent of q in the terms coming from the i-th coefficient.

    Args:
        spec: Univariate valuation
        Qset: Monic polynomials of degree >= 1
        f: Polynomial to decompose

    Returns:
        Verified GS1StarCert
    """
    _check_qset(Qset)
    k = spec.field

    def decompose(g: Poly) -> List[Tuple[FieldElement, MonomialExpr]]:
        if g.is_zero:
            return []
        if g.is_constant:
            return [(g.coeffs[0], MonomialExpr())]
        eligible = _eligible(spec, Qset, g)
        if not eligible:
            raise NoEligibleQ(f"no Q with deg(Q) <= {g.degree} and nu_Q({g}) = nu({g})", witness=g)
        j = min(eligible, key=lambda i: (Qset[i].degree, epsilon(spec, Qset[i]).epsilon, Qset[i].sort_key()))
        terms: List[Tuple[FieldElement, MonomialExpr]] = []
        for g_i, i in sorted(q_expansion(g, Qset[j]).parts, key=lambda part: -part[1]):
            for a, lam in decompose(g_i):
                terms.append((a, lam.times(j, i) if i else lam))
        return terms

    cert = GS1StarCert(tuple(decompose(f)))
    result = gs1star_verify(spec, f, cert, Qset)
    if not result:
        raise CertificateError(f"decomposition of {f} failed its {result.clause} clause", clause=result.clause)
    logger.debug(f"GS1* certificate for {f}: {cert.format(Qset, k)}")
    return cert


def gs1star_verify(spec: ValuationSpec, f: Poly, cert: GS1StarCert, Qset: Sequence[Poly]) -> VerifyResult:
    """
    Recheck a GS1* certificate from scratch

    Args:
        spec: Univariate valuation
        f: Polynomial the certificate claims to represent
        cert: Certificate
        Qset: Polynomials the monomial indices refer to

    Returns:
        VerifyResult naming the first violated clause (reconstruction, value or degree)
    """
    for _, lam in cert.terms:
        if any(i >= len(Qset) for i, _ in lam.exponents):
            return VerifyResult(False, "index", f"monomial refers outside the {len(Qset)} members")
    if cert.reconstruct(Qset, spec.field) != f:
        return VerifyResult(False, "reconstruction", "terms do not sum to f")

    value = value_of(spec, f)
    like = Poly.constant(spec.field, 1)
    for a, lam in cert.terms:
        term = lam.evaluate(Qset, like).scale(a)
        if value_of(spec, term) < value:
            return VerifyResult(False, "value", f"term {term} has value below {value}")
    degree = f.degree if not f.is_zero else 0
    for _, lam in cert.terms:
        for i, _ in lam.exponents:
            if Qset[i].degree > degree:
                return VerifyResult(False, "degree", f"{Qset[i]} has degree above {degree}")
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# Corpora
# ---------------------------------------------------------------------------


def balanced_coefficients(field: FieldSpec, bound: int) -> List[FieldElement]:
    """0, 1, -1, 2, -2, ... up to the bound; all of F_p in order for prime fields"""
    if field.is_finite:
        return field.elements()
    values: List[FieldElement] = [Fraction(0)]
    for c in range(1, bound + 1):
        values.extend([Fraction(c), Fraction(-c)])
    return values


@dataclass
class Corpus:
    """A bounded set of test polynomials and how it was built"""

    field: FieldSpec
    max_degree: int
    polynomials: List[AnyPoly] = dataclass_field(default_factory=list)
    kind: str = "explicit"
    seed: Optional[int] = None
    bivariate: bool = False

    def __post_init__(self):
        for f in self.polynomials:
            if not f.is_zero and f.degree > self.max_degree:
                raise PreconditionError(f"{f} exceeds the corpus degree bound {self.max_degree}")

    @classmethod
    def explicit(cls, field: FieldSpec, polynomials: Sequence[AnyPoly], max_degree: Optional[int] = None) -> "Corpus":
        degree = max((f.degree for f in polynomials if not f.is_zero), default=0)
        bivariate = any(isinstance(f, BivarPoly) for f in polynomials)
        return cls(field, max_degree if max_degree is not None else degree, list(polynomials), "explicit", None, bivariate)

    @classmethod
    def exhaustive(cls, field: FieldSpec, max_degree: int, bound: Optional[int] = None) -> "Corpus":
        """
        Every nonzero polynomial of degree <= max_degree over a finite coefficient set

        Args:
            field: Coefficient field
            max_degree: Degree bound
            bound: Coefficient magnitude bound over Q (balanced representatives of F_3 by default)

        Returns:
            Corpus ordered by degree, then leading coefficient, then lower coefficients
        """
        coefficients = balanced_coefficients(field, bound if bound is not None else 1)
        polys = [f for d in range(max_degree + 1) for f in enumerate_polys(field, d, coefficients)]
        logger.info(f"Built exhaustive corpus of {len(polys)} polynomials over {field}, degree <= {max_degree}")
        return cls(field, max_degree, polys, "exhaustive")

    @classmethod
    def random(
        cls,
        field: FieldSpec,
        max_degree: int,
        sample_size: Optional[int] = None,
        seed: Optional[int] = None,
        bound: Optional[int] = None,
    ) -> "Corpus":
        """Seeded random nonconstant univariate polynomials"""
        sample_size = sample_size if sample_size is not None else config.RANDOM_SAMPLE_SIZE
        seed = seed if seed is not None else config.DEFAULT_SEED
        rng = np.random.default_rng(seed)
        polys = [random_poly(rng, field, max_degree, bound) for _ in range(sample_size)]
        return cls(field, max_degree, polys, "random", seed)

    @classmethod
    def monomials(
        cls,
        field: FieldSpec,
        max_degree: int,
        random_extra: int = 0,
        seed: Optional[int] = None,
        bound: Optional[int] = None,
    ) -> "Corpus":
        """All x^i y^j with i + j <= max_degree, then seeded random bivariate polynomials"""
        polys: List[AnyPoly] = [
            BivarPoly.monomial(field, i, n - i) for n in range(max_degree + 1) for i in range(n, -1, -1)
        ]
        if random_extra:
            seed = seed if seed is not None else config.DEFAULT_SEED
            rng = np.random.default_rng(seed)
            polys.extend(random_bivariate(rng, field, max_degree, bound) for _ in range(random_extra))
        return cls(field, max_degree, polys, "monomials", seed, True)

    @property
    def description(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "field": str(self.field),
            "max_degree": self.max_degree,
            "size": len(self.polynomials),
            "seed": self.seed,
        }


def _random_coefficient(rng: np.random.Generator, field: FieldSpec, bound: Optional[int]) -> FieldElement:
    bound = bound if bound is not None else config.RANDOM_COEFF_BOUND
    if field.is_finite:
        return int(rng.integers(0, field.characteristic))
    return Fraction(int(rng.integers(-bound, bound + 1)))


def random_poly(
    rng: np.random.Generator, field: FieldSpec, max_degree: int, bound: Optional[int] = None, min_degree: int = 1
) -> Poly:
    """Random polynomial with degree drawn from [min_degree, max_degree] and nonzero leading coefficient"""
    degree = int(rng.integers(min_degree, max_degree + 1))
    coeffs = [_random_coefficient(rng, field, bound) for _ in range(degree + 1)]
    if field.element(coeffs[-1]) == 0:
        coeffs[-1] = field.one
    return Poly(field, tuple(field.element(c) for c in coeffs))


def random_bivariate(rng: np.random.Generator, field: FieldSpec, max_degree: int, bound: Optional[int] = None) -> BivarPoly:
    """Random nonzero polynomial in x, y of total degree <= max_degree"""
    terms = {}
    for n in range(max_degree + 1):
        for i in range(n + 1):
            terms[(i, n - i)] = _random_coefficient(rng, field, bound)
    poly = BivarPoly.from_dict(field, terms)
    return poly if not poly.is_zero else BivarPoly.y(field)


# ---------------------------------------------------------------------------
# Check reports
# ---------------------------------------------------------------------------


@dataclass
class CheckReport:
    """Verdict over a bounded corpus; a pass only means no counterexample within scope"""

    check: str
    verdict: str
    scope: Dict[str, Any]
    witness: Optional[AnyPoly] = None
    detail: str = ""
    rows: List[Dict[str, Any]] = dataclass_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "check": self.check,
            "verdict": self.verdict,
            "witness": str(self.witness) if self.witness is not None else None,
            "detail": self.detail,
            "scope": self.scope,
        }


def _run_rows(
    check: str,
    corpus: Corpus,
    scope: Dict[str, Any],
    row_for: Callable[[AnyPoly], Dict[str, Any]],
    max_workers: Optional[int],
) -> CheckReport:
    rows = list(batched_map(row_for, corpus.polynomials, max_workers))
    failures = [(f, row) for f, row in zip(corpus.polynomials, rows) if row["outcome"] == FAIL]
    if failures:
        f, row = failures[0]
        logger.info(f"{check}: fail at {f} ({row['detail']})")
        return CheckReport(check, FAIL, scope, f, row["detail"], rows)
    logger.info(f"{check}: pass on {len(rows)} corpus members")
    return CheckReport(check, PASS, scope, None, "no counterexample within scope", rows)


def _row(f: AnyPoly, value: Value, outcome: str, detail: str = "") -> Dict[str, Any]:
    return {"polynomial": str(f), "value": str(value), "outcome": outcome, "detail": detail}


def completeness_check(
    spec: ValuationSpec, Qset: Sequence[Poly], corpus: Corpus, max_workers: Optional[int] = None
) -> CheckReport:
    """
    For each corpus f, look for Q with deg(Q) <= deg(f) and nu_Q(f) = nu(f)

    Args:
        spec: Univariate valuation
        Qset: Monic polynomials of degree >= 1
        corpus: Polynomials to test; constants are vacuous

    Returns:
        CheckReport; fail carries the first f in corpus order with no such Q
    """
    _check_qset(Qset)
    scope = {"corpus": corpus.description, "qset": [str(Q) for Q in Qset]}

    def row_for(f: Poly) -> Dict[str, Any]:
        if f.is_zero or f.is_constant:
            return _row(f, value_of(spec, f), "vacuous")
        eligible = _eligible(spec, Qset, f)
        if not eligible:
            return _row(f, value_of(spec, f), FAIL, "no Q with nu_Q(f) = nu(f)")
        return _row(f, value_of(spec, f), PASS, f"Q = {Qset[eligible[0]]}")

    return _run_rows("completeness", corpus, scope, row_for, max_workers)


def gs1star_check(
    spec: ValuationSpec, Qset: Sequence[Poly], corpus: Corpus, max_workers: Optional[int] = None
) -> CheckReport:
    """Decompose and verify every corpus member; fail at the first NoEligibleQ or rejected certificate"""
    _check_qset(Qset)
    scope = {"corpus": corpus.description, "qset": [str(Q) for Q in Qset]}

    def row_for(f: Poly) -> Dict[str, Any]:
        value = value_of(spec, f)
        try:
            cert = gs1star_decompose(spec, Qset, f)
        except NoEligibleQ as e:
            return _row(f, value, FAIL, e.message)
        except CertificateError as e:
            return _row(f, value, FAIL, e.message)
        return _row(f, value, PASS, cert.format(Qset, spec.field))

    return _run_rows("gs1star", corpus, scope, row_for, max_workers)


# ---------------------------------------------------------------------------
# GS2
# ---------------------------------------------------------------------------


def _minimal_exponent_box(values: Sequence[Value], gamma: Value) -> List[Tuple[int, ...]]:
    """Exponent vectors in the box lambda_i <= ceil(gamma / nu(Q_i)) with sum lambda_i nu(Q_i) >= gamma"""
    bounds = []
    for v in values:
        if v > ZERO:
            bounds.append(int(-(-gamma.q // v.q)))
        else:
            bounds.append(0)
    eligible = []
    for lam in product(*(range(b + 1) for b in bounds)):
        total = sum((v.q * n for v, n in zip(values, lam)), Fraction(0))
        if Value.of(total) >= gamma:
            eligible.append(lam)
    return eligible


def gs2_check(
    spec: ValuationSpec,
    Qset: Sequence[AnyPoly],
    gamma: Value,
    corpus: Corpus,
    max_workers: Optional[int] = None,
) -> CheckReport:
    """
    Decide, on the corpus, whether P_gamma lies in the ideal generated by {Q^lambda : nu(Q^lambda) >= gamma}

    Univariate: the ideal is principal, generated by the gcd of the eligible monomials.
    Bivariate: Qset must consist of monomials and every term of f must be divisible by an
    eligible monomial.

    Args:
        spec: Centered valuation
        Qset: Polynomials (monomials on k[x,y])
        gamma: Grade
        corpus: Polynomials; those with nu(f) < gamma are skipped

    Returns:
        CheckReport; fail carries the first f of value >= gamma outside the ideal
    """
    require_centered(spec)
    gamma = Value.of(gamma)
    scope = {"corpus": corpus.description, "qset": [str(Q) for Q in Qset], "gamma": str(gamma)}

    if gamma <= ZERO:
        def trivially(f: AnyPoly) -> Dict[str, Any]:
            return _row(f, value_of(spec, f), PASS, "P_gamma = R")

        return _run_rows("gs2", corpus, scope, trivially, max_workers)

    values = [value_of(spec, Q) for Q in Qset]
    exponents = _minimal_exponent_box(values, gamma)

    if spec.bivariate:
        shapes = [as_bivariate(Q) for Q in Qset]
        if not all(Q.is_monomial for Q in shapes):
            raise UnsupportedShape("bivariate GS2 is decided for monomial Qsets only", qset=[str(Q) for Q in Qset])
        powers = [Q.terms[0][0] for Q in shapes]
        generators = [
            (sum(n * p[0] for n, p in zip(lam, powers)), sum(n * p[1] for n, p in zip(lam, powers)))
            for lam in exponents
        ]
        scope["generators"] = [str(BivarPoly.monomial(spec.field, a, b)) for a, b in generators]

        def in_ideal(f: AnyPoly) -> bool:
            return all(
                any(i >= a and j >= b for a, b in generators) for (i, j), _ in as_bivariate(f).terms
            )

    else:
        like = Poly.constant(spec.field, 1)
        monomials = [monomial_product(Qset, lam, like) for lam in exponents]
        generator = Poly.zero(spec.field)
        for m in monomials:
            generator = poly_gcd(generator, m)
        scope["generator"] = str(generator)

        def in_ideal(f: AnyPoly) -> bool:
            f = f if isinstance(f, Poly) else as_bivariate(f).to_univariate()
            if generator.is_zero:
                return f.is_zero
            return poly_divrem_any(f, generator)[1].is_zero

    def row_for(f: AnyPoly) -> Dict[str, Any]:
        value = value_of(spec, f)
        if value < gamma:
            return _row(f, value, "skipped", "below gamma")
        if in_ideal(f):
            return _row(f, value, PASS)
        return _row(f, value, FAIL, "not in the ideal of eligible monomials")

    return _run_rows("gs2", corpus, scope, row_for, max_workers)


# ---------------------------------------------------------------------------
# GS3
# ---------------------------------------------------------------------------


def default_value_cap(spec: ValuationSpec, Qset: Sequence[AnyPoly], corpus: Corpus) -> Value:
    finite = [v for v in (value_of(spec, Q) for Q in Qset) if v.is_finite]
    top = max(finite + [Value.of(1)])
    return top * corpus.max_degree + config.GS3_VALUE_SLACK


def _subtract(f: AnyPoly, g: AnyPoly) -> AnyPoly:
    if type(f) is type(g):
        return f - g
    return as_bivariate(f) - as_bivariate(g)


def peel(
    spec: ValuationSpec, Qset: Sequence[AnyPoly], f: AnyPoly, value_cap: Value
) -> Tuple[bool, List[Dict[str, Any]], str]:
    """
    Strip initial forms off f until its value exceeds the cap

    Each step subtracts z * Q^lambda when one monomial matches in_nu(f), otherwise a linear
    combination of the monomials of that grade.

    Returns:
        (success, steps, failure reason)
    """
    steps: List[Dict[str, Any]] = []
    current = f
    while not current.is_zero:
        value = value_of(spec, current)
        if value > value_cap:
            break
        single = gs3_witness(spec, Qset, current)
        if single.ok:
            steps.append({"value": str(value), "rule": "monomial", "monomial": str(single.monomial)})
            current = _subtract(current, single.monomial.scale(single.z))
            continue

        witnesses = semigroup_witnesses([value_of(spec, Q) for Q in Qset], value)
        if not witnesses:
            return False, steps, single.reason
        monomials = [monomial_product(Qset, w.multiplicities, current) for w in witnesses]
        columns = [graded_coordinates(spec, m, value) for m in monomials]
        solution = solve_linear_combination(spec.field, columns, graded_coordinates(spec, current, value))
        if solution is None:
            return False, steps, single.reason
        combination = None
        for z, m in zip(solution, monomials):
            if z != 0:
                term = m.scale(z)
                combination = term if combination is None else _subtract(combination, term.scale(spec.field.neg(spec.field.one)))
        steps.append({"value": str(value), "rule": "combination", "monomial": str(combination)})
        current = _subtract(current, combination)
    return True, steps, ""


def gs3_check(
    spec: ValuationSpec,
    Qset: Sequence[AnyPoly],
    corpus: Corpus,
    value_cap: Optional[Value] = None,
    max_workers: Optional[int] = None,
) -> CheckReport:
    """
    Decide, on the corpus, whether every initial form (and its tails up to the cap) lies in
    the algebra generated by the initial forms of Qset

    Args:
        spec: Centered valuation trivial on K
        Qset: Nonzero polynomials
        corpus: Polynomials to peel
        value_cap: Stop peeling above this value

    Returns:
        CheckReport; fail carries the first corpus f whose peeling got stuck
    """
    require_centered(spec)
    cap = Value.of(value_cap) if value_cap is not None else default_value_cap(spec, Qset, corpus)
    scope = {"corpus": corpus.description, "qset": [str(Q) for Q in Qset], "value_cap": str(cap)}

    def row_for(f: AnyPoly) -> Dict[str, Any]:
        value = value_of(spec, f)
        if f.is_zero:
            return _row(f, value, "vacuous")
        ok, steps, reason = peel(spec, Qset, f, cap)
        if not ok:
            return _row(f, value, FAIL, reason)
        return _row(f, value, PASS, f"{len(steps)} peel steps")

    return _run_rows("gs3", corpus, scope, row_for, max_workers)


# ---------------------------------------------------------------------------
# Counterexample and theorem cross-checks
# ---------------------------------------------------------------------------

MIN_COUNTEREXAMPLE_PRECISION = 17


def squares_embedding(field: FieldSpec, precision: int) -> EmbeddingSpec:
    """x -> t, y -> t + t^4 + t^9 + ... truncated at the precision"""
    return EmbeddingSpec(
        field,
        (("x", SeriesImage(literal=GenSeries.monomial(field, 1))), ("y", SeriesImage(squares_precision=precision))),
    )


def _check_counterexample(
    values: Dict[str, str], expected: Dict[str, str], gs3: CheckReport, gs2: CheckReport
) -> None:
    for label, want in expected.items():
        if values[label] != want:
            raise CertificateError(f"nu({label}) = {values[label]}, expected {want}", clause="value", label=label)
    if not gs3.passed:
        raise CertificateError(f"GS3 failed at {gs3.witness}", clause="gs3", witness=gs3.witness)
    if gs2.passed or str(gs2.witness) != "y":
        raise CertificateError(f"GS2 gave {gs2.verdict} with witness {gs2.witness}, expected fail at y", clause="gs2")


def counterexample_run(
    precision: int,
    random_extra: Optional[int] = None,
    seed: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> Dict[str, Any]:
    """
    Show that {x} satisfies GS3 but not GS2 for x -> t, y -> sum t^(i^2)

    Args:
        precision: Precision of the squares series, at least 17
        random_extra: Random bivariate polynomials added to the monomial corpus
        seed: Seed for those polynomials

    Returns:
        Report with the chain values, both verdicts and the separation flag

    Raises:
        CertificateError: A chain value, a verdict or the GS2 witness differs from the expected one
    """
    if precision < MIN_COUNTEREXAMPLE_PRECISION:
        raise PreconditionError(
            f"precision must be at least {MIN_COUNTEREXAMPLE_PRECISION} to see t^16, got {precision}"
        )
    field = FieldSpec.rationals()
    spec = squares_embedding(field, precision)
    x, y = BivarPoly.x(field), BivarPoly.y(field)

    values: Dict[str, str] = {"x": str(value_of(spec, x)), "y": str(value_of(spec, y))}
    expected: Dict[str, str] = {"x": "1", "y": "1"}
    chain = y
    label = "y"
    k = 1
    while k <= 2 or (k + 2) ** 2 < precision:
        chain = chain - x ** (k * k)
        label += " - x" if k == 1 else f" - x^{k * k}"
        values[label] = str(value_of(spec, chain))
        expected[label] = str((k + 1) ** 2)
        k += 1

    random_extra = config.RANDOM_SAMPLE_SIZE if random_extra is None else random_extra
    corpus = Corpus.monomials(field, 3, random_extra, seed)
    Qset = [x]
    gs3 = gs3_check(spec, Qset, corpus, max_workers=max_workers)
    gs2 = gs2_check(spec, Qset, Value.of(1), corpus, max_workers=max_workers)
    generated = semigroup_membership([value_of(spec, x)], value_of(spec, y)) is not None
    logger.info(f"Counterexample at precision {precision}: GS3 {gs3.verdict}, GS2 {gs2.verdict}")
    _check_counterexample(values, expected, gs3, gs2)

    return {
        "precision": precision,
        "spec": spec.to_dict(),
        "values": values,
        "gs3": gs3.to_dict(),
        "gs2": gs2.to_dict(),
        "value_of_y_in_semigroup": generated,
        "separates": gs3.passed and not gs2.passed,
    }


def max_epsilon_member(spec: ValuationSpec, Qset: Sequence[Poly]) -> Tuple[int, Poly]:
    """Position and polynomial of the member with the largest epsilon (first on ties)"""
    if not Qset:
        raise PreconditionError("empty Qset")
    epsilons = [epsilon(spec, Q).epsilon for Q in Qset]
    best = max(range(len(Qset)), key=lambda i: (epsilons[i], -i))
    return best, Qset[best]


def max_epsilon_truncates(spec: ValuationSpec, Qset: Sequence[Poly]) -> Dict[str, Any]:
    """
    Check that the max-epsilon member Q' truncates every member exactly: nu_Q'(Q) = nu(Q)

    Returns:
        Report with Q', the per-member outcome and the overall flag
    """
    _check_qset(Qset)
    index, top = max_epsilon_member(spec, Qset)
    members = {str(Q): nu_Q(spec, top, Q) == value_of(spec, Q) for Q in Qset}
    return {"max_epsilon_member": str(top), "index": index, "members": members, "holds": all(members.values())}


def _positive_values(spec: ValuationSpec, corpus: Corpus) -> List[Value]:
    values = {value_of(spec, f) for f in corpus.polynomials if not f.is_zero}
    return sorted(v for v in values if v.is_finite and v > ZERO)


def theorem_crosschecks(
    spec: ValuationSpec,
    Qset: Sequence[AnyPoly],
    corpus: Corpus,
    gammas: Optional[Sequence[Value]] = None,
    key_qset: Optional[bool] = None,
    max_workers: Optional[int] = None,
) -> Dict[str, Any]:
    """
    Run the checkers on one fixture and test the implications between their verdicts

    GS2 pass must imply GS3 pass; GS3 pass must put every corpus value in the semigroup of
    nu(Qset); for key-polynomial Qsets completeness must agree with corpus-wide GS1*
    decomposition. The converse GS3 => GS2 is recorded, never asserted.

    Args:
        spec: Valuation
        Qset: Polynomials
        corpus: Polynomials to check
        gammas: Grades for GS2; defaults to the positive corpus values
        key_qset: Whether Qset consists of key polynomials; decided by is_key over F_p when omitted

    Returns:
        Report with every verdict, each implication's status and a `violations` list
    """
    report: Dict[str, Any] = {"scope": {"corpus": corpus.description, "qset": [str(Q) for Q in Qset]}}
    violations: List[str] = []

    if is_centered(spec):
        gammas = [Value.of(g) for g in gammas] if gammas is not None else _positive_values(spec, corpus)
        gs2_reports = [gs2_check(spec, Qset, g, corpus, max_workers) for g in gammas]
        gs2_pass = all(r.passed for r in gs2_reports)
        gs3 = gs3_check(spec, Qset, corpus, max_workers=max_workers)
        report["gs2"] = {str(g): r.verdict for g, r in zip(gammas, gs2_reports)}
        report["gs3"] = gs3.verdict

        if gs2_pass and not gs3.passed:
            violations.append("GS2 holds but GS3 fails")
        report["gs2_implies_gs3"] = not (gs2_pass and not gs3.passed)

        if gs3.passed:
            generators = [value_of(spec, Q) for Q in Qset]
            outside = [
                str(f)
                for f in corpus.polynomials
                if not f.is_zero and semigroup_membership(generators, value_of(spec, f)) is None
            ]
            if outside:
                violations.append(f"GS3 holds but values of {outside} are outside the semigroup")
            report["gs3_implies_semigroup"] = not outside
        else:
            report["gs3_implies_semigroup"] = None
        report["gs3_implies_gs2_recorded"] = gs2_pass if gs3.passed else None
    else:
        report["gs2"] = report["gs3"] = "not centered"

    univariate = not spec.bivariate and all(isinstance(Q, Poly) for Q in Qset)
    if univariate and not corpus.bivariate:
        if key_qset is None and spec.field.is_finite:
            key_qset = all(is_key(spec, Q, max_workers)[0] for Q in Qset)
        complete = completeness_check(spec, Qset, corpus, max_workers)
        decomposed = gs1star_check(spec, Qset, corpus, max_workers)
        report["complete"] = complete.verdict
        report["gs1star"] = decomposed.verdict
        report["key_qset"] = key_qset
        agree = complete.passed == decomposed.passed
        report["completeness_matches_gs1star"] = agree
        if key_qset and not agree:
            violations.append("completeness and GS1* disagree for a key-polynomial Qset")
        if key_qset:
            report["max_epsilon_truncation"] = max_epsilon_truncates(spec, Qset)["holds"]

    report["violations"] = violations
    if violations:
        logger.error(f"Theorem cross-check violations: {violations}")
    return report
