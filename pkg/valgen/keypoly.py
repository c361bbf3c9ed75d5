"""
Key Polynomial Module
Hasse derivatives, the invariant epsilon with its maximizing indices,
the key-polynomial decision over finite fields and root-fixture delta
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from math import comb
from typing import Any, Dict, Iterator, List, Optional, Tuple

from valgen.core_algebra import (
    NEG_INF,
    FieldSpec,
    Poly,
    Value,
    enumerate_polys,
    poly_divrem,
)
from valgen.errors import NonMonicDivisor, PreconditionError
from valgen.valuation import ValuationSpec, base_is_trivial, nu_Q, value_of
from valgen.workers import batched_map

logger = logging.getLogger(__name__)


def hasse_derivative(f: Poly, k: int) -> Poly:
    """
    Hasse derivative of order k: sum C(j, k) a_j x^(j-k)

    Args:
        f: Polynomial
        k: Order, at least 1

    Returns:
        The derivative, binomials reduced in the field
    """
    if k < 1:
        raise PreconditionError(f"Hasse derivative order must be >= 1, got {k}")
    k_field = f.field
    coeffs = [k_field.mul(k_field.element(comb(j, k)), a) for j, a in enumerate(f.coeffs) if j >= k]
    return Poly(k_field, tuple(coeffs))


@dataclass(frozen=True)
class EpsilonReport:
    """epsilon(f) and the set I(f) of orders achieving it"""

    epsilon: Value
    indices: Tuple[int, ...] = ()
    quotients: Tuple[Tuple[int, Value], ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "epsilon": str(self.epsilon),
            "indices": list(self.indices),
            "quotients": {str(k): str(q) for k, q in self.quotients},
        }

    def __str__(self) -> str:
        return f"epsilon={self.epsilon} indices=[{', '.join(str(k) for k in self.indices)}]"


def epsilon(spec: ValuationSpec, f: Poly) -> EpsilonReport:
    """
    epsilon(f) = max over k of (nu(f) - nu(d_k f)) / k, skipping vanishing derivatives

    Args:
        spec: Univariate valuation spec
        f: Nonzero polynomial

    Returns:
        EpsilonReport; -inf with no indices for constants
    """
    if f.is_zero:
        raise PreconditionError("epsilon is undefined for the zero polynomial")
    if f.is_constant:
        return EpsilonReport(NEG_INF)

    value_f = value_of(spec, f)
    quotients: List[Tuple[int, Value]] = []
    for k in range(1, f.degree + 1):
        derivative = hasse_derivative(f, k)
        if derivative.is_zero:
            continue
        quotients.append((k, (value_f - value_of(spec, derivative)) / k))

    best = max(q for _, q in quotients)
    indices = tuple(k for k, q in quotients if q == best)
    logger.debug(f"epsilon({f}) = {best} at {indices}")
    return EpsilonReport(best, indices, tuple(quotients))


def enumerate_monic(field: FieldSpec, degree: int) -> Iterator[Poly]:
    """All monic polynomials of the given degree over F_p, lexicographic in the coefficient vector"""
    return enumerate_polys(field, degree, field.elements(), monic=True)


def _check_key_domain(spec: ValuationSpec, Q: Poly) -> None:
    if not spec.field.is_finite:
        raise PreconditionError(f"key-polynomial test needs a finite field, got {spec.field}")
    if not base_is_trivial(spec):
        raise PreconditionError("key-polynomial test needs a valuation trivial on K")
    if Q.is_zero or Q.degree < 1 or not Q.is_monic:
        raise NonMonicDivisor(f"key-polynomial candidate must be monic of degree >= 1, got {Q}", divisor=Q)


def is_key(
    spec: ValuationSpec,
    Q: Poly,
    max_workers: Optional[int] = None,
    batch_size: Optional[int] = None,
) -> Tuple[bool, Optional[Poly]]:
    """
    Decide whether Q is a key polynomial by exhausting all lower-degree monic f

    Args:
        spec: Valuation over F_p, trivial on F_p
        Q: Monic candidate of degree >= 1
        max_workers: Thread pool size for the enumeration
        batch_size: Candidates per batch

    Returns:
        (True, None), or (False, first witness f with epsilon(f) >= epsilon(Q))
    """
    _check_key_domain(spec, Q)
    target = epsilon(spec, Q).epsilon

    candidates = (f for d in range(1, Q.degree) for f in enumerate_monic(spec.field, d))

    def beats(f: Poly) -> Tuple[Poly, bool]:
        return f, epsilon(spec, f).epsilon >= target

    for f, hit in batched_map(beats, candidates, max_workers, batch_size):
        if hit:
            logger.info(f"{Q} is not key: witness {f} with epsilon >= {target}")
            return False, f
    logger.info(f"{Q} is key for {spec.kind} (epsilon={target})")
    return True, None


def is_irreducible(Q: Poly) -> bool:
    """
    Irreducibility over F_p by trial division by every monic divisor of degree <= deg(Q)/2

    Args:
        Q: Polynomial of degree >= 1 over a finite field

    Returns:
        True when Q has no nontrivial factor
    """
    if not Q.field.is_finite:
        raise PreconditionError("trial-division irreducibility needs a finite field")
    if Q.is_zero or Q.degree < 1:
        raise PreconditionError(f"irreducibility is defined for degree >= 1, got {Q}")
    for d in range(1, Q.degree // 2 + 1):
        for g in enumerate_monic(Q.field, d):
            _, r = poly_divrem(Q, g)
            if r.is_zero:
                logger.debug(f"{Q} is divisible by {g}")
                return False
    return True


@dataclass(frozen=True)
class RootFixture:
    """Declared values mu(x - a) for every root a of a test polynomial, with multiplicity"""

    polynomial: Optional[Poly] = None
    roots: Tuple[Tuple[str, Value], ...] = dataclass_field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple((str(a), Value.of(mu)) for a, mu in self.roots))
        if self.polynomial is not None and not self.polynomial.is_zero:
            if len(self.roots) != self.polynomial.degree:
                raise PreconditionError(
                    f"fixture lists {len(self.roots)} roots for degree {self.polynomial.degree}"
                )


def delta_from_fixture(fixture: RootFixture) -> Value:
    """delta(f): the largest declared mu(x - a) over the roots a of f"""
    if not fixture.roots:
        raise PreconditionError("delta needs a nonempty root fixture")
    return max(mu for _, mu in fixture.roots)


@dataclass
class KeyPairReport:
    """Comparison statements for two key polynomials Q, Q2"""

    degrees: Tuple[int, int]
    epsilons: Tuple[Value, Value]
    values: Tuple[Value, Value]
    truncated: Value
    statements: Dict[str, Optional[bool]] = dataclass_field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(v is not False for v in self.statements.values())

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "degrees": list(self.degrees),
            "epsilons": [str(e) for e in self.epsilons],
            "values": [str(v) for v in self.values],
            "nu_Q(Q2)": str(self.truncated),
            "statements": self.statements,
        }


def compare_key_pair(spec: ValuationSpec, Q: Poly, Q2: Poly) -> KeyPairReport:
    """
    Evaluate the comparison statements for two key polynomials

    Statements are True/False when their hypothesis applies, None when vacuous.

    Args:
        spec: Univariate valuation
        Q: First key polynomial
        Q2: Second key polynomial

    Returns:
        KeyPairReport
    """
    eps_q = epsilon(spec, Q).epsilon
    eps_q2 = epsilon(spec, Q2).epsilon
    value_q = value_of(spec, Q)
    value_q2 = value_of(spec, Q2)
    truncated = nu_Q(spec, Q, Q2)

    statements: Dict[str, Optional[bool]] = {
        "degree_orders_epsilon": (eps_q < eps_q2) if Q.degree < Q2.degree else None,
        "epsilon_orders_truncation": (truncated < value_q2) if eps_q < eps_q2 else None,
        "equal_degree_equivalence": None,
    }
    if Q.degree == Q2.degree:
        statements["equal_degree_equivalence"] = (
            (value_q < value_q2) == (truncated < value_q2) == (eps_q < eps_q2)
        )
    return KeyPairReport(
        degrees=(Q.degree, Q2.degree),
        epsilons=(eps_q, eps_q2),
        values=(value_q, value_q2),
        truncated=truncated,
        statements=statements,
    )


def truncation_transfer(spec: ValuationSpec, Q: Poly, Q2: Poly, f: Poly) -> Optional[bool]:
    """
    If epsilon(Q) <= epsilon(Q2) and nu_Q(f) = nu(f), check nu_Q2(f) = nu(f)

    Returns:
        None when the hypothesis fails, else whether the conclusion holds
    """
    if not epsilon(spec, Q).epsilon <= epsilon(spec, Q2).epsilon:
        return None
    value = value_of(spec, f)
    if nu_Q(spec, Q, f) != value:
        return None
    return nu_Q(spec, Q2, f) == value
