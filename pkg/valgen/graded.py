"""
Graded Module
Initial forms in the associated graded ring, subset selection for sums,
the value-semigroup solver and monomial witnesses for initial forms
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from config.config import config
from valgen.core_algebra import BivarPoly, FieldElement, Poly, Value, as_bivariate
from valgen.errors import CertificateError, NotCentered, PreconditionError
from valgen.valuation import ValuationSpec, initial_ratio, is_centered, value_of

logger = logging.getLogger(__name__)

AnyPoly = Union[Poly, BivarPoly]


@dataclass(frozen=True)
class InitialForm:
    """in_nu(f), held as a representative and its grade"""

    representative: AnyPoly
    grade: Value

    def equals(self, spec: ValuationSpec, other: "InitialForm") -> bool:
        return initial_equal(spec, self.representative, other.representative)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {"representative": str(self.representative), "grade": str(self.grade)}


def initial_form(spec: ValuationSpec, f: AnyPoly) -> InitialForm:
    if f.is_zero:
        raise PreconditionError("the zero polynomial has no initial form")
    return InitialForm(f, value_of(spec, f))


def _difference(f: AnyPoly, g: AnyPoly) -> AnyPoly:
    if type(f) is type(g):
        return f - g
    return as_bivariate(f) - as_bivariate(g)


def _total(parts: Sequence[AnyPoly]) -> AnyPoly:
    if any(isinstance(p, BivarPoly) for p in parts):
        return reduce(lambda a, b: a + b, (as_bivariate(p) for p in parts))
    return reduce(lambda a, b: a + b, parts)


def initial_equal(spec: ValuationSpec, f: AnyPoly, g: AnyPoly) -> bool:
    """
    in_nu(f) = in_nu(g) iff nu(f) = nu(g) and nu(f - g) > nu(f)

    Args:
        spec: Valuation spec
        f: Nonzero polynomial
        g: Nonzero polynomial

    Returns:
        True when the initial forms agree
    """
    if f.is_zero or g.is_zero:
        raise PreconditionError("initial forms of zero are undefined")
    value_f = value_of(spec, f)
    if value_f != value_of(spec, g):
        return False
    return value_of(spec, _difference(f, g)) > value_f


def initial_subset_select(spec: ValuationSpec, f: AnyPoly, parts: Sequence[AnyPoly]) -> Tuple[int, ...]:
    """
    Find positions I with in_nu(f) = sum over I of in_nu(parts[i])

    Splits off the first part and compares it with the sum of the rest, recursing on the rest
    when both have the same value.

    Args:
        spec: Valuation spec
        f: Nonzero polynomial with in_nu(f) = in_nu(sum of parts)
        parts: Nonzero polynomials, each of value nu(f)

    Returns:
        0-based positions, increasing
    """
    if not parts:
        raise PreconditionError("subset selection needs at least one part")
    value_f = value_of(spec, f)
    if any(value_of(spec, p) != value_f for p in parts):
        raise PreconditionError(f"every part must have value {value_f}")
    if not initial_equal(spec, f, _total(parts)):
        raise PreconditionError(f"in({f}) differs from the initial form of the sum of parts")

    selected: List[int] = []
    offset = 0
    remaining = list(parts)
    while True:
        if len(remaining) == 1:
            selected.append(offset)
            break
        rest = _total(remaining[1:])
        rest_value = value_of(spec, rest)
        if rest_value > value_f:
            selected.append(offset)
            break
        if rest_value < value_f:
            raise PreconditionError(f"tail of the parts has value {rest_value} below {value_f}")
        selected.append(offset)
        offset += 1
        remaining = remaining[1:]

    chosen = tuple(selected)
    if not initial_equal(spec, f, _total([parts[i] for i in chosen])):
        raise CertificateError(f"selected parts {chosen} do not reproduce in({f})", positions=chosen)
    logger.debug(f"initial_subset_select chose {chosen} of {len(parts)} parts")
    return chosen


# ---------------------------------------------------------------------------
# Value semigroup
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SemigroupWitness:
    """Multiplicities n_i with sum n_i * gamma_i equal to the target"""

    generators: Tuple[Value, ...]
    multiplicities: Tuple[int, ...]

    @property
    def value(self) -> Value:
        total = Value.of(0)
        for g, n in zip(self.generators, self.multiplicities):
            total = total + g * n
        return total

    def as_map(self) -> Dict[int, int]:
        return {i: n for i, n in enumerate(self.multiplicities) if n}

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {str(i): n for i, n in self.as_map().items()}


def _scaled(generators: Sequence[Value], target: Value) -> Tuple[List[int], int]:
    values = [Value.of(g) for g in generators] + [Value.of(target)]
    for v in values:
        if not v.is_finite or v.q < 0:
            raise PreconditionError(f"semigroup inputs must be finite and nonnegative, got {v}")
    scale = reduce(lcm, (v.den for v in values), 1)
    ints = [int(v.q * scale) for v in values]
    return ints[:-1], ints[-1]


def _reachability(gens: List[int], target: int) -> List[int]:
    """reach[j]: bitmask of sums <= target using generators j.. with any multiplicities"""
    full = (1 << (target + 1)) - 1
    reach = [0] * (len(gens) + 1)
    reach[len(gens)] = 1
    for j in range(len(gens) - 1, -1, -1):
        current = reach[j + 1]
        g = gens[j]
        if g > 0:
            shift = g
            while shift <= target:
                current = (current | (current << shift)) & full
                shift *= 2
        reach[j] = current
    return reach


def semigroup_membership(generators: Sequence[Value], target: Value) -> Optional[SemigroupWitness]:
    """
    Decide whether target lies in the semigroup spanned by the generators

    Args:
        generators: Finite nonnegative values
        target: Finite nonnegative value

    Returns:
        The lexicographically smallest witness, or None when no representation exists
    """
    gens, goal = _scaled(generators, target)
    reach = _reachability(gens, goal)
    if not (reach[0] >> goal) & 1:
        return None

    multiplicities = []
    remaining = goal
    for j, g in enumerate(gens):
        n = 0
        while not (reach[j + 1] >> (remaining - n * g)) & 1:
            n += 1
        multiplicities.append(n)
        remaining -= n * g
    return SemigroupWitness(tuple(Value.of(g) for g in generators), tuple(multiplicities))


def semigroup_witnesses(
    generators: Sequence[Value], target: Value, limit: Optional[int] = None
) -> List[SemigroupWitness]:
    """
    Every representation of target, lexicographically ordered, at most `limit` of them

    Args:
        generators: Finite nonnegative values
        target: Finite nonnegative value
        limit: Cap on the number of witnesses returned

    Returns:
        Witnesses; empty when target is not in the semigroup
    """
    limit = limit or config.WITNESS_SEARCH_LIMIT
    gens, goal = _scaled(generators, target)
    reach = _reachability(gens, goal)
    values = tuple(Value.of(g) for g in generators)
    found: List[SemigroupWitness] = []

    def walk(j: int, remaining: int, prefix: List[int]) -> None:
        if len(found) >= limit:
            return
        if j == len(gens):
            if remaining == 0:
                found.append(SemigroupWitness(values, tuple(prefix)))
            return
        g = gens[j]
        top = remaining // g if g > 0 else 0
        for n in range(top + 1):
            rest = remaining - n * g
            if (reach[j + 1] >> rest) & 1:
                walk(j + 1, rest, prefix + [n])

    walk(0, goal, [])
    if len(found) >= limit:
        logger.warning(f"Witness enumeration for {target} stopped at {limit} representations")
    return found


# ---------------------------------------------------------------------------
# Monomials in a set of polynomials
# ---------------------------------------------------------------------------


def monomial_product(Qset: Sequence[AnyPoly], multiplicities: Sequence[int], like: AnyPoly) -> AnyPoly:
    """prod Q_i^n_i, built in the polynomial type of `like`"""
    bivariate = isinstance(like, BivarPoly) or any(isinstance(Q, BivarPoly) for Q in Qset)
    one = BivarPoly.constant(like.field, 1) if bivariate else Poly.constant(like.field, 1)
    result = one
    for Q, n in zip(Qset, multiplicities):
        if n:
            result = result * ((as_bivariate(Q) if bivariate else Q) ** n)
    return result


def homogeneous_generators(
    spec: ValuationSpec, Qset: Sequence[AnyPoly], gamma: Value, limit: Optional[int] = None
) -> List[Tuple[SemigroupWitness, AnyPoly]]:
    """
    The monomials Q^lambda with nu(Q^lambda) = gamma

    Args:
        spec: Centered valuation
        Qset: Polynomials of finite value
        gamma: Grade
        limit: Cap on the number of monomials

    Returns:
        (exponent witness, monomial) pairs in lexicographic exponent order
    """
    values = [value_of(spec, Q) for Q in Qset]
    like = Qset[0] if Qset else Poly.constant(spec.field, 1)
    return [
        (w, monomial_product(Qset, w.multiplicities, like))
        for w in semigroup_witnesses(values, Value.of(gamma), limit)
    ]


@dataclass(frozen=True)
class Gs3Witness:
    """Outcome of matching in_nu(f) with a single monomial z * prod in_nu(Q_i)^n_i"""

    z: Optional[FieldElement] = None
    witness: Optional[SemigroupWitness] = None
    monomial: Optional[AnyPoly] = None
    reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.reason is None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        if not self.ok:
            return {"ok": False, "reason": self.reason}
        return {
            "ok": True,
            "z": str(Fraction(self.z)) if self.z is not None else None,
            "multiplicities": self.witness.to_dict(),
            "monomial": str(self.monomial),
        }


VALUE_NOT_IN_SEMIGROUP = "value not in semigroup"
RESIDUE_MISMATCH = "residue mismatch"
WITNESS_LIMIT_REACHED = "witness search limit reached"


def require_centered(spec: ValuationSpec) -> None:
    if not is_centered(spec):
        raise NotCentered(f"{spec.kind} valuation is not centered")


def gs3_witness(
    spec: ValuationSpec, Qset: Sequence[AnyPoly], f: AnyPoly, limit: Optional[int] = None
) -> Gs3Witness:
    """
    Find z and n_i with in_nu(f) = in_nu(z * prod Q_i^n_i)

    Args:
        spec: Centered valuation, trivial on K
        Qset: Nonzero polynomials
        f: Nonzero polynomial
        limit: Cap on the exponent vectors tried

    Returns:
        Gs3Witness; on failure `reason` says whether the value or the residue did not match,
        or that more than `limit` exponent vectors had the value of f
    """
    require_centered(spec)
    if f.is_zero:
        raise PreconditionError("gs3_witness needs a nonzero polynomial")
    values = [value_of(spec, Q) for Q in Qset]
    target = value_of(spec, f)

    limit = limit or config.WITNESS_SEARCH_LIMIT
    candidates = semigroup_witnesses(values, target, limit + 1)
    truncated = len(candidates) > limit
    candidates = candidates[:limit]
    if not candidates:
        logger.debug(f"nu({f}) = {target} is outside the semigroup of {[str(v) for v in values]}")
        return Gs3Witness(reason=VALUE_NOT_IN_SEMIGROUP)

    for w in candidates:
        monomial = monomial_product(Qset, w.multiplicities, f)
        z = initial_ratio(spec, f, monomial)
        if z is not None:
            return Gs3Witness(z=z, witness=w, monomial=monomial)
    if truncated:
        return Gs3Witness(reason=WITNESS_LIMIT_REACHED)
    return Gs3Witness(reason=RESIDUE_MISMATCH)
