"""
Valuation Module
Computable valuations on K[x] and k[x,y]: construction specs, evaluation,
the truncation nu_Q, the centeredness test and graded coordinates
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, ClassVar, Dict, Iterable, Mapping, Optional, Tuple, Union

from config.config import config
from valgen.core_algebra import (
    INF,
    ZERO,
    BivarPoly,
    FieldElement,
    FieldSpec,
    Poly,
    Value,
    as_bivariate,
    q_expansion,
    value_min,
)
from valgen.errors import (
    FieldMismatch,
    NonMonicDivisor,
    ParseError,
    PrecisionExhausted,
    PreconditionError,
)
from valgen.parsing import parse_poly
from valgen.series import GenSeries, embed_eval, leading_exponent

logger = logging.getLogger(__name__)

Element = Union[Poly, BivarPoly, int, Fraction]


@dataclass(frozen=True)
class SeriesImage:
    """Series image of a variable: an explicit literal or the builtin squares generator"""

    literal: Optional[GenSeries] = None
    squares_precision: Optional[int] = None

    def __post_init__(self):
        if (self.literal is None) == (self.squares_precision is None):
            raise PreconditionError("a series image is either a literal or squares(N)")

    @property
    def extendable(self) -> bool:
        return self.squares_precision is not None

    def materialize(self, field: FieldSpec, precision: Optional[int] = None) -> GenSeries:
        if self.literal is not None:
            return self.literal
        return GenSeries.squares(field, max(self.squares_precision, precision or 0))

    def to_text(self) -> str:
        if self.literal is not None:
            return str(self.literal)
        return f"squares({self.squares_precision})"


# ---------------------------------------------------------------------------
# Construction tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrivialSpec:
    """Trivial valuation on K; on polynomials it reads the coefficients only"""

    kind: ClassVar[str] = "trivial"
    field: FieldSpec

    @property
    def bivariate(self) -> bool:
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "field": str(self.field)}


@dataclass(frozen=True)
class PAdicSpec:
    """p-adic valuation on Q"""

    kind: ClassVar[str] = "p_adic"
    p: int

    def __post_init__(self):
        # validates primality
        FieldSpec.prime(self.p)

    @property
    def field(self) -> FieldSpec:
        return FieldSpec.rationals()

    @property
    def bivariate(self) -> bool:
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "p": self.p}


@dataclass(frozen=True)
class GaussSpec:
    """nu(sum a_i x^i) = min(nu_base(a_i) + i*gamma)"""

    kind: ClassVar[str] = "gauss"
    base: Union[TrivialSpec, PAdicSpec]
    gamma: Value

    def __post_init__(self):
        object.__setattr__(self, "gamma", Value.of(self.gamma))
        if not self.gamma.is_finite:
            raise PreconditionError("gauss valuation needs a finite gamma")
        if not isinstance(self.base, (TrivialSpec, PAdicSpec)):
            raise PreconditionError("gauss base must be a valuation on K")

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    @property
    def bivariate(self) -> bool:
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "base": self.base.to_dict(), "gamma": str(self.gamma)}


@dataclass(frozen=True)
class EmbeddingSpec:
    """Valuation induced by x -> series, y -> series in k((t^Q)), trivial on k"""

    kind: ClassVar[str] = "embedding"
    field: FieldSpec
    images: Tuple[Tuple[str, SeriesImage], ...]

    def __post_init__(self):
        names = [name for name, _ in self.images]
        if "x" not in names or not set(names) <= {"x", "y"} or len(names) != len(set(names)):
            raise PreconditionError(f"embedding images must cover x (and optionally y), got {names}")
        for name, image in self.images:
            if image.literal is not None and image.literal.field != self.field:
                raise FieldMismatch(f"image of {name} is over {image.literal.field}, spec over {self.field}")
        object.__setattr__(self, "images", tuple(sorted(self.images)))

    @classmethod
    def of(cls, field: FieldSpec, images: Mapping[str, Union[str, GenSeries, SeriesImage]]) -> "EmbeddingSpec":
        built = []
        for name, image in images.items():
            if isinstance(image, str):
                image = _image_from_text(image, field)
            elif isinstance(image, GenSeries):
                image = SeriesImage(literal=image)
            built.append((name, image))
        return cls(field, tuple(built))

    @property
    def image_map(self) -> Dict[str, SeriesImage]:
        return dict(self.images)

    @property
    def bivariate(self) -> bool:
        return "y" in self.image_map

    @property
    def initial_precision(self) -> int:
        precisions = [img.squares_precision for _, img in self.images if img.extendable]
        return max(precisions, default=config.DEFAULT_PRECISION)

    def materialize(self, precision: Optional[int] = None) -> Dict[str, GenSeries]:
        return {name: image.materialize(self.field, precision) for name, image in self.images}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "field": str(self.field),
            "images": {name: image.to_text() for name, image in self.images},
        }


@dataclass(frozen=True)
class TruncationSpec:
    """The Q-truncation nu_Q of an ambient univariate valuation"""

    kind: ClassVar[str] = "truncation"
    ambient: Any
    Q: Poly

    def __post_init__(self):
        if self.ambient.bivariate:
            raise PreconditionError("truncations are defined on K[x] only")
        if self.Q.is_zero or self.Q.degree < 1 or not self.Q.is_monic:
            raise NonMonicDivisor(f"truncation needs a monic Q of degree >= 1, got {self.Q}", divisor=self.Q)
        if self.Q.field != self.ambient.field:
            raise FieldMismatch(f"Q over {self.Q.field}, ambient over {self.ambient.field}")

    @property
    def field(self) -> FieldSpec:
        return self.ambient.field

    @property
    def bivariate(self) -> bool:
        return False

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "ambient": self.ambient.to_dict(), "Q": str(self.Q)}


@dataclass(frozen=True)
class MonomialBivariateSpec:
    """Monomial valuation on k[x,y]: nu(x^i y^j) = i*w_x + j*w_y, trivial on k"""

    kind: ClassVar[str] = "monomial_bivariate"
    field: FieldSpec
    weight_x: Value
    weight_y: Value

    def __post_init__(self):
        object.__setattr__(self, "weight_x", Value.of(self.weight_x))
        object.__setattr__(self, "weight_y", Value.of(self.weight_y))
        if not (self.weight_x.is_finite and self.weight_y.is_finite):
            raise PreconditionError("monomial weights must be finite")

    @property
    def bivariate(self) -> bool:
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "field": str(self.field),
            "weight_x": str(self.weight_x),
            "weight_y": str(self.weight_y),
        }


ValuationSpec = Union[TrivialSpec, PAdicSpec, GaussSpec, EmbeddingSpec, TruncationSpec, MonomialBivariateSpec]


def _image_from_text(text: str, field: FieldSpec) -> SeriesImage:
    stripped = text.strip()
    if stripped.startswith("squares("):
        series = GenSeries.parse(stripped, field)
        return SeriesImage(squares_precision=int(series.precision.q))
    return SeriesImage(literal=GenSeries.parse(stripped, field))


def spec_from_dict(data: Mapping[str, Any]) -> ValuationSpec:
    """
    Build a spec from its JSON form

    Args:
        data: Decoded JSON object with a `kind` key

    Returns:
        ValuationSpec node
    """
    try:
        kind = data["kind"]
        if kind == "trivial":
            return TrivialSpec(FieldSpec.parse(data.get("field", "Q")))
        if kind == "p_adic":
            return PAdicSpec(int(data["p"]))
        if kind == "gauss":
            return GaussSpec(spec_from_dict(data["base"]), Value.parse(str(data["gamma"])))
        if kind == "embedding":
            field = FieldSpec.parse(data.get("field", "Q"))
            return EmbeddingSpec.of(field, {name: str(text) for name, text in data["images"].items()})
        if kind == "truncation":
            ambient = spec_from_dict(data["ambient"])
            return TruncationSpec(ambient, parse_poly(data["Q"], ambient.field))
        if kind == "monomial_bivariate":
            return MonomialBivariateSpec(
                FieldSpec.parse(data.get("field", "Q")),
                Value.parse(str(data["weight_x"])),
                Value.parse(str(data["weight_y"])),
            )
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed valuation spec: {e}", spec=data) from e
    raise ParseError(f"Unknown valuation kind: {data.get('kind')!r}", spec=data)


def spec_to_dict(spec: ValuationSpec) -> Dict[str, Any]:
    return spec.to_dict()


def load_spec(path: str) -> ValuationSpec:
    """Read a valuation spec JSON file"""
    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON in {path}: {e}", path=path) from e
    except OSError as e:
        raise ParseError(f"Cannot read spec file {path}: {e}", path=path) from e
    logger.info(f"Loaded valuation spec from {path}")
    return spec_from_dict(data)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValReport:
    """A value together with how it was obtained"""

    value: Value
    exact: bool = True
    precision: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "value": str(self.value),
            "exact": self.exact,
            "precision": self.precision,
        }


def _p_adic_order(p: int, a: Fraction) -> Value:
    if a == 0:
        return INF
    order = 0
    num, den = a.numerator, a.denominator
    while num % p == 0:
        num //= p
        order += 1
    while den % p == 0:
        den //= p
        order -= 1
    return Value.of(order)


def base_is_trivial(spec: ValuationSpec) -> bool:
    """Whether the valuation restricted to the coefficient field is trivial"""
    if isinstance(spec, PAdicSpec):
        return False
    if isinstance(spec, GaussSpec):
        return base_is_trivial(spec.base)
    if isinstance(spec, TruncationSpec):
        return base_is_trivial(spec.ambient)
    return True


class Evaluator:
    """Evaluates one spec; tracks precision retries for the embedding nodes it meets"""

    def __init__(self, spec: ValuationSpec, precision_cap: Optional[int] = None):
        """
        Initialize the evaluator

        Args:
            spec: Valuation construction tree
            precision_cap: Largest series precision the retry loop may reach
        """
        self.spec = spec
        self.precision_cap = precision_cap or config.PRECISION_CAP
        self.retried = False
        self.precision_used: Optional[int] = None

    # -- constants ---------------------------------------------------------

    def constant_value(self, spec: ValuationSpec, c: FieldElement) -> Value:
        if c == 0:
            return INF
        if isinstance(spec, PAdicSpec):
            return _p_adic_order(spec.p, Fraction(c))
        if isinstance(spec, GaussSpec):
            return self.constant_value(spec.base, c)
        if isinstance(spec, TruncationSpec):
            return self.constant_value(spec.ambient, c)
        return ZERO

    # -- series ------------------------------------------------------------

    def series(self, spec: EmbeddingSpec, f: Union[Poly, BivarPoly], need_above: Optional[Value] = None) -> GenSeries:
        """
        Image series of f, re-evaluated at doubled precision until its lead is determined

        Args:
            spec: Embedding node
            f: Polynomial to evaluate
            need_above: Also require the series to be trusted beyond this exponent

        Returns:
            Image series with a determined leading exponent
        """
        extendable = any(image.extendable for _, image in spec.images)
        precision = spec.initial_precision
        while True:
            image = embed_eval(f, spec.materialize(precision))
            determined = True
            try:
                leading_exponent(image)
            except PrecisionExhausted:
                determined = False
            if determined and (need_above is None or need_above < image.precision):
                if extendable:
                    self.precision_used = max(self.precision_used or 0, precision)
                return image
            if not extendable or precision >= self.precision_cap:
                raise PrecisionExhausted(
                    f"value of {f} undetermined at precision {image.precision}",
                    precision=image.precision,
                    polynomial=f,
                )
            precision = min(precision * 2, self.precision_cap)
            self.retried = True
            logger.warning(f"Precision exhausted for {f}; retrying at precision {precision}")

    # -- values ------------------------------------------------------------

    def value(self, f: Element, spec: Optional[ValuationSpec] = None) -> Value:
        spec = spec or self.spec
        if isinstance(f, (int, Fraction)):
            return self.constant_value(spec, spec.field.element(f))
        if f.field != spec.field:
            raise FieldMismatch(f"{f} is over {f.field}, valuation over {spec.field}")
        if f.is_zero:
            return INF

        if isinstance(spec, EmbeddingSpec):
            if isinstance(f, BivarPoly) and f.uses_y and not spec.bivariate:
                raise PreconditionError(f"{f} uses y but the embedding has no image for y")
            return leading_exponent(self.series(spec, f))

        if isinstance(spec, MonomialBivariateSpec):
            return value_min([i * spec.weight_x + j * spec.weight_y for (i, j), _ in as_bivariate(f).terms])

        poly = _univariate(f)
        if isinstance(spec, (TrivialSpec, PAdicSpec)):
            return value_min([self.constant_value(spec, a) for a in poly.coeffs])
        if isinstance(spec, GaussSpec):
            return value_min(
                [self.constant_value(spec.base, a) + i * spec.gamma for i, a in enumerate(poly.coeffs)]
            )
        if isinstance(spec, TruncationSpec):
            q_value = self.value(spec.Q, spec.ambient)
            expansion = q_expansion(poly, spec.Q)
            return value_min([self.value(f_i, spec.ambient) + i * q_value for f_i, i in expansion.parts])
        raise PreconditionError(f"Unknown valuation spec: {spec!r}")

    # -- graded coordinates ------------------------------------------------

    def coordinates(self, f: Union[Poly, BivarPoly], gamma: Value, spec: Optional[ValuationSpec] = None) -> Dict[Any, FieldElement]:
        """Coordinates of f in P_gamma / P_gamma^+, assuming nu(f) >= gamma"""
        spec = spec or self.spec
        if f.is_zero:
            return {}
        if not base_is_trivial(spec):
            raise PreconditionError("graded coordinates need a valuation trivial on K")

        if isinstance(spec, EmbeddingSpec):
            image = self.series(spec, f, need_above=gamma)
            c = image.coefficient(gamma.q)
            return {"t": c} if c != 0 else {}

        if isinstance(spec, MonomialBivariateSpec):
            return {
                (i, j): c
                for (i, j), c in as_bivariate(f).terms
                if i * spec.weight_x + j * spec.weight_y == gamma
            }

        if isinstance(spec, TrivialSpec):
            if gamma != ZERO:
                return {}
            return {m: c for m, c in as_bivariate(f).terms}

        poly = _univariate(f)
        if isinstance(spec, GaussSpec):
            return {i: a for i, a in enumerate(poly.coeffs) if a != 0 and i * spec.gamma == gamma}
        if isinstance(spec, TruncationSpec):
            q_value = self.value(spec.Q, spec.ambient)
            coords: Dict[Any, FieldElement] = {}
            for f_i, i in q_expansion(poly, spec.Q).parts:
                shift_value = i * q_value
                if not shift_value.is_finite:
                    continue
                shifted = gamma - shift_value
                if self.value(f_i, spec.ambient) != shifted:
                    continue
                for key, c in self.coordinates(f_i, shifted, spec.ambient).items():
                    coords[(i, key)] = c
            return coords
        raise PreconditionError(f"Unknown valuation spec: {spec!r}")


def _univariate(f: Union[Poly, BivarPoly]) -> Poly:
    if isinstance(f, Poly):
        return f
    if f.uses_y:
        raise PreconditionError(f"{f} uses y but the valuation lives on K[x]")
    return f.to_univariate()


@lru_cache(maxsize=65536)
def _cached_report(spec: ValuationSpec, f: Element, precision_cap: int) -> ValReport:
    evaluator = Evaluator(spec, precision_cap)
    value = evaluator.value(f)
    return ValReport(value=value, exact=not evaluator.retried, precision=evaluator.precision_used)


def value_report(spec: ValuationSpec, f: Element, precision_cap: Optional[int] = None) -> ValReport:
    """
    Evaluate nu(f) and report how the value was obtained

    Args:
        spec: Valuation construction tree
        f: Polynomial or field element over the spec's field
        precision_cap: Largest series precision the retry loop may reach

    Returns:
        ValReport with the value, the exactness flag and the precision used
    """
    return _cached_report(spec, f, precision_cap or config.PRECISION_CAP)


def value_of(spec: ValuationSpec, f: Element, precision_cap: Optional[int] = None) -> Value:
    """
    Evaluate nu(f)

    Args:
        spec: Valuation construction tree
        f: Polynomial or field element over the spec's field
        precision_cap: Largest series precision the retry loop may reach

    Returns:
        The value; +inf for zero
    """
    return value_report(spec, f, precision_cap).value


def nu_Q(ambient: ValuationSpec, Q: Poly, f: Poly) -> Value:
    """
    The Q-truncation: min over the Q-expansion of nu(f_i) + i*nu(Q)

    Args:
        ambient: Univariate valuation spec
        Q: Monic polynomial of degree at least one
        f: Polynomial to evaluate

    Returns:
        nu_Q(f), never larger than nu(f)
    """
    return value_of(TruncationSpec(ambient, Q), f)


def variable_values(spec: ValuationSpec) -> Dict[str, Value]:
    """nu(x), and nu(y) on bivariate specs"""
    field = spec.field
    values = {"x": value_of(spec, Poly.x(field))}
    if spec.bivariate:
        values["y"] = value_of(spec, BivarPoly.y(field))
    return values


def is_centered(spec: ValuationSpec) -> bool:
    """
    Decide centeredness structurally: trivial on K and every variable has value >= 0

    Args:
        spec: Valuation construction tree

    Returns:
        True when nu(f) >= 0 for every polynomial f
    """
    if isinstance(spec, TrivialSpec):
        return True
    if isinstance(spec, PAdicSpec):
        return False
    if isinstance(spec, GaussSpec):
        return base_is_trivial(spec) and spec.gamma >= ZERO
    if isinstance(spec, MonomialBivariateSpec):
        return spec.weight_x >= ZERO and spec.weight_y >= ZERO
    if not base_is_trivial(spec):
        return False
    return all(v >= ZERO for v in variable_values(spec).values())


def centered_by_corpus(spec: ValuationSpec, polynomials: Iterable[Element]) -> bool:
    """Whether every polynomial of a corpus has nonnegative value"""
    return all(value_of(spec, f) >= ZERO for f in polynomials)


def graded_coordinates(spec: ValuationSpec, f: Union[Poly, BivarPoly], gamma: Optional[Value] = None) -> Dict[Any, FieldElement]:
    """
    The image of f in P_gamma / P_gamma^+ as a sparse coordinate vector

    Args:
        spec: Valuation trivial on K
        f: Polynomial with nu(f) >= gamma
        gamma: Grade; defaults to nu(f)

    Returns:
        Coordinates (key -> field element), linear in f; empty iff nu(f) > gamma
    """
    value = value_of(spec, f)
    gamma = value if gamma is None else Value.of(gamma)
    if value < gamma:
        raise PreconditionError(f"nu({f}) = {value} is below the grade {gamma}")
    if not gamma.is_finite:
        return {}
    return Evaluator(spec).coordinates(f, gamma)


def initial_ratio(spec: ValuationSpec, f: Union[Poly, BivarPoly], g: Union[Poly, BivarPoly]) -> Optional[FieldElement]:
    """
    Find z in K with nu(f - z*g) > nu(f)

    Args:
        spec: Valuation trivial on K (residue field K)
        f: Polynomial
        g: Polynomial with nu(g) = nu(f) finite

    Returns:
        z, or None when no constant works
    """
    value_f = value_of(spec, f)
    value_g = value_of(spec, g)
    if value_f != value_g or not value_f.is_finite:
        raise PreconditionError(
            f"initial_ratio needs equal finite values, got {value_f} and {value_g}",
            f=f,
            g=g,
        )
    if not base_is_trivial(spec):
        raise PreconditionError("initial_ratio needs a valuation trivial on K")

    field = spec.field
    coords_f = graded_coordinates(spec, f, value_f)
    coords_g = graded_coordinates(spec, g, value_f)
    pivot = next(iter(coords_g))
    if pivot not in coords_f:
        return None
    z = field.div(coords_f[pivot], coords_g[pivot])
    keys = set(coords_f) | set(coords_g)
    if any(field.element(coords_f.get(k, 0)) != field.mul(z, coords_g.get(k, 0)) for k in keys):
        return None

    difference = f - g.scale(z) if isinstance(f, type(g)) else as_bivariate(f) - as_bivariate(g).scale(z)
    if not value_of(spec, difference) > value_f:
        logger.error(f"graded coordinates disagree with values for {f} and {g}")
        return None
    return z
