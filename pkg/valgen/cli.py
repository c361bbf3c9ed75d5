"""
Command Line Module
valgen subcommands: evaluate valuations, test key polynomials, check generating
sequences and rerun the squares-series counterexample
"""

import json
import logging
import sys
from functools import wraps
from typing import Any, Callable, Dict, List, Optional, Sequence

import click

from config.config import DefaultConfig, apply_config, config
from valgen.core_algebra import FieldSpec, Value, q_expansion
from valgen.errors import (
    CertificateError,
    NoEligibleQ,
    NotCentered,
    ParseError,
    PrecisionExhausted,
    PreconditionError,
    UnsupportedShape,
    ValgenError,
)
from valgen.genseq import (
    CheckReport,
    Corpus,
    completeness_check,
    counterexample_run,
    gs1star_decompose,
    gs2_check,
    gs3_check,
    theorem_crosschecks,
)
from valgen.graded import gs3_witness, initial_equal, semigroup_membership
from valgen.keypoly import epsilon, hasse_derivative, is_key
from valgen.parsing import parse_any, parse_poly
from valgen.reports import ReportProcessor
from valgen.valuation import ValuationSpec, load_spec, nu_Q, spec_from_dict, value_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3


def _exit_code(error: ValgenError) -> int:
    if isinstance(error, (PrecisionExhausted, UnsupportedShape, NotCentered)):
        return EXIT_UNSUPPORTED
    if isinstance(error, (NoEligibleQ, CertificateError)):
        return EXIT_FAIL
    return EXIT_USAGE


def handle_errors(command: Callable) -> Callable:
    """Map library errors to exit codes at the command boundary"""

    @wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        for key, slot in (("spec", "spec"), ("field", "field"), ("output_format", "format")):
            override = kwargs.pop(key, None)
            if override is not None:
                ctx.obj[slot] = override
        try:
            code = command(*args, **kwargs)
        except ValgenError as e:
            logger.error(f"Error in {ctx.info_name}: {e.message}")
            if ctx.obj["format"] == "json":
                click.echo(ReportProcessor.render_json({"status": "error", **e.to_dict()}), nl=False)
            else:
                click.echo(f"error: {e.message}", err=True)
            ctx.exit(_exit_code(e))
        ctx.exit(code or EXIT_OK)

    return wrapper


def shared_options(command: Callable) -> Callable:
    """--spec, --field and --format, accepted after the subcommand name as well"""
    options = [
        click.option("--spec", default=None, help="Valuation spec: JSON file path or inline JSON."),
        click.option("--field", default=None, help="Coefficient field: Q or Fp:<p>."),
        click.option("--format", "output_format", type=click.Choice(["text", "json"]), default=None),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _emit(payload: Dict[str, Any], text: str) -> None:
    ctx = click.get_current_context()
    if ctx.obj["format"] == "json":
        click.echo(ReportProcessor.render_json(payload), nl=False)
    else:
        click.echo(text)


def _spec(ctx: click.Context) -> ValuationSpec:
    source = ctx.obj.get("spec")
    if source is None:
        raise PreconditionError("this command needs --spec")
    if source.lstrip().startswith("{"):
        try:
            return spec_from_dict(json.loads(source))
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid inline spec JSON: {e}") from e
    return load_spec(source)


def _field(ctx: click.Context) -> FieldSpec:
    if ctx.obj.get("spec") is not None:
        return _spec(ctx).field
    return FieldSpec.parse(ctx.obj["field"])


def _qset(spec: ValuationSpec, texts: Sequence[str]) -> List[Any]:
    if not texts:
        raise PreconditionError("at least one --qset polynomial is required")
    return [parse_any(t, spec.field, spec.bivariate) for t in texts]


def _corpus(spec: ValuationSpec, options: Dict[str, Any]) -> Corpus:
    kind = options["corpus_kind"] or ("monomials" if spec.bivariate else "exhaustive")
    degree = options["corpus_degree"]
    samples = options["samples"]
    seed = options["seed"]
    bound = options["bound"]
    if (kind == "random" or samples) and seed is None:
        raise click.UsageError("--seed is required when random samples are requested")

    if options["members"]:
        polys = [parse_any(t, spec.field, spec.bivariate) for t in options["members"]]
        return Corpus.explicit(spec.field, polys)
    if kind == "monomials":
        return Corpus.monomials(spec.field, degree, samples or 0, seed, bound)
    if kind == "random":
        return Corpus.random(spec.field, degree, samples or config.RANDOM_SAMPLE_SIZE, seed, bound)
    corpus = Corpus.exhaustive(spec.field, degree, bound)
    if samples:
        corpus.polynomials.extend(Corpus.random(spec.field, degree, samples, seed, bound).polynomials)
        corpus.kind = "exhaustive+random"
        corpus.seed = seed
    return corpus


def corpus_options(command: Callable) -> Callable:
    options = [
        click.option("--corpus-degree", type=int, default=2, show_default=True, help="Degree bound of the corpus."),
        click.option(
            "--corpus-kind",
            type=click.Choice(["exhaustive", "random", "monomials"]),
            default=None,
            help="How the corpus is built (monomials for k[x,y], exhaustive otherwise).",
        ),
        click.option("--samples", type=int, default=None, help="Seeded random members to add."),
        click.option("--seed", type=int, default=None, help="Seed for random members."),
        click.option("--bound", type=int, default=None, help="Coefficient bound over Q."),
        click.option("--member", "members", multiple=True, help="Explicit corpus member (repeatable)."),
        click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None, help="Export per-member rows."),
        click.option(
            "--json-out", "json_path", type=click.Path(dir_okay=False), default=None, help="Write the report with its rows."
        ),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _finish_check(report: CheckReport, csv_path: Optional[str], json_path: Optional[str]) -> int:
    frame = ReportProcessor.to_frame(report.rows)
    if csv_path:
        ReportProcessor.export_to_csv(frame, csv_path)
    payload = {"status": "success", **report.to_dict(), "summary": ReportProcessor.summarize(frame)}
    if json_path:
        ReportProcessor.export_to_json(payload, json_path, frame)
    text = f"{report.check}: {report.verdict}"
    if report.witness is not None:
        text += f"\nwitness: {report.witness}\ndetail: {report.detail}"
    else:
        text += f" ({report.detail})"
    _emit(payload, text)
    return EXIT_OK if report.passed else EXIT_FAIL


@click.group()
@click.option("--field", default="Q", show_default=True, help="Coefficient field: Q or Fp:<p>.")
@click.option("--spec", default=None, help="Valuation spec: JSON file path or inline JSON.")
@click.option(
    "--format",
    "output_format",
    type=click.Choice(["text", "json"]),
    default=None,
    help="Output format; defaults to the OUTPUT_FORMAT setting.",
)
@click.option("--verbose", is_flag=True, help="Log at DEBUG level to standard error.")
@click.pass_context
def cli(ctx: click.Context, field: str, spec: Optional[str], output_format: Optional[str], verbose: bool) -> None:
    """Valuations, key polynomials and generating sequences over K[x] and k[x,y]."""
    apply_config(DefaultConfig())
    logging.basicConfig(
        level="DEBUG" if verbose else config.LOG_LEVEL,
        format=config.LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
    if not DefaultConfig.validate():
        raise click.UsageError("invalid configuration, see the log for the offending settings")
    ctx.ensure_object(dict)
    ctx.obj.update({"field": field, "spec": spec, "format": output_format or config.OUTPUT_FORMAT})


@cli.command()
@shared_options
@click.argument("polynomial")
@click.pass_context
@handle_errors
def value(ctx: click.Context, polynomial: str) -> int:
    """nu(f) for the spec."""
    spec = _spec(ctx)
    f = parse_any(polynomial, spec.field, spec.bivariate)
    report = value_report(spec, f)
    _emit({"status": "success", "polynomial": str(f), **report.to_dict()}, f"value={report.value}")
    return EXIT_OK


@cli.command()
@shared_options
@click.option("--q", "q_text", required=True, help="Monic polynomial Q.")
@click.argument("polynomial")
@click.pass_context
@handle_errors
def nuq(ctx: click.Context, q_text: str, polynomial: str) -> int:
    """The truncation nu_Q(f), next to nu(f)."""
    spec = _spec(ctx)
    Q = parse_poly(q_text, spec.field)
    f = parse_poly(polynomial, spec.field)
    truncated = nu_Q(spec, Q, f)
    full = value_report(spec, f).value
    _emit(
        {"status": "success", "Q": str(Q), "polynomial": str(f), "nu_Q": str(truncated), "value": str(full)},
        f"nu_Q={truncated} value={full}",
    )
    return EXIT_OK


@cli.command()
@shared_options
@click.option("--q", "q_text", required=True, help="Monic polynomial Q.")
@click.argument("polynomial")
@click.pass_context
@handle_errors
def expand(ctx: click.Context, q_text: str, polynomial: str) -> int:
    """Q-expansion f = sum f_i Q^i."""
    field = _field(ctx)
    expansion = q_expansion(parse_poly(polynomial, field), parse_poly(q_text, field))
    lines = [f"{i}: {f_i}" for f_i, i in expansion.parts] or ["0"]
    _emit({"status": "success", **expansion.to_dict()}, "\n".join(lines))
    return EXIT_OK


@cli.command()
@shared_options
@click.option("--order", "-k", type=int, required=True, help="Derivative order, at least 1.")
@click.argument("polynomial")
@click.pass_context
@handle_errors
def hasse(ctx: click.Context, order: int, polynomial: str) -> int:
    """Hasse derivative of order k."""
    field = _field(ctx)
    derivative = hasse_derivative(parse_poly(polynomial, field), order)
    _emit({"status": "success", "order": order, "derivative": str(derivative)}, str(derivative))
    return EXIT_OK


@cli.command()
@shared_options
@click.argument("polynomial")
@click.pass_context
@handle_errors
def eps(ctx: click.Context, polynomial: str) -> int:
    """epsilon(f) and its maximizing orders."""
    spec = _spec(ctx)
    report = epsilon(spec, parse_poly(polynomial, spec.field))
    _emit({"status": "success", **report.to_dict()}, str(report))
    return EXIT_OK


@cli.command()
@shared_options
@click.argument("polynomial")
@click.pass_context
@handle_errors
def keycheck(ctx: click.Context, polynomial: str) -> int:
    """Decide whether a monic polynomial over F_p is a key polynomial."""
    spec = _spec(ctx)
    Q = parse_poly(polynomial, spec.field)
    key, witness = is_key(spec, Q)
    text = "key=true" if key else f"key=false witness={witness}"
    _emit({"status": "success", "Q": str(Q), "key": key, "witness": str(witness) if witness else None}, text)
    return EXIT_OK if key else EXIT_FAIL


@cli.command("initial-eq")
@shared_options
@click.argument("f_text")
@click.argument("g_text")
@click.pass_context
@handle_errors
def initial_eq(ctx: click.Context, f_text: str, g_text: str) -> int:
    """Whether in(f) = in(g)."""
    spec = _spec(ctx)
    f = parse_any(f_text, spec.field, spec.bivariate)
    g = parse_any(g_text, spec.field, spec.bivariate)
    equal = initial_equal(spec, f, g)
    _emit({"status": "success", "equal": equal}, f"equal={'true' if equal else 'false'}")
    return EXIT_OK


@cli.command()
@shared_options
@click.option("--generators", required=True, help="Comma-separated nonnegative values, e.g. 3,5.")
@click.argument("target")
@click.pass_context
@handle_errors
def semigroup(ctx: click.Context, generators: str, target: str) -> int:
    """Represent a value as a sum of generator multiples."""
    gens = [Value.parse(g) for g in generators.split(",") if g.strip()]
    witness = semigroup_membership(gens, Value.parse(target))
    if witness is None:
        _emit({"status": "success", "member": False, "witness": None}, "none")
        return EXIT_FAIL
    text = " + ".join(f"{n}*{g}" for g, n in zip(gens, witness.multiplicities) if n) or "0"
    _emit({"status": "success", "member": True, "witness": witness.to_dict()}, text)
    return EXIT_OK


@cli.command("gs3-witness")
@shared_options
@click.option("--qset", multiple=True, help="Member of Qset (repeatable).")
@click.argument("polynomial")
@click.pass_context
@handle_errors
def gs3_witness_command(ctx: click.Context, qset: Sequence[str], polynomial: str) -> int:
    """Match in(f) with z * prod in(Q_i)^n_i."""
    spec = _spec(ctx)
    Qset = _qset(spec, qset)
    result = gs3_witness(spec, Qset, parse_any(polynomial, spec.field, spec.bivariate))
    if not result.ok:
        _emit({"status": "success", **result.to_dict()}, f"failure: {result.reason}")
        return EXIT_FAIL
    text = f"z={spec.field.format_element(result.z)} monomial={result.monomial}"
    _emit({"status": "success", **result.to_dict()}, text)
    return EXIT_OK


@cli.command()
@shared_options
@click.option("--qset", multiple=True, help="Monic member of Qset (repeatable).")
@corpus_options
@click.pass_context
@handle_errors
def complete(
    ctx: click.Context, qset: Sequence[str], csv_path: Optional[str], json_path: Optional[str], **options: Any
) -> int:
    """Completeness of Qset on a corpus."""
    spec = _spec(ctx)
    return _finish_check(completeness_check(spec, _qset(spec, qset), _corpus(spec, options)), csv_path, json_path)


@cli.command()
@shared_options
@click.option("--qset", multiple=True, help="Monic member of Qset (repeatable).")
@click.argument("polynomial")
@click.pass_context
@handle_errors
def gs1star(ctx: click.Context, qset: Sequence[str], polynomial: str) -> int:
    """GS1* certificate for f."""
    spec = _spec(ctx)
    Qset = _qset(spec, qset)
    f = parse_poly(polynomial, spec.field)
    try:
        cert = gs1star_decompose(spec, Qset, f)
    except NoEligibleQ as e:
        _emit({"status": "success", "verdict": "fail", "witness": str(e.witness)}, f"fail\nwitness: {e.witness}")
        return EXIT_FAIL
    _emit(
        {"status": "success", "verdict": "pass", **cert.to_dict(Qset, spec.field)},
        cert.format(Qset, spec.field),
    )
    return EXIT_OK


@cli.command()
@shared_options
@click.option("--gamma", required=True, help="Grade, e.g. 1 or 9/2.")
@click.option("--qset", multiple=True, help="Member of Qset (repeatable).")
@corpus_options
@click.pass_context
@handle_errors
def gs2(
    ctx: click.Context,
    gamma: str,
    qset: Sequence[str],
    csv_path: Optional[str],
    json_path: Optional[str],
    **options: Any,
) -> int:
    """GS2 at one grade on a corpus."""
    spec = _spec(ctx)
    report = gs2_check(spec, _qset(spec, qset), Value.parse(gamma), _corpus(spec, options))
    return _finish_check(report, csv_path, json_path)


@cli.command()
@shared_options
@click.option("--value-cap", default=None, help="Stop peeling above this value.")
@click.option("--qset", multiple=True, help="Member of Qset (repeatable).")
@corpus_options
@click.pass_context
@handle_errors
def gs3(
    ctx: click.Context,
    value_cap: Optional[str],
    qset: Sequence[str],
    csv_path: Optional[str],
    json_path: Optional[str],
    **options: Any,
) -> int:
    """GS3 on a corpus."""
    spec = _spec(ctx)
    cap = Value.parse(value_cap) if value_cap is not None else None
    report = gs3_check(spec, _qset(spec, qset), _corpus(spec, options), value_cap=cap)
    return _finish_check(report, csv_path, json_path)


@cli.command()
@shared_options
@click.option("--gamma", "gammas", multiple=True, help="GS2 grade (repeatable); default: corpus values.")
@click.option("--qset", multiple=True, help="Member of Qset (repeatable).")
@corpus_options
@click.pass_context
@handle_errors
def crosscheck(
    ctx: click.Context,
    gammas: Sequence[str],
    qset: Sequence[str],
    csv_path: Optional[str],
    json_path: Optional[str],
    **options: Any,
) -> int:
    """Implications between completeness, GS1*, GS2, GS3 and the value semigroup."""
    spec = _spec(ctx)
    grades = [Value.parse(g) for g in gammas] or None
    report = theorem_crosschecks(spec, _qset(spec, qset), _corpus(spec, options), gammas=grades)
    lines = [f"{key}: {report[key]}" for key in sorted(report) if key not in ("scope", "violations")]
    lines.append(f"violations: {len(report['violations'])}")
    payload = {"status": "success", **report}
    if json_path:
        ReportProcessor.export_to_json(payload, json_path)
    _emit(payload, "\n".join(lines))
    return EXIT_FAIL if report["violations"] else EXIT_OK


@cli.command("paper-example")
@shared_options
@click.option("--precision", type=int, default=17, show_default=True, help="Precision of the squares series.")
@click.option("--samples", type=int, default=None, help="Random bivariate members (default 100).")
@click.option("--seed", type=int, default=None, help="Seed for the random members (default 0).")
@click.option("--json-out", "json_path", type=click.Path(dir_okay=False), default=None, help="Write the report.")
@click.pass_context
@handle_errors
def counterexample_command(
    ctx: click.Context, precision: int, samples: Optional[int], seed: Optional[int], json_path: Optional[str]
) -> int:
    """x -> t, y -> t + t^4 + t^9 + ...: {x} satisfies GS3 but not GS2."""
    report = counterexample_run(precision, samples, seed)
    lines = [f"nu({label}) = {v}" for label, v in report["values"].items()]
    lines.append(f"GS3: {report['gs3']['verdict']}")
    lines.append(f"GS2 (gamma=1): {report['gs2']['verdict']}, witness {report['gs2']['witness']}")
    lines.append(f"separates: {'true' if report['separates'] else 'false'}")
    payload = {"status": "success", **report}
    if json_path:
        ReportProcessor.export_to_json(payload, json_path)
    _emit(payload, "\n".join(lines))
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the command line and return its exit code

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        0 computed/pass, 1 checker fail, 2 usage or parse error, 3 precision or unsupported shape
    """
    try:
        cli.main(args=list(argv) if argv is not None else None, prog_name="valgen", standalone_mode=True)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
