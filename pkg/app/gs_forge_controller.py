"""Command dispatch, report formatting and the exit-code policy of gs-forge."""

from __future__ import annotations

import json
import logging
import math
import sys
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from typing import Annotated, Any

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator
from sympy import isprime

from app.certificates import golod_bound, golod_certificate, gs_series_check, key_lemma_check, presentation_negative_value_test
from app.constants import COMMANDS, DEFAULT_MAGNUS_CAP, JSON_SCHEMA_VERSION, VALID_COMMANDS, ExitCode
from app.exceptions import FieldMismatchError, InputError, ParameterRangeError
from app.fields import QQ, Field as ScalarField, PrimeField
from app.graded_dims import generator_series, graded_dimension, hilbert_truncated, relation_series
from app.group_checks import filtered_exactness_check, group_negative_value_test, vinberg_check
from app.group_table import FiniteGroupTable, filtration_dims, parse_group_table
from app.group_words import AboveCap, FreeGroupAlgebraElement, GroupPresentation, GroupWord, fox_cocycle_holds, fox_derivative, fox_reconstruction, magnus_degree, parse_group_presentation
from app.koszul import check_gs_inequality, koszul_report
from app.presentation import Presentation, parse_presentation
from app.prometheus_metrics import increment_checks, increment_run, observe_run_duration, write_metrics_file
from app.run_metrics import get_run_metrics
from app.sanitization import read_input_file, sanitize_for_logging
from app.serre import SerreInstance, growth_witness, serre_instance_for_presentation
from app.smith_normal_form import abelianization_rank, gs_pgroup_report, mod_p_rank, smith_normal_form

logger = logging.getLogger(__name__)


def _parse_rational(value: object) -> object:
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"expected an exact rational p/q, got {sanitize_for_logging(value)!r}") from e
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return value


RationalArgument = Annotated[Fraction, BeforeValidator(_parse_rational), PlainSerializer(str, return_type=str)]


class OutputMode(StrEnum):
    TEXT = "text"
    JSON = "json"


class RunConfig(BaseModel):
    """Validated settings of one command-line run."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    command: str = Field(description="Subcommand to run")
    inputs: list[str] = Field(description="Input file paths in the order the subcommand expects", default_factory=list)
    max_degree: int = Field(description="Largest degree, also the truncation order of series", default=8, ge=0)
    max_n: int = Field(description="Largest filtration index", default=8, ge=0)
    steps: int = Field(description="Number of recurrence steps", default=10, ge=1)
    prime: int | None = Field(description="Characteristic of the group algebra", default=None)
    gens: int | None = Field(description="Generator count k of the golod command", default=None, ge=1)
    epsilon: RationalArgument | None = Field(description="Golod parameter epsilon", default=None)
    d1: RationalArgument | None = Field(description="Recurrence coefficient d1", default=None)
    d2: RationalArgument | None = Field(description="Recurrence coefficient d2", default=None)
    a1: RationalArgument | None = Field(description="Recurrence starting value a_1", default=None)
    grid: list[RationalArgument] = Field(description="Points in (0, 1) for the negative-value test", default_factory=list)
    cap: int = Field(description="Truncation degree of Magnus expansions", default=DEFAULT_MAGNUS_CAP, ge=1)
    output: OutputMode = Field(description="Text report or one JSON object", default=OutputMode.TEXT)
    jobs: int = Field(description="Worker threads for per-degree fan-out", default=1, ge=1)
    kernel_basis: bool = Field(description="Print a basis of the boundary kernel per degree", default=False)
    metrics_file: str | None = Field(description="Where to write Prometheus text exposition", default=None)

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in VALID_COMMANDS:
            raise ValueError(f"unknown command {sanitize_for_logging(value)!r}")
        return value

    @field_validator("prime")
    @classmethod
    def _prime(cls, value: int | None) -> int | None:
        if value is not None and not isprime(value):
            raise ValueError(f"{value} is not prime")
        return value


@dataclass
class CommandResult:
    """Text lines, JSON tables and the individual check outcomes of one command."""

    lines: list[str] = field(default_factory=list)
    tables: dict[str, Any] = field(default_factory=dict)
    checks: list[bool] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(self.checks)

    def check(self, line: str, holds: bool) -> None:
        self.lines.append(line)
        self.checks.append(holds)


def _verdict_line(label: str, body: str, holds: bool) -> str:
    return f"{label}: {body} PASS" if holds else f"FAIL {label}: {body}"


def _require[T](value: T | None, flag: str) -> T:
    if value is None:
        raise ParameterRangeError(f"{flag} is required for this command")
    return value


def _per_index[T](config: RunConfig, compute: Callable[[int], T], indices: Iterable[int]) -> list[T]:
    """Evaluate ``compute`` for every index, concurrently when jobs > 1, in index order."""
    metrics = get_run_metrics()

    def timed(n: int) -> T:
        start = time.perf_counter()
        value = compute(n)
        metrics.record_degree((time.perf_counter() - start) * 1000)
        return value

    if config.jobs == 1:
        return [timed(n) for n in indices]
    with ThreadPoolExecutor(max_workers=config.jobs, thread_name_prefix="gs-forge") as pool:
        return list(pool.map(timed, indices))


def _load_presentation(config: RunConfig) -> Presentation:
    return parse_presentation(read_input_file(_input(config, 0)))


def _load_group_presentation(config: RunConfig) -> GroupPresentation:
    return parse_group_presentation(read_input_file(_input(config, 0)))


def _load_group_table(config: RunConfig, position: int) -> FiniteGroupTable:
    return parse_group_table(read_input_file(_input(config, position)))


def _input(config: RunConfig, position: int) -> str:
    if position >= len(config.inputs):
        expected = " ".join(f".{kind}" for kind in COMMANDS[config.command]["inputs"])
        raise InputError(f"{config.command} expects input files: {expected}")
    return config.inputs[position]


def _dump(models: Iterable[BaseModel]) -> list[dict[str, Any]]:
    return [model.model_dump(mode="json") for model in models]


def run_dims(config: RunConfig) -> CommandResult:
    presentation = _load_presentation(config)
    dims = _per_index(config, lambda n: graded_dimension(presentation, n), range(config.max_degree + 1))
    return CommandResult(lines=[f"{n} {b}" for n, b in enumerate(dims)], tables={"dims": dims})


def run_gs_check(config: RunConfig) -> CommandResult:
    presentation = _load_presentation(config)
    rows = _per_index(config, lambda n: check_gs_inequality(presentation, n), range(config.max_degree + 1))
    result = CommandResult(tables={"gsInequality": _dump(rows)})
    for row in rows:
        result.check(_verdict_line(f"degree {row.degree}", f"lhs {row.lhs} rhs {row.rhs} slack {row.slack}", row.holds), row.holds)
    certificate = gs_series_check(presentation, config.max_degree)
    result.check(_verdict_line("series", f"(1 - h(X) + h(R)) H(B) >= 1 to order {certificate.order}", certificate.holds), certificate.holds)
    result.tables["seriesCertificate"] = certificate.model_dump(mode="json")
    return result


def run_koszul(config: RunConfig) -> CommandResult:
    presentation = _load_presentation(config)
    reports = _per_index(config, lambda n: koszul_report(presentation, n, config.kernel_basis), range(config.max_degree + 1))
    result = CommandResult(tables={"koszul": _dump(reports)})
    for r in reports:
        exactness = "PASS" if r.exactness_holds else "FAIL"
        euler = "PASS" if r.euler_holds else "FAIL"
        body = f"b={r.dimension} X={r.middle_dimension} R={r.source_dimension} rank_M1={r.rank_m1} rank_M2={r.rank_m2} nullity_M2={r.nullity_m2} slack={r.gs_slack} exactness={exactness} euler={euler}"
        if not r.holds:
            body += f" (M1*M2=0: {r.composite_zero}, rank_M2={r.rank_m2} vs nullity_M1={r.nullity_m1}, rank_M1={r.rank_m1} vs b_n-[n=0]={r.dimension - (r.degree == 0)}"
            body += f", euler {r.euler_value} vs {int(r.degree == 0)}, slack {r.gs_slack} vs nullity_M2+[n=0]={r.nullity_m2 + (r.degree == 0)})"
        result.check(_verdict_line(f"degree {r.degree}", body, r.holds), r.holds)
        for vector in r.kernel_basis or []:
            result.lines.append(f"  kernel [{' '.join(vector)}]")
    return result


def run_hilbert(config: RunConfig) -> CommandResult:
    presentation = _load_presentation(config)
    order = config.max_degree
    h_x = generator_series(presentation, order)
    h_r = relation_series(presentation, order)
    hilbert = hilbert_truncated(presentation, order)
    certificate = gs_series_check(presentation, order)
    result = CommandResult(lines=[f"h(X) = {h_x.render()}", f"h(R) = {h_r.render()}", f"H(B) = {hilbert.render()}", "n x_n r_n b_n product_n"])
    result.lines.extend(f"{n} {h_x[n]} {h_r[n]} {hilbert[n]} {certificate.coefficients[n]}" for n in range(order + 1))
    result.check(_verdict_line("series", f"(1 - h(X) + h(R)) H(B) >= 1 to order {order}", certificate.holds), certificate.holds)

    key_lemma = key_lemma_check(presentation, h_r, order)
    result.lines.append(f"key lemma with gamma = h(R): {key_lemma.verdict}")
    result.tables.update(
        {
            "hX": [str(c) for c in h_x.coefficients],
            "hR": [str(c) for c in h_r.coefficients],
            "hilbert": [str(c) for c in hilbert.coefficients],
            "seriesCertificate": certificate.model_dump(mode="json"),
            "keyLemma": key_lemma.model_dump(mode="json"),
        }
    )
    if config.grid:
        negative = presentation_negative_value_test(presentation, config.grid)
        result.lines.append(f"negative value test: {negative.verdict}" + (f" at t = {negative.witness} with value {negative.value}" if negative.holds else ""))
        result.tables["negativeValue"] = negative.model_dump(mode="json")
    return result


def run_golod(config: RunConfig) -> CommandResult:
    k = _require(config.gens, "--gens")
    epsilon = _require(config.epsilon, "--eps")
    order = config.max_degree
    certificate = golod_certificate(k, epsilon, order)
    bounds = [golod_bound(k, epsilon, n) for n in range(2, order + 1)]
    result = CommandResult(lines=[f"degree {n}: r_n <= {math.floor(bound)} ({bound})" for n, bound in enumerate(bounds, start=2)])
    for name, holds in certificate.checks.items():
        result.check(_verdict_line(f"check {name}", f"to order {order}", holds), holds)
    result.lines.append(f"certificate series: {' '.join(str(c) for c in certificate.coefficients)}")
    result.lines.extend(f"note: {note}" for note in certificate.notes)
    result.lines.append(f"verdict: {certificate.verdict}")
    result.tables.update({"bounds": [{"degree": n, "floor": math.floor(b), "exact": str(b)} for n, b in enumerate(bounds, start=2)], "certificate": certificate.model_dump(mode="json")})
    return result


def _serre_instance(config: RunConfig) -> SerreInstance:
    if not config.inputs:
        return SerreInstance(_require(config.d1, "--d1"), _require(config.d2, "--d2"), _require(config.a1, "--a1"), config.steps)
    if any(value is not None for value in (config.d1, config.d2, config.a1)):
        raise ParameterRangeError("--grp cannot be combined with --d1/--d2/--a1")
    presentation = _load_group_presentation(config)
    logger.info("Recurrence from %d generators and %d relators", len(presentation.generators), len(presentation.relators))
    return serre_instance_for_presentation(len(presentation.generators), len(presentation.relators), config.steps)


def run_serre(config: RunConfig) -> CommandResult:
    instance = _serre_instance(config)
    report = growth_witness(instance)
    result = CommandResult(lines=[f"sequence {' '.join(str(a) for a in report.sequence)}", f"lambda {report.lam}", f"mu {report.mu}"])
    for row in report.rows:
        result.check(_verdict_line(f"index {row.n}", f"{row.n} <= b_{row.n} = {row.b}", row.lower_bound_holds), row.lower_bound_holds)
        if row.step_holds is not None:
            result.check(_verdict_line(f"index {row.n}", f"b_{row.n + 1} - mu*b_{row.n} >= 1", row.step_holds), row.step_holds)
    for name, holds in report.checks.items():
        result.check(_verdict_line(f"check {name}", "exact in Q(sqrt(D))", holds), holds)
    result.tables["growth"] = report.model_dump(mode="json")
    return result


def _field(config: RunConfig) -> ScalarField:
    return QQ if config.prime is None else PrimeField(config.prime)


def run_fox(config: RunConfig) -> CommandResult:
    presentation = _load_group_presentation(config)
    names = presentation.generators
    field_ = _field(config)
    count = len(names)

    def relator_entry(index: int) -> dict[str, Any]:
        relator = presentation.relators[index]
        derivatives = {name: fox_derivative(relator, x, field_, count).render(names) for x, name in enumerate(names)}
        reconstruction = fox_reconstruction(relator, field_, count) == FreeGroupAlgebraElement.word_minus_one(field_, relator)
        prefixes = [(GroupWord(relator.letters[:k]), GroupWord(relator.letters[k:])) for k in range(1, len(relator))]
        cocycle = all(fox_cocycle_holds(u, v, x, field_) for u, v in prefixes for x in range(count))
        assigned = presentation.assigned_degrees[index]
        degree = assigned if assigned is not None else magnus_degree(FreeGroupAlgebraElement.word_minus_one(field_, relator), config.cap)
        return {
            "relator": relator.render(names),
            "derivatives": derivatives,
            "reconstruction": reconstruction,
            "cocycle": cocycle,
            "degree": f">{degree.cap}" if isinstance(degree, AboveCap) else degree,
        }

    entries = _per_index(config, relator_entry, range(len(presentation.relators)))
    result = CommandResult(tables={"field": field_.descriptor, "relators": entries})
    for index, entry in enumerate(entries, start=1):
        result.lines.append(f"relator {index}: {entry['relator']} deg(r - 1) = {entry['degree']}")
        result.lines.extend(f"  d(r{index} - 1)/d({name} - 1) = {value}" for name, value in entry["derivatives"].items())
        result.check(_verdict_line(f"relator {index}", "sum_x D_x(r) (x - 1) = r - 1", entry["reconstruction"]), entry["reconstruction"])
        result.check(_verdict_line(f"relator {index}", "D_x(uv) = D_x(u) + u D_x(v) on every prefix split", entry["cocycle"]), entry["cocycle"])
    return result


def run_group_filtration(config: RunConfig) -> CommandResult:
    group = _load_group_table(config, 0)
    p = _require(config.prime, "--prime")
    a = filtration_dims(group, p, config.max_n)
    result = CommandResult(lines=["n a_n b_n"], tables={"prime": p, "order": group.order, "filtration": a})
    result.lines.extend(f"{n} {a_n} {a_n - (a[n - 1] if n else 0)}" for n, a_n in enumerate(a))
    for n in range(1, len(a)):
        result.check(_verdict_line(f"n {n}", f"a_(n-1) {a[n - 1]} <= a_n {a[n]} <= |G| {group.order}", a[n - 1] <= a[n] <= group.order), a[n - 1] <= a[n] <= group.order)
    return result


def run_vinberg(config: RunConfig) -> CommandResult:
    presentation = _load_group_presentation(config)
    group = _load_group_table(config, 1)
    p = _require(config.prime, "--prime")
    report = vinberg_check(presentation, group, p, config.max_n, config.cap)
    result = CommandResult(lines=[f"relator degrees {' '.join(str(d) for d in report.relator_degrees)}", f"filtration {' '.join(str(a) for a in report.filtration)}"])
    for row in report.rows:
        result.check(_verdict_line(f"n {row.n}", f"lhs {row.lhs} rhs {row.rhs}", row.holds), row.holds)
    result.check(_verdict_line("series", f"(1 - h(X) + h(R)) H(B) (1-t)^-1 >= (1-t)^-1 to order {config.max_n}", report.series_form_holds), report.series_form_holds)

    rank = mod_p_rank(presentation, p)
    quotient = report.filtration[1] - report.filtration[0] if len(report.filtration) > 1 else None
    if quotient is not None:
        result.check(_verdict_line("dim b/b^2", f"Smith form {rank} filtration {quotient}", rank == quotient), rank == quotient)

    exactness = filtered_exactness_check(presentation, group, p, config.max_n)
    if exactness.applicable:
        for row in exactness.rows:
            result.check(_verdict_line(f"filtered exactness n {row.n}", f"lhs {row.lhs} rhs {row.rhs}", row.holds), row.holds)
    else:
        result.lines.append("filtered exactness: not applicable, |X| differs from dim b/b^2")
    result.tables.update({"vinberg": report.model_dump(mode="json"), "filteredExactness": exactness.model_dump(mode="json"), "modPRank": rank})

    if config.grid:
        negative = group_negative_value_test(presentation, report.relator_degrees, config.grid)
        result.lines.append(f"negative value test: {negative.verdict}" + (f" at t = {negative.witness} with value {negative.value}" if negative.holds else ""))
        result.tables["negativeValue"] = negative.model_dump(mode="json")
    return result


def run_dab(config: RunConfig) -> CommandResult:
    presentation = _load_group_presentation(config)
    abelianization = abelianization_rank(presentation)
    pgroup = gs_pgroup_report(presentation)
    verified = smith_normal_form(abelianization.exponent_matrix, len(presentation.generators)).verify()
    result = CommandResult(
        lines=[
            f"exponent matrix {abelianization.exponent_matrix}",
            f"invariant factors {' '.join(str(f) for f in abelianization.invariant_factors) or '(none)'}",
            f"d(G^ab) {abelianization.d_ab}",
            f"G^ab finite {'yes' if abelianization.is_finite else 'no'}",
            f"|X| {pgroup.generator_count} |R| {pgroup.relator_count} |X|^2/4 {pgroup.threshold}",
            f"p-group verdict {pgroup.verdict}",
        ],
        tables={"abelianization": abelianization.model_dump(mode="json"), "pGroup": pgroup.model_dump(mode="json")},
    )
    result.check(_verdict_line("smith form", "D = U A V with unimodular U, V", verified), verified)
    return result


COMMAND_HANDLERS: dict[str, Callable[[RunConfig], CommandResult]] = {
    "dims": run_dims,
    "gs-check": run_gs_check,
    "koszul": run_koszul,
    "hilbert": run_hilbert,
    "golod": run_golod,
    "serre": run_serre,
    "fox": run_fox,
    "group-filtration": run_group_filtration,
    "vinberg": run_vinberg,
    "dab": run_dab,
}


def render(config: RunConfig, result: CommandResult) -> str:
    """Text report, or one JSON object carrying every table."""
    if config.output == OutputMode.JSON:
        payload = {"schemaVersion": JSON_SCHEMA_VERSION, "command": config.command, "holds": result.holds, **result.tables}
        return json.dumps(payload, indent=2) + "\n"
    return "".join(f"{line}\n" for line in result.lines)


def exit_code_for(error: Exception) -> ExitCode:
    """Map an exception to the process exit code, as a controller maps errors to status codes."""
    if isinstance(error, InputError | FieldMismatchError):
        return ExitCode.INPUT_ERROR
    # InternalInconsistencyError and anything unexpected: the checks could not be established
    return ExitCode.CHECK_FAILED


def run(config: RunConfig) -> ExitCode:
    """Run one subcommand, write its report to stdout and return the exit code."""
    logger.info("Running %s with inputs %s", config.command, [sanitize_for_logging(path) for path in config.inputs])
    start = time.perf_counter()
    exit_code = ExitCode.CHECK_FAILED
    try:
        result = COMMAND_HANDLERS[config.command](config)
        sys.stdout.write(render(config, result))
        exit_code = ExitCode.OK if result.holds else ExitCode.CHECK_FAILED
        failed = result.checks.count(False)
        metrics = get_run_metrics()
        for holds in result.checks:
            metrics.record_check(holds)
        increment_checks(config.command, len(result.checks), failed)
        if failed:
            logger.warning("%s: %d of %d checks failed", config.command, failed, len(result.checks))
    except (InputError, FieldMismatchError) as e:
        logger.error("%s failed on input: %s", config.command, sanitize_for_logging(str(e)))
        exit_code = exit_code_for(e)
    except Exception as e:
        logger.exception("%s failed: %s", config.command, sanitize_for_logging(str(e)))
        exit_code = exit_code_for(e)
    finally:
        duration = time.perf_counter() - start
        increment_run(config.command, exit_code)
        observe_run_duration(config.command, duration)
        if config.metrics_file:
            try:
                write_metrics_file(config.metrics_file)
            except OSError:
                logger.exception("Failed to write metrics file %s", sanitize_for_logging(config.metrics_file))
        logger.debug("Run metrics: %s", get_run_metrics().get_snapshot())
        logger.info("%s finished with exit code %d in %.3f s", config.command, exit_code, duration)
    return exit_code
