import functools
import io
import json
from contextlib import redirect_stdout
from pathlib import Path
from typing import List, Optional, Sequence

import click

from thuekit import __version__
from thuekit.core.exceptions import DenseCapExceeded, DerivationError, StepBudgetExceeded, ThueKitError
from thuekit.core.logging import logger, setup_logging
from thuekit.models.derivation import Derivation
from thuekit.models.system import RewritingSystem
from thuekit.schemas.cli import CommandResult, ExitCode
from thuekit.schemas.cross_section import Verdict
from thuekit.schemas.dehn import DistanceMode
from thuekit.schemas.paper import FMode, Lemma
from thuekit.schemas.rewriting import SCHEMA_VERSION, NormalFormResponse, RedexListResponse, RedexResponse, Strategy
from thuekit.services.confluence import ConfluenceService
from thuekit.services.cross_section import CrossSectionService
from thuekit.services.dehn import DehnService
from thuekit.services.paper import PaperSystemsService
from thuekit.services.rewriting import RewritingService
from thuekit.services.systems import SYSTEM_IDS, builtin_system
from thuekit.services.verification import PAPER_LEMMAS, VerificationService

# errors that mean "the computation gave up", as opposed to bad input
FAILURE_ERRORS = (StepBudgetExceeded, DenseCapExceeded, DerivationError)


def handle_errors(func):
    """Turn domain errors into exit codes: 1 for exhausted budgets, 2 for bad input."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FAILURE_ERRORS as e:
            logger.warning(f"{func.__name__}: {e.detail}")
            click.echo(f"error: {e.detail}", err=True)
            raise click.exceptions.Exit(ExitCode.FAILED)
        except ThueKitError as e:
            logger.warning(f"{func.__name__}: rejected input: {e.detail}")
            click.echo(f"error: {e.detail}", err=True)
            raise click.exceptions.Exit(ExitCode.USAGE)

    return wrapper


def system_options(default: str):
    def decorate(func):
        func = click.option(
            "--system-file",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            help="Load a custom system file instead of a builtin.",
        )(func)
        func = click.option(
            "--system",
            "system_id",
            type=click.Choice(SYSTEM_IDS, case_sensitive=False),
            default=default,
            show_default=True,
            help="Builtin rewriting system.",
        )(func)
        return func

    return decorate


def seed_option(func):
    """Per-command `--seed`, overriding the global one."""

    def remember(ctx, param, value):
        if value is not None:
            ctx.obj["seed"] = value
        return value

    return click.option(
        "--seed", type=int, default=None, expose_value=False, callback=remember,
        help="Seed for every randomized choice (overrides the global --seed).",
    )(func)


def load_system(system_id: str, system_file: Optional[Path]) -> RewritingSystem:
    if system_file is not None:
        return RewritingService.parse_system(system_file.read_text(encoding="utf-8"), name=system_file.stem)
    return builtin_system(system_id)


def emit(ctx: click.Context, payload, lines: Sequence[str]) -> None:
    if ctx.obj["json"]:
        if hasattr(payload, "model_dump"):
            payload = payload.model_dump(mode="json", by_alias=True)
        else:
            payload = {"schema": SCHEMA_VERSION, **payload}
        click.echo(json.dumps(payload, ensure_ascii=False))
        return
    for line in lines:
        click.echo(line)


def derivation_lines(d: Derivation) -> List[str]:
    lines = [str(d.start)]
    for step, word in zip(d.steps, list(d.words())[1:]):
        lines.append(f"  {step.redex} -> {word}")
    lines.append(f"steps {d.length}")
    return lines


@click.group()
@click.version_option(version=__version__, prog_name="thuekit")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("--seed", type=int, default=None, help="Seed for every randomized choice.")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
@click.pass_context
def main(ctx: click.Context, as_json: bool, seed: Optional[int], log_level: Optional[str]) -> None:
    """String-rewriting toolkit for the systems R, S, T and U."""
    ctx.ensure_object(dict)
    ctx.obj.update(json=as_json, seed=seed)
    if log_level:
        setup_logging(log_level)


# core rewriting

@main.command()
@system_options("S")
@click.argument("word")
@click.option("--strategy", type=click.Choice([s.value for s in Strategy]), default=Strategy.LEFTMOST.value)
@seed_option
@click.option("--max-steps", type=click.IntRange(min=1), default=None)
@click.pass_context
@handle_errors
def reduce(ctx, system_id, system_file, word, strategy, max_steps):
    """Reduce WORD to normal form, printing every step."""
    system = load_system(system_id, system_file)
    w = RewritingService.parse_word(word, system)
    normal, d = RewritingService.reduce_to_normal_form(system, w, strategy, ctx.obj["seed"], max_steps)
    response = NormalFormResponse(system=system.name, word=w, normal_form=normal, steps=d.length, derivation=d)
    emit(ctx, response, derivation_lines(d))


@main.command()
@system_options("S")
@click.argument("word")
@click.pass_context
@handle_errors
def nf(ctx, system_id, system_file, word):
    """Print the leftmost normal form of WORD and the number of steps."""
    system = load_system(system_id, system_file)
    w = RewritingService.parse_word(word, system)
    normal, d = RewritingService.reduce_to_normal_form(system, w)
    response = NormalFormResponse(system=system.name, word=w, normal_form=normal, steps=d.length)
    emit(ctx, response, [str(normal), f"steps {d.length}"])


@main.command()
@system_options("R")
@click.argument("u")
@click.argument("v")
@click.option("--length-cap", type=click.IntRange(min=0), default=None)
@click.option("--dist-cap", type=click.IntRange(min=0), default=None)
@click.pass_context
@handle_errors
def equal(ctx, system_id, system_file, u, v, length_cap, dist_cap):
    """Decide whether U and V are congruent; exit 1 unless they are."""
    system = load_system(system_id, system_file)
    left, right = RewritingService.parse_word(u, system), RewritingService.parse_word(v, system)
    answer = DehnService.equivalent(system, left, right, length_cap, dist_cap)
    verdict = {True: "equal", False: "not-equal", None: "unknown"}[answer]
    emit(ctx, {"u": str(left), "v": str(right), "verdict": verdict}, [verdict])
    if answer is not True:
        ctx.exit(ExitCode.FAILED)


@main.command()
@system_options("S")
@click.argument("word")
@click.option("--reverse", "include_reverse", is_flag=True, help="Also list reverse applications.")
@click.option("--param-cap", type=click.IntRange(min=0), default=None)
@click.pass_context
@handle_errors
def redexes(ctx, system_id, system_file, word, include_reverse, param_cap):
    """List every redex of WORD."""
    system = load_system(system_id, system_file)
    w = RewritingService.parse_word(word, system)
    found = RewritingService.find_redexes(system, w, include_reverse, param_cap)
    response = RedexListResponse(
        system=system.name, word=w, redexes=[RedexResponse.from_redex(r) for r in found]
    )
    emit(ctx, response, [f"{r} {r.direction.value} -> {r.apply(w)}" for r in found])


# confluence

@main.command("critical-pairs")
@system_options("S")
@click.option("--max-param", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--max-steps", type=click.IntRange(min=1), default=None)
@click.pass_context
@handle_errors
def critical_pairs(ctx, system_id, system_file, max_param, max_steps):
    """Enumerate and resolve critical pairs; exit 1 if one does not resolve."""
    system = load_system(system_id, system_file)
    reports = ConfluenceService.resolve_all(system, max_param, max_steps)
    lines, rows = [], []
    for report in reports:
        pair = report.pair
        first, second = pair.rules
        outcome = f"resolved {report.common_word}" if report.resolved else (
            f"UNRESOLVED {report.left_normal_form} != {report.right_normal_form}"
        )
        lines.append(f"{pair.source}\t{first.label}@{first.position} x {second.label}@{second.position}"
                     f"\t{pair.overlap_kind.value}\t{outcome}")
        rows.append({
            "source": str(pair.source),
            "rules": [first.model_dump(), second.model_dump()],
            "overlap_kind": pair.overlap_kind.value,
            "resolved": report.resolved,
            "left_normal_form": str(report.left_normal_form),
            "right_normal_form": str(report.right_normal_form),
        })
    unresolved = sum(not r.resolved for r in reports)
    lines.append(f"{len(reports)} pairs, {unresolved} unresolved")
    emit(ctx, {"system": system.name, "max_param": max_param, "pairs": rows}, lines)
    if unresolved:
        ctx.exit(ExitCode.FAILED)


# Dehn metrics

@main.command("dehn-distance")
@system_options("R")
@click.argument("u")
@click.argument("v")
@click.option("--length-cap", type=click.IntRange(min=0), default=None)
@click.option("--dist-cap", type=click.IntRange(min=0), default=None)
@click.option("--mode", type=click.Choice([m.value for m in DistanceMode]), default=DistanceMode.THUE.value)
@click.option("--derivation", "with_derivation", is_flag=True, help="Print the witness derivation.")
@click.pass_context
@handle_errors
def dehn_distance(ctx, system_id, system_file, u, v, length_cap, dist_cap, mode, with_derivation):
    """Least number of rule applications between U and V within the caps."""
    system = load_system(system_id, system_file)
    left, right = RewritingService.parse_word(u, system), RewritingService.parse_word(v, system)
    found = DehnService.capped_distance(system, left, right, length_cap, dist_cap, mode, with_derivation)
    distance = "-" if found.distance is None else str(found.distance)
    lines = [f"{distance} {found.status.value}"]
    if found.derivation is not None:
        lines += derivation_lines(found.derivation)
    emit(ctx, {**found.model_dump(mode="json"), "schema": SCHEMA_VERSION}, lines)
    if not found.exact:
        ctx.exit(ExitCode.FAILED)


@main.command("dehn-profile")
@system_options("R")
@click.option("--max-n", type=click.IntRange(min=0), default=4, show_default=True)
@click.option("--length-cap", type=click.IntRange(min=0), default=None)
@click.option("--dist-cap", type=click.IntRange(min=0), default=None)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.pass_context
@handle_errors
def dehn_profile(ctx, system_id, system_file, max_n, length_cap, dist_cap, csv_path):
    """Tabulate D(n) for n up to --max-n."""
    system = load_system(system_id, system_file)
    points = DehnService.dehn_profile(system, max_n, length_cap, dist_cap)
    if csv_path is not None:
        DehnService.write_profile_csv(points, csv_path)
        ctx.obj["csv_path"] = str(csv_path)
    lines = [f"{p.n} {p.value} {p.status.value}" for p in points]
    emit(ctx, {"system": system.name, "points": [p.model_dump(mode="json") for p in points]}, lines)


# paper systems

@main.command("verify-paper")
@click.option("--lemma", "lemmas", multiple=True, type=click.Choice([l.value for l in Lemma]))
@click.option("--all", "run_all", is_flag=True, help="Run every lemma suite.")
@click.option("--full", is_flag=True, help="Use the full acceptance sizes (horizon 8, params up to 5 and 8, words up to 8).")
@seed_option
@click.pass_context
@handle_errors
def verify_paper(ctx, lemmas, run_all, full):
    """Run lemma property suites; exit 0 iff all pass.

    Quick sizes by default. The acceptance run is:

    \b
        thuekit verify-paper --all --full --seed 42
    """
    if not lemmas and not run_all:
        raise click.UsageError("give --lemma NAME or --all")
    selected = list(PAPER_LEMMAS) if run_all else []
    selected += [Lemma(name) for name in lemmas if Lemma(name) not in selected]

    results = [VerificationService.run_suite(lemma, ctx.obj["seed"], full) for lemma in selected]
    lines = []
    for result in results:
        lines.append(result.line)
        lines += [f"  witness: {w}" for w in result.witnesses]
        lines += [f"  failure: {f}" for f in result.failures]
    emit(ctx, {"results": [r.model_dump(mode="json") for r in results]}, lines)
    if not all(r.passed for r in results):
        ctx.exit(ExitCode.FAILED)


@main.command()
@click.argument("kind", type=click.Choice(["acac", "bac", "case1", "zero"]))
@click.argument("arg")
@click.pass_context
@handle_errors
def derive(ctx, kind, arg):
    """Print a constructive derivation: acac N, bac N, case1 WORD or zero WORD."""
    if kind in ("acac", "bac"):
        if not arg.isdigit():
            raise click.BadParameter(f"{kind} needs a non-negative integer", param_hint="ARG")
        n = int(arg)
        d = PaperSystemsService.acac_derivation(n) if kind == "acac" else PaperSystemsService.bac_derivation(n)
    elif kind == "case1":
        d = PaperSystemsService.case1_reduce(RewritingService.parse_word(arg, builtin_system("S")))
    else:
        d = PaperSystemsService.zero_collapse(RewritingService.parse_word(arg, builtin_system("R")))
    emit(ctx, {"kind": kind, "derivation": d.to_json()}, derivation_lines(d))


@main.command()
@click.argument("values", nargs=-1, required=True, type=click.IntRange(min=0))
@click.option("--mode", type=click.Choice([m.value for m in FMode]), default=FMode.CLOSED.value)
@click.pass_context
@handle_errors
def f(ctx, values, mode):
    """Evaluate f(d_k, ..., d_1)."""
    value = PaperSystemsService.f_eval(values, mode)
    emit(ctx, {"values": list(values), "mode": mode, "value": value}, [str(value)])


# cross-sections

@main.group()
def xsection():
    """Candidate regular cross-sections given as DFA files."""


@xsection.command("check")
@click.argument("dfa_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--horizon", type=click.IntRange(min=0), default=6, show_default=True)
@click.pass_context
@handle_errors
def xsection_check(ctx, dfa_file, horizon):
    """Look for two accepted words in one class; exit 1 when refuted."""
    dfa = CrossSectionService.load_dfa(dfa_file.read_text(encoding="utf-8"))
    report = CrossSectionService.check_cross_section(dfa, horizon)
    lines = [f"{report.verdict.value} horizon={report.horizon} accepted={report.accepted}"]
    lines += [f"  duplicate: {d.first} ~ {d.second} (normal form {d.normal_form})" for d in report.duplicates]
    if report.verdict == Verdict.CONSISTENT:
        lines += [f"  unreached: {w}" for w in report.unreached_classes]
    emit(ctx, report, lines)
    if report.verdict == Verdict.REFUTED:
        ctx.exit(ExitCode.FAILED)


@xsection.command("pump")
@click.argument("dfa_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--Q", "q", type=click.IntRange(1, 3), default=1, show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=2000, show_default=True)
@click.pass_context
@handle_errors
def xsection_pump(ctx, dfa_file, q, samples):
    """Pump a-runs of accepted words; exit 1 when a violation is found."""
    dfa = CrossSectionService.load_dfa(dfa_file.read_text(encoding="utf-8"))
    violation = CrossSectionService.pumping_falsifier(dfa, q, samples)
    if violation is None:
        emit(ctx, {"violation": None}, ["no violation found"])
        return
    line = f"violation: {violation.first} ~ {violation.second} (normal form {violation.normal_form})"
    emit(ctx, {"violation": violation.model_dump(mode="json")}, [line])
    ctx.exit(ExitCode.FAILED)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP API under uvicorn."""
    import uvicorn

    logger.info(f"Serving thuekit API on {host}:{port}")
    uvicorn.run("thuekit.main:app", host=host, port=port)


def run(argv: Sequence[str]) -> CommandResult:
    """Run one command line in-process, capturing stdout."""
    state = {}
    buffer = io.StringIO()
    try:
        with redirect_stdout(buffer):
            code = main.main(args=list(argv), prog_name="thuekit", standalone_mode=False, obj=state)
    except click.ClickException as e:
        e.show()
        code = e.exit_code
    except click.exceptions.Abort:
        code = ExitCode.FAILED
    return CommandResult(
        exit_code=ExitCode(code or 0),
        stdout=buffer.getvalue().splitlines(),
        csv_path=state.get("csv_path"),
    )
