"""Command-line front end.

Three commands: ``eval`` scores one interpretive hypothesis, ``compare``
scores several and runs the selection procedure, ``paper-suite`` replays the
five bundled interpretation fixtures against their published tables.  Output
is byte-deterministic: rows are sorted, floats print with four decimals in
table and csv modes, and infinity prints as the literal "inf" (a JSON string
in json mode).
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import click

from .errors import OptrelError
from .evaluator import (
    HypothesisReport,
    InterpretiveHypothesis,
    SelectionResult,
    evaluate_hypothesis,
    load_priors,
    select_interpretation,
)
from .grounding import dump_ground, ground_relevant
from .inference import DEFAULT_MAX_WORLDS
from .reference import KLD_TOLERANCE, SUM_TOLERANCE, TABLES
from .syntax import desugar_annotated_bodies, parse_program, render_atom


def _fmt(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.4f}"


def _json_value(value: float):
    return "inf" if math.isinf(value) else value


def _load_hypothesis(program_path: str, priors_path: str, label: str | None):
    path = Path(program_path)
    program = parse_program(path.read_text(encoding="utf-8"), str(path))
    priors = load_priors(priors_path)
    return InterpretiveHypothesis.from_program(label or path.stem, program, priors)


def _report_table(report: HypothesisReport) -> str:
    width = max(len("query"), *(len(render_atom(r.query)) for r in report.rows))
    lines = [f"hypothesis: {report.label}"]
    lines.append(f"{'query':<{width}}  {'prior':>9}  {'posterior':>9}  {'kld':>9}")
    for r in report.rows:
        lines.append(
            f"{render_atom(r.query):<{width}}  {_fmt(r.prior):>9}  "
            f"{_fmt(r.posterior):>9}  {_fmt(r.kld):>9}"
        )
    lines.append(f"{'total':<{width}}  {'':>9}  {'':>9}  {_fmt(report.total_kld):>9}")
    lines.append(f"herbrand: {report.herbrand}")
    lines.append(f"satisfied: {'yes' if report.satisfied else 'no'}")
    return "\n".join(lines)


def _report_csv_rows(report: HypothesisReport, label_column: bool):
    prefix = [report.label] if label_column else []
    for r in report.rows:
        yield prefix + [
            render_atom(r.query), _fmt(r.prior), _fmt(r.posterior), _fmt(r.kld)
        ]
    yield prefix + ["total", "", "", _fmt(report.total_kld)]


def _report_json(report: HypothesisReport) -> dict:
    return {
        "label": report.label,
        "rows": [
            {
                "query": render_atom(r.query),
                "prior": r.prior,
                "posterior": _json_value(r.posterior),
                "kld": _json_value(r.kld),
            }
            for r in report.rows
        ],
        "total_kld": _json_value(report.total_kld),
        "herbrand": report.herbrand,
        "satisfied": report.satisfied,
    }


def _selection_json(selection: SelectionResult) -> dict:
    return {
        "winner": selection.winner,
        "eliminated": [
            {"label": label, "reason": reason}
            for label, reason in selection.eliminated
        ],
        "trace": list(selection.trace),
    }


def _emit_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buf.getvalue().rstrip("\n")


def _emit_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)


_FORMAT = click.option(
    "--format", "fmt", type=click.Choice(["table", "csv", "json"]),
    default="table", show_default=True, help="Output format.",
)
_MODE = click.option(
    "--mode", type=click.Choice(["auto", "enumerate", "compiled"]),
    default="auto", show_default=True, help="Inference route.",
)
_MAX_WORLDS = click.option(
    "--max-worlds", type=int, default=DEFAULT_MAX_WORLDS, show_default=True,
    help="Cap on enumerated worlds.",
)


@click.group()
def main():
    """Score interpretive hypotheses of a probabilistic logic program."""


@main.command("eval")
@click.argument("program", type=click.Path(exists=True, dir_okay=False))
@click.option("--priors", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Priors file (TSV or JSON).")
@click.option("--label", default=None, help="Hypothesis label (default: file stem).")
@_FORMAT
@_MODE
@_MAX_WORLDS
@click.option("--dump-ground", "show_ground", is_flag=True,
              help="Print the relevant ground program first.")
def eval_command(program, priors, label, fmt, mode, max_worlds, show_ground):
    """Evaluate one hypothesis and print its report."""
    try:
        h = _load_hypothesis(program, priors, label)
        if show_ground:
            desugared = desugar_annotated_bodies(h.program)
            targets = tuple(h.expectation_queries) + tuple(a for a, _ in h.evidence)
            click.echo(dump_ground(ground_relevant(desugared, targets)))
        report = evaluate_hypothesis(h, mode=mode, max_worlds=max_worlds)
    except OptrelError as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(err.exit_code)
    if fmt == "table":
        click.echo(_report_table(report))
    elif fmt == "csv":
        header = [["query", "prior", "posterior", "kld"]]
        click.echo(_emit_csv(header + list(_report_csv_rows(report, False))))
    else:
        click.echo(_emit_json(_report_json(report)))


@main.command("compare")
@click.argument("programs", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--priors", "priors_paths", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Priors file; give once for all programs or once per program.")
@click.option("--label", "labels", multiple=True,
              help="Hypothesis labels, positional (default: file stems).")
@_FORMAT
@_MODE
@_MAX_WORLDS
def compare_command(programs, priors_paths, labels, fmt, mode, max_worlds):
    """Evaluate several hypotheses and select the accepted interpretation."""
    if len(programs) < 2:
        raise click.UsageError("compare needs at least two programs")
    if len(priors_paths) not in (1, len(programs)):
        raise click.UsageError("give --priors once or once per program")
    if labels and len(labels) != len(programs):
        raise click.UsageError("give --label once per program or not at all")
    if len(priors_paths) == 1:
        priors_paths = priors_paths * len(programs)
    try:
        reports = []
        for i, program in enumerate(programs):
            h = _load_hypothesis(
                program, priors_paths[i], labels[i] if labels else None
            )
            reports.append(evaluate_hypothesis(h, mode=mode, max_worlds=max_worlds))
        selection = select_interpretation(reports)
    except OptrelError as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(err.exit_code)
    if fmt == "table":
        for report in reports:
            click.echo(_report_table(report))
            click.echo("")
        for line in selection.trace:
            click.echo(line)
        click.echo(f"winner: {selection.winner}")
    elif fmt == "csv":
        rows = [["label", "query", "prior", "posterior", "kld"]]
        for report in reports:
            rows.extend(_report_csv_rows(report, True))
        rows.append(["winner", selection.winner, "", "", ""])
        click.echo(_emit_csv(rows))
    else:
        payload = {
            "reports": [_report_json(r) for r in reports],
            "selection": _selection_json(selection),
        }
        click.echo(_emit_json(payload))


def _default_fixtures() -> Path:
    for candidate in (
        Path.cwd() / "fixtures" / "paper",
        Path(__file__).resolve().parents[2] / "fixtures" / "paper",
    ):
        if candidate.is_dir():
            return candidate
    raise click.UsageError("cannot locate the fixtures directory; use --fixtures")


def _close(got: float, want: float, tolerance: float) -> bool:
    if math.isinf(want) or math.isinf(got):
        return got == want
    return abs(got - want) <= tolerance


@main.command("paper-suite")
@click.option("--fixtures", type=click.Path(exists=True, file_okay=False),
              default=None, help="Fixtures directory (default: bundled).")
@_MODE
@_MAX_WORLDS
def paper_suite_command(fixtures, mode, max_worlds):
    """Replay the five bundled fixtures against their published tables."""
    root = Path(fixtures) if fixtures else _default_fixtures()
    failures = 0
    try:
        for table in TABLES:
            h = _load_hypothesis(
                str(root / table.program), str(root / table.priors), table.name
            )
            report = evaluate_hypothesis(h, mode=mode, max_worlds=max_worlds)
            rows = {render_atom(r.query): r for r in report.rows}
            for query, (prior, posterior, kld) in sorted(table.rows.items()):
                row = rows[query]
                for column, got, want, tol in (
                    ("posterior", row.posterior, posterior,
                     table.posterior_tolerance),
                    ("kld", row.kld, kld, KLD_TOLERANCE),
                ):
                    ok = _close(got, want, tol)
                    failures += not ok
                    click.echo(
                        f"{'PASS' if ok else 'FAIL'} {table.name} {query} "
                        f"{column} got {_fmt(got)} want {_fmt(want)}"
                    )
                if abs(row.prior - prior) > 1e-12:
                    failures += 1
                    click.echo(
                        f"FAIL {table.name} {query} prior got {_fmt(row.prior)} "
                        f"want {_fmt(prior)}"
                    )
            ok = _close(report.total_kld, table.total, SUM_TOLERANCE)
            failures += not ok
            click.echo(
                f"{'PASS' if ok else 'FAIL'} {table.name} total "
                f"got {_fmt(report.total_kld)} want {_fmt(table.total)}"
            )
    except OptrelError as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(err.exit_code)
    click.echo("all checks passed" if not failures else f"{failures} checks failed")
    sys.exit(0 if not failures else 1)


if __name__ == "__main__":
    main()
