"""Scoring and selection of interpretive hypotheses.

A hypothesis packages a program (its knowledge base plus query and evidence
directives), prior manifestness probabilities for its expectation queries,
and a label.  Evaluation computes, per expectation query, the posterior under
the evidence, the pointwise KL divergence against the prior, the summed
divergence, and the Herbrand size of the relevant ground program.  Selection
then drops hypotheses that leave expectations unsatisfied, resolves equal
divergence sums by the smaller Herbrand base, and accepts the highest
remaining divergence sum.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import NoInterpretationError, OptrelError, PlpSyntaxError
from .grounding import ground_relevant, herbrand_size
from .inference import DEFAULT_MAX_WORLDS, conditional
from .syntax import (
    Atom,
    Program,
    desugar_annotated_bodies,
    parse_ground_atom,
    render_atom,
)

KLD_EQUALITY_TOLERANCE = 1e-6


def kl_div(x: float, y: float) -> float:
    """Pointwise Kullback-Leibler divergence term between probabilities.

    x*log(x/y) - x + y for x>0, y>0 (natural log); y when x=0; +inf when
    x>0 and y=0.  Total on [0,1]^2, nonnegative, zero iff x == y.
    """
    if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
        raise ValueError(f"kl_div arguments must lie in [0,1], got ({x}, {y})")
    if x == 0.0:
        return y
    if y == 0.0:
        return math.inf
    return x * math.log(x / y) - x + y


@dataclass(frozen=True)
class InterpretiveHypothesis:
    label: str
    program: Program
    priors: dict[Atom, float]
    expectation_queries: tuple[Atom, ...]
    evidence: tuple[tuple[Atom, bool], ...]

    @classmethod
    def from_program(cls, label, program, priors, queries=None):
        """Queries and evidence default to the program's directives."""
        queries = tuple(queries) if queries is not None else program.queries
        missing = [q for q in queries if q not in priors]
        if missing:
            raise OptrelError(
                f"{label}: no prior for expectation quer"
                f"{'y' if len(missing) == 1 else 'ies'} "
                + ", ".join(map(render_atom, missing))
            )
        for atom, p in priors.items():
            if not 0.0 <= p <= 1.0:
                raise OptrelError(f"{label}: prior {p} for {atom} outside [0,1]")
        return cls(label, program, dict(priors), queries, program.evidence)


@dataclass(frozen=True)
class ReportRow:
    query: Atom
    prior: float
    posterior: float
    kld: float


@dataclass(frozen=True)
class HypothesisReport:
    label: str
    rows: tuple[ReportRow, ...]
    total_kld: float
    herbrand: int
    satisfied: bool


@dataclass(frozen=True)
class SelectionResult:
    winner: str
    eliminated: tuple[tuple[str, str], ...]  # (label, reason)
    trace: tuple[str, ...]


def evaluate_hypothesis(
    h: InterpretiveHypothesis,
    mode: str = "auto",
    max_worlds: int = DEFAULT_MAX_WORLDS,
) -> HypothesisReport:
    try:
        program = desugar_annotated_bodies(h.program)
        targets = tuple(h.expectation_queries) + tuple(a for a, _ in h.evidence)
        gp = ground_relevant(program, targets)
        posteriors = conditional(
            gp, h.expectation_queries, h.evidence, mode=mode, max_worlds=max_worlds
        )
    except OptrelError as err:
        raise type(err)(f"{h.label}: {err}") from err
    rows = tuple(
        sorted(
            (
                ReportRow(q, h.priors[q], posteriors[q], kl_div(h.priors[q], posteriors[q]))
                for q in h.expectation_queries
            ),
            key=lambda r: render_atom(r.query),
        )
    )
    total = sum(r.kld for r in rows)
    satisfied = all(math.isfinite(r.kld) for r in rows)
    return HypothesisReport(h.label, rows, total, herbrand_size(gp), satisfied)


def select_interpretation(reports) -> SelectionResult:
    """Three-step as-if optimization over hypothesis reports.

    1. Drop reports that do not satisfy all expectations (some divergence
       term is infinite).
    2. Among reports whose divergence sums agree within 1e-6, keep only the
       one with the smallest Herbrand base (ties: first label).
    3. Accept the survivor with the highest divergence sum (ties: first
       label).
    """
    reports = sorted(reports, key=lambda r: r.label)
    if not reports:
        raise ValueError("select_interpretation needs at least one report")
    eliminated: list[tuple[str, str]] = []
    trace: list[str] = []

    survivors = []
    for r in reports:
        if r.satisfied:
            survivors.append(r)
        else:
            eliminated.append((r.label, "unsatisfied"))
            trace.append(f"step 1: eliminate {r.label} (expectations unsatisfied)")
    if not survivors:
        raise NoInterpretationError(
            "all interpretive hypotheses were eliminated; the search is abandoned"
        )

    survivors.sort(key=lambda r: r.total_kld)
    groups: list[list[HypothesisReport]] = []
    for r in survivors:
        if groups and abs(r.total_kld - groups[-1][-1].total_kld) <= KLD_EQUALITY_TOLERANCE:
            groups[-1].append(r)
        else:
            groups.append([r])
    remaining = []
    for group in groups:
        keep = min(group, key=lambda r: (r.herbrand, r.label))
        remaining.append(keep)
        for r in group:
            if r is not keep:
                eliminated.append((r.label, "dominated_same_kld_larger_base"))
                trace.append(
                    f"step 2: eliminate {r.label} (KL sum equal to {keep.label}'s, "
                    f"Herbrand base {r.herbrand} vs {keep.herbrand})"
                )

    winner = None
    for r in sorted(remaining, key=lambda r: r.label):
        if winner is None or r.total_kld > winner.total_kld:
            winner = r
    for r in remaining:
        if r is not winner:
            eliminated.append((r.label, "lower_kld"))
            trace.append(
                f"step 3: eliminate {r.label} "
                f"(KL sum {r.total_kld:.4f} < {winner.total_kld:.4f})"
            )
    trace.append(f"accept {winner.label} (KL sum {winner.total_kld:.4f})")
    return SelectionResult(winner.label, tuple(eliminated), tuple(trace))


# ---------------------------------------------------------------------------
# Priors files


def load_priors(path) -> dict[Atom, float]:
    """Priors as a JSON object or as tab-separated ``atom<TAB>probability``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    priors: dict[Atom, float] = {}
    stripped = text.lstrip()
    if stripped.startswith("{"):
        for key, value in json.loads(text).items():
            priors[parse_ground_atom(key, "prior atom")] = float(value)
    else:
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                key, value = line.split("\t")
            except ValueError as err:
                raise PlpSyntaxError(
                    f"priors line must be 'atom<TAB>probability': {line!r}",
                    line=lineno,
                    source_name=str(path),
                ) from err
            priors[parse_ground_atom(key.strip(), "prior atom")] = float(value)
    for atom, p in priors.items():
        if not 0.0 <= p <= 1.0:
            raise PlpSyntaxError(
                f"prior {p} for {atom} outside [0,1]", source_name=str(path)
            )
    return priors
