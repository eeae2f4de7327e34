"""Shared helpers: fixture paths, hypothesis loading, random programs."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from optrel import (
    InterpretiveHypothesis,
    evaluate_hypothesis,
    load_priors,
    parse_program,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures" / "paper"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture_program(name: str):
    path = FIXTURES / name
    return parse_program(path.read_text(encoding="utf-8"), str(path))


def load_fixture_hypothesis(name: str, priors_name: str, label: str | None = None):
    program = load_fixture_program(name)
    priors = load_priors(FIXTURES / priors_name)
    return InterpretiveHypothesis.from_program(
        label or Path(name).stem, program, priors
    )


def evaluate_fixture(name: str, priors_name: str, label: str | None = None, **kwargs):
    return evaluate_hypothesis(
        load_fixture_hypothesis(name, priors_name, label), **kwargs
    )


def random_program_source(rng: random.Random, max_facts: int = 20,
                          max_rules: int = 30) -> str:
    """A random propositional program: probabilistic facts f0..fn, derived
    atoms d0..dm with bodies drawn from facts and derived atoms (cycles
    allowed), one query, and maybe one evidence directive."""
    n_facts = rng.randint(1, max_facts)
    n_derived = rng.randint(1, 8)
    n_rules = rng.randint(1, max_rules)
    facts = [f"f{i}" for i in range(n_facts)]
    derived = [f"d{i}" for i in range(n_derived)]
    lines = [f"{round(rng.uniform(0.05, 0.95), 3)}::{f}." for f in facts]
    for _ in range(n_rules):
        head = rng.choice(derived)
        pool = facts + derived
        body = rng.sample(pool, k=min(len(pool), rng.randint(1, 3)))
        lines.append(f"{head} :- {', '.join(body)}.")
    query = rng.choice(derived)
    lines.append(f"query({query}).")
    if rng.random() < 0.5:
        lines.append(f"evidence({rng.choice(facts + derived)}).")
    return "\n".join(lines) + "\n"
