"""Relevant grounding against a naive propositional world-enumeration oracle,
plus termination, determinism, and error behavior."""

import itertools
import random

import pytest

from optrel import (
    Atom,
    GroundingError,
    conditional,
    desugar_annotated_bodies,
    dump_ground,
    ground_relevant,
    herbrand_size,
    marginal,
    parse_program,
)

from conftest import random_program_source


def naive_marginal(program, query: Atom) -> float:
    """Independent propositional oracle: loop over every subset of the
    probabilistic facts, chain rules to a fixpoint with plain set operations.
    Only valid for variable-free programs."""
    facts = [(c.label, c.head) for c in program.clauses if not c.body]
    rules = [
        (c.head, tuple(lit.atom for lit in c.body)) for c in program.clauses if c.body
    ]
    choice = [(p, a) for p, a in facts if p < 1.0]
    certain = {a for p, a in facts if p == 1.0}
    total = 0.0
    for picks in itertools.product([False, True], repeat=len(choice)):
        weight = 1.0
        world = set(certain)
        for on, (p, a) in zip(picks, choice):
            weight *= p if on else 1.0 - p
            if on:
                world.add(a)
        grew = True
        while grew:
            grew = False
            for head, body in rules:
                if head not in world and all(b in world for b in body):
                    world.add(head)
                    grew = True
        if query in world:
            total += weight
    return total


def grounded(source: str):
    program = desugar_annotated_bodies(parse_program(source, "test"))
    return program, ground_relevant(program, program.queries)


def test_chain():
    program, gp = grounded("0.5::a.\n0.5::b.\nc :- a, b.\nquery(c).\n")
    assert marginal(gp, program.queries[0]) == pytest.approx(0.25, abs=1e-12)


def test_diamond():
    source = (
        "0.5::a.\n0.5::b.\n0.5::c.\n"
        "d :- a, b.\nd :- a, c.\nquery(d).\n"
    )
    program, gp = grounded(source)
    got = marginal(gp, program.queries[0])
    assert got == pytest.approx(naive_marginal(program, program.queries[0]), abs=1e-12)
    assert got == pytest.approx(0.5 * 0.75, abs=1e-12)


def test_cyclic_graph_terminates_and_matches_reachability():
    source = (
        "0.5::edge(a, b).\n0.5::edge(b, a).\n0.5::edge(b, c).\n"
        "path(X, Y) :- edge(X, Y).\n"
        "path(X, Y) :- edge(X, Z), path(Z, Y).\n"
        "query(path(a, c)).\n"
    )
    program, gp = grounded(source)
    # reachable a->c iff edge(a,b) and edge(b,c)
    assert marginal(gp, program.queries[0]) == pytest.approx(0.25, abs=1e-12)


def test_inequality_prunes_instances():
    source = (
        "q(a).\nr(a).\nr(b).\n"
        "p(X, Y) :- q(X), r(Y), X \\= Y.\n"
        "query(p(a, a)).\nquery(p(a, b)).\n"
    )
    program, gp = grounded(source)
    assert marginal(gp, program.queries[0]) == 0.0
    assert marginal(gp, program.queries[1]) == 1.0


def test_equality_binds():
    source = (
        "picked(mary).\n"
        "wants(P, X) :- picked(P), X = coffee.\n"
        "query(wants(mary, coffee)).\n"
    )
    program, gp = grounded(source)
    assert marginal(gp, program.queries[0]) == 1.0


def test_unknown_predicate_gives_zero():
    program, gp = grounded("a :- nothing_defines_this.\nquery(a).\n")
    assert marginal(gp, program.queries[0]) == 0.0


def test_conflicting_fact_probabilities_rejected():
    program = parse_program("0.3::a.\n0.7::a.\nquery(a).\n", "test")
    with pytest.raises(GroundingError):
        ground_relevant(program, program.queries)


def test_dump_is_deterministic():
    source = (
        "0.5::edge(a, b).\n0.25::edge(b, c).\n"
        "path(X, Y) :- edge(X, Y).\n"
        "path(X, Y) :- edge(X, Z), path(Z, Y).\n"
        "query(path(a, c)).\n"
    )
    dumps = {dump_ground(grounded(source)[1]) for _ in range(3)}
    assert len(dumps) == 1


def test_grounding_restricted_to_relevant_atoms():
    source = (
        "0.5::edge(a, b).\n0.5::edge(x, y).\n"
        "path(X, Y) :- edge(X, Y).\n"
        "query(path(a, b)).\n"
    )
    _, gp = grounded(source)
    assert Atom("edge", tuple(map(str, "xy"))) not in gp.atom_index
    rendered = dump_ground(gp)
    assert "edge(x,y)" not in rendered


def test_forward_completion_counts_supported_side_atoms():
    base = (
        "0.5::a.\n"
        "b :- a.\n"
        "query(b).\n"
    )
    extended = base + "c :- b.\n"
    p1, gp1 = grounded(base)
    p2, gp2 = grounded(extended)
    # the c rule is body-supported by the relevant b, so it enters the base
    assert herbrand_size(gp2) == herbrand_size(gp1) + 1


def test_empty_program_empty_targets():
    program = parse_program("", "test")
    assert herbrand_size(ground_relevant(program, ())) == 0


def test_single_target_restriction_on_bundled_program(fixtures_dir):
    source = (fixtures_dir / "int1_reconciled.pl").read_text()
    program = desugar_annotated_bodies(parse_program(source, "int1"))
    target = next(
        q for q in program.queries if "coffee" in str(q.args[1])
    )
    gp = ground_relevant(program, (target,))
    rendered = dump_ground(gp)
    assert "edge(coffee,tirednessBlockingDrink)" in rendered
    assert "say(mary,sentence(idontDrinkED))" in rendered
    assert "edge(redBull" not in rendered


def test_random_propositional_programs_match_oracle():
    rng = random.Random(20240823)
    for _ in range(40):
        source = random_program_source(rng, max_facts=8, max_rules=12)
        program = parse_program(source, "random")
        query = program.queries[0]
        gp = ground_relevant(program, (query,))
        got = marginal(gp, query)
        want = naive_marginal(program, query)
        assert got == pytest.approx(want, abs=1e-9)


def test_monotonicity_adding_clauses():
    rng = random.Random(7)
    for _ in range(20):
        source = random_program_source(rng, max_facts=6, max_rules=8)
        program = parse_program(source, "random")
        query = program.queries[0]
        base = marginal(ground_relevant(program, (query,)), query)
        extra = f"{query.predicate} :- f0.\n"
        bigger = parse_program(source + extra, "random")
        grown = marginal(ground_relevant(bigger, (query,)), query)
        assert grown >= base - 1e-12
