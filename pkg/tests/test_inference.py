"""Engine routes (enumerating and compiled) against each other, against
closed forms, and against the brute-force oracle."""

import random

import pytest

from optrel import (
    Atom,
    InconsistentEvidenceError,
    WorldCapExceededError,
    conditional,
    desugar_annotated_bodies,
    enumerate_oracle,
    ground_relevant,
    joint_probability,
    marginal,
    parse_program,
)

from conftest import random_program_source


def grounded(source: str):
    program = desugar_annotated_bodies(parse_program(source, "test"))
    targets = tuple(program.queries) + tuple(a for a, _ in program.evidence)
    return program, ground_relevant(program, targets)


@pytest.mark.parametrize("mode", ["enumerate", "compiled"])
class TestBothRoutes:
    def test_chain(self, mode):
        program, gp = grounded("0.5::a.\n0.5::b.\nc :- a, b.\nquery(c).\n")
        assert marginal(gp, program.queries[0], mode=mode) == pytest.approx(
            0.25, abs=1e-12
        )

    def test_diamond(self, mode):
        program, gp = grounded(
            "0.5::a.\n0.5::b.\n0.5::c.\n"
            "d :- a, b.\nd :- a, c.\nquery(d).\n"
        )
        assert marginal(gp, program.queries[0], mode=mode) == pytest.approx(
            0.5 * (1 - 0.5 * 0.5), abs=1e-12
        )

    def test_noisy_or(self, mode):
        program, gp = grounded(
            "0.9::a.\n0.2::b.\nh :- a.\nh :- b.\nquery(h).\n"
        )
        assert marginal(gp, program.queries[0], mode=mode) == pytest.approx(
            1 - 0.1 * 0.8, abs=1e-12
        )

    def test_shared_support_not_double_counted(self, mode):
        program, gp = grounded(
            "0.5::a.\nb :- a.\nc :- a.\nd :- b.\nd :- c.\nquery(d).\n"
        )
        assert marginal(gp, program.queries[0], mode=mode) == pytest.approx(
            0.5, abs=1e-12
        )

    def test_conditional(self, mode):
        program, gp = grounded(
            "0.5::a.\n0.5::b.\nc :- a, b.\n"
            "query(c).\nevidence(a).\n"
        )
        got = conditional(
            gp, program.queries, program.evidence, mode=mode
        )[program.queries[0]]
        assert got == pytest.approx(0.5, abs=1e-12)

    def test_negative_evidence(self, mode):
        program, gp = grounded(
            "0.5::a.\n0.5::b.\nc :- a.\nc :- b.\n"
            "query(c).\nevidence(a, false).\n"
        )
        got = conditional(
            gp, program.queries, program.evidence, mode=mode
        )[program.queries[0]]
        assert got == pytest.approx(0.5, abs=1e-12)

    def test_inconsistent_evidence(self, mode):
        program, gp = grounded(
            "0.5::a.\nb :- a.\nquery(b).\nevidence(a).\nevidence(b, false).\n"
        )
        with pytest.raises(InconsistentEvidenceError):
            conditional(gp, program.queries, program.evidence, mode=mode)

    def test_independent_queries_factorize(self, mode):
        program, gp = grounded(
            "0.3::a.\n0.7::b.\np :- a.\nq :- b.\nquery(p).\nquery(q).\n"
        )
        p, q = program.queries
        joint = joint_probability(gp, (p, q), mode=mode)
        assert joint == pytest.approx(
            marginal(gp, p, mode=mode) * marginal(gp, q, mode=mode), abs=1e-12
        )


@pytest.mark.parametrize("mode", ["enumerate", "compiled"])
def test_path_chain_and_diamond(mode):
    program, gp = grounded(
        "0.5::e(a, b).\n0.5::e(b, c).\n"
        "path(X, Y) :- e(X, Y).\n"
        "path(X, Y) :- e(X, Z), path(Z, Y).\n"
        "query(path(a, c)).\n"
    )
    assert marginal(gp, program.queries[0], mode=mode) == pytest.approx(
        0.25, abs=1e-12
    )
    program, gp = grounded(
        "0.5::e(a, b).\n0.5::e(a, c).\n0.5::e(b, d).\n0.5::e(c, d).\n"
        "path(X, Y) :- e(X, Y).\n"
        "path(X, Y) :- e(X, Z), path(Z, Y).\n"
        "query(path(a, d)).\n"
    )
    assert marginal(gp, program.queries[0], mode=mode) == pytest.approx(
        1 - (1 - 0.25) ** 2, abs=1e-12
    )


def test_certain_fact_and_self_evidence():
    program, gp = grounded("f(a).\n0.3::g(b).\nquery(f(a)).\nquery(g(b)).\n")
    f, g = program.queries
    assert marginal(gp, f) == 1.0
    assert conditional(gp, (g,), ((g, True),))[g] == 1.0


def test_routes_agree_on_random_programs():
    rng = random.Random(99)
    for _ in range(30):
        source = random_program_source(rng, max_facts=10, max_rules=15)
        program, gp = grounded(source)
        q = program.queries[0]
        try:
            enum = conditional(gp, (q,), program.evidence, mode="enumerate")[q]
        except InconsistentEvidenceError:
            with pytest.raises(InconsistentEvidenceError):
                conditional(gp, (q,), program.evidence, mode="compiled")
            continue
        comp = conditional(gp, (q,), program.evidence, mode="compiled")[q]
        assert comp == pytest.approx(enum, abs=1e-12)


def test_world_cap_enforced():
    facts = "\n".join(f"0.5::f{i}." for i in range(8))
    source = facts + "\nh :- " + ", ".join(f"f{i}" for i in range(8)) + ".\nquery(h).\n"
    program, gp = grounded(source)
    with pytest.raises(WorldCapExceededError):
        marginal(gp, program.queries[0], mode="enumerate", max_worlds=100)
    # the compiled route has no world cap
    assert marginal(gp, program.queries[0], mode="compiled") == pytest.approx(
        0.5**8, abs=1e-15
    )


def test_oracle_agreement_small_cases():
    sources = [
        "0.5::a.\n0.5::b.\nc :- a, b.\nquery(c).\n",
        "0.9::a.\n0.2::b.\nh :- a.\nh :- b.\nquery(h).\n",
        "0.5::a.\nb :- a.\nc :- b.\nquery(c).\nevidence(b).\n",
    ]
    for source in sources:
        program, gp = grounded(source)
        q = program.queries[0]
        want = enumerate_oracle(gp, q, program.evidence)
        got = conditional(gp, (q,), program.evidence)[q]
        assert got == pytest.approx(want, abs=1e-12)


def test_probabilities_stay_in_bounds():
    rng = random.Random(5)
    for _ in range(20):
        source = random_program_source(rng, max_facts=8, max_rules=10)
        program, gp = grounded(source)
        q = program.queries[0]
        try:
            got = conditional(gp, (q,), program.evidence)[q]
        except InconsistentEvidenceError:
            continue
        assert 0.0 <= got <= 1.0
