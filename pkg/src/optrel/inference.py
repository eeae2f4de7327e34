"""Exact inference over a ground program under the distribution semantics.

A world picks a subset of the probabilistic facts (labels below 1.0) to be
true; its derived atoms are the least model of the rules plus the chosen
facts.  Three routes compute the same quantities:

* ``marginal`` / ``conditional``: the engine; either relevance-filtered world
  enumeration with bitmask fixpoints, or compilation of the relevant
  subprogram to a binary decision diagram followed by weighted model
  counting (``mode`` selects, "auto" picks by size);

* ``enumerate_oracle``: the semantics-defining reference that brute-forces
  all worlds with naive forward chaining, vectorized over worlds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bdd import Bdd
from .errors import InconsistentEvidenceError, WorldCapExceededError
from .grounding import GroundProgram
from .syntax import Atom, render_atom

DEFAULT_MAX_WORLDS = 2**24
AUTO_ENUMERATE_MAX_FACTS = 16


@dataclass(frozen=True)
class InferenceResult:
    query: Atom
    probability: float
    evidence_probability: float


EvidenceList = tuple[tuple[Atom, bool], ...]


# ---------------------------------------------------------------------------
# Relevance restriction shared by both engine routes


def _restrict(gp: GroundProgram, roots):
    """Atoms backward-reachable from the roots, the choice facts among them
    (sorted for determinism), and the rules over them."""
    rules_by_head: dict[Atom, list[tuple[Atom, ...]]] = {}
    for head, body in gp.rules:
        rules_by_head.setdefault(head, []).append(body)
    relevant: set[Atom] = set()
    stack = list(roots)
    while stack:
        a = stack.pop()
        if a in relevant:
            continue
        relevant.add(a)
        for body in rules_by_head.get(a, ()):
            stack.extend(body)
    choice = sorted(
        (a for a in relevant if gp.fact_probability.get(a, 1.0) < 1.0),
        key=render_atom,
    )
    rules = [
        (head, body) for head, bodies in rules_by_head.items() if head in relevant
        for body in bodies
    ]
    rules.sort(key=lambda r: (render_atom(r[0]), tuple(map(render_atom, r[1]))))
    return relevant, choice, rules


# ---------------------------------------------------------------------------
# Compiled route: decision diagram + weighted model counting


def _compile(gp: GroundProgram, roots):
    """Least-fixpoint compilation of every backward-relevant atom to a BDD
    over the relevant choice facts."""
    relevant, choice, rules = _restrict(gp, roots)
    mgr = Bdd(len(choice))
    level = {a: i for i, a in enumerate(choice)}
    probs = [gp.fact_probability[a] for a in choice]

    base: dict[Atom, int] = {}
    for a in relevant:
        if a in level:
            base[a] = mgr.var(level[a])
        elif a in gp.fact_probability:  # deterministic fact
            base[a] = mgr.TRUE
        else:
            base[a] = mgr.FALSE
    node = dict(base)

    changed = True
    while changed:
        changed = False
        for head, body in rules:
            contribution = mgr.conjoin(node.get(b, mgr.FALSE) for b in body)
            merged = mgr.apply_or(node[head], contribution)
            if merged != node[head]:
                node[head] = merged
                changed = True
    return mgr, node, probs


def _compiled_joint(mgr, node, probs, atoms, evidence: EvidenceList):
    u = mgr.conjoin(node.get(a, mgr.FALSE) for a in atoms)
    for a, pol in evidence:
        v = node.get(a, mgr.FALSE)
        u = mgr.apply_and(u, v if pol else mgr.negate(v))
    return mgr.weighted_count(u, probs)


# ---------------------------------------------------------------------------
# Enumerating route: bitmask worlds over the relevant choice facts


def _enumerate_joint(gp: GroundProgram, atoms, evidence: EvidenceList, max_worlds):
    roots = list(atoms) + [a for a, _ in evidence]
    relevant, choice, rules = _restrict(gp, roots)
    n = len(choice)
    if 1 << n > max_worlds:
        raise WorldCapExceededError(
            f"{n} relevant probabilistic facts exceed the world cap of "
            f"{max_worlds} worlds; use the compiled mode"
        )
    ids = {a: i for i, a in enumerate(sorted(relevant, key=render_atom))}
    det_mask = 0
    for a in relevant:
        if gp.fact_probability.get(a, 0.0) == 1.0:
            det_mask |= 1 << ids[a]
    rule_masks = [
        (1 << ids[head], sum(1 << ids[b] for b in set(body)))
        for head, body in rules
    ]
    choice_bits = [(1 << ids[a], gp.fact_probability[a]) for a in choice]
    want_mask = sum(1 << ids[a] for a in set(atoms))
    ev_bits = [(1 << ids[a], pol) for a, pol in evidence]

    total = 0.0
    for world in range(1 << n):
        weight = 1.0
        truth = det_mask
        for i, (bit, p) in enumerate(choice_bits):
            if world >> i & 1:
                truth |= bit
                weight *= p
            else:
                weight *= 1.0 - p
        changed = True
        while changed:
            changed = False
            for head_bit, body_mask in rule_masks:
                if not truth & head_bit and truth & body_mask == body_mask:
                    truth |= head_bit
                    changed = True
        if truth & want_mask != want_mask:
            continue
        if any((truth & bit != 0) != pol for bit, pol in ev_bits):
            continue
        total += weight
    return total


# ---------------------------------------------------------------------------
# Engine API


def _choose_mode(gp: GroundProgram, roots, mode: str) -> str:
    if mode != "auto":
        return mode
    _, choice, _ = _restrict(gp, roots)
    return "enumerate" if len(choice) <= AUTO_ENUMERATE_MAX_FACTS else "compiled"


def joint_probability(
    gp: GroundProgram,
    atoms,
    evidence: EvidenceList = (),
    mode: str = "auto",
    max_worlds: int = DEFAULT_MAX_WORLDS,
) -> float:
    """P(all atoms true and evidence as observed), unnormalized by evidence."""
    atoms = tuple(atoms)
    roots = list(atoms) + [a for a, _ in evidence]
    mode = _choose_mode(gp, roots, mode)
    if mode == "enumerate":
        return _enumerate_joint(gp, atoms, tuple(evidence), max_worlds)
    mgr, node, probs = _compile(gp, roots)
    return _compiled_joint(mgr, node, probs, atoms, tuple(evidence))


def marginal(
    gp: GroundProgram,
    q: Atom,
    mode: str = "auto",
    max_worlds: int = DEFAULT_MAX_WORLDS,
) -> float:
    return joint_probability(gp, (q,), (), mode, max_worlds)


def query_results(
    gp: GroundProgram,
    queries,
    evidence: EvidenceList = (),
    mode: str = "auto",
    max_worlds: int = DEFAULT_MAX_WORLDS,
) -> list[InferenceResult]:
    queries = tuple(queries)
    evidence = tuple(evidence)
    roots = list(queries) + [a for a, _ in evidence]
    mode = _choose_mode(gp, roots, mode)
    if mode == "enumerate":
        p_e = _enumerate_joint(gp, (), evidence, max_worlds) if evidence else 1.0
        if evidence and p_e == 0.0:
            raise InconsistentEvidenceError(_zero_evidence_message(evidence))
        return [
            InferenceResult(
                q, _enumerate_joint(gp, (q,), evidence, max_worlds) / p_e, p_e
            )
            for q in queries
        ]
    mgr, node, probs = _compile(gp, roots)
    p_e = _compiled_joint(mgr, node, probs, (), evidence) if evidence else 1.0
    if evidence and p_e == 0.0:
        raise InconsistentEvidenceError(_zero_evidence_message(evidence))
    return [
        InferenceResult(
            q, _compiled_joint(mgr, node, probs, (q,), evidence) / p_e, p_e
        )
        for q in queries
    ]


def conditional(
    gp: GroundProgram,
    queries,
    evidence: EvidenceList = (),
    mode: str = "auto",
    max_worlds: int = DEFAULT_MAX_WORLDS,
) -> dict[Atom, float]:
    """P(q | evidence) per query; reduces to marginals with empty evidence."""
    return {
        r.query: r.probability
        for r in query_results(gp, queries, evidence, mode, max_worlds)
    }


def _zero_evidence_message(evidence: EvidenceList) -> str:
    parts = ", ".join(
        f"{a}={'true' if pol else 'false'}" for a, pol in evidence
    )
    return f"evidence has probability zero: {parts}"


# ---------------------------------------------------------------------------
# Reference oracle


def enumerate_oracle(
    gp: GroundProgram,
    q: Atom,
    evidence: EvidenceList = (),
    max_facts: int = 24,
) -> float:
    """Brute-force P(q | evidence): every world over the relevant
    probabilistic facts, least model per world by naive forward chaining.

    The per-world computation is vectorized with numpy but is semantically a
    plain loop over the 2^n fact assignments.
    """
    evidence = tuple(evidence)
    roots = [q] + [a for a, _ in evidence]
    relevant, choice, rules = _restrict(gp, roots)
    n = len(choice)
    if n > max_facts:
        raise WorldCapExceededError(
            f"{n} relevant probabilistic facts exceed the oracle cap of {max_facts}"
        )
    worlds = 1 << n
    idx = np.arange(worlds, dtype=np.uint64)
    truth: dict[Atom, np.ndarray] = {}
    for i, a in enumerate(choice):
        truth[a] = ((idx >> np.uint64(i)) & np.uint64(1)).astype(bool)
    for a in relevant:
        if a not in truth:
            p = gp.fact_probability.get(a)
            truth[a] = np.full(worlds, p == 1.0, dtype=bool)

    changed = True
    while changed:
        changed = False
        for head, body in rules:
            if body:
                fires = np.logical_and.reduce([truth[b] for b in body])
            else:
                fires = np.ones(worlds, dtype=bool)
            updated = truth[head] | fires
            if not np.array_equal(updated, truth[head]):
                truth[head] = updated
                changed = True

    weights = np.ones(worlds, dtype=np.float64)
    for a in choice:
        p = gp.fact_probability[a]
        weights *= np.where(truth[a], p, 1.0 - p)

    ev_mask = np.ones(worlds, dtype=bool)
    for a, pol in evidence:
        held = truth.get(a, np.zeros(worlds, dtype=bool))
        ev_mask &= held if pol else ~held
    p_e = float(weights[ev_mask].sum()) if evidence else float(weights.sum())
    if evidence and p_e == 0.0:
        raise InconsistentEvidenceError(_zero_evidence_message(evidence))
    p_qe = float(weights[ev_mask & truth.get(q, np.zeros(worlds, dtype=bool))].sum())
    result = p_qe / p_e
    return min(1.0, max(0.0, result)) if math.isfinite(result) else result
