"""Relevant ground program extraction and Herbrand-base accounting.

``ground_relevant`` reduces a program to the ground clauses that matter for a
set of target atoms.  It combines two closures:

* a goal-directed (SLD-style) expansion with a memoized call table, starting
  from the targets, which collects every ground rule and fact instance that
  can participate in a derivation of a target and terminates on cyclic graphs;

* a forward completion step that additionally instantiates rules whose body
  atoms are all already relevant and derivable, so that ground consequences of
  the targets (e.g. a rule-defined edge fed by a target atom) count towards
  the Herbrand base even though no goal ever calls them.

The Herbrand size of the result is the number of distinct ground atoms in
facts, rule heads, rule bodies and targets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import GroundingError
from .syntax import (
    Atom,
    Clause,
    Compound,
    Equality,
    Inequality,
    Positive,
    Program,
    Term,
    Variable,
    desugar_annotated_bodies,
    is_ground_atom,
    is_ground_term,
    render_atom,
)

GroundRule = tuple[Atom, tuple[Atom, ...]]


@dataclass(frozen=True)
class GroundProgram:
    facts: tuple[tuple[float, Atom], ...]
    rules: tuple[GroundRule, ...]
    atom_index: tuple[Atom, ...]
    targets: tuple[Atom, ...]
    fact_probability: dict[Atom, float] = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if self.fact_probability is None:
            object.__setattr__(
                self, "fact_probability", {a: p for p, a in self.facts}
            )


def herbrand_size(gp: GroundProgram) -> int:
    """Number of distinct ground atoms in the relevant ground program."""
    return len(gp.atom_index)


def dump_ground(gp: GroundProgram) -> str:
    """Canonical text of a ground program: one clause per line, sorted."""
    lines = []
    for p, a in sorted(gp.facts, key=lambda x: render_atom(x[1])):
        prefix = "" if p == 1.0 else f"{p!r}::"
        lines.append(f"{prefix}{a}.")
    for head, body in sorted(
        gp.rules, key=lambda r: (render_atom(r[0]), tuple(map(render_atom, r[1])))
    ):
        lines.append(f"{head} :- {', '.join(map(str, body))}.")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# Substitutions and unification

Subst = dict[Variable, Term]


def _walk(t: Term, s: Subst) -> Term:
    while isinstance(t, Variable) and t in s:
        t = s[t]
    return t


def apply_subst(t: Term, s: Subst) -> Term:
    t = _walk(t, s)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(apply_subst(a, s) for a in t.args))
    return t


def apply_subst_atom(a: Atom, s: Subst) -> Atom:
    return Atom(a.predicate, tuple(apply_subst(t, s) for t in a.args))


def unify(a: Term, b: Term, s: Subst) -> Subst | None:
    a, b = _walk(a, s), _walk(b, s)
    if a == b:
        return s
    if isinstance(a, Variable):
        return {**s, a: b}
    if isinstance(b, Variable):
        return {**s, b: a}
    if isinstance(a, Compound) and isinstance(b, Compound):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            s = unify(x, y, s)
            if s is None:
                return None
        return s
    return None


def unify_atoms(a: Atom, b: Atom, s: Subst) -> Subst | None:
    if a.indicator != b.indicator:
        return None
    for x, y in zip(a.args, b.args):
        s = unify(x, y, s)
        if s is None:
            return None
    return s


_fresh_counter = itertools.count()


def _rename_clause(c: Clause) -> Clause:
    mapping: dict[Variable, Variable] = {}

    def ren(t: Term) -> Term:
        if isinstance(t, Variable):
            if t not in mapping:
                mapping[t] = Variable(f"_R{next(_fresh_counter)}")
            return mapping[t]
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(ren(a) for a in t.args))
        return t

    def ren_atom(a: Atom) -> Atom:
        return Atom(a.predicate, tuple(ren(t) for t in a.args))

    body = []
    for lit in c.body:
        if isinstance(lit, Positive):
            body.append(Positive(ren_atom(lit.atom)))
        elif isinstance(lit, Inequality):
            body.append(Inequality(ren(lit.left), ren(lit.right)))
        else:
            body.append(Equality(ren(lit.left), ren(lit.right)))
    return Clause(c.label, ren_atom(c.head), tuple(body))


def _canonical_call(a: Atom) -> Atom:
    """Variant key: variables renamed to a fixed sequence."""
    mapping: dict[Variable, Variable] = {}

    def ren(t: Term) -> Term:
        if isinstance(t, Variable):
            if t not in mapping:
                mapping[t] = Variable(f"_C{len(mapping)}")
            return mapping[t]
        if isinstance(t, Compound):
            return Compound(t.functor, tuple(ren(a) for a in t.args))
        return t

    return Atom(a.predicate, tuple(ren(t) for t in a.args))


# ---------------------------------------------------------------------------
# The grounder


class _Grounder:
    def __init__(self, program: Program):
        self.facts_by_pred: dict[tuple[str, int], list[Clause]] = {}
        self.rules_by_pred: dict[tuple[str, int], list[Clause]] = {}
        for c in program.clauses:
            bucket = self.facts_by_pred if c.is_fact else self.rules_by_pred
            bucket.setdefault(c.head.indicator, []).append(c)
        self.calls: set[Atom] = set()
        self.answers: dict[tuple[str, int], set[Atom]] = {}
        self.fact_instances: dict[Atom, float] = {}
        self.rule_instances: set[GroundRule] = set()

    # -- backward (goal-directed) pass

    def solve_to_fixpoint(self, goals):
        for g in goals:
            self.calls.add(_canonical_call(g))
        while True:
            before = (
                len(self.calls),
                sum(len(v) for v in self.answers.values()),
                len(self.fact_instances),
                len(self.rule_instances),
            )
            for call in list(self.calls):
                self._expand_call(call)
            after = (
                len(self.calls),
                sum(len(v) for v in self.answers.values()),
                len(self.fact_instances),
                len(self.rule_instances),
            )
            if after == before:
                break

    def _expand_call(self, call: Atom):
        key = call.indicator
        for fact in self.facts_by_pred.get(key, ()):
            fact = _rename_clause(fact)
            s = unify_atoms(fact.head, call, {})
            if s is None:
                continue
            inst = apply_subst_atom(fact.head, s)
            if not is_ground_atom(inst):
                raise GroundingError(
                    f"fact {fact.head} cannot be fully instantiated by call {call}"
                )
            prev = self.fact_instances.get(inst)
            if prev is not None and prev != fact.label:
                raise GroundingError(
                    f"conflicting probabilities {prev} and {fact.label} for fact {inst}"
                )
            self.fact_instances[inst] = fact.label
            self.answers.setdefault(key, set()).add(inst)
        for rule in self.rules_by_pred.get(key, ()):
            rule = _rename_clause(rule)
            s = unify_atoms(rule.head, call, {})
            if s is None:
                continue
            for final in self._solve_body(rule.body, s):
                self._record_rule(rule, final)

    def _solve_body(self, body, s: Subst):
        substs = [s]
        for lit in body:
            new: list[Subst] = []
            if isinstance(lit, Positive):
                for s1 in substs:
                    goal = apply_subst_atom(lit.atom, s1)
                    self.calls.add(_canonical_call(goal))
                    for ans in self.answers.get(goal.indicator, ()):
                        s2 = unify_atoms(goal, ans, s1)
                        if s2 is not None:
                            new.append(s2)
            elif isinstance(lit, Inequality):
                for s1 in substs:
                    left = apply_subst(lit.left, s1)
                    right = apply_subst(lit.right, s1)
                    if not (is_ground_term(left) and is_ground_term(right)):
                        raise GroundingError(
                            f"inequality {left} \\= {right} not ground at evaluation time"
                        )
                    if left != right:
                        new.append(s1)
            else:  # Equality: binds an unbound side, or tests ground terms
                for s1 in substs:
                    s2 = unify(lit.left, lit.right, s1)
                    if s2 is not None:
                        new.append(s2)
            substs = new
            if not substs:
                break
        return substs

    def _record_rule(self, rule: Clause, s: Subst):
        head = apply_subst_atom(rule.head, s)
        if not is_ground_atom(head):
            raise GroundingError(
                f"unbound variable remains in head of clause "
                f"'{rule.head} :- ...' after body instantiation"
            )
        body_atoms = []
        for lit in rule.body:
            if isinstance(lit, Positive):
                inst = apply_subst_atom(lit.atom, s)
                if not is_ground_atom(inst):
                    raise GroundingError(
                        f"unbound variable remains in body atom {inst} of clause "
                        f"'{rule.head} :- ...'"
                    )
                body_atoms.append(inst)
        self.rule_instances.add((head, tuple(body_atoms)))
        self.answers.setdefault(head.indicator, set()).add(head)

    # -- forward completion pass

    def forward_complete(self, relevant: set[Atom], derivable: set[Atom]) -> set[Atom]:
        """Instantiate rules whose whole body already lies in the relevant,
        derivable set; returns the newly added head atoms."""
        pool = relevant & derivable
        by_pred: dict[tuple[str, int], list[Atom]] = {}
        for a in pool:
            by_pred.setdefault(a.indicator, []).append(a)
        added: set[Atom] = set()
        for rules in self.rules_by_pred.values():
            for rule in rules:
                rule_r = _rename_clause(rule)
                for s in self._match_body_in_pool(rule_r.body, by_pred):
                    head = apply_subst_atom(rule_r.head, s)
                    if not is_ground_atom(head):
                        continue
                    body_atoms = tuple(
                        apply_subst_atom(l.atom, s)
                        for l in rule_r.body
                        if isinstance(l, Positive)
                    )
                    inst = (head, body_atoms)
                    if inst not in self.rule_instances:
                        self.rule_instances.add(inst)
                        added.add(head)
        return added

    def _match_body_in_pool(self, body, by_pred):
        substs: list[Subst] = [{}]
        for lit in body:
            new: list[Subst] = []
            if isinstance(lit, Positive):
                for s1 in substs:
                    goal = apply_subst_atom(lit.atom, s1)
                    for cand in by_pred.get(goal.indicator, ()):
                        s2 = unify_atoms(goal, cand, s1)
                        if s2 is not None:
                            new.append(s2)
            elif isinstance(lit, Inequality):
                for s1 in substs:
                    left = apply_subst(lit.left, s1)
                    right = apply_subst(lit.right, s1)
                    if is_ground_term(left) and is_ground_term(right) and left != right:
                        new.append(s1)
            else:
                for s1 in substs:
                    s2 = unify(lit.left, lit.right, s1)
                    if s2 is not None:
                        new.append(s2)
            substs = new
            if not substs:
                return []
        return substs


def _relevance_closure(grounder: _Grounder, targets: tuple[Atom, ...]):
    """Backward closure from the targets over recorded instances, then the
    forward/backward loop that also includes supported consequences."""
    while True:
        facts = grounder.fact_instances
        rules_by_head: dict[Atom, list[GroundRule]] = {}
        for head, body in grounder.rule_instances:
            rules_by_head.setdefault(head, []).append((head, body))

        relevant: set[Atom] = set(targets)
        kept_rules: set[GroundRule] = set()
        stack = list(targets)
        while stack:
            atom = stack.pop()
            for rule in rules_by_head.get(atom, ()):
                if rule in kept_rules:
                    continue
                kept_rules.add(rule)
                for b in rule[1]:
                    if b not in relevant:
                        relevant.add(b)
                        stack.append(b)

        derivable = set(facts) | set(rules_by_head)
        new_heads = grounder.forward_complete(relevant, derivable)
        new_heads -= relevant
        if not new_heads:
            return relevant, kept_rules
        # New heads may have further derivations of their own; ground them
        # like targets and redo the closure.
        grounder.solve_to_fixpoint(sorted(new_heads, key=render_atom))
        targets = targets + tuple(sorted(new_heads, key=render_atom))


def ground_relevant(program: Program, targets) -> GroundProgram:
    """Ground program restricted to what is relevant for the target atoms."""
    targets = tuple(dict.fromkeys(targets))
    for t in targets:
        if not is_ground_atom(t):
            raise GroundingError(f"target atom {t} is not ground")
    program = desugar_annotated_bodies(program)

    grounder = _Grounder(program)
    grounder.solve_to_fixpoint(targets)
    relevant, kept_rules = _relevance_closure(grounder, targets)

    # Forward-completed heads are relevant as well; recompute the backward
    # sweep already folded them in via _relevance_closure's loop.
    facts = tuple(
        sorted(
            ((p, a) for a, p in grounder.fact_instances.items() if a in relevant),
            key=lambda x: render_atom(x[1]),
        )
    )
    rules = tuple(
        sorted(
            kept_rules,
            key=lambda r: (render_atom(r[0]), tuple(map(render_atom, r[1]))),
        )
    )
    atoms = set(targets)
    atoms.update(a for _, a in facts)
    for head, body in rules:
        atoms.add(head)
        atoms.update(body)
    atom_index = tuple(sorted(atoms, key=render_atom))
    return GroundProgram(facts, rules, atom_index, targets)
