"""Syntax of the probabilistic logic programming subset.

Terms, atoms, clauses and directives; a hand-rolled parser for the source
format; the desugaring of annotated disjunctive rule bodies; and a canonical
pretty printer such that ``parse(render(p))`` is structurally equal to ``p``.

Supported source format, clause by clause (each terminated by ``.``):

    % comment to end of line
    0.9::edge(coffee, tirednessBlockingDrink).      probabilistic fact
    edge(partyDrink, beverage).                     fact (label 1.0)
    path(X,Y) :- edge(X,Z), Y \\= Z, path(Z,Y).      rule
    head(X) :- 0.9::g1(X); 0.7::g2(X).              annotated disjunctive body
    query(wantsNotDrink(mary,coffee)).              directive
    evidence(say(mary,sentence(idontDrinkED))).     directive

Builtins in rule bodies are term inequality ``\\=`` and unification ``=``
(the latter only in the binding form ``Var = ground-term`` or as a ground
test).  Variables start with an uppercase letter or underscore.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import PlpSyntaxError


# ---------------------------------------------------------------------------
# Terms and atoms


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple["Term", ...]

    def __post_init__(self):
        if len(self.args) < 1:
            raise ValueError("compound term needs at least one argument")

    def __str__(self):
        return f"{self.functor}({','.join(map(str, self.args))})"


Term = Union[Constant, Variable, Compound]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"

    @property
    def arity(self):
        return len(self.args)

    @property
    def indicator(self):
        return (self.predicate, len(self.args))


def term_variables(t: Term) -> Iterator[Variable]:
    if isinstance(t, Variable):
        yield t
    elif isinstance(t, Compound):
        for a in t.args:
            yield from term_variables(a)


def atom_variables(a: Atom) -> Iterator[Variable]:
    for t in a.args:
        yield from term_variables(t)


def is_ground_term(t: Term) -> bool:
    if isinstance(t, Variable):
        return False
    if isinstance(t, Compound):
        return all(is_ground_term(a) for a in t.args)
    return True


def is_ground_atom(a: Atom) -> bool:
    return all(is_ground_term(t) for t in a.args)


# ---------------------------------------------------------------------------
# Body literals, clauses, directives


@dataclass(frozen=True)
class Positive:
    atom: Atom

    def __str__(self):
        return str(self.atom)


@dataclass(frozen=True)
class Inequality:
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left} \\= {self.right}"


@dataclass(frozen=True)
class Equality:
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left} = {self.right}"


BodyLiteral = Union[Positive, Inequality, Equality]


@dataclass(frozen=True)
class Clause:
    """``label::head :- body.``; a fact when the body is empty."""

    label: float
    head: Atom
    body: tuple[BodyLiteral, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.label <= 1.0:
            raise ValueError(f"probability label {self.label} outside [0,1]")

    @property
    def is_fact(self):
        return not self.body


@dataclass(frozen=True)
class AnnotatedClause:
    """A rule whose body is a ``;``-disjunction of ``p::goals`` alternatives.

    Nonstandard surface form; eliminated by :func:`desugar_annotated_bodies`.
    """

    head: Atom
    alternatives: tuple[tuple[float, tuple[BodyLiteral, ...]], ...]

    def __post_init__(self):
        for p, _ in self.alternatives:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability label {p} outside [0,1]")


@dataclass(frozen=True)
class Query:
    atom: Atom


@dataclass(frozen=True)
class Evidence:
    atom: Atom
    polarity: bool = True


Directive = Union[Query, Evidence]


@dataclass(frozen=True)
class Program:
    clauses: tuple[Union[Clause, AnnotatedClause], ...]
    directives: tuple[Directive, ...]
    source_name: str = field(default="<string>", compare=False)

    @property
    def queries(self) -> tuple[Atom, ...]:
        return tuple(d.atom for d in self.directives if isinstance(d, Query))

    @property
    def evidence(self) -> tuple[tuple[Atom, bool], ...]:
        return tuple(
            (d.atom, d.polarity) for d in self.directives if isinstance(d, Evidence)
        )


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+|%[^\n]*)
    | (?P<number>\d+\.\d+|\d+)
    | (?P<probsep>::)
    | (?P<neck>:-)
    | (?P<neq>\\=)
    | (?P<eq>=)
    | (?P<name>[a-z][A-Za-z0-9_]*)
    | (?P<var>[A-Z_][A-Za-z0-9_]*)
    | (?P<punct>[().,;])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(source: str, source_name: str) -> list[_Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise PlpSyntaxError(
                f"unexpected character {source[pos]!r}",
                line=line,
                column=pos - line_start + 1,
                source_name=source_name,
            )
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            tokens.append(_Token(kind, text, line, pos - line_start + 1))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# Parser


class _Parser:
    def __init__(self, tokens: list[_Token], source_name: str):
        self.tokens = tokens
        self.i = 0
        self.source_name = source_name

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message, tok=None):
        tok = tok or self.tok
        raise PlpSyntaxError(
            message, line=tok.line, column=tok.column, source_name=self.source_name
        )

    def accept(self, kind, text=None):
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind, what):
        t = self.accept(kind)
        if t is None:
            self.error(f"expected {what}, found {self.tok.text!r}")
        return t

    def parse_program(self) -> Program:
        clauses: list[Union[Clause, AnnotatedClause]] = []
        directives: list[Directive] = []
        while self.tok.kind != "eof":
            item = self.parse_item()
            if isinstance(item, (Query, Evidence)):
                directives.append(item)
            else:
                clauses.append(item)
        return Program(tuple(clauses), tuple(directives), self.source_name)

    def parse_item(self):
        label = None
        label_tok = self.tok
        if self.tok.kind == "number":
            label_tok = self.expect("number", "probability")
            self.expect("probsep", "'::'")
            label = float(label_tok.text)
            if not 0.0 <= label <= 1.0:
                self.error(f"probability {label_tok.text} outside [0,1]", label_tok)
        head_tok = self.tok
        head = self.parse_atom()
        if self.accept("punct", "."):
            if label is None and head.predicate in ("query", "evidence"):
                return self.make_directive(head, head_tok)
            return Clause(1.0 if label is None else label, head)
        self.expect("neck", "':-' or '.'")
        alternatives = [self.parse_alternative()]
        while self.accept("punct", ";"):
            alternatives.append(self.parse_alternative())
        self.expect("punct", "'.'")
        if len(alternatives) == 1 and alternatives[0][0] is None:
            body = alternatives[0][1]
            return Clause(1.0 if label is None else label, head, body)
        if label is not None:
            self.error("a clause label and an annotated body cannot be combined", label_tok)
        normalized = tuple(
            (1.0 if p is None else p, body) for p, body in alternatives
        )
        return AnnotatedClause(head, normalized)

    def parse_alternative(self):
        prob = None
        if self.tok.kind == "number" and self.tokens[self.i + 1].kind == "probsep":
            t = self.expect("number", "probability")
            self.expect("probsep", "'::'")
            prob = float(t.text)
            if not 0.0 <= prob <= 1.0:
                self.error(f"probability {t.text} outside [0,1]", t)
        body = [self.parse_body_literal()]
        while self.accept("punct", ","):
            body.append(self.parse_body_literal())
        return (prob, tuple(body))

    def parse_body_literal(self) -> BodyLiteral:
        left = self.parse_term()
        if self.accept("neq"):
            return Inequality(left, self.parse_term())
        if self.accept("eq"):
            return Equality(left, self.parse_term())
        if isinstance(left, Compound):
            return Positive(Atom(left.functor, left.args))
        if isinstance(left, Constant):
            return Positive(Atom(left.name))
        self.error(f"a variable {left} is not a goal")

    def parse_atom(self) -> Atom:
        t = self.expect("name", "predicate name")
        if self.accept("punct", "("):
            args = [self.parse_term()]
            while self.accept("punct", ","):
                args.append(self.parse_term())
            self.expect("punct", "')'")
            return Atom(t.text, tuple(args))
        return Atom(t.text)

    def parse_term(self) -> Term:
        t = self.tok
        if self.accept("var"):
            return Variable(t.text)
        if self.accept("number"):
            return Constant(t.text)
        if self.accept("name"):
            if self.accept("punct", "("):
                args = [self.parse_term()]
                while self.accept("punct", ","):
                    args.append(self.parse_term())
                self.expect("punct", "')'")
                return Compound(t.text, tuple(args))
            return Constant(t.text)
        self.error(f"expected a term, found {t.text!r}")

    def make_directive(self, head: Atom, tok: _Token) -> Directive:
        if head.predicate == "query":
            if head.arity != 1 or not isinstance(head.args[0], (Compound, Constant)):
                self.error("query/1 takes one atom argument", tok)
            atom = _term_to_atom(head.args[0])
            if not is_ground_atom(atom):
                self.error(f"query atom {atom} is not ground", tok)
            return Query(atom)
        if head.arity not in (1, 2):
            self.error("evidence takes one atom and an optional polarity", tok)
        atom = _term_to_atom(head.args[0])
        if not is_ground_atom(atom):
            self.error(f"evidence atom {atom} is not ground", tok)
        polarity = True
        if head.arity == 2:
            flag = head.args[1]
            if not isinstance(flag, Constant) or flag.name not in ("true", "false"):
                self.error("evidence polarity must be true or false", tok)
            polarity = flag.name == "true"
        return Evidence(atom, polarity)


def _term_to_atom(t: Term) -> Atom:
    if isinstance(t, Compound):
        return Atom(t.functor, t.args)
    if isinstance(t, Constant):
        return Atom(t.name)
    raise ValueError(f"cannot interpret {t} as an atom")


def parse_program(source: str, source_name: str = "<string>") -> Program:
    return _Parser(_tokenize(source, source_name), source_name).parse_program()


def parse_ground_atom(text: str, what: str = "atom") -> Atom:
    """Parse a single ground atom, e.g. a priors-file key or a CLI argument."""
    parser = _Parser(_tokenize(text, f"<{what}>"), f"<{what}>")
    term = parser.parse_term()
    if parser.tok.kind != "eof":
        parser.error(f"trailing input after {what}")
    atom = _term_to_atom(term)
    if not is_ground_atom(atom):
        raise PlpSyntaxError(f"{what} {atom} is not ground", source_name=f"<{what}>")
    return atom


# ---------------------------------------------------------------------------
# Desugaring


def desugar_annotated_bodies(p: Program) -> Program:
    """Replace each annotated disjunctive body by plain clauses.

    Every alternative ``p_i::goals_i`` of a clause ``h :- alt_1; ...; alt_n.``
    becomes a clause ``h :- goals_i, aux_i(vars(h)).`` together with a fresh
    probabilistic fact ``p_i::aux_i(vars(h)).``, so each alternative fires
    independently per head grounding.  Alternatives with weight 1 need no
    auxiliary fact.  A labelled rule ``p::h :- goals.`` is the one-alternative
    case and desugars the same way.  Programs without either form are
    returned unchanged.
    """
    if not any(
        isinstance(c, AnnotatedClause) or (c.body and c.label < 1.0)
        for c in p.clauses
    ):
        return p
    used = {c.head.predicate for c in p.clauses if isinstance(c, Clause)}
    used.update(
        lit.atom.predicate
        for c in p.clauses
        if isinstance(c, Clause)
        for lit in c.body
        if isinstance(lit, Positive)
    )
    out: list[Clause] = []
    for clause in p.clauses:
        if isinstance(clause, Clause):
            if not clause.body or clause.label == 1.0:
                out.append(clause)
                continue
            clause = AnnotatedClause(clause.head, ((clause.label, clause.body),))
        head_vars = tuple(dict.fromkeys(atom_variables(clause.head)))
        for i, (prob, body) in enumerate(clause.alternatives, start=1):
            if prob == 1.0:
                out.append(Clause(1.0, clause.head, body))
                continue
            aux_name = f"{clause.head.predicate}_alt{i}"
            while aux_name in used:
                aux_name += "_"
            used.add(aux_name)
            aux = Atom(aux_name, head_vars)
            out.append(Clause(1.0, clause.head, body + (Positive(aux),)))
            out.append(Clause(prob, aux))
    return Program(tuple(out), p.directives, p.source_name)


# ---------------------------------------------------------------------------
# Rendering


def render_probability(p: float) -> str:
    """Shortest decimal that round-trips to the same float."""
    return repr(p)


def render_atom(a: Atom) -> str:
    return str(a)


def _render_body(body: tuple[BodyLiteral, ...]) -> str:
    return ", ".join(str(lit) for lit in body)


def render_program(p: Program) -> str:
    lines = []
    for clause in p.clauses:
        if isinstance(clause, AnnotatedClause):
            alts = "; ".join(
                (f"{render_probability(prob)}::" if prob != 1.0 else "")
                + _render_body(body)
                for prob, body in clause.alternatives
            )
            lines.append(f"{clause.head} :- {alts}.")
        elif clause.is_fact:
            prefix = "" if clause.label == 1.0 else f"{render_probability(clause.label)}::"
            lines.append(f"{prefix}{clause.head}.")
        else:
            prefix = "" if clause.label == 1.0 else f"{render_probability(clause.label)}::"
            lines.append(f"{prefix}{clause.head} :- {_render_body(clause.body)}.")
    for d in p.directives:
        if isinstance(d, Query):
            lines.append(f"query({d.atom}).")
        elif d.polarity:
            lines.append(f"evidence({d.atom}).")
        else:
            lines.append(f"evidence({d.atom}, false).")
    return "\n".join(lines) + ("\n" if lines else "")
