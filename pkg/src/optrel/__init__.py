"""Exact inference for a probabilistic logic programming subset, plus
relevance-theoretic scoring and selection of interpretive hypotheses."""

from .errors import (
    GroundingError,
    InconsistentEvidenceError,
    NoInterpretationError,
    OptrelError,
    PlpSyntaxError,
    WorldCapExceededError,
)
from .evaluator import (
    HypothesisReport,
    InterpretiveHypothesis,
    ReportRow,
    SelectionResult,
    evaluate_hypothesis,
    kl_div,
    load_priors,
    select_interpretation,
)
from .grounding import GroundProgram, dump_ground, ground_relevant, herbrand_size
from .inference import (
    InferenceResult,
    conditional,
    enumerate_oracle,
    joint_probability,
    marginal,
    query_results,
)
from .syntax import (
    AnnotatedClause,
    Atom,
    Clause,
    Compound,
    Constant,
    Program,
    Variable,
    desugar_annotated_bodies,
    parse_ground_atom,
    parse_program,
    render_atom,
    render_program,
)

__all__ = [
    "AnnotatedClause",
    "Atom",
    "Clause",
    "Compound",
    "Constant",
    "GroundProgram",
    "GroundingError",
    "HypothesisReport",
    "InconsistentEvidenceError",
    "InferenceResult",
    "InterpretiveHypothesis",
    "NoInterpretationError",
    "OptrelError",
    "PlpSyntaxError",
    "Program",
    "ReportRow",
    "SelectionResult",
    "Variable",
    "WorldCapExceededError",
    "conditional",
    "desugar_annotated_bodies",
    "dump_ground",
    "enumerate_oracle",
    "evaluate_hypothesis",
    "ground_relevant",
    "herbrand_size",
    "joint_probability",
    "kl_div",
    "load_priors",
    "marginal",
    "parse_ground_atom",
    "parse_program",
    "query_results",
    "render_atom",
    "render_program",
    "select_interpretation",
]
