"""Two-agent epistemic reasoning with only-knowing, and implicit learning
of epistemic queries under PAC semantics."""

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Dyn,
    Formula,
    FormulaError,
    FormulaSyntaxError,
    Implies,
    Know,
    Not,
    OnlyKnow,
    Or,
    atoms,
    depth,
    is_objective,
    parse,
    render,
)
from .pac import (
    MaskSpec,
    PacParams,
    Verdict,
    WorldDistribution,
    apply_mask,
    decide_pac,
    draw_world,
    estimate_validity,
    sample_size,
    witnessed_check,
)
from .propcore import entails, is_satisfiable, is_valid, to_clauses
from .reduction import (
    ReductionMode,
    check_dynamic_entailment,
    entails_know,
    entails_query,
    represent,
)
from .regression import query_after_observation, regress
from .scenario import (
    Observation,
    Scenario,
    ScenarioError,
    SensingEntry,
    card_game_scenario,
    load_scenario,
    parse_observations,
)
from .semantics import (
    CanonicalModel,
    World,
    brute_force_entails,
    enumerate_depth_one_structures,
    evaluate,
    satisfies,
)

__version__ = "0.1.0"

__all__ = [
    "entails",
    "is_satisfiable",
    "is_valid",
    "to_clauses",
    "query_after_observation",
    "regress",
    "FALSE",
    "TRUE",
    "And",
    "Atom",
    "Dyn",
    "Formula",
    "FormulaError",
    "FormulaSyntaxError",
    "Implies",
    "Know",
    "Not",
    "OnlyKnow",
    "Or",
    "atoms",
    "depth",
    "is_objective",
    "parse",
    "render",
    "MaskSpec",
    "PacParams",
    "Verdict",
    "WorldDistribution",
    "apply_mask",
    "decide_pac",
    "draw_world",
    "estimate_validity",
    "sample_size",
    "witnessed_check",
    "ReductionMode",
    "check_dynamic_entailment",
    "entails_know",
    "entails_query",
    "represent",
    "Observation",
    "Scenario",
    "ScenarioError",
    "SensingEntry",
    "card_game_scenario",
    "load_scenario",
    "parse_observations",
    "CanonicalModel",
    "World",
    "brute_force_entails",
    "enumerate_depth_one_structures",
    "evaluate",
    "satisfies",
]
