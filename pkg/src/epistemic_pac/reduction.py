"""Compilation of knowledge queries against ``O_A(phi & O_B psi)`` into
propositional formulas.

Knowledge subformulas are replaced inside-out.  In the default
``RES`` mode, ``K_i b`` becomes ``true`` or ``false`` depending on whether
agent ``i``'s base entails the already reduced ``b``.  ``IMPLICATION``
mode writes ``kb_i -> b`` instead; it only agrees with the semantics on
queries where knowledge occurs positively and not under disjunction.

Every ``K`` of the root agent is resolved against ``phi`` and every ``K``
of the other agent against ``psi``, whatever the nesting.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

from . import propcore
from .formula import (
    BINARY,
    FALSE,
    TRUE,
    Dyn,
    Formula,
    FormulaError,
    Implies,
    Know,
    Not,
    OnlyKnow,
    is_objective,
)
from .regression import query_after_observation, regress
from .scenario import Scenario

log = logging.getLogger(__name__)


class ReductionMode(enum.Enum):
    RES = "res-substitution"
    IMPLICATION = "implication-form"

    @classmethod
    def parse(cls, text: str | ReductionMode) -> ReductionMode:
        if isinstance(text, cls):
            return text
        aliases = {"res": cls.RES, "implication": cls.IMPLICATION}
        try:
            return aliases.get(text) or cls(text)
        except ValueError:
            raise ValueError(f"unknown reduction mode {text!r}") from None


class ReductionError(FormulaError):
    pass


@dataclass(frozen=True)
class ReducedQuery:
    source: Formula
    objective_result: Formula
    mode: ReductionMode


def represent(
    alpha: Formula, s: Scenario, mode: ReductionMode = ReductionMode.RES
) -> ReducedQuery:
    """The objective formula that ``alpha`` amounts to under ``s``'s bases."""
    memo: dict[Formula, Formula] = {}

    def rep(f: Formula) -> Formula:
        if is_objective(f):
            return f
        hit = memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Not):
            out = Not(rep(f.body))
        elif isinstance(f, BINARY):
            out = type(f)(rep(f.left), rep(f.right))
        elif isinstance(f, Know):
            kb = s.kb_of(f.agent)
            body = rep(f.body)
            if mode is ReductionMode.RES:
                out = TRUE if propcore.entails(kb, body) else FALSE
            else:
                out = Implies(kb, body)
        elif isinstance(f, OnlyKnow):
            raise ReductionError("queries may not mention only-knowing")
        elif isinstance(f, Dyn):
            raise ReductionError("regress observations before reducing")
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[f] = out
        return out

    result = rep(alpha)
    assert is_objective(result)
    return ReducedQuery(alpha, result, mode)


def entails_know(
    s: Scenario, alpha: Formula, mode: ReductionMode = ReductionMode.RES
) -> bool:
    """Decide ``O_A(phi & O_B psi) |= K_A alpha``."""
    return propcore.entails(s.kb_root, represent(alpha, s, mode).objective_result)


def check_dynamic_entailment(
    s: Scenario,
    action: str,
    alpha: Formula,
    mode: ReductionMode = ReductionMode.RES,
) -> bool:
    """Decide ``Gamma & O_A(phi & O_B psi) |= [action] K_A alpha``."""
    world_part, epistemic_part = query_after_observation(s, action, alpha)
    if not propcore.entails(s.real_world, world_part):
        return False
    return entails_know(s, epistemic_part.body, mode)


def entails_query(
    s: Scenario, query: Formula, mode: ReductionMode = ReductionMode.RES
) -> bool:
    """Decide ``Gamma & O_A(phi & O_B psi) |= query`` for any query without
    only-knowing: regress, reduce, then check ``Gamma -> ||query||``."""
    reduced = represent(regress(query, s), s, mode).objective_result
    return propcore.is_valid(Implies(s.real_world, reduced))


def compare_modes(s: Scenario, alpha: Formula) -> tuple[bool, bool]:
    """``entails_know`` in both modes; disagreements are logged."""
    res = entails_know(s, alpha, ReductionMode.RES)
    imp = entails_know(s, alpha, ReductionMode.IMPLICATION)
    if res != imp:
        log.info("reduction modes diverge on %s: res=%s implication=%s", alpha, res, imp)
    return res, imp
