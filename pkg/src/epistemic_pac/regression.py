"""Elimination of the observation operator ``[a]``.

``[a]`` commutes with the truth-functional connectives and vanishes in
front of objective formulas.  In front of ``K_i b`` it becomes

* ``obs_i(a) & K_i(obs_i(a) -> [a]b)`` when evaluated in the real world,
  where every reading produced by ``a`` is true, and
* ``obs_i(a) -> K_i(obs_i(a) -> [a]b)`` inside another agent's knowledge,
  where the imagined world may not produce the reading at all.

Both forms agree wherever the reading holds.
"""

from __future__ import annotations

from .formula import (
    BINARY,
    And,
    Dyn,
    Formula,
    FormulaError,
    Implies,
    Know,
    Not,
    OnlyKnow,
    is_objective,
    mentions,
)
from .scenario import Scenario, ScenarioError


class RegressionError(FormulaError):
    pass


def _push(action: str, f: Formula, s: Scenario, modal: bool) -> Formula:
    """Regress ``[action] f``."""
    if is_objective(f):
        return f
    if isinstance(f, Not):
        return Not(_push(action, f.body, s, modal))
    if isinstance(f, BINARY):
        return type(f)(_push(action, f.left, s, modal), _push(action, f.right, s, modal))
    if isinstance(f, Know):
        reading = s.sense_of(action, f.agent)
        inner = Know(f.agent, Implies(reading, _push(action, f.body, s, True)))
        return Implies(reading, inner) if modal else And(reading, inner)
    if isinstance(f, OnlyKnow):
        raise RegressionError("only-knowing may not occur under an observation")
    if isinstance(f, Dyn):
        raise RegressionError("observations may not nest")
    raise TypeError(f"not a formula: {f!r}")


def _regress(f: Formula, s: Scenario, modal: bool) -> Formula:
    if isinstance(f, Dyn):
        if f.action not in s.actions:
            raise RegressionError(f"undeclared action {f.action!r}")
        return _push(f.action, f.body, s, modal)
    if is_objective(f):
        return f
    if isinstance(f, Not):
        return Not(_regress(f.body, s, modal))
    if isinstance(f, BINARY):
        return type(f)(_regress(f.left, s, modal), _regress(f.right, s, modal))
    if isinstance(f, (Know, OnlyKnow)):
        return type(f)(f.agent, _regress(f.body, s, True))
    raise TypeError(f"not a formula: {f!r}")


def regress(f: Formula, s: Scenario, *, under_modality: bool = False) -> Formula:
    """Rewrite ``f`` into an equivalent formula without ``[.]``.

    ``f`` is read at the real world unless ``under_modality`` is set.
    """
    try:
        return _regress(f, s, under_modality)
    except ScenarioError as exc:
        raise RegressionError(str(exc)) from None


def query_after_observation(
    s: Scenario, action: str, alpha: Formula
) -> tuple[Formula, Formula]:
    """Split ``[action] K_root alpha`` into its world part ``obs_root(action)``
    and epistemic part ``K_root(obs_root(action) -> [action] alpha)``, both
    regressed."""
    if mentions(alpha, OnlyKnow, Dyn):
        raise RegressionError("query may only use knowledge modalities")
    if action not in s.actions:
        raise RegressionError(f"undeclared action {action!r}")
    reading = s.sense_of(action, s.root)
    body = _push(action, alpha, s, True)
    return reading, Know(s.root, Implies(reading, body))
