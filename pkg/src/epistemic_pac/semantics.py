"""Brute-force possible-worlds oracle.

Worlds are enumerated explicitly.  Only-knowing ``O_A(phi & O_B psi)``
pins the epistemic state to the canonical model, whose world sets are
exactly the models of ``phi`` (root agent) and ``psi`` (other agent), so
knowledge is evaluated by quantifying over those sets.

After an observation ``z`` an agent only considers worlds where its own
reading ``obs_i(z)`` is true, and the observation stays in force for the
nested evaluation.  A world where the reading is false has no compatible
alternatives, which makes every knowledge claim there vacuously true.

Nothing here calls the propositional solver; the oracle is meant to stay
independent of the compilation pipeline it checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping

from .formula import (
    And,
    Atom,
    Bottom,
    Dyn,
    Formula,
    FormulaError,
    Implies,
    Know,
    Not,
    OnlyKnow,
    Or,
    Top,
    is_objective,
)

if TYPE_CHECKING:
    from .scenario import Scenario

MAX_ORACLE_ATOMS = 12
MAX_STRUCTURE_ATOMS = 2


@dataclass(frozen=True)
class World:
    """A total truth assignment over ``vocabulary``."""

    true_atoms: frozenset[str]
    vocabulary: frozenset[str]

    @classmethod
    def from_assignment(cls, assignment: Mapping[str, bool | int]) -> World:
        return cls(
            frozenset(a for a, v in assignment.items() if v), frozenset(assignment)
        )

    def __getitem__(self, atom: str) -> int:
        if atom not in self.vocabulary:
            raise KeyError(atom)
        return int(atom in self.true_atoms)

    def assignment(self) -> dict[str, int]:
        return {a: self[a] for a in sorted(self.vocabulary)}

    def __repr__(self) -> str:
        shown = ",".join(sorted(self.true_atoms))
        return f"World({{{shown}}})"


def all_worlds(vocabulary: Iterable[str]) -> Iterator[World]:
    """Every world over ``vocabulary``, in binary-counter order over the
    sorted atoms."""
    names = sorted(set(vocabulary))
    vocab = frozenset(names)
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield World(frozenset(n for n, b in zip(names, bits) if b), vocab)


def evaluate(w: World, f: Formula) -> bool:
    """Truth of an objective formula at ``w``."""
    if isinstance(f, Atom):
        return w[f.name] == 1
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(w, f.body)
    if isinstance(f, And):
        return evaluate(w, f.left) and evaluate(w, f.right)
    if isinstance(f, Or):
        return evaluate(w, f.left) or evaluate(w, f.right)
    if isinstance(f, Implies):
        return (not evaluate(w, f.left)) or evaluate(w, f.right)
    raise FormulaError(f"evaluate needs an objective formula, got {f}")


def compatible(
    w: World, w2: World, z: str | None, agent: str, s: Scenario
) -> bool:
    """Whether ``agent`` cannot tell ``w`` and ``w2`` apart after ``z``.

    With no observation all worlds are compatible; otherwise the agent's
    reading must be true in both worlds.
    """
    if z is None:
        return True
    reading = s.sense_of(z, agent)
    return evaluate(w, reading) and evaluate(w2, reading)


@dataclass
class CanonicalModel:
    scenario: Scenario
    a_worlds: tuple[World, ...]
    b_worlds: tuple[World, ...]
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def of(cls, s: Scenario) -> CanonicalModel:
        if len(s.atoms) > MAX_ORACLE_ATOMS:
            raise ValueError(
                f"oracle enumerates 2^|P| worlds; |P|={len(s.atoms)} exceeds "
                f"{MAX_ORACLE_ATOMS}"
            )
        worlds = list(all_worlds(s.atoms))
        return cls(
            s,
            tuple(w for w in worlds if evaluate(w, s.kb_root)),
            tuple(w for w in worlds if evaluate(w, s.kb_nested)),
        )

    def worlds_of(self, agent: str) -> tuple[World, ...]:
        if agent == self.scenario.root:
            return self.a_worlds
        if agent == self.scenario.other:
            return self.b_worlds
        raise FormulaError(f"unknown agent {agent!r}")


def satisfies(m: CanonicalModel, w: World, z: str | None, f: Formula) -> bool:
    """``m, w, z |= f`` for formulas without only-knowing."""
    if isinstance(f, (Atom, Top, Bottom)):
        return evaluate(w, f)
    if isinstance(f, Not):
        return not satisfies(m, w, z, f.body)
    if isinstance(f, And):
        return satisfies(m, w, z, f.left) and satisfies(m, w, z, f.right)
    if isinstance(f, Or):
        return satisfies(m, w, z, f.left) or satisfies(m, w, z, f.right)
    if isinstance(f, Implies):
        return (not satisfies(m, w, z, f.left)) or satisfies(m, w, z, f.right)
    if isinstance(f, Dyn):
        if z is not None:
            raise FormulaError("dynamic operators may not nest")
        if f.action not in m.scenario.actions:
            raise FormulaError(f"unknown action {f.action!r}")
        return satisfies(m, w, f.action, f.body)
    if isinstance(f, Know):
        # with no observation the verdict does not depend on w
        key = (f, z, w if z is not None else None)
        hit = m._memo.get(key)
        if hit is None:
            hit = all(
                satisfies(m, w2, z, f.body)
                for w2 in m.worlds_of(f.agent)
                if compatible(w, w2, z, f.agent, m.scenario)
            )
            m._memo[key] = hit
        return hit
    if isinstance(f, OnlyKnow):
        raise FormulaError("queries may not mention only-knowing")
    raise TypeError(f"not a formula: {f!r}")


def brute_force_entails(s: Scenario, query: Formula) -> bool:
    """``Gamma & O_A(phi & O_B psi) |= query`` by enumerating every world
    that satisfies the real-world facts.  Worlds need not satisfy ``phi``."""
    m = CanonicalModel.of(s)
    return all(
        satisfies(m, w, None, query)
        for w in all_worlds(s.atoms)
        if evaluate(w, s.real_world)
    )


@dataclass(frozen=True)
class StructureReport:
    """Outcome of enumerating every depth-1 structure over a vocabulary."""

    vocabulary: frozenset[str]
    kb: Formula
    candidates: int
    satisfying: tuple[frozenset[World], ...]
    models: frozenset[World]

    @property
    def unique(self) -> bool:
        return len(self.satisfying) == 1

    @property
    def canonical(self) -> bool:
        return self.unique and self.satisfying[0] == self.models


def _only_knows_depth_one(e: frozenset[World], worlds, kb: Formula) -> bool:
    # pairs are (w', {}): membership must coincide with truth of kb at w'
    return all((w in e) == evaluate(w, kb) for w in worlds)


def depth_one_structures(kb: Formula, vocabulary: Iterable[str]) -> StructureReport:
    """Enumerate all ``2^(2^|P|)`` depth-1 structures and keep those that
    only-know ``kb``."""
    if not is_objective(kb):
        raise FormulaError("only-knowing base must be objective")
    vocab = frozenset(vocabulary)
    if len(vocab) > MAX_STRUCTURE_ATOMS:
        raise ValueError(
            f"structure enumeration is doubly exponential; |P|={len(vocab)} "
            f"exceeds {MAX_STRUCTURE_ATOMS}"
        )
    worlds = list(all_worlds(vocab))
    satisfying = []
    count = 0
    for r in range(len(worlds) + 1):
        for chosen in itertools.combinations(worlds, r):
            count += 1
            e = frozenset(chosen)
            if _only_knows_depth_one(e, worlds, kb):
                satisfying.append(e)
    models = frozenset(w for w in worlds if evaluate(w, kb))
    return StructureReport(vocab, kb, count, tuple(satisfying), models)


def enumerate_depth_one_structures(s: Scenario) -> StructureReport:
    return depth_one_structures(s.kb_root, s.atoms)
