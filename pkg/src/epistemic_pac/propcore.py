"""Propositional satisfiability, validity and entailment.

Objective formulas are turned into clauses with a polarity-aware
definitional transformation (fresh ``_d<n>`` atoms name compound
subformulas), then decided by a backtracking search with two-watched-literal
unit propagation.  Branching follows the lexicographic order of the
vocabulary atoms, positive value first, so witnesses are reproducible.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

from .formula import (
    And,
    Atom,
    Bottom,
    Formula,
    FormulaError,
    Implies,
    Not,
    Or,
    Top,
    is_objective,
    simplify,
)
from .formula import atoms as atoms_of
from .semantics import World

AUX_PREFIX = "_d"


class NotObjectiveError(FormulaError):
    pass


@dataclass(frozen=True)
class Literal:
    atom: str
    positive: bool = True

    def __neg__(self) -> Literal:
        return Literal(self.atom, not self.positive)

    def __str__(self) -> str:
        return self.atom if self.positive else f"!{self.atom}"


@dataclass
class ClauseSet:
    """Clauses over integer variables (DIMACS convention: ``-v`` negates ``v``).

    ``names[v - 1]`` is the atom behind variable ``v``.
    """

    clauses: list[tuple[int, ...]] = field(default_factory=list)
    names: list[str] = field(default_factory=list)
    auxiliaries: frozenset[str] = frozenset()

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def literal_clauses(self) -> list[frozenset[Literal]]:
        return [
            frozenset(Literal(self.names[abs(v) - 1], v > 0) for v in clause)
            for clause in self.clauses
        ]

    def to_dimacs(self) -> str:
        lines = [f"c {i + 1} {name}" for i, name in enumerate(self.names)]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, clause)) + " 0" for clause in self.clauses)
        return "\n".join(lines) + "\n"


def _require_objective(f: Formula) -> None:
    if not is_objective(f):
        raise NotObjectiveError(f"formula is not objective: {f}")


class _Encoder:
    def __init__(self):
        self.index: dict[str, int] = {}
        self.names: list[str] = []
        self.clauses: list[tuple[int, ...]] = []
        self.aux: list[str] = []

    def var(self, name: str) -> int:
        v = self.index.get(name)
        if v is None:
            self.names.append(name)
            v = self.index[name] = len(self.names)
        return v

    def fresh(self) -> int:
        name = f"{AUX_PREFIX}{len(self.aux) + 1}"
        self.aux.append(name)
        return self.var(name)

    def flatten(self, f: Formula, kind: type) -> list[Formula]:
        out, stack = [], [f]
        while stack:
            g = stack.pop()
            if isinstance(g, kind):
                stack.append(g.right)
                stack.append(g.left)
            else:
                out.append(g)
        return out

    def encode(self, f: Formula, positive: bool) -> int:
        """Literal standing for ``f``. Only the implication direction needed at
        this polarity is emitted (Plaisted-Greenbaum)."""
        if isinstance(f, Atom):
            return self.var(f.name)
        if isinstance(f, Not):
            return -self.encode(f.body, not positive)
        if isinstance(f, Implies):
            return self._junction([Not(f.left), f.right], positive, disjunctive=True)
        if isinstance(f, Or):
            return self._junction(self.flatten(f, Or), positive, disjunctive=True)
        if isinstance(f, And):
            return self._junction(self.flatten(f, And), positive, disjunctive=False)
        raise TypeError(f"unexpected node {f!r}")

    def _junction(self, parts, positive, disjunctive):
        lits = [self.encode(p, positive) for p in parts]
        x = self.fresh()
        if disjunctive:
            if positive:
                self.clauses.append((-x, *lits))
            else:
                self.clauses.extend((x, -lit) for lit in lits)
        else:
            if positive:
                self.clauses.extend((-x, lit) for lit in lits)
            else:
                self.clauses.append((x, *(-lit for lit in lits)))
        return x

    def assert_formula(self, f: Formula) -> None:
        for part in self.flatten(f, And):
            if isinstance(part, Or):
                lits = [self.encode(p, True) for p in self.flatten(part, Or)]
                self.clauses.append(tuple(lits))
            else:
                self.clauses.append((self.encode(part, True),))


def to_clauses(f: Formula, vocabulary: Iterable[str] = ()) -> ClauseSet:
    """Equisatisfiable clause set for an objective formula, linear in its size.

    Atoms in ``vocabulary`` get variables even when ``f`` does not mention
    them, so that witnesses cover the whole vocabulary.
    """
    _require_objective(f)
    enc = _Encoder()
    for name in sorted(set(vocabulary) | atoms_of(f)):
        enc.var(name)
    g = simplify(f)
    if isinstance(g, Bottom):
        enc.clauses.append(())
    elif not isinstance(g, Top):
        enc.assert_formula(g)
    return ClauseSet(enc.clauses, enc.names, frozenset(enc.aux))


class _Search:
    """DPLL with two watched literals and chronological backtracking."""

    def __init__(self, num_vars: int, clauses: list[tuple[int, ...]]):
        self.value = [0] * (num_vars + 1)
        self.watches: dict[int, list[int]] = defaultdict(list)
        self.clauses: list[list[int]] = []
        self.trail: list[int] = []
        self.units: list[int] = []
        self.empty = False
        for clause in clauses:
            c = list(dict.fromkeys(clause))
            if any(-lit in c for lit in c):
                continue
            if not c:
                self.empty = True
            elif len(c) == 1:
                self.units.append(c[0])
            else:
                idx = len(self.clauses)
                self.clauses.append(c)
                self.watches[c[0]].append(idx)
                self.watches[c[1]].append(idx)

    def lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def assign(self, lit: int) -> bool:
        current = self.lit_value(lit)
        if current == -1:
            return False
        if current == 0:
            self.value[abs(lit)] = 1 if lit > 0 else -1
            self.trail.append(lit)
        return True

    def propagate(self, head: int) -> bool:
        trail, clauses, watches = self.trail, self.clauses, self.watches
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            watching = watches[false_lit]
            kept: list[int] = []
            for pos, ci in enumerate(watching):
                c = clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self.lit_value(c[0]) == 1:
                    kept.append(ci)
                    continue
                for k in range(2, len(c)):
                    if self.lit_value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        watches[c[1]].append(ci)
                        break
                else:
                    kept.append(ci)
                    if not self.assign(c[0]):
                        kept.extend(watching[pos + 1 :])
                        watches[false_lit] = kept
                        return False
            watches[false_lit] = kept
        return True

    def undo(self, length: int) -> None:
        for lit in self.trail[length:]:
            self.value[abs(lit)] = 0
        del self.trail[length:]

    def run(self, order: list[int]) -> list[int] | None:
        if self.empty:
            return None
        for lit in self.units:
            if not self.assign(lit):
                return None
        if not self.propagate(0):
            return None
        decisions: list[tuple[int, int, bool]] = []
        head = len(self.trail)
        while True:
            var = next((v for v in order if self.value[v] == 0), None)
            if var is None:
                return self.value
            decisions.append((len(self.trail), var, False))
            self.assign(var)
            while not self.propagate(head):
                while decisions:
                    mark, var, flipped = decisions.pop()
                    self.undo(mark)
                    if not flipped:
                        decisions.append((mark, var, True))
                        self.assign(-var)
                        head = mark
                        break
                else:
                    return None
            head = len(self.trail)


def solve(cs: ClauseSet) -> dict[str, bool] | None:
    """A satisfying assignment of every variable in ``cs``, or None."""
    non_aux = [i + 1 for i, n in enumerate(cs.names) if n not in cs.auxiliaries]
    aux = [i + 1 for i, n in enumerate(cs.names) if n in cs.auxiliaries]
    order = sorted(non_aux, key=lambda v: cs.names[v - 1]) + aux
    values = _Search(cs.num_vars, cs.clauses).run(order)
    if values is None:
        return None
    return {name: values[i + 1] == 1 for i, name in enumerate(cs.names)}


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    witness: World | None = None

    def __bool__(self) -> bool:
        return self.satisfiable


def is_satisfiable(f: Formula, vocabulary: Iterable[str] = ()) -> SatResult:
    """Decide ``f``; the witness assigns all atoms of ``f`` and ``vocabulary``."""
    vocab = frozenset(vocabulary) | atoms_of(f)
    cs = to_clauses(f, vocab)
    model = solve(cs)
    if model is None:
        return SatResult(False)
    return SatResult(True, World.from_assignment({a: model[a] for a in vocab}))


def is_valid(f: Formula) -> bool:
    _require_objective(f)
    return not is_satisfiable(Not(f))


def entails(premise: Formula, goal: Formula) -> bool:
    _require_objective(premise)
    _require_objective(goal)
    return is_valid(Implies(premise, goal))
