"""Scenarios: vocabulary, nested only-knowing knowledge base, real-world
facts and per-agent sensing, plus the scenario and observation file formats.

A scenario stands for the premise ``Gamma & O_A(phi & O_B psi)``.

Scenario files are line oriented with ``#`` comments::

    [agents]
    root = A
    other = B

    [atoms]
    p q r

    [kb_root]
    p | q

    [kb_nested]
    true

    [real_world]
    p

    [action look]
    obs_A = p
    obs_B = true

Observation files hold one observation per line, either an action name or
``raw: <conjunction of literals>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Iterable, Mapping

from . import propcore
from .formula import (
    TRUE,
    Atom,
    Formula,
    FormulaError,
    Iff,
    Not,
    atoms,
    conjoin,
    disjoin,
    is_literal_conjunction,
    is_objective,
    parse,
    render,
)


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source is not None:
            where = f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.source = source


@dataclass(frozen=True)
class SensingEntry:
    """What each agent reads when an action happens; missing agents read
    ``true``."""

    per_agent: Mapping[str, Formula] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "per_agent", MappingProxyType(dict(self.per_agent)))

    def reading(self, agent: str) -> Formula:
        return self.per_agent.get(agent, TRUE)

    def __eq__(self, other):
        return isinstance(other, SensingEntry) and dict(self.per_agent) == dict(
            other.per_agent
        )

    def __hash__(self):
        return hash(frozenset(self.per_agent.items()))


@dataclass(frozen=True)
class Observation:
    """An observation as seen by the root agent.

    ``action`` is None for raw conjunctions that bypass the action table.
    """

    revealed: Formula
    action: str | None = None

    def __str__(self) -> str:
        return self.action if self.action is not None else f"raw: {render(self.revealed)}"


@dataclass(frozen=True, eq=False)
class Scenario:
    atoms: frozenset[str]
    kb_root: Formula
    kb_nested: Formula = TRUE
    real_world: Formula = TRUE
    actions: Mapping[str, SensingEntry] = field(default_factory=dict)
    root: str = "A"
    other: str = "B"

    def __post_init__(self):
        object.__setattr__(self, "atoms", frozenset(self.atoms))
        object.__setattr__(self, "actions", MappingProxyType(dict(self.actions)))

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.atoms == other.atoms
            and self.kb_root == other.kb_root
            and self.kb_nested == other.kb_nested
            and self.real_world == other.real_world
            and dict(self.actions) == dict(other.actions)
            and (self.root, self.other) == (other.root, other.other)
        )

    __hash__ = None

    @property
    def agents(self) -> tuple[str, str]:
        return (self.root, self.other)

    @property
    def premise(self) -> Formula:
        """The objective part ``phi & psi & Gamma``, which must be consistent."""
        return conjoin([self.kb_root, self.kb_nested, self.real_world])

    def kb_of(self, agent: str) -> Formula:
        if agent == self.root:
            return self.kb_root
        if agent == self.other:
            return self.kb_nested
        raise ScenarioError(f"unknown agent {agent!r}")

    def sense_of(self, action: str, agent: str) -> Formula:
        try:
            entry = self.actions[action]
        except KeyError:
            raise ScenarioError(f"unknown action {action!r}") from None
        if agent not in self.agents:
            raise ScenarioError(f"unknown agent {agent!r}")
        return entry.reading(agent)

    def parse(self, text: str) -> Formula:
        """Parse a formula against this scenario's agents, actions and atoms."""
        f = parse(text, self.agents, self.actions)
        undeclared = atoms(f) - self.atoms
        if undeclared:
            raise ScenarioError(f"undeclared atoms: {', '.join(sorted(undeclared))}")
        return f

    def with_real_world(self, real_world: Formula) -> Scenario:
        s = replace(self, real_world=real_world)
        s.validate()
        return s

    def validate(self) -> Scenario:
        """Check every invariant eagerly; returns self for chaining."""
        if self.root == self.other:
            raise ScenarioError("root and other agent must differ")
        for label, f in (
            ("kb_root", self.kb_root),
            ("kb_nested", self.kb_nested),
            ("real_world", self.real_world),
        ):
            if not is_objective(f):
                raise ScenarioError(f"{label} is not objective: {render(f)}")
            self._check_atoms(f, label)
        for name, entry in self.actions.items():
            for agent, reading in entry.per_agent.items():
                if agent not in self.agents:
                    raise ScenarioError(f"action {name}: unknown agent {agent!r}")
                if not is_literal_conjunction(reading):
                    raise ScenarioError(
                        f"action {name}: obs_{agent} must be a conjunction of "
                        f"literals or true, got {render(reading)}"
                    )
                self._check_atoms(reading, f"action {name}")
                if not propcore.is_satisfiable(reading):
                    raise ScenarioError(f"action {name}: obs_{agent} is unsatisfiable")
        if not propcore.is_satisfiable(self.premise):
            raise ScenarioError(
                "unsatisfiable premise: kb_root & kb_nested & real_world has no model"
            )
        return self

    def _check_atoms(self, f: Formula, label: str) -> None:
        undeclared = atoms(f) - self.atoms
        if undeclared:
            raise ScenarioError(
                f"{label}: undeclared atoms {', '.join(sorted(undeclared))}"
            )


def validate_observation(
    s: Scenario, obs: Observation, *, against_real_world: bool = True
) -> Observation:
    """Reject observations that are malformed or contradict what is known.

    Observations drawn from other episodes (as in PAC learning) are checked
    against ``kb_root`` only, by passing ``against_real_world=False``.
    """
    if not is_literal_conjunction(obs.revealed):
        raise ScenarioError(f"observation {obs} is not a conjunction of literals")
    undeclared = atoms(obs.revealed) - s.atoms
    if undeclared:
        raise ScenarioError(f"observation {obs}: undeclared atoms {sorted(undeclared)}")
    if obs.action is not None and s.sense_of(obs.action, s.root) != obs.revealed:
        raise ScenarioError(f"observation {obs} does not match obs_{s.root}")
    context = [s.kb_root, obs.revealed]
    if against_real_world:
        context.append(s.real_world)
    if not propcore.is_satisfiable(conjoin(context)):
        raise ScenarioError(
            f"observation {obs} contradicts the knowledge base "
            "(knowledge expansion only)"
        )
    return obs


# ---------------------------------------------------------------------------
# file formats

_HEADER = re.compile(r"^\[\s*([a-z_]+)(?:\s+([a-z][a-z0-9_]*))?\s*\]$")
_ATOM = re.compile(r"^[a-z][a-z0-9_]*$")
_AGENT = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")
_FORMULA_SECTIONS = ("kb_root", "kb_nested", "real_world")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def load_scenario(text: str, source: str | None = None) -> Scenario:
    """Parse and fully validate a scenario file."""

    def fail(message, line=None):
        raise ScenarioError(message, line, source)

    sections: list[tuple[str, str | None, int, list[tuple[int, str]]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("[") and line.endswith("]") and "=" not in line:
            m = _HEADER.match(line)
            if m is None:
                fail(f"malformed section header {line!r}", lineno)
            sections.append((m.group(1), m.group(2), lineno, []))
        elif not sections:
            fail("content before the first section header", lineno)
        else:
            sections[-1][3].append((lineno, line))

    root, other = "A", "B"
    vocab: list[str] = []
    formulas: dict[str, list[tuple[int, str]]] = {}
    nested_count = 0
    raw_actions: dict[str, list[tuple[int, str]]] = {}
    seen = set()
    for name, arg, lineno, body in sections:
        if name == "action":
            if arg is None:
                fail("action section needs a name", lineno)
            if arg in raw_actions:
                fail(f"duplicate action {arg!r}", lineno)
            raw_actions[arg] = body
            continue
        if arg is not None:
            fail(f"section [{name}] takes no argument", lineno)
        if name == "kb_nested":
            nested_count += 1
            if nested_count > 1:
                fail(
                    "knowledge bases nested more than two levels deep are not "
                    "supported (two-level O_A(phi & O_B psi) only)",
                    lineno,
                )
        elif name in seen:
            fail(f"duplicate section [{name}]", lineno)
        seen.add(name)
        if name == "agents":
            root, other = _parse_agents(body, fail)
        elif name == "atoms":
            for ln, line in body:
                for a in line.split():
                    if not _ATOM.match(a) or a in ("true", "false"):
                        fail(f"invalid atom name {a!r}", ln)
                    vocab.append(a)
        elif name in _FORMULA_SECTIONS:
            formulas[name] = body
        else:
            fail(f"unknown section [{name}]", lineno)

    if "atoms" not in seen:
        fail("missing [atoms] section")
    if "kb_root" not in formulas:
        fail("missing [kb_root] section")
    agent_names = (root, other)
    action_names = set(raw_actions)

    def formula(body, label, lineno=None):
        if not body:
            fail(f"[{label}] is empty", lineno)
        first = body[0][0]
        text = "\n".join(line for _, line in body)
        try:
            return parse(text, agent_names, action_names)
        except FormulaError as exc:
            line = getattr(exc, "line", None)
            fail(f"[{label}] {exc}", None if line is None else first + line - 1)

    parsed = {label: formula(body, label) for label, body in formulas.items()}
    actions = {}
    for name, body in raw_actions.items():
        per_agent = {}
        for ln, line in body:
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or not key.startswith("obs_"):
                fail(f"action {name}: expected 'obs_<agent> = <formula>'", ln)
            agent = key[4:]
            if agent not in agent_names:
                fail(f"action {name}: unknown agent {agent!r}", ln)
            if agent in per_agent:
                fail(f"action {name}: obs_{agent} given twice", ln)
            per_agent[agent] = formula([(ln, value.strip())], f"action {name}", ln)
        actions[name] = SensingEntry(per_agent)

    try:
        s = Scenario(
            atoms=frozenset(vocab),
            kb_root=parsed["kb_root"],
            kb_nested=parsed.get("kb_nested", TRUE),
            real_world=parsed.get("real_world", TRUE),
            actions=actions,
            root=root,
            other=other,
        )
        return s.validate()
    except ScenarioError as exc:
        if exc.source is None and source is not None:
            raise ScenarioError(str(exc), None, source) from None
        raise


def _parse_agents(body, fail) -> tuple[str, str]:
    found: dict[str, str] = {}
    for ln, line in body:
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            fail(f"expected 'root = <name>' or 'other = <name>', got {line!r}", ln)
        names = [v for v in re.split(r"[\s,]+", value) if v]
        if key not in ("root", "other") or len(names) != 1:
            fail(
                "two-agent engine: exactly one root and one other agent are "
                f"supported, got {line!r}",
                ln,
            )
        if key in found:
            fail(f"agent '{key}' declared twice", ln)
        if not _AGENT.match(names[0]):
            fail(f"invalid agent name {names[0]!r}", ln)
        found[key] = names[0]
    if set(found) != {"root", "other"}:
        fail("[agents] needs both 'root' and 'other'")
    return found["root"], found["other"]


def dump_scenario(s: Scenario) -> str:
    """Serialize ``s`` in the scenario file format."""
    lines = ["[agents]", f"root = {s.root}", f"other = {s.other}", "", "[atoms]"]
    lines.append(" ".join(sorted(s.atoms)))
    for label, f in (
        ("kb_root", s.kb_root),
        ("kb_nested", s.kb_nested),
        ("real_world", s.real_world),
    ):
        lines += ["", f"[{label}]", render(f)]
    for name, entry in s.actions.items():
        lines += ["", f"[action {name}]"]
        for agent in s.agents:
            lines.append(f"obs_{agent} = {render(entry.reading(agent))}")
    return "\n".join(lines) + "\n"


def parse_observations(
    text: str,
    s: Scenario,
    source: str | None = None,
    *,
    against_real_world: bool = False,
) -> list[Observation]:
    """Read an observation file.  Every observation is validated."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        try:
            if line.startswith("raw:"):
                obs = Observation(s.parse(line[4:].strip()))
            else:
                if line not in s.actions:
                    raise ScenarioError(f"unknown action {line!r}")
                obs = Observation(s.sense_of(line, s.root), line)
            out.append(
                validate_observation(s, obs, against_real_world=against_real_world)
            )
        except (FormulaError, ScenarioError) as exc:
            raise ScenarioError(str(exc), lineno, source) from None
    return out


def sense_of(s: Scenario, action: str, agent: str) -> Formula:
    return s.sense_of(action, agent)


# ---------------------------------------------------------------------------
# the card game

CARDS = (1, 2, 3, 4)


def card(agent: str, n: int) -> Atom:
    """``N_agent = #n`` as a plain atom, e.g. ``na4``."""
    return Atom(f"n{agent.lower()}{n}")


def card_game_kb() -> Formula:
    """Initial conditions shared by both players.

    Each player holds exactly one card, the two cards differ, and ``wa``/``wb``
    hold exactly when that player's card is the higher one.  The
    "no one has won yet" condition is not included: together with the winner
    definitions and distinct cards it has no model.
    """
    na = [card("a", n) for n in CARDS]
    nb = [card("b", n) for n in CARDS]
    parts: list[Formula] = []
    # one card each
    for hand in (na, nb):
        parts.append(disjoin(hand))
        parts.extend(
            Not(hand[i] & hand[j]) for i in range(4) for j in range(i + 1, 4)
        )
    # distinct cards
    for i in range(4):
        parts.append(na[i] >> disjoin(nb[k] for k in range(4) if k != i))
        parts.append(nb[i] >> disjoin(na[k] for k in range(4) if k != i))
    # winners
    a_wins = disjoin(na[i] & nb[k] for i in range(4) for k in range(4) if i > k)
    b_wins = disjoin(nb[i] & na[k] for i in range(4) for k in range(4) if i > k)
    parts.append(Iff(Atom("wa"), a_wins))
    parts.append(Iff(Atom("wb"), b_wins))
    return conjoin(parts)


def card_game_actions() -> dict[str, SensingEntry]:
    actions = {}
    for n in CARDS:
        actions[f"rho_a{n}"] = SensingEntry({"A": card("a", n), "B": TRUE})
    for n in CARDS:
        actions[f"rho_b{n}"] = SensingEntry({"A": TRUE, "B": card("b", n)})
    for n in CARDS:
        for k in CARDS:
            if n != k:
                actions[f"rho_a{n}_b{k}"] = SensingEntry(
                    {"A": card("a", n), "B": card("b", k)}
                )
    return actions


def card_game_scenario(real_world: Formula | None = None) -> Scenario:
    """Two players, cards 1 to 4, both starting from the same knowledge base.

    By default A holds 4 and B holds 3; pass ``real_world=TRUE`` to leave the
    deal open (as when observations come from many games).
    """
    kb = card_game_kb()
    if real_world is None:
        real_world = card("a", 4) & card("b", 3)
    vocab = [card(x, n).name for x in "ab" for n in CARDS] + ["wa", "wb"]
    return Scenario(
        atoms=frozenset(vocab),
        kb_root=kb,
        kb_nested=kb,
        real_world=real_world,
        actions=card_game_actions(),
    ).validate()


def observations_from(s: Scenario, items: Iterable[str | Formula]) -> list[Observation]:
    """Build observations from action names or raw conjunctions (checked
    against ``kb_root`` only)."""
    out = []
    for item in items:
        if isinstance(item, Formula):
            obs = Observation(item)
        elif item in s.actions:
            obs = Observation(s.sense_of(item, s.root), item)
        else:
            obs = Observation(s.parse(item))
        out.append(validate_observation(s, obs, against_real_world=False))
    return out
