"""Formulas of the two-agent epistemic language with only-knowing and
single-observation dynamic operators.

Concrete syntax (tightest binding first)::

    atoms        p, na4, w_a          [a-z][a-z0-9_]*
    constants    true, false
    unary        !f    K_A f    O_B f    [rho] f
    binary       f & g    f | g    f -> g (right assoc)    f <-> g

``<->`` is sugar: ``f <-> g`` parses to ``(f -> g) & (g -> f)``.
Line comments start with ``#``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator


class FormulaError(ValueError):
    """Raised for malformed formulas or out-of-scope constructs."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class Formula:
    """Base class of the AST. Nodes are frozen dataclasses."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "TRUE"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self) -> str:
        return "FALSE"


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: str
    body: Formula


@dataclass(frozen=True)
class OnlyKnow(Formula):
    agent: str
    body: Formula


@dataclass(frozen=True)
class Dyn(Formula):
    action: str
    body: Formula


BINARY = (And, Or, Implies)
MODAL = (Know, OnlyKnow)


def Iff(left: Formula, right: Formula) -> Formula:
    return And(Implies(left, right), Implies(right, left))


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; ``TRUE`` for no parts."""
    result: Formula | None = None
    for part in parts:
        result = part if result is None else And(result, part)
    return TRUE if result is None else result


def disjoin(parts: Iterable[Formula]) -> Formula:
    result: Formula | None = None
    for part in parts:
        result = part if result is None else Or(result, part)
    return FALSE if result is None else result


# ---------------------------------------------------------------------------
# structural measures


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over ``f``."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, BINARY):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, (Not, Know, OnlyKnow, Dyn)):
            stack.append(g.body)


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def agents(f: Formula) -> frozenset[str]:
    return frozenset(g.agent for g in subformulas(f) if isinstance(g, MODAL))


def actions(f: Formula) -> frozenset[str]:
    return frozenset(g.action for g in subformulas(f) if isinstance(g, Dyn))


def is_objective(f: Formula) -> bool:
    """True iff ``f`` has no knowledge, only-knowing or dynamic operator."""
    return not any(isinstance(g, (Know, OnlyKnow, Dyn)) for g in subformulas(f))


def mentions(f: Formula, *kinds: type) -> bool:
    return any(isinstance(g, kinds) for g in subformulas(f))


def depth(f: Formula, agent: str) -> int:
    """The agent-relative depth: 1 for propositions, +1 per switch of agent.

    Connectives take the maximum over their operands, dynamic operators
    and same-agent modalities are transparent.
    """
    if isinstance(f, (Atom, Top, Bottom)):
        return 1
    if isinstance(f, (Not, Dyn)):
        return depth(f.body, agent)
    if isinstance(f, BINARY):
        return max(depth(f.left, agent), depth(f.right, agent))
    if isinstance(f, MODAL):
        if f.agent == agent:
            return depth(f.body, agent)
        return depth(f.body, f.agent) + 1
    raise TypeError(f"not a formula: {f!r}")


def modal_depth(f: Formula) -> int:
    """Maximum nesting of K/O operators (dynamic operators do not count)."""
    if isinstance(f, (Atom, Top, Bottom)):
        return 0
    if isinstance(f, (Not, Dyn)):
        return modal_depth(f.body)
    if isinstance(f, BINARY):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.body)


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.body, Atom))


def literals_of_conjunction(f: Formula) -> list[Formula] | None:
    """The literals of a (possibly empty) conjunction of literals, else None."""
    if isinstance(f, Top):
        return []
    if is_literal(f):
        return [f]
    if isinstance(f, And):
        left = literals_of_conjunction(f.left)
        right = literals_of_conjunction(f.right)
        if left is None or right is None:
            return None
        return left + right
    return None


def is_literal_conjunction(f: Formula) -> bool:
    return literals_of_conjunction(f) is not None


def simplify(f: Formula) -> Formula:
    """Fold ``true``/``false`` through connectives. Modal bodies are
    simplified but modal nodes themselves are kept."""
    if isinstance(f, (Atom, Top, Bottom)):
        return f
    if isinstance(f, Not):
        body = simplify(f.body)
        if isinstance(body, Top):
            return FALSE
        if isinstance(body, Bottom):
            return TRUE
        if isinstance(body, Not):
            return body.body
        return Not(body)
    if isinstance(f, (Know, OnlyKnow, Dyn)):
        return type(f)(f.agent if isinstance(f, MODAL) else f.action, simplify(f.body))
    left, right = simplify(f.left), simplify(f.right)
    if isinstance(f, And):
        if isinstance(left, Bottom) or isinstance(right, Bottom):
            return FALSE
        if isinstance(left, Top):
            return right
        if isinstance(right, Top):
            return left
        return And(left, right)
    if isinstance(f, Or):
        if isinstance(left, Top) or isinstance(right, Top):
            return TRUE
        if isinstance(left, Bottom):
            return right
        if isinstance(right, Bottom):
            return left
        return Or(left, right)
    # Implies
    if isinstance(left, Bottom) or isinstance(right, Top):
        return TRUE
    if isinstance(left, Top):
        return right
    if isinstance(right, Bottom):
        return simplify(Not(left))
    return Implies(left, right)


# ---------------------------------------------------------------------------
# text syntax

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<modal>[KO]_[A-Za-z][A-Za-z0-9]*)
  | (?P<dyn>\[\s*[a-z][a-z0-9_]*\s*\])
  | (?P<ident>[a-z][a-z0-9_]*)
  | (?P<op><->|->|[!&|()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(_Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text, agents, actions):
        self.tokens = _tokenize(text)
        self.i = 0
        self.agents = agents
        self.actions = actions

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.tok
        return FormulaSyntaxError(message, tok.line, tok.column)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        if self.tok.kind == "eof":
            raise self.error("empty formula")
        f = self.iff()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.accept("<->"):
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disjunction()
        if self.accept("->"):
            return Implies(f, self.implies())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.accept("|"):
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("!"):
            return Not(self.unary())
        if tok.kind == "modal":
            self.i += 1
            agent = tok.text[2:]
            if self.agents is not None and agent not in self.agents:
                raise self.error(f"unknown agent {agent!r}", tok)
            cls = Know if tok.text[0] == "K" else OnlyKnow
            return cls(agent, self.unary())
        if tok.kind == "dyn":
            self.i += 1
            action = tok.text[1:-1].strip()
            if self.actions is not None and action not in self.actions:
                raise self.error(f"unknown action {action!r}", tok)
            return Dyn(action, self.unary())
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "true":
                return TRUE
            if tok.text == "false":
                return FALSE
            return Atom(tok.text)
        if self.accept("("):
            f = self.iff()
            if not self.accept(")"):
                raise self.error("expected ')'")
            return f
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {tok.text!r}")


def parse(
    text: str,
    agents: Iterable[str] | None = None,
    actions: Iterable[str] | None = None,
) -> Formula:
    """Parse ``text``. When ``agents``/``actions`` are given, modalities and
    dynamic operators must use declared names."""
    return _Parser(
        text,
        None if agents is None else frozenset(agents),
        None if actions is None else frozenset(actions),
    ).parse()


# binding strength used by the printer
_PREC = {Implies: 1, Or: 2, And: 3}
_SYMBOL = {Implies: "->", Or: "|", And: "&"}
_UNARY_PREC = 4


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), _UNARY_PREC)


def render(f: Formula) -> str:
    """Print ``f`` with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, (Not, Know, OnlyKnow, Dyn)):
        body = render(f.body)
        if _prec(f.body) < _UNARY_PREC:
            body = f"({body})"
        if isinstance(f, Not):
            return f"!{body}"
        if isinstance(f, Dyn):
            return f"[{f.action}] {body}"
        prefix = "K" if isinstance(f, Know) else "O"
        return f"{prefix}_{f.agent} {body}"
    if isinstance(f, BINARY):
        p = _PREC[type(f)]
        left, right = render(f.left), render(f.right)
        if isinstance(f, Implies):
            # right associative
            if _prec(f.left) <= p:
                left = f"({left})"
            if _prec(f.right) < p:
                right = f"({right})"
        else:
            if _prec(f.left) < p:
                left = f"({left})"
            if _prec(f.right) <= p:
                right = f"({right})"
        return f"{left} {_SYMBOL[type(f)]} {right}"
    raise TypeError(f"not a formula: {f!r}")
