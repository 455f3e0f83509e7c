"""Implicit learning under PAC semantics.

Queries are answered straight from partial observations: a query is
*witnessed* on an observation ``rho`` when ``rho & O_A(phi & O_B psi)``
entails ``K_A(rho -> alpha)``.  ``decide_pac`` accepts when at most
``floor(epsilon * m)`` of ``m`` observations fail to witness the query.
The learned knowledge itself is never built.

Randomness: draw ``c`` under seed ``s`` uses the generator seeded with
``SeedSequence(s, spawn_key=(c,))``; the world is drawn first, then the
mask, from that same stream.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .formula import Atom, Dyn, Formula, Implies, Not, OnlyKnow, conjoin, mentions
from .reduction import ReductionMode, entails_know
from .regression import query_after_observation
from .scenario import Observation, Scenario, ScenarioError, validate_observation
from .semantics import World, all_worlds, evaluate


class PacError(ValueError):
    pass


def _check_unit(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        raise PacError(f"{name} must lie strictly between 0 and 1, got {value}")


@dataclass(frozen=True)
class PacParams:
    epsilon: float
    gamma: float
    delta: float

    def __post_init__(self):
        for name in ("epsilon", "gamma", "delta"):
            _check_unit(name, getattr(self, name))
        if not (self.epsilon - self.gamma > 0 and self.epsilon + self.gamma < 1):
            raise PacError(
                "need epsilon - gamma > 0 and epsilon + gamma < 1 for the "
                "two-sided guarantee"
            )

    @property
    def m(self) -> int:
        return sample_size(self.gamma, self.delta)


def sample_size(gamma: float, delta: float) -> int:
    """Observations needed for accuracy ``gamma`` with confidence ``1 - delta``
    (Hoeffding): ``ceil(ln(1/delta) / (2 gamma^2))``."""
    _check_unit("gamma", gamma)
    _check_unit("delta", delta)
    exact = math.log(1.0 / delta) / (2.0 * gamma * gamma)
    # the slack absorbs rounding in the log, e.g. delta = 1/e
    return max(1, math.ceil(exact - 1e-9))


def failure_budget(epsilon: float, m: int) -> int:
    return math.floor(round(epsilon * m, 9))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


# ---------------------------------------------------------------------------
# distributions and masking


@dataclass(frozen=True)
class WorldDistribution:
    support: tuple[tuple[World, float], ...]
    _cumulative: np.ndarray = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        if not self.support:
            raise PacError("distribution has empty support")
        weights = np.array([w for _, w in self.support], dtype=float)
        if (weights < 0).any():
            raise PacError("weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-9:
            raise PacError(f"weights sum to {weights.sum()}, not 1")
        object.__setattr__(self, "support", tuple(self.support))
        object.__setattr__(self, "_cumulative", np.cumsum(weights))

    @classmethod
    def from_weights(cls, weighted: Sequence[tuple[World, float]]) -> WorldDistribution:
        total = sum(w for _, w in weighted)
        return cls(tuple((world, w / total) for world, w in weighted))

    @classmethod
    def uniform(cls, worlds: Sequence[World]) -> WorldDistribution:
        worlds = list(worlds)
        return cls(tuple((w, 1.0 / len(worlds)) for w in worlds))

    @classmethod
    def uniform_over_models(cls, s: Scenario) -> WorldDistribution:
        """Uniform over the worlds satisfying ``kb_root & real_world``."""
        context = s.kb_root & s.real_world
        return cls.uniform([w for w in all_worlds(s.atoms) if evaluate(w, context)])

    def check_support(self, s: Scenario) -> WorldDistribution:
        """The knowledge base must be perfectly valid for the distribution."""
        context = s.kb_root & s.real_world
        for world, weight in self.support:
            if weight > 0 and not evaluate(world, context):
                raise PacError(f"support world {world} violates kb_root & real_world")
        return self

    def probability(self, predicate) -> float:
        return float(sum(w for world, w in self.support if predicate(world)))


def draw_world(d: WorldDistribution, rng: np.random.Generator) -> World:
    i = int(np.searchsorted(d._cumulative, rng.random(), side="right"))
    # guard against the cumulative sum ending a hair below 1
    i = min(i, len(d.support) - 1)
    while d.support[i][1] == 0:
        i -= 1
    return d.support[i][0]


class MaskMode(enum.Enum):
    REVEAL = "per-atom-reveal"
    MENU = "action-menu"


@dataclass(frozen=True)
class MaskSpec:
    mode: MaskMode
    q: float = 0.0
    actions: tuple[str, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.mode is MaskMode.REVEAL and not 0.0 <= self.q <= 1.0:
            raise PacError(f"reveal probability must lie in [0, 1], got {self.q}")
        if self.mode is MaskMode.MENU and not self.actions:
            raise PacError("action menu is empty")
        if not 0 <= self.seed < 2**64:
            raise PacError("seed must be a 64-bit unsigned integer")

    @classmethod
    def reveal(cls, q: float, seed: int = 0) -> MaskSpec:
        return cls(MaskMode.REVEAL, q=q, seed=seed)

    @classmethod
    def menu(cls, actions: Sequence[str], seed: int = 0) -> MaskSpec:
        return cls(MaskMode.MENU, actions=tuple(actions), seed=seed)

    def check(self, s: Scenario) -> MaskSpec:
        for a in self.actions:
            if a not in s.actions:
                raise PacError(f"menu action {a!r} is not declared")
        return self


def apply_mask(
    w: World, spec: MaskSpec, s: Scenario, rng: np.random.Generator
) -> Observation:
    """A random partial observation that is true at ``w``."""
    if spec.mode is MaskMode.REVEAL:
        names = sorted(s.atoms)
        shown = rng.random(len(names)) < spec.q
        lits = [
            Atom(n) if w[n] else Not(Atom(n)) for n, keep in zip(names, shown) if keep
        ]
        return Observation(conjoin(lits))
    consistent = [a for a in spec.actions if evaluate(w, s.sense_of(a, s.root))]
    if not consistent:
        raise PacError(f"no menu action is consistent with {w}")
    action = consistent[int(rng.integers(len(consistent)))]
    return Observation(s.sense_of(action, s.root), action)


def sample_observations(
    s: Scenario, d: WorldDistribution, spec: MaskSpec, m: int
) -> list[Observation]:
    out = []
    for c in range(m):
        rng = trial_rng(spec.seed, c)
        out.append(apply_mask(draw_world(d, rng), spec, s, rng))
    return out


# ---------------------------------------------------------------------------
# witnessing and DecidePAC


def _check_query(alpha: Formula) -> None:
    if mentions(alpha, OnlyKnow, Dyn):
        raise PacError("PAC queries may only use knowledge modalities")


def witnessed_check(
    s: Scenario,
    rho: Observation,
    alpha: Formula,
    mode: ReductionMode = ReductionMode.RES,
    *,
    validate: bool = True,
) -> bool:
    """Whether ``rho & O_A(phi & O_B psi) |= K_A(rho -> alpha)``.

    For an observation made through an action, ``[action] alpha`` is
    regressed first so that other agents' readings are accounted for.
    """
    _check_query(alpha)
    if validate:
        validate_observation(s, rho, against_real_world=False)
    if rho.action is None:
        return entails_know(s, Implies(rho.revealed, alpha), mode)
    _, epistemic = query_after_observation(s, rho.action, alpha)
    return entails_know(s, epistemic.body, mode)


class Decision(str, enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"


@dataclass(frozen=True)
class Verdict:
    decision: Decision
    m: int
    b: int
    failed: int
    per_observation: tuple[bool, ...]
    epsilon: float

    @property
    def accepted(self) -> bool:
        return self.decision is Decision.ACCEPT

    def record(self, gamma=None, delta=None, seed=None) -> dict:
        return {
            "decision": self.decision.value,
            "m": self.m,
            "b": self.b,
            "failed": self.failed,
            "epsilon": self.epsilon,
            "gamma": gamma,
            "delta": delta,
            "seed": seed,
            "per_observation": list(self.per_observation),
        }

    def to_json(self, **params) -> str:
        return json.dumps(self.record(**params), sort_keys=True)


def decide_pac(
    s: Scenario,
    alpha: Formula,
    observations: Sequence[Observation],
    epsilon: float,
    mode: ReductionMode = ReductionMode.RES,
    *,
    workers: int | None = None,
) -> Verdict:
    """Accept unless more than ``floor(epsilon * m)`` observations fail to
    witness ``alpha``; rejects as soon as the budget is exceeded.

    With ``workers`` the checks run concurrently and the early-exit rule is
    replayed afterwards, giving the same verdict.
    """
    _check_unit("epsilon", epsilon)
    _check_query(alpha)
    if not observations:
        raise PacError("DecidePAC needs at least one observation")
    m = len(observations)
    b = failure_budget(epsilon, m)
    distinct = list(dict.fromkeys(observations))
    try:
        for obs in distinct:
            validate_observation(s, obs, against_real_world=False)
    except ScenarioError as exc:
        raise PacError(f"invalid observation: {exc}") from None

    def check(obs):
        return witnessed_check(s, obs, alpha, mode, validate=False)

    # call-local memo: repeated observations are checked once
    results: dict[Observation, bool] = {}
    if workers:
        with ThreadPoolExecutor(workers) as pool:
            results.update(zip(distinct, pool.map(check, distinct)))

    failed = 0
    record = []
    for obs in observations:
        if obs not in results:
            results[obs] = check(obs)
        ok = results[obs]
        record.append(ok)
        if not ok:
            failed += 1
            if failed > b:
                return Verdict(Decision.REJECT, m, b, failed, tuple(record), epsilon)
    return Verdict(Decision.ACCEPT, m, b, failed, tuple(record), epsilon)


def decide_pac_sampled(
    s: Scenario,
    alpha: Formula,
    d: WorldDistribution,
    spec: MaskSpec,
    params: PacParams,
    mode: ReductionMode = ReductionMode.RES,
) -> Verdict:
    """Draw ``sample_size(gamma, delta)`` observations, then run DecidePAC."""
    observations = sample_observations(s, d, spec, params.m)
    return decide_pac(s, alpha, observations, params.epsilon, mode)


def estimate_validity(
    s: Scenario,
    alpha: Formula,
    d: WorldDistribution,
    spec: MaskSpec,
    trials: int,
    mode: ReductionMode = ReductionMode.RES,
) -> float:
    """Fraction of ``trials`` masked draws on which ``alpha`` is witnessed."""
    if trials < 1:
        raise PacError("trials must be positive")
    _check_query(alpha)
    spec.check(s)
    cache: dict[Observation, bool] = {}
    hits = 0
    for obs in sample_observations(s, d, spec, trials):
        if obs not in cache:
            cache[obs] = witnessed_check(s, obs, alpha, mode)
        hits += cache[obs]
    return hits / trials
