"""Command-line entry point.

Exit codes: 0 success / entailed / Accept, 1 not entailed / Reject,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import propcore
from .formula import (
    TRUE,
    Dyn,
    Formula,
    FormulaError,
    Implies,
    Know,
    Not,
    atoms,
    depth,
    is_objective,
    mentions,
    parse,
    render,
)
from .pac import (
    MaskSpec,
    PacError,
    WorldDistribution,
    decide_pac,
    estimate_validity,
    sample_observations,
    sample_size,
)
from .reduction import (
    ReductionMode,
    check_dynamic_entailment,
    entails_query,
    represent,
)
from .regression import regress
from .scenario import (
    Scenario,
    ScenarioError,
    card_game_scenario,
    load_scenario,
    parse_observations,
)
from .semantics import brute_force_entails

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2

BUILTIN_SCENARIOS = {
    "cardgame": lambda: card_game_scenario(),
    "cardgame-open": lambda: card_game_scenario(real_world=TRUE),
}

COMMANDS = (
    "parse",
    "reduce",
    "regress",
    "entail",
    "oracle",
    "decide-pac",
    "estimate",
    "demo-cardgame",
)

REQUIRED = {
    "parse": ("query",),
    "reduce": ("scenario", "query"),
    "regress": ("scenario", "query"),
    "entail": ("scenario", "query"),
    "oracle": ("scenario", "query"),
    "decide-pac": ("scenario", "query", "epsilon"),
    "estimate": ("scenario", "query"),
    "demo-cardgame": (),
}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    scenario: str | None = None
    query: str | None = None
    action: str | None = None
    obs: str | None = None
    epsilon: float | None = None
    gamma: float | None = None
    delta: float | None = None
    seed: int | None = None
    mode: str = "res"
    format: str = "text"
    strict: bool = False
    reveal_prob: float | None = None
    menu: str | None = None
    trials: int = 1000
    dimacs: str | None = None

    def check(self) -> None:
        for name in REQUIRED[self.command]:
            if getattr(self, name) is None:
                raise InputError(f"--{name} is required for '{self.command}'")
        randomized = self.command == "estimate" or (
            self.command == "decide-pac" and self.obs is None
        )
        if randomized and self.strict and self.seed is None:
            raise InputError(f"--seed is required for '{self.command}' with --strict")
        if self.command == "decide-pac" and self.obs is None:
            if self.gamma is None or self.delta is None:
                raise InputError("decide-pac needs --obs, or --gamma and --delta to sample")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="epistemic-pac",
        description="Two-agent only-knowing reasoning and implicit PAC learning.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--scenario", help="scenario file, or 'cardgame' / 'cardgame-open'")
    p.add_argument("--query", help="formula text")
    p.add_argument("--action", help="observation action for [a] K_A query")
    p.add_argument("--obs", help="observation file for decide-pac")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", default="res", choices=("res", "implication"))
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.add_argument("--strict", action="store_true", help="randomized commands need --seed")
    p.add_argument("--reveal-prob", type=float, help="per-atom reveal masking")
    p.add_argument("--menu", help="comma separated action menu masking")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dimacs", help="write the final validity check as DIMACS here")
    return p


def load(name: str) -> Scenario:
    if name in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[name]()
    path = Path(name)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read scenario {name}: {exc.strerror}") from None
    return load_scenario(text, source=str(path))


def _mask(cfg: RunConfig, s: Scenario) -> MaskSpec:
    seed = cfg.seed if cfg.seed is not None else 0
    if cfg.menu:
        return MaskSpec.menu([a.strip() for a in cfg.menu.split(",")], seed).check(s)
    q = cfg.reveal_prob if cfg.reveal_prob is not None else 0.5
    return MaskSpec.reveal(q, seed)


def _emit(cfg: RunConfig, record: dict, text: str, out) -> None:
    if cfg.format == "json":
        print(json.dumps(record, sort_keys=True), file=out)
    else:
        print(text, file=out)


def _dynamic_query(s: Scenario, cfg: RunConfig, alpha: Formula) -> Formula:
    return Dyn(cfg.action, Know(s.root, alpha)) if cfg.action else alpha


def run(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg.check()
        return _dispatch(cfg, out)
    except (InputError, ScenarioError, FormulaError, PacError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _dispatch(cfg: RunConfig, out) -> int:
    if cfg.command == "demo-cardgame":
        rows, elapsed = demo_card_game()
        ok = all(r["pass"] for r in rows)
        if cfg.format == "json":
            _emit(cfg, {"rows": rows, "pass": ok, "seconds": elapsed}, "", out)
        else:
            print(format_demo(rows, elapsed), file=out)
        return EXIT_OK if ok else EXIT_NO

    if cfg.command == "parse":
        s = load(cfg.scenario) if cfg.scenario else None
        f = s.parse(cfg.query) if s else parse(cfg.query)
        agent_names = s.agents if s else ("A", "B")
        record = {
            "formula": render(f),
            "ast": repr(f),
            "atoms": sorted(atoms(f)),
            "objective": is_objective(f),
            "depth": {a: depth(f, a) for a in agent_names},
        }
        _emit(cfg, record, render(f), out)
        return EXIT_OK

    s = load(cfg.scenario)
    mode = ReductionMode.parse(cfg.mode)
    f = s.parse(cfg.query)

    if cfg.command == "regress":
        g = regress(_dynamic_query(s, cfg, f), s)
        _emit(cfg, {"query": render(f), "regressed": render(g)}, render(g), out)
        return EXIT_OK

    if cfg.command == "reduce":
        g = regress(_dynamic_query(s, cfg, f), s) if mentions(f, Dyn) or cfg.action else f
        reduced = represent(g, s, mode)
        result = render(reduced.objective_result)
        _emit(
            cfg,
            {"query": render(f), "result": result, "mode": mode.value},
            f"{result}\nmode: {mode.value}",
            out,
        )
        return EXIT_OK

    if cfg.command == "entail":
        if cfg.action:
            verdict = check_dynamic_entailment(s, cfg.action, f, mode)
        else:
            verdict = entails_query(s, f, mode)
        if cfg.dimacs:
            reduced = represent(regress(_dynamic_query(s, cfg, f), s), s, mode)
            check = Not(Implies(s.real_world, reduced.objective_result))
            Path(cfg.dimacs).write_text(propcore.to_clauses(check, s.atoms).to_dimacs())
        shown = render(_dynamic_query(s, cfg, f))
        _emit(
            cfg,
            {"query": shown, "entailed": verdict, "mode": mode.value},
            f"{'entailed' if verdict else 'not entailed'}: {shown}",
            out,
        )
        return EXIT_OK if verdict else EXIT_NO

    if cfg.command == "oracle":
        q = _dynamic_query(s, cfg, f)
        verdict = brute_force_entails(s, q)
        _emit(
            cfg,
            {"query": render(q), "entailed": verdict, "engine": "oracle"},
            f"{'entailed' if verdict else 'not entailed'} (oracle): {render(q)}",
            out,
        )
        return EXIT_OK if verdict else EXIT_NO

    if cfg.command == "decide-pac":
        if cfg.obs is not None:
            try:
                text = Path(cfg.obs).read_text(encoding="utf-8")
            except OSError as exc:
                raise InputError(f"cannot read observations {cfg.obs}: {exc.strerror}")
            observations = parse_observations(text, s, source=cfg.obs)
        else:
            m = sample_size(cfg.gamma, cfg.delta)
            d = WorldDistribution.uniform_over_models(s)
            observations = sample_observations(s, d, _mask(cfg, s), m)
        verdict = decide_pac(s, f, observations, cfg.epsilon, mode)
        record = verdict.record(gamma=cfg.gamma, delta=cfg.delta, seed=cfg.seed)
        text = (
            f"{verdict.decision.value}: failed {verdict.failed} of {verdict.m} "
            f"(budget {verdict.b})"
        )
        _emit(cfg, record, text, out)
        return EXIT_OK if verdict.accepted else EXIT_NO

    if cfg.command == "estimate":
        d = WorldDistribution.uniform_over_models(s)
        spec = _mask(cfg, s)
        value = estimate_validity(s, f, d, spec, cfg.trials, mode)
        record = {
            "query": render(f),
            "estimate": value,
            "trials": cfg.trials,
            "seed": spec.seed,
            "mask": spec.mode.value,
        }
        _emit(cfg, record, f"{value:.4f}", out)
        return EXIT_OK

    raise InputError(f"unknown command {cfg.command!r}")


# ---------------------------------------------------------------------------
# card game walkthrough

DEMO_ROWS = (
    ("property 1", "!K_A na1 & !K_A na2 & !K_A na3 & !K_A na4", True),
    ("property 2", "[rho_a4] K_A na4", True),
    ("property 3", "[rho_a4] K_A !nb4", True),
    ("property 4", "[rho_a4] K_A !K_B na1", True),
    ("property 5", "[rho_a4] K_A K_B (K_A na1 | K_A !na1)", True),
    ("property 6", "[rho_a4] (K_A wa & K_A !K_B wa)", True),
    ("property 7", "[rho_a4_b3] K_A K_B !nb4", True),
    ("control 1", "K_A na4", False),
    ("control 2", "[rho_a4] K_A wb", False),
    ("control 3", "[rho_a4] K_A K_B na4", False),
)


def demo_card_game() -> tuple[list[dict], float]:
    """Run the card game properties and controls through both engines."""
    start = time.perf_counter()
    s = card_game_scenario()
    rows = []
    for label, text, expected in DEMO_ROWS:
        q = s.parse(text)
        pipeline = entails_query(s, q)
        oracle = brute_force_entails(s, q)
        rows.append(
            {
                "label": label,
                "query": text,
                "expected": expected,
                "pipeline": pipeline,
                "oracle": oracle,
                "pass": pipeline == oracle == expected,
            }
        )
    return rows, time.perf_counter() - start


def format_demo(rows: list[dict], elapsed: float) -> str:
    width = max(len(r["query"]) for r in rows)
    lines = [f"{'row':<11} {'query':<{width}}  pipeline  oracle  result"]
    for r in rows:
        lines.append(
            f"{r['label']:<11} {r['query']:<{width}}  {str(r['pipeline']):<8}  "
            f"{str(r['oracle']):<6}  {'PASS' if r['pass'] else 'FAIL'}"
        )
    lines.append(f"{sum(r['pass'] for r in rows)}/{len(rows)} rows pass in {elapsed:.2f}s")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
