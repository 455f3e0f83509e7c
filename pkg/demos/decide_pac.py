"""
Learning from partial observations, implicitly
==============================================

Observations from four separate games, each showing only A's card, are
used to decide whether "A holds 4" is likely enough.  No hypothesis is
ever written down: each observation is checked directly against the
rules.
"""

from pathlib import Path

from epistemic_pac import (
    MaskSpec,
    PacParams,
    WorldDistribution,
    card_game_scenario,
    decide_pac,
    parse,
    parse_observations,
    sample_size,
)
from epistemic_pac.formula import TRUE
from epistemic_pac.pac import decide_pac_sampled

s = card_game_scenario()
obs = parse_observations((Path(__file__).parent / "data" / "ex3.obs").read_text(), s)
print("observations:", [str(o) for o in obs])

for eps in (0.25, 0.2):
    v = decide_pac(s, parse("na4"), obs, eps)
    print(f"eps={eps}: {v.decision.value}, failed {v.failed} with budget {v.b}",
          v.per_observation)

# with gamma and delta fixed the sample size follows from Hoeffding's bound
print("m for gamma=0.05, delta=0.1:", sample_size(0.05, 0.1))

# sampled version over uniformly drawn deals; A looks at its card each time
open_game = card_game_scenario(real_world=TRUE)
d = WorldDistribution.uniform_over_models(open_game)
menu = MaskSpec.menu(["rho_a1", "rho_a2", "rho_a3", "rho_a4"], seed=3)
params = PacParams(epsilon=0.2, gamma=0.05, delta=0.1)
for text in ["na4 | na3 | na2 | na1", "!na1", "wa"]:
    v = decide_pac_sampled(open_game, parse(text), d, menu, params)
    print(f"{text:24} {v.decision.value:7} failed={v.failed} b={v.b}")
