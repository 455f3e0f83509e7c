"""
How often is a query witnessed?
===============================

Under a masking process only part of each drawn world is visible.  The
witnessed rate of a query depends on both the query and how much the mask
reveals.
"""

import numpy as np

from epistemic_pac import MaskSpec, WorldDistribution, card_game_scenario, estimate_validity, parse
from epistemic_pac.formula import TRUE

s = card_game_scenario(real_world=TRUE)
d = WorldDistribution.uniform_over_models(s)

# A looks at its own card: "A holds 4" is witnessed in 3 of 12 deals
menu = MaskSpec.menu(["rho_a1", "rho_a2", "rho_a3", "rho_a4"], seed=7)
print("na4 under the action menu:", estimate_validity(s, parse("na4"), d, menu, 10_000))

# revealing each atom with probability q: more revealed, more witnessed
alpha = parse("wa")
for q in np.linspace(0.0, 1.0, 6):
    spec = MaskSpec.reveal(float(q), seed=1)
    print(f"q={q:.1f}  wa witnessed {estimate_validity(s, alpha, d, spec, 2000):.3f}")
