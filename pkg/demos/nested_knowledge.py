"""
Compiling nested knowledge into propositional checks
====================================================

A knows ``p | q`` and believes B only knows ``q -> p``.  Asking whether A
knows that B knows ``p`` compiles into a propositional formula.  Two
compilations are available, and they can disagree.
"""

from pathlib import Path

from epistemic_pac import ReductionMode, is_valid, load_scenario, parse, render, represent
from epistemic_pac.formula import Iff
from epistemic_pac.reduction import compare_modes

s = load_scenario((Path(__file__).parent / "data" / "two_atoms.scn").read_text())
q = parse("K_A K_B p")

# implication form reads each K_i b as kb_i -> b
imp = represent(q, s, ReductionMode.IMPLICATION).objective_result
print("implication form:", render(imp))
flat = parse("(p | q) & (q -> p) -> p")
print("  equivalent to (phi & psi) -> p:", is_valid(Iff(imp, flat)))

# res substitution asks each agent's base directly: q -> p does not give p
res = represent(q, s).objective_result
print("res substitution:", render(res))

# the two disagree here; res matches the possible-worlds reading
print("modes (res, implication):", compare_modes(s, q))
