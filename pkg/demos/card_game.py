"""
Who knows what in a two-card game
=================================

Two players each hold one of four numbered cards and the higher card wins.
A holds 4 and B holds 3.  Both start from the same rules.  We ask what A
knows before and after looking at its own card, including what A knows
about B's knowledge.
"""

from epistemic_pac import brute_force_entails, card_game_scenario, entails_query, regress, render

s = card_game_scenario()
print("real deal:", render(s.real_world))

# before looking, A cannot name its own card
q = s.parse("!K_A na1 & !K_A na2 & !K_A na3 & !K_A na4")
print("A does not know its card:", entails_query(s, q))

# after sensing its card, A knows it holds 4 and that it wins
for text in ["[rho_a4] K_A na4", "[rho_a4] K_A wa", "[rho_a4] K_A !nb4"]:
    print(f"{text:30}", entails_query(s, s.parse(text)))

# A also knows B has not seen A's card, so B cannot know who won
q = s.parse("[rho_a4] K_A !K_B wa")
print(f"{'[rho_a4] K_A !K_B wa':30}", entails_query(s, q))

# regression turns the observation into plain knowledge claims
print("regressed:", render(regress(q, s)))

# the brute-force oracle walks the worlds directly and should agree
print("oracle agrees:", brute_force_entails(s, q))

# when both look at their own cards, A knows B knows B does not hold 4
q = s.parse("[rho_a4_b3] K_A K_B !nb4")
print(f"{'[rho_a4_b3] K_A K_B !nb4':30}", entails_query(s, q), brute_force_entails(s, q))
