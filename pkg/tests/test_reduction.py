import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epistemic_pac import propcore
from epistemic_pac.formula import FALSE, TRUE, And, Iff, Implies, Know, parse, render
from epistemic_pac.reduction import (
    ReductionError,
    ReductionMode,
    check_dynamic_entailment,
    compare_modes,
    entails_know,
    entails_query,
    represent,
)
from epistemic_pac.scenario import Scenario, card_game_scenario
from epistemic_pac.semantics import brute_force_entails

import generators

TWO = Scenario(atoms={"p", "q"}, kb_root=parse("p | q"), kb_nested=parse("q -> p")).validate()
CARDS = card_game_scenario()


def test_implication_form_of_nested_knowledge():
    phi, psi, p = TWO.kb_root, TWO.kb_nested, parse("p")
    reduced = represent(parse("K_A K_B p"), TWO, ReductionMode.IMPLICATION)
    assert reduced.objective_result == Implies(phi, Implies(psi, p))
    assert render(reduced.objective_result) == "p | q -> (q -> p) -> p"
    assert propcore.is_valid(Iff(reduced.objective_result, Implies(And(phi, psi), p)))


def test_res_substitution_replaces_knowledge_by_constants():
    assert represent(parse("K_A K_B p"), TWO).objective_result is FALSE
    assert represent(parse("K_A (p | q)"), TWO).objective_result is TRUE
    assert render(represent(parse("q & !K_B p"), TWO).objective_result) == "q & !false"


def test_mode_aliases():
    assert ReductionMode.parse("res") is ReductionMode.RES
    assert ReductionMode.parse("implication-form") is ReductionMode.IMPLICATION
    with pytest.raises(ValueError):
        ReductionMode.parse("tseitin")


def test_negated_knowledge_needs_res():
    # A does not know p, so A knows that it does not know p
    q = parse("!K_A p")
    assert brute_force_entails(TWO, Know("A", q))
    assert compare_modes(TWO, q) == (True, False)


def test_cross_agent_nesting_diverges():
    # implication form lets phi leak into B's check: phi & psi |= q but psi does not
    s = Scenario(atoms={"p", "q"}, kb_root=parse("p"), kb_nested=parse("p -> q")).validate()
    q = parse("K_B q")
    assert compare_modes(s, q) == (False, True)
    assert not brute_force_entails(s, Know("A", q))


def test_disjunctive_knowledge_diverges(caplog):
    s = Scenario(atoms={"p", "q"}, kb_root=parse("p | q"), kb_nested=TRUE).validate()
    with caplog.at_level(logging.INFO, logger="epistemic_pac.reduction"):
        res, imp = compare_modes(s, parse("K_A p | K_A q"))
    assert (res, imp) == (False, True)
    assert not brute_force_entails(s, parse("K_A (K_A p | K_A q)"))
    assert "diverge" in caplog.text


def positive(rng, names, modal):
    """Queries built from objective formulas, conjunction and the root
    agent's knowledge."""
    if modal == 0 or rng.random() < 0.3:
        return generators.objective(rng, names, rng.randint(1, 3))
    if rng.random() < 0.4:
        return And(positive(rng, names, modal), positive(rng, names, modal))
    return Know("A", positive(rng, names, modal - 1))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_modes_agree_on_positive_conjunctive_queries(seed):
    rng = random.Random(seed)
    s = generators.scenario(rng, dynamic=False)
    q = positive(rng, sorted(s.atoms), 3)
    res, imp = compare_modes(s, q)
    assert res == imp


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_res_matches_oracle_on_knowledge_queries(seed):
    rng = random.Random(seed)
    s = generators.scenario(rng, dynamic=False)
    alpha = generators.query(rng, sorted(s.atoms), 2)
    assert entails_know(s, alpha) == brute_force_entails(s, Know("A", alpha))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_negation_is_exact_for_knowledge(seed):
    # under the canonical model, K_i b is settled: either it or its negation holds
    rng = random.Random(seed)
    s = generators.scenario(rng, dynamic=False)
    k = Know(rng.choice("AB"), generators.query(rng, sorted(s.atoms), 1))
    assert entails_query(s, k) != entails_query(s, ~k)


def test_card_game_dynamic_entailment():
    assert check_dynamic_entailment(CARDS, "rho_a4", parse("!nb4"))
    assert check_dynamic_entailment(CARDS, "rho_a4", CARDS.parse("wa & !K_B wa"))
    assert not check_dynamic_entailment(CARDS, "rho_a4", parse("wb"))
    # the real world does not produce A's reading of rho_a2
    assert not check_dynamic_entailment(CARDS, "rho_a2", parse("na2"))


def test_reduction_errors():
    with pytest.raises(ReductionError, match="only-knowing"):
        represent(parse("O_A p"), TWO)
    with pytest.raises(ReductionError, match="regress"):
        represent(CARDS.parse("[rho_a4] K_A na4"), CARDS)
