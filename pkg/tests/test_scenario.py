import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epistemic_pac import propcore
from epistemic_pac.formula import TRUE, Atom, Not, conjoin, parse
from epistemic_pac.scenario import (
    Observation,
    Scenario,
    ScenarioError,
    SensingEntry,
    card,
    card_game_kb,
    card_game_scenario,
    dump_scenario,
    load_scenario,
    observations_from,
    parse_observations,
    validate_observation,
)
from epistemic_pac.semantics import all_worlds, evaluate

import random
from generators import scenario as random_scenario

SAMPLE = """\
# two atoms, different bases
[agents]
root = A
other = B

[atoms]
p q

[kb_root]
p | q

[kb_nested]
q -> p

[real_world]
p

[action look]
obs_A = p
obs_B = true
"""


def test_load_sample():
    s = load_scenario(SAMPLE)
    assert s.atoms == {"p", "q"}
    assert s.kb_root == parse("p | q")
    assert s.kb_nested == parse("q -> p")
    assert s.real_world == Atom("p")
    assert s.sense_of("look", "A") == Atom("p")
    assert s.sense_of("look", "B") is TRUE
    assert s.kb_of("B") == s.kb_nested


def test_missing_reading_defaults_to_true():
    s = load_scenario(SAMPLE.replace("obs_B = true\n", ""))
    assert s.sense_of("look", "B") is TRUE


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_dump_load_round_trip(seed):
    s = random_scenario(random.Random(seed))
    assert load_scenario(dump_scenario(s)) == s


def test_card_game_round_trip():
    s = card_game_scenario()
    assert load_scenario(dump_scenario(s)) == s


@pytest.mark.parametrize(
    "patch, message, line",
    [
        (("p | q\n\n[kb_nested]", "p | zz\n\n[kb_nested]"), "undeclared atoms zz", None),
        (("[real_world]\np", "[real_world]\n!p & !q"), "unsatisfiable premise", None),
        (("obs_A = p", "obs_A = p | q"), "conjunction of literals", None),
        (("obs_A = p", "obs_C = p"), "unknown agent", 19),
        (("root = A", "root = A, C"), "two-agent engine", 3),
        (("[kb_root]\np | q", "[kb_root]\np | (q"), r"expected '\)'", 10),
        (("[real_world]", "[kb_nested]\np\n[real_world]"), "nested more than two", None),
        (("[kb_root]\np | q", "[kb_root]\nK_A p"), "not objective", None),
        (("[atoms]", "[wrong]"), "unknown section", 6),
    ],
)
def test_load_errors(patch, message, line):
    old, new = patch
    assert old in SAMPLE
    with pytest.raises(ScenarioError, match=message) as info:
        load_scenario(SAMPLE.replace(old, new), source="bad.scn")
    assert "bad.scn" in str(info.value)
    if line is not None:
        assert info.value.line == line


def test_card_game_has_twelve_deals():
    s = card_game_scenario()
    models = [w for w in all_worlds(s.atoms) if evaluate(w, s.kb_root)]
    assert len(models) == 12
    # property facts of the deal
    assert propcore.entails(s.kb_root & s.real_world, Atom("wa") & Not(Atom("wb")))
    assert propcore.entails(s.kb_root, Not(Atom("wa") & Atom("wb")))


def test_literal_no_winner_axiom_is_inconsistent():
    # "no one has won yet" contradicts the winner definitions on distinct cards
    kb = conjoin([card_game_kb(), Not(Atom("wa")), Not(Atom("wb"))])
    assert not propcore.is_satisfiable(kb)


def test_card_game_actions():
    s = card_game_scenario()
    assert len(s.actions) == 4 + 4 + 12
    assert s.sense_of("rho_a4_b3", "B") == card("b", 3)
    assert s.sense_of("rho_b2", "A") is TRUE


def test_observations_validated_against_root_base():
    s = card_game_scenario()
    obs = observations_from(s, ["na4", "na3", "rho_a2"])
    assert [o.action for o in obs] == [None, None, "rho_a2"]
    # na3 contradicts the real deal but not kb_root
    with pytest.raises(ScenarioError, match="knowledge expansion"):
        validate_observation(s, Observation(Atom("na3")))
    with pytest.raises(ScenarioError, match="knowledge expansion"):
        observations_from(s, ["na3 & na4"])
    with pytest.raises(ScenarioError, match="conjunction of literals"):
        observations_from(s, ["na3 | na4"])


def test_parse_observation_file():
    s = card_game_scenario()
    text = "# episodes\nraw: na4\nrho_a3\n\nraw: na4 & !nb1\n"
    obs = parse_observations(text, s, source="ex.obs")
    assert [str(o) for o in obs] == ["raw: na4", "rho_a3", "raw: na4 & !nb1"]
    with pytest.raises(ScenarioError, match="ex.obs:2:") as info:
        parse_observations("raw: na4\nrho_zz\n", s, source="ex.obs")
    assert info.value.line == 2


def test_scenario_construction_checks():
    with pytest.raises(ScenarioError, match="must differ"):
        Scenario(atoms={"p"}, kb_root=TRUE, root="A", other="A").validate()
    s = Scenario(atoms={"p"}, kb_root=TRUE, actions={"a": SensingEntry({"A": Atom("p")})})
    with pytest.raises(ScenarioError, match="unknown action"):
        s.sense_of("b", "A")
    with pytest.raises(ScenarioError, match="undeclared"):
        s.parse("q")
    assert s.premise == conjoin([TRUE, TRUE, TRUE])
