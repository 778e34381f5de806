import pytest

from agiwelfare.conditions import diagnose
from agiwelfare.errors import InputError
from agiwelfare.pareto import autonomy_pareto_check
from agiwelfare.scenarios import (
    SCENARIOS,
    generate_channel_instance,
    generate_classical_instance,
    generate_delegation_instance,
    generate_epsilon_instance,
    generate_random_economy,
    generate_tiny_instance,
    scenario,
)


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_scenario_matches_its_expectation(name):
    e, c, exp = scenario(name)
    assert diagnose(e, c).first_fail == exp.first_fail
    if exp.efficient is not None:
        assert autonomy_pareto_check(e, c.state).efficient == exp.efficient


def test_unknown_scenario():
    with pytest.raises(InputError):
        scenario("nope")


def test_seed_42_conforming_and_ablated():
    assert diagnose(*generate_random_economy(42)).all_pass
    assert diagnose(*generate_random_economy(42, ablate="iv")).first_fail == "iv"


def test_generators_are_deterministic():
    assert generate_random_economy(3) == generate_random_economy(3)
    for gen in (generate_delegation_instance, generate_classical_instance,
                generate_channel_instance, generate_tiny_instance):
        assert gen(11) == gen(11)
    assert generate_epsilon_instance(5, 0.1) == generate_epsilon_instance(5, 0.1)


def test_profile_bounds_are_enforced():
    with pytest.raises(InputError):
        generate_random_economy(1, profile={"entities": 9})
    with pytest.raises(InputError):
        generate_random_economy(1, ablate="i")


def test_d2_only_exposed_target_is_flagged():
    e, c, _ = scenario("d2_hetero")
    targets = {w["target"] for w in diagnose(e, c).entries["iv"].witness}
    assert targets == {"j1"}


def test_d1_chain_fails_at_composed_level():
    e, c, _ = scenario("d1_chain")
    w = diagnose(e, c).entries["iii"].witness
    assert w[0]["level"] == "composed" and w[0]["sup_abs"] == 4.0
