from dataclasses import replace

import pytest

from agiwelfare import Entity, Grid, LinearWelfare
from agiwelfare.errors import DomainError, ResourceCapError
from agiwelfare.pareto import (
    autonomy_pareto_check,
    classical_pareto_check,
    compare_status_assignments,
)
from agiwelfare.scenarios import D3_SIGMA1, D3_SIGMA2, scenario
from helpers import cand, pair_economy
from naive_oracle import naive_pareto


def test_e0_is_efficient(e0):
    e, c = e0
    assert autonomy_pareto_check(e, c.state).efficient
    assert naive_pareto(e, c.state)[0]


def test_example1_state_has_the_flip_improver():
    e, c, _ = scenario("example1")
    v = autonomy_pareto_check(e, c.state)
    assert not v.efficient and v.improved_entity == "h"
    assert v.improver.bundles["h"] == (3, 1)
    assert v.welfare_table["h"] == (5, 7)


def test_single_bearer_at_argmax_is_efficient():
    e = pair_economy(sigma_extra={}, wh=(1, 1))
    e = replace(e, entities=(Entity("h", True), Entity("k", False)), sigma={"h": "agent", "k": "tool"},
                welfare={"h": e.welfare["h"]})
    c = cand({"h": (3, 3), "k": (1, 1)})
    assert autonomy_pareto_check(e, c.state).efficient


def test_improver_is_feasible_and_dominates():
    e, c, _ = scenario("example1")
    v = autonomy_pareto_check(e, c.state)
    for i, (b, a) in v.welfare_table.items():
        assert a >= b
    assert any(a > b for b, a in v.welfare_table.values())


def test_cap():
    e, c, _ = scenario("example1")
    with pytest.raises(ResourceCapError):
        autonomy_pareto_check(e, c.state, cap=3)


def test_classical_matches_on_tool_only(e0):
    e, c = e0
    assert classical_pareto_check(e, c.state).efficient == autonomy_pareto_check(e, c.state).efficient


def test_classical_rejects_agents():
    e, c, _ = scenario("d3_contested")
    with pytest.raises(DomainError):
        classical_pareto_check(e, c.state)


def test_classical_without_rights(e0):
    e, c = e0
    assert e.L_r == 0
    assert classical_pareto_check(e, c.state).to_dict()["efficient"] is True


def test_status_comparison_disagrees_on_contested_entity():
    e, c, _ = scenario("d3_contested")
    cmp = compare_status_assignments(e, c.state, D3_SIGMA1, D3_SIGMA2)
    assert (cmp.first.efficient, cmp.second.efficient) == (True, False)
    assert not cmp.agree
    assert any("'c'" in d and "fixed under sigma1" in d for d in cmp.policy_differences)


def test_status_comparison_same_sigma_agrees():
    e, c, _ = scenario("d3_contested")
    cmp = compare_status_assignments(e, c.state, D3_SIGMA2, D3_SIGMA2)
    assert cmp.agree and cmp.policy_differences == []


def test_channel_improver_switches_action_off(example2):
    e, c = example2
    v = autonomy_pareto_check(e, c.state)
    assert not v.efficient and v.improver.actions["m"] == "off"
    # with the action held at "on" every reallocation conserves total welfare
    assert autonomy_pareto_check(e, c.state, vary_actions=False).efficient


def test_strict_mode_varies_pinned_rights():
    e = pair_economy(tags=("assigned",), wh=(1, 2))
    c = cand({"h": (3, 1), "k": (1, 3)})
    base = autonomy_pareto_check(e, c.state)
    strict = autonomy_pareto_check(e, c.state, strict=True)
    assert base.efficient
    assert not strict.efficient
