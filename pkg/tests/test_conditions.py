from dataclasses import replace

import pytest

from agiwelfare import ActionChannel, Attribute, Entity, Grid, InstitutionalState, LinearWelfare
from agiwelfare.conditions import (
    CONDITIONS,
    MARGINS,
    check_condition_i,
    check_condition_iv,
    check_condition_v,
    check_condition_vi,
    check_condition_vii,
    diagnose,
)
from agiwelfare.errors import InputError
from agiwelfare.scenarios import scenario
from helpers import cand, pair_economy, with_delegate

C22 = {"h": (2, 2), "k": (2, 2)}


def test_margin_names_are_the_seven_margins():
    assert list(MARGINS) == list(CONDITIONS)
    assert MARGINS["iv"] == "autonomy externality"


def test_condition_i():
    assert check_condition_i(pair_economy()).verdict == "pass"
    e = pair_economy(extra_entities=(Entity("a", False),), grids={"a": Grid.singleton((0, 0))})
    r = check_condition_i(e)
    assert r.verdict == "fail" and r.witness[0]["entity"] == "a"
    assert check_condition_i(pair_economy(sigma_extra={"k": "delegate"})).verdict == "fail"


def test_condition_iii_weight_flip_sup_three():
    e = with_delegate(LinearWelfare((1, 2)), wh=(2, 1))
    rep = diagnose(e, cand({"h": (1, 3), "k": (3, 1)}))
    ent = rep.entries["iii"]
    assert ent.verdict == "fail" and ent.witness[0]["sup_abs"] == 3.0


def test_condition_iii_faithful_and_internalized():
    c = cand(C22)
    assert diagnose(with_delegate(LinearWelfare((1, 1))), c).entries["iii"].verdict == "pass"
    cost = {(x, r): 0 for x in range(4) for r in range(4)}
    e = with_delegate(LinearWelfare((1, 2)), internalized=True, cost=cost)
    assert diagnose(e, c).entries["iii"].verdict == "pass"


def _channel_economy(effect=-2, governed=False):
    ch = ActionChannel("m", "a", "k", ("off", "on"), {"on": {"s0": effect}}, active_action="on")
    st = InstitutionalState("s0", governed_channels={"m"} if governed else set())
    return pair_economy(extra_entities=(Entity("a", False),), sigma_extra={"a": "tool"},
                        grids={"a": Grid.singleton((0, 0))}, channels=(ch,), states=(st,))


def test_condition_iv():
    c = cand({**C22, "a": (0, 0)}, actions={"m": "on"})
    assert check_condition_iv(_channel_economy(), c).verdict == "fail"
    assert check_condition_iv(_channel_economy(governed=True), c).verdict == "pass"
    assert check_condition_iv(pair_economy(), cand(C22)).verdict == "pass"


def test_condition_v():
    e = pair_economy()
    pooled = replace(e, attributes=(Attribute("prov", "provenance", ("real", "fake"), {"real": 0, "fake": 0}),))
    r = check_condition_v(pooled, cand(C22))
    assert r.verdict == "fail" and r.witness[0]["reason"] == "pooling"
    split = replace(e, attributes=(Attribute("prov", "provenance", ("real", "fake"), {"real": 0, "fake": 1}),))
    assert check_condition_v(split, cand(C22)).verdict == "pass"
    assert check_condition_v(e, cand(C22)).verdict == "pass"


def test_unpriced_attribute_passes_once_verified():
    e = pair_economy()
    e = replace(e, attributes=(Attribute("q", "quality", ("good", "bad"), {"good": 0, "bad": None}),))
    assert check_condition_v(e, cand(C22)).verdict == "fail"
    ver = replace(e, states=(InstitutionalState("s0", verified_attributes={"q"}),))
    assert check_condition_v(ver, cand(C22)).verdict == "pass"


def test_condition_vi():
    assert check_condition_vi(pair_economy(), cand(C22)).verdict == "pass"
    e = replace(pair_economy(), entities=(Entity("h", True), Entity("k", True, price_setter=True)))
    r = check_condition_vi(e, cand(C22))
    assert r.verdict == "fail" and r.witness[0]["reason"] == "price-setting capability"


def test_condition_vii():
    assert check_condition_vii(pair_economy()).verdict == "pass"
    flat = pair_economy(wh=(0, 0))
    assert check_condition_vii(flat).verdict == "fail"


def test_all_pass_instance(e0):
    rep = diagnose(*e0)
    assert rep.all_pass and rep.first_fail is None
    assert [x["verdict"] for x in rep.to_dict()["conditions"]] == ["pass"] * 7


@pytest.mark.parametrize("name, first", [("example1", "iii"), ("example2", "iv"), ("example3", "v")])
def test_first_fail_on_scenarios(name, first):
    e, c, _ = scenario(name)
    assert diagnose(e, c).first_fail == first


def test_every_condition_is_evaluated_after_a_failure():
    e, c, _ = scenario("example1")
    rep = diagnose(e, c)
    assert set(rep.entries) == set(CONDITIONS)
    assert rep.failing[0] == "iii" and len(rep.failing) >= 1


def test_structural_violation_is_input_error():
    e = replace(pair_economy(), feasibility=None)
    with pytest.raises(InputError):
        diagnose(e, cand(C22))
