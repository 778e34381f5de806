import pytest

from agiwelfare.errors import InputError
from agiwelfare.lindahl import LindahlBlock, cross_state_pareto_check, lindahl_budget_check
from agiwelfare.equilibrium import check_consumer_optimization
from agiwelfare.pareto import autonomy_pareto_check
from agiwelfare.scenarios import scenario


def test_zero_block_reduces_to_base(e0):
    e, c = e0
    block = LindahlBlock.zero(e.welfare_bearing_ordered(), ["s0"])
    assert lindahl_budget_check(e, c, block).to_dict() == check_consumer_optimization(e, c).to_dict()
    assert cross_state_pareto_check(e, c.state, block).to_dict() == autonomy_pareto_check(e, c.state).to_dict()


def test_sum_constraint():
    LindahlBlock((1.0,), {"a": (0.6,), "b": (0.4,)}, {"s0": (0,)})
    with pytest.raises(InputError):
        LindahlBlock((1.0,), {"a": (0.6,), "b": (0.5,)}, {"s0": (0,)})


def test_cross_state_improver_only_in_lindahl_mode():
    e, c, exp = scenario("lindahl_two_state")
    block = exp.extra["lindahl"]
    assert autonomy_pareto_check(e, c.state).efficient
    v = cross_state_pareto_check(e, c.state, block)
    assert not v.efficient and v.improver.state == "s1"


def test_identical_offsets_match_base(e0):
    from dataclasses import replace

    from agiwelfare import InstitutionalState

    e, c = e0
    e = replace(e, states=(InstitutionalState("s0"), InstitutionalState("s1")))
    block = LindahlBlock((1,), {"h1": (0.5,), "h2": (0.5,)}, {"s0": (0,), "s1": (1,)})
    assert cross_state_pareto_check(e, c.state, block).efficient


def test_cross_state_budget_option():
    e, c, exp = scenario("lindahl_two_state")
    block = exp.extra["lindahl"]
    assert lindahl_budget_check(e, c, block).passed
    cross = lindahl_budget_check(e, c, block, cross_state=True)
    assert "witness_state" in cross.details["entities"]["h1"]
