import pytest

from agiwelfare import ActionChannel, Entity, Grid, InstitutionalState
from agiwelfare.conditions import check_condition_iv
from agiwelfare.errors import ConfigurationError
from agiwelfare.externality import apply_correction, detect_autonomy_externalities, pigouvian_tau
from agiwelfare.pareto import autonomy_pareto_check
from helpers import cand, pair_economy


def channel_economy(effects, governed=False, actions=None):
    actions = actions or ("off",) + tuple(effects)
    ch = ActionChannel("m", "a", "k", actions, {a: {"s0": v} for a, v in effects.items()},
                       active_action=actions[-1])
    st = InstitutionalState("s0", governed_channels={"m"} if governed else set())
    e = pair_economy(extra_entities=(Entity("a", False),), sigma_extra={"a": "tool"},
                     grids={"a": Grid.singleton((0, 0))}, channels=(ch,), states=(st,))
    return e, cand({"h": (2, 2), "k": (2, 2), "a": (0, 0)}, actions={"m": actions[-1]})


def test_example2_has_one_externality(example2):
    e, c = example2
    found = detect_autonomy_externalities(e, c)
    assert len(found) == 1 and found[0].channel == "m" and found[0].effect == -2


def test_governed_or_null_channels_are_not_externalities():
    assert detect_autonomy_externalities(*channel_economy({"on": -2}, governed=True)) == []
    assert detect_autonomy_externalities(*channel_economy({"on": 0})) == []


@pytest.mark.parametrize(
    "effects, tau",
    [({"on": -2}, {"off": 0, "on": 2}), ({"on": 0}, {"off": 0, "on": 0}),
     ({"low": -1, "high": -3}, {"off": 0, "low": 1, "high": 3})],
)
def test_pigouvian_tau_negates_effect(effects, tau):
    e, c = channel_economy(effects)
    assert pigouvian_tau(e, "m", c) == tau


def test_step_must_be_positive(example2):
    e, c = example2
    with pytest.raises(ConfigurationError):
        pigouvian_tau(e, "m", c, step=0)


def test_correction_restores_condition_iv(example2):
    e, c = example2
    e2 = apply_correction(e, "m", pigouvian_tau(e, "m", c), state="s0")
    assert check_condition_iv(e2, c).verdict == "pass"
    assert autonomy_pareto_check(e2, c.state).efficient


def test_zero_tau_only_adds_governance():
    e, c = channel_economy({"on": 0})
    e2 = apply_correction(e, "m", pigouvian_tau(e, "m", c))
    assert e2.states[0].governed_channels == {"m"}
    assert e2.welfare == e.welfare and e2.grids == e.grids


def test_correction_is_idempotent(example2):
    e, c = example2
    tau = pigouvian_tau(e, "m", c)
    once = apply_correction(e, "m", tau)
    assert apply_correction(once, "m", tau) == once
