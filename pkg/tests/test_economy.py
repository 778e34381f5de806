from dataclasses import replace

import pytest

from agiwelfare import DelegateSpec, Entity, LinearWelfare, Status, validate_economy, welfare_bearing_set
from agiwelfare.economy import resolve_chain
from agiwelfare.errors import InputError
from helpers import pair_economy, square


def clauses(e):
    return [v.clause for v in validate_economy(e).violations]


def test_two_humans_and_a_tool_validate():
    from agiwelfare import Grid

    e = pair_economy(extra_entities=(Entity("a", False),), sigma_extra={"a": "tool"},
                     grids={"a": Grid.singleton((0, 0))})
    assert validate_economy(e).ok


def test_no_humans_is_a_violation():
    e = pair_economy()
    e = replace(e, entities=(Entity("h", False), Entity("k", False)))
    assert "entities: at least one human" in clauses(e)


def test_predecessor_cycle_does_not_terminate():
    d1 = DelegateSpec("d1", "h", LinearWelfare((1, 1)), predecessor="d2")
    d2 = DelegateSpec("d2", "h", LinearWelfare((1, 1)), predecessor="d1")
    e = pair_economy(delegates=(d1, d2), extra_entities=(Entity("d1", False), Entity("d2", False)),
                     sigma_extra={"d1": "delegate", "d2": "delegate"})
    res = validate_economy(e)
    assert any("does not terminate" in v.message for v in res.violations)
    with pytest.raises(InputError):
        resolve_chain(e, "d1")


def test_missing_sigma_names_the_entity():
    e = pair_economy(extra_entities=(Entity("a", False),), grids={"a": square()})
    bad = [v for v in validate_economy(e).violations if v.clause == "sigma: total"]
    assert [v.entity for v in bad] == ["a"]


def test_human_labelled_delegate_is_rejected():
    e = pair_economy(sigma_extra={"k": "delegate"})
    assert "sigma: humans welfare-bearing" in clauses(e)


@pytest.mark.parametrize(
    "sigma, expected",
    [
        ({"h1": "agent", "a1": "tool"}, {"h1"}),
        ({"h1": "agent", "a1": "ws"}, {"h1", "a1"}),
        ({"h1": "agent", "a1": "delegate"}, {"h1"}),
    ],
)
def test_welfare_bearing_set(sigma, expected):
    ents = (Entity("h1", True), Entity("a1", False))
    assert welfare_bearing_set({k: Status(v) for k, v in sigma.items()}, ents) == frozenset(expected)


def test_delegates_hold_no_bundle():
    e = pair_economy(delegates=(DelegateSpec("d", "h", LinearWelfare((1, 2))),),
                     extra_entities=(Entity("d", False),), sigma_extra={"d": "delegate"})
    assert e.holders() == ("h", "k")
    assert "d" not in e.welfare_bearing


def test_pinned_coordinates_follow_tags():
    e = pair_economy(tags=("assigned",))
    assert e.pinned_coordinates("h") == (1,)
    assert e.pinned_coordinates("h", strict=True) == ()
    e2 = pair_economy(tags=("protected",))
    assert e2.pinned_coordinates("h") == (1,)
    assert e2.pinned_coordinates("k") == ()
