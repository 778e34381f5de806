import pytest

from agiwelfare import Entity, FeasibilityData, FeasibleState, Grid
from agiwelfare.errors import ResourceCapError
from agiwelfare.feasibility import aggregate_support_check, enumerate_feasible, is_feasible
from helpers import pair_economy


def test_exact_balance():
    e = pair_economy()
    assert is_feasible(e, FeasibleState({"h": (2, 2), "k": (2, 2)}, "s0"))
    assert not is_feasible(e, FeasibleState({"h": (3, 2), "k": (2, 2)}, "s0"))


def test_free_disposal():
    e = pair_economy(mode="free_disposal")
    assert is_feasible(e, FeasibleState({"h": (1, 1), "k": (2, 2)}, "s0"))


def test_single_entity_forced_by_balance():
    from dataclasses import replace

    e = pair_economy()
    e = replace(e, entities=(Entity("h", True), Entity("a", False)), sigma={"h": "agent", "a": "ws"},
                grids={"h": e.grids["h"], "a": Grid.singleton((0, 0))},
                welfare={"h": e.welfare["h"], "a": e.welfare["k"]},
                rights_class={"h": e.rights_class["h"]},
                feasibility=FeasibilityData((3, 3)))
    states = list(enumerate_feasible(e, "s0"))
    assert [fs.bundles["h"] for fs in states] == [(3, 3)]


def test_two_entities_on_unit_square():
    from dataclasses import replace

    g = Grid.lattice([range(2)] * 2)
    e = replace(pair_economy(), grids={"h": g, "k": g}, feasibility=FeasibilityData((1, 1)))
    got = sorted((fs.bundles["h"], fs.bundles["k"]) for fs in enumerate_feasible(e, "s0"))
    brute = sorted((a, b) for a in g for b in g if (a[0] + b[0], a[1] + b[1]) == (1, 1))
    assert got == brute and len(got) == 4


def test_cap_raises():
    from dataclasses import replace

    g = Grid.lattice([range(2)] * 2)
    e = replace(pair_economy(), grids={"h": g, "k": g}, feasibility=FeasibilityData((1, 1)))
    with pytest.raises(ResourceCapError):
        list(enumerate_feasible(e, "s0", cap=10))


def test_support_check():
    e = pair_economy()
    fs = FeasibleState({"h": (2, 2), "k": (2, 2)}, "s0")
    assert aggregate_support_check(e, fs, (5, -3)).passed
    fd = pair_economy(mode="free_disposal")
    assert aggregate_support_check(fd, fs, (1, 1)).passed
    short = FeasibleState({"h": (1, 2), "k": (2, 2)}, "s0")
    res = aggregate_support_check(fd, short, (1, 1))
    assert not res.passed and tuple(res.counterexample) == (4, 4)
