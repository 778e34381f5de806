import math

import pytest

from agiwelfare import Grid, LinearWelfare, LogLinearWelfare, ShiftedWelfare, TabulatedWelfare
from agiwelfare.welfare import (
    check_local_nonsatiation,
    check_upper_contour_convexity,
    estimate_lipschitz,
)
from helpers import square


@pytest.mark.parametrize("w, b, v", [((1, 1), (2, 2), 4.0), ((2, 1), (3, 1), 7.0)])
def test_linear_values(w, b, v):
    assert LinearWelfare(w)(b, "s0") == v


def test_state_offset_applies_only_at_its_state():
    W = LinearWelfare((1, 1), {"s1": 1})
    assert W((1, 1), "s0") == 2
    assert W((1, 1), "s1") == 3


def test_tabulated_lookup():
    W = TabulatedWelfare({((0, 0), "s0"): 0})
    assert W((0, 0), "s0") == 0.0


def test_loglinear_and_shifted():
    W = LogLinearWelfare((1, 2))
    assert W((0, 0), "s0") == pytest.approx(0.0)
    assert W((1, 0), "s0") == pytest.approx(math.log(2))
    assert ShiftedWelfare(LinearWelfare((1, 0)), 3)((2, 5), "s0") == 5
    with pytest.raises(ValueError):
        LogLinearWelfare((-1, 1))


def test_nonsatiation_linear_passes_with_corner_on_frontier():
    res = check_local_nonsatiation(LinearWelfare((1, 1)), square(), "s0", radius=1)
    assert res.passed
    assert (3, 3) not in [p for p, _, _ in res.failing]


def test_nonsatiation_constant_fails_everywhere_inside():
    g = square()
    res = check_local_nonsatiation(LinearWelfare((0, 0), {"s0": 5}), g, "s0", radius=1)
    assert not res.passed
    assert {p for p, _, _ in res.failing} == {p for p in g if g.is_interior(p)}


def test_nonsatiation_flags_interior_bliss_point():
    g = Grid.lattice([range(3)])
    table = {((0,), "s0"): 0, ((1,), "s0"): 5, ((2,), "s0"): 1}
    res = check_local_nonsatiation(TabulatedWelfare(table), g, "s0", radius=1)
    assert [p for p, _, _ in res.failing] == [(1,)]


def test_lipschitz_estimates():
    assert estimate_lipschitz(LinearWelfare((3, 4)), [(0, 0), (3, 4)], "s0") == pytest.approx(5.0)
    assert estimate_lipschitz(LinearWelfare((3, 4)), [(1, 1)], "s0") == 0.0
    W = TabulatedWelfare({((0,), "s0"): 0, ((1,), "s0"): 7})
    assert estimate_lipschitz(W, [(0,), (1,)], "s0") == 7.0


def test_upper_contour_convexity():
    assert check_upper_contour_convexity(LinearWelfare((1, 2)), square(), "s0", (1, 1))
    g = Grid.lattice([range(3)])
    islands = TabulatedWelfare({((0,), "s0"): 5, ((1,), "s0"): 0, ((2,), "s0"): 5})
    assert not check_upper_contour_convexity(islands, g, "s0", (0,))
    sparse = Grid(((0,), (3,)))
    W = TabulatedWelfare({((0,), "s0"): 1, ((3,), "s0"): 1})
    assert check_upper_contour_convexity(W, sparse, "s0", (0,))
