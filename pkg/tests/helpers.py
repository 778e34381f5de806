"""Small economy builders shared by the unit tests."""

from agiwelfare import (
    DelegateSpec,
    Economy,
    Entity,
    EquilibriumCandidate,
    FeasibilityData,
    FeasibleState,
    Grid,
    InstitutionalState,
    LinearWelfare,
    RightsClassification,
)


def square(side=4, dim=2):
    return Grid.lattice([range(side)] * dim)


def pair_economy(wh=(1, 1), wk=(1, 1), tags=("priced",), mode="exact", delegates=(), extra_entities=(),
                 sigma_extra=None, states=None, **kw):
    """Two humans ``h`` and ``k`` on {0..3}^2 (one commodity, one right) with omega (4, 4)."""
    ents = (Entity("h", True), Entity("k", True), *extra_entities)
    sigma = {"h": "agent", "k": "agent", **(sigma_extra or {})}
    g = square()
    return Economy(
        entities=ents, sigma=sigma, grids={"h": g, "k": g, **kw.pop("grids", {})},
        commodities=("x",), rights=("r",),
        rights_class={"h": RightsClassification(tags), "k": RightsClassification(("priced",))},
        states=states or (InstitutionalState("s0"),),
        welfare={"h": LinearWelfare(wh), "k": LinearWelfare(wk), **kw.pop("welfare", {})},
        delegates=tuple(delegates),
        feasibility=FeasibilityData((4, 4), (), mode),
        **kw,
    )


def cand(bundles, prices=(1, 1), state="s0", actions=None):
    return EquilibriumCandidate(FeasibleState(bundles, state, actions or {}), prices)


def with_delegate(objective, principal="h", internalized=False, cost=None, **kw):
    d = DelegateSpec("d", principal, objective, agency_cost=cost)
    states = (InstitutionalState("s0", internalized_delegates={"d"} if internalized else set()),)
    return pair_economy(delegates=(d,), extra_entities=(Entity("d", False),),
                        sigma_extra={"d": "delegate"}, states=states, **kw)
