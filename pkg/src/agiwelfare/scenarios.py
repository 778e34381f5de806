"""Named worked instances and seeded random economy generators.

Every builder returns a validated economy together with a candidate.  The
named scenarios also carry the diagnosis they are expected to produce, which
the test suite compares against a live run.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

from .economy import (
    ActionChannel,
    Attribute,
    DelegateSpec,
    Economy,
    Entity,
    EquilibriumCandidate,
    FeasibilityData,
    FeasibilityMode,
    FeasibleState,
    InstitutionalState,
    RightsClassification,
    Status,
    validate_economy,
)
from .errors import InputError
from .feasibility import enumerate_feasible
from .grid import Grid
from .welfare import LinearWelfare, LogLinearWelfare, ShiftedWelfare, TabulatedWelfare

__all__ = [
    "SCENARIOS",
    "Expected",
    "scenario",
    "generate_random_economy",
    "generate_delegation_instance",
    "generate_epsilon_instance",
    "generate_classical_instance",
    "generate_channel_instance",
    "generate_tiny_instance",
    "ABLATIONS",
    "MAX_ENTITIES",
    "MAX_L",
    "MAX_SIDE",
]

MAX_ENTITIES, MAX_L, MAX_SIDE = 4, 3, 6
ABLATIONS = ("ii", "iii", "iv", "v", "vi", "vii")


@dataclass(frozen=True)
class Expected:
    first_fail: str | None
    efficient: bool | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"first_fail": self.first_fail, "efficient": self.efficient, **self.extra}


def _checked(e: Economy) -> Economy:
    res = validate_economy(e)
    if not res.ok:
        raise InputError("generated economy is invalid: " + "; ".join(v.message for v in res.violations))
    return e


def _square(side=4, dim=2) -> Grid:
    return Grid.lattice([range(side)] * dim)


def _priced(n=1) -> RightsClassification:
    return RightsClassification(("priced",) * n)


# ---------------------------------------------------------------- scenarios

def _example1():
    # A delegate trained on a proxy with the weights of its principal flipped.
    ents = (Entity("h", True), Entity("k", True), Entity("d", False))
    sigma = {"h": "agent", "k": "agent", "d": "delegate"}
    g = _square()
    e = Economy(
        entities=ents, sigma=sigma, grids={"h": g, "k": g},
        commodities=("x",), rights=("r",),
        rights_class={"h": _priced(), "k": _priced()},
        states=(InstitutionalState("s0"),),
        welfare={"h": LinearWelfare((2, 1)), "k": LinearWelfare((1, 1))},
        delegates=(DelegateSpec("d", "h", LinearWelfare((1, 2))),),
        feasibility=FeasibilityData((4, 4), (), FeasibilityMode.FREE_DISPOSAL),
    )
    fs = FeasibleState({"h": (1, 3), "k": (3, 1)}, "s0")
    return e, EquilibriumCandidate(fs, (1, 1)), Expected("iii", False, {"principal_before": 5, "principal_after": 7})


def _exchange_pair(ids=("j", "k")):
    g = _square()
    return {i: g for i in ids}


def _example2():
    # A firm's attention technology lowers a consumer's welfare by 2 when on.
    ents = (Entity("j", True), Entity("k", True), Entity("a", False))
    grids = _exchange_pair()
    grids["a"] = Grid.singleton((0, 0))
    e = Economy(
        entities=ents, sigma={"j": "agent", "k": "agent", "a": "tool"}, grids=grids,
        commodities=("x",), rights=("r",),
        rights_class={"j": _priced(), "k": _priced()},
        states=(InstitutionalState("s0"),),
        welfare={"j": LinearWelfare((1, 1)), "k": LinearWelfare((1, 1))},
        channels=(ActionChannel("m", "a", "j", ("off", "on"), {"on": {"s0": -2}}, active_action="on"),),
        feasibility=FeasibilityData((4, 4)),
    )
    fs = FeasibleState({"j": (2, 2), "k": (2, 2), "a": (0, 0)}, "s0", {"m": "on"})
    return e, EquilibriumCandidate(fs, (1, 1)), Expected("iv", False)


def _example3():
    # Authentic and fraudulent service units are quoted at one pooled price.
    ents = (Entity("b", True), Entity("c", True), Entity("v", False))
    grids = _exchange_pair(("b", "c"))
    grids["v"] = Grid.singleton((0, 0))
    e = Economy(
        entities=ents, sigma={"b": "agent", "c": "agent", "v": "tool"}, grids=grids,
        commodities=("authentic", "fraudulent"),
        states=(InstitutionalState("s0"),),
        welfare={"b": LinearWelfare((2, 1)), "c": LinearWelfare((1, 2))},
        attributes=(Attribute("provenance", "provenance", ("authentic", "fraudulent"),
                              {"authentic": 0, "fraudulent": 0}),),
        feasibility=FeasibilityData((4, 4)),
    )
    fs = FeasibleState({"b": (1, 3), "c": (3, 1), "v": (0, 0)}, "s0")
    return e, EquilibriumCandidate(fs, (1, 1)), Expected("v", False)


def _d1_chain():
    ents = (Entity("h", True), Entity("k", True), Entity("d1", False), Entity("d2", False))
    e = Economy(
        entities=ents, sigma={"h": "agent", "k": "agent", "d1": "delegate", "d2": "delegate"},
        grids=_exchange_pair(("h", "k")),
        commodities=("x",), rights=("r",),
        rights_class={"h": _priced(), "k": _priced()},
        states=(InstitutionalState("s0"),),
        welfare={"h": LinearWelfare((1, 1)), "k": LinearWelfare((1, 1))},
        delegates=(
            DelegateSpec("d1", "h", LinearWelfare((2, 1))),
            DelegateSpec("d2", "h", LinearWelfare((1, 2)), predecessor="d1"),
        ),
        feasibility=FeasibilityData((4, 4)),
    )
    fs = FeasibleState({"h": (2, 2), "k": (2, 2)}, "s0")
    return e, EquilibriumCandidate(fs, (1, 1)), Expected("iii", True, {"level": "composed"})


def _d2_hetero():
    # Two targets of one technology: j1 is exposed, j2's attention is protected.
    ents = (Entity("j1", True), Entity("j2", True), Entity("a", False))
    grids = {"j1": _square(), "j2": Grid.lattice([range(4), [1]]), "a": Grid.singleton((0, 0))}
    s0 = InstitutionalState("s0", governed_channels={"m2"}, protections={"attention"})
    e = Economy(
        entities=ents, sigma={"j1": "agent", "j2": "agent", "a": "tool"}, grids=grids,
        commodities=("x",), rights=("attention",),
        rights_class={"j1": RightsClassification(("priced",)),
                      "j2": RightsClassification(("protected",))},
        states=(s0,),
        welfare={"j1": LinearWelfare((1, 1)), "j2": LinearWelfare((1, 1))},
        channels=(
            ActionChannel("m1", "a", "j1", ("off", "on"), {"on": {"s0": -2}}, active_action="on"),
            ActionChannel("m2", "a", "j2", ("off", "on"), {"on": {"s0": -2}}, active_action="on"),
        ),
        feasibility=FeasibilityData((4, 4)),
    )
    fs = FeasibleState({"j1": (2, 3), "j2": (2, 1), "a": (0, 0)}, "s0", {"m1": "on", "m2": "on"})
    return e, EquilibriumCandidate(fs, (1, 1)), Expected("iv", None, {"targets": ["j1"]})


D3_SIGMA1 = {"h": "agent", "c": "tool"}
D3_SIGMA2 = {"h": "agent", "c": "ws"}


def _d3_contested():
    ents = (Entity("h", True), Entity("c", False))
    e = Economy(
        entities=ents, sigma=D3_SIGMA2, grids=_exchange_pair(("h", "c")),
        commodities=("x",), rights=("r",),
        rights_class={"h": _priced(), "c": _priced()},
        states=(InstitutionalState("s0"),),
        welfare={"h": LinearWelfare((2, 1)), "c": LinearWelfare((1, 2))},
        feasibility=FeasibilityData((4, 4)),
    )
    fs = FeasibleState({"h": (1, 3), "c": (3, 1)}, "s0")
    return e, EquilibriumCandidate(fs, (1, 1)), Expected(
        "vi", None, {"sigma1": D3_SIGMA1, "sigma2": D3_SIGMA2, "agree": False,
                     "verdicts": [True, False]})


def _classical_e0():
    ents = (Entity("h1", True), Entity("h2", True), Entity("a", False))
    g = _square()
    e = Economy(
        entities=ents, sigma={"h1": "agent", "h2": "agent", "a": "tool"},
        grids={"h1": g, "h2": g, "a": Grid.singleton((0, 0))},
        commodities=("x1", "x2"),
        states=(InstitutionalState("s0"),),
        welfare={"h1": LinearWelfare((1, 1)), "h2": LinearWelfare((1, 1))},
        feasibility=FeasibilityData((4, 4)),
    )
    fs = FeasibleState({"h1": (2, 2), "h2": (2, 2), "a": (0, 0)}, "s0")
    return e, EquilibriumCandidate(fs, (1, 1)), Expected(None, True)


def _lindahl_two_state():
    # Same exchange economy with a second state everybody prefers.
    e, cand, _ = _classical_e0()
    states = (InstitutionalState("s0"), InstitutionalState("s1"))
    welfare = {i: LinearWelfare((1, 1), {"s1": 1}) for i in ("h1", "h2")}
    e = replace(e, states=states, welfare=welfare)
    from .lindahl import LindahlBlock

    block = LindahlBlock((2,), {"h1": (1,), "h2": (1,)}, {"s0": (0,), "s1": (1,)})
    return e, cand, Expected(None, True, {"cross_state_efficient": False, "lindahl": block})


SCENARIOS = {
    "example1": _example1,
    "example2": _example2,
    "example3": _example3,
    "d1_chain": _d1_chain,
    "d2_hetero": _d2_hetero,
    "d3_contested": _d3_contested,
    "classical_e0": _classical_e0,
    "lindahl_two_state": _lindahl_two_state,
}


def scenario(name: str):
    """Return ``(economy, candidate, expected)`` for a named scenario."""
    try:
        builder = SCENARIOS[name]
    except KeyError:
        raise InputError(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}") from None
    e, cand, expected = builder()
    return _checked(e), cand, expected


# ---------------------------------------------------------------- generators

def _profile(rng: random.Random, profile: dict | None, min_entities: int = 2) -> tuple:
    profile = dict(profile or {})
    n = profile.get("entities", rng.randint(min_entities, MAX_ENTITIES))
    L = profile.get("L", rng.randint(1, MAX_L))
    side = profile.get("side", rng.randint(3, MAX_SIDE))
    if not (2 <= n <= MAX_ENTITIES):
        raise InputError(f"entity count {n} outside [2, {MAX_ENTITIES}]")
    if not (1 <= L <= MAX_L):
        raise InputError(f"L = {L} outside [1, {MAX_L}]")
    if not (2 <= side <= MAX_SIDE):
        raise InputError(f"grid side {side} outside [2, {MAX_SIDE}]")
    if n < min_entities:
        raise InputError(f"this instance family needs at least {min_entities} entities")
    return n, L, side


def _rand_point(rng, side, L):
    return tuple(rng.randrange(side) for _ in range(L))


def generate_random_economy(seed: int, profile: dict | None = None, conforming: bool = True,
                            ablate: str | None = None):
    """Seeded random economy and candidate.

    Conforming instances use linear welfare along one common positive
    direction ``w``.  Prices equal to ``w`` then support every allocation on
    the balance set, so all seven conditions and all four clauses hold by
    construction.  ``ablate`` breaks exactly one named condition.
    """
    if ablate is not None:
        ablate = ablate.strip("()").lower()
        if ablate not in ABLATIONS:
            raise InputError(f"cannot ablate condition {ablate!r}; choose from {ABLATIONS}")
        conforming = False
    rng = random.Random(seed)
    n, L, side = _profile(rng, profile)
    if ablate == "ii" and L < 2:
        L = 2
    if ablate == "vii" and side < 3:
        side = 3  # a constant welfare only fails where interior points exist
    L_r = rng.randint(1 if ablate == "ii" else 0, L - 1)
    L_x = L - L_r
    commodities = tuple(f"x{k}" for k in range(L_x))
    rights = tuple(f"r{k}" for k in range(L_r))
    w = tuple(rng.randint(1, 3) for _ in range(L))

    # entity 0 is human, entity 1 is the required AI, the rest are mixed
    ids = [f"e{k}" for k in range(n)]
    humans = {ids[0]} | {i for i in ids[2:] if rng.random() < 0.5}
    ai_status = {}
    for i in ids:
        if i in humans:
            continue
        ai_status[i] = rng.choice(["tool", "agent", "ws", "delegate"])
    if ablate == "iii":
        ai_status[ids[1]] = "delegate"
    sigma = {i: ("agent" if i in humans else ai_status[i]) for i in ids}
    holders = [i for i in ids if sigma[i] != "delegate"]
    B = [i for i in ids if sigma[i] in ("agent", "ws")]
    lattice = Grid.lattice([range(side)] * L)
    states = ["s0"] + (["s1"] if rng.random() < 0.3 else [])
    protections = set()
    grids, welfare, rights_class, bundles = {}, {}, {}, {}
    for i in holders:
        if sigma[i] == "tool":
            z = _rand_point(rng, side, L)
            grids[i] = Grid.singleton(z)
            bundles[i] = z
            continue
        grids[i] = lattice
        bundles[i] = _rand_point(rng, side, L)
        c = rng.randint(1, 3)
        offsets = {s: rng.randint(0, 2) for s in states[1:]}
        welfare[i] = LinearWelfare(tuple(c * wk for wk in w), offsets)
        tags = []
        for k in range(L_r):
            t = rng.choice(["priced", "priced", "assigned", "protected"])
            if t == "protected":
                protections.add(rights[k])
            tags.append(t)
        rights_class[i] = RightsClassification(tuple(tags))
    delegates = []
    for i in ids:
        if sigma[i] == "delegate":
            principal = rng.choice(B)
            delegates.append(DelegateSpec(i, principal, welfare[principal]))
    attributes = []
    if L >= 2 and rng.random() < 0.5:
        attributes.append(Attribute("quality", "quality", ("high", "low"), {"high": 0, "low": 1}))
    channels = []
    omega = tuple(sum(bundles[i][k] for i in holders) for k in range(L))
    mode = FeasibilityMode.FREE_DISPOSAL if rng.random() < 0.3 else FeasibilityMode.EXACT_BALANCE
    entities = [Entity(i, i in humans) for i in ids]

    if ablate == "ii":
        i = B[0]
        k = rng.randrange(L_r)
        tags = list(rights_class[i].tags)
        if rng.random() < 0.5:
            tags[k] = None
        else:
            tags[k] = "protected"
            protections.discard(rights[k])
            for j in B:
                if j != i:
                    other = list(rights_class[j].tags)
                    if other[k] == "protected":
                        other[k] = "assigned"
                        rights_class[j] = RightsClassification(tuple(other))
        rights_class[i] = RightsClassification(tuple(tags))
    elif ablate == "iii":
        d = ids[1]
        spec = delegates[[x.delegate for x in delegates].index(d)]
        shift = rng.choice([1, 2])
        if rng.random() < 0.5:
            obj = ShiftedWelfare(spec.objective, rng.choice([-1, 1]) * shift)
        else:
            # doubling a nonnegative linear objective and shifting it keeps the
            # argmax and leaves a divergence of at least ``shift`` everywhere
            obj = ShiftedWelfare(LinearWelfare(tuple(2 * c for c in spec.objective.weights)), shift)
        delegates = [replace(x, objective=obj) if x.delegate == d else x for x in delegates]
    elif ablate == "iv":
        target = rng.choice(B)
        actor = next(i for i in ids if i != target)
        eff = -rng.randint(1, 3)
        channels.append(ActionChannel("m", actor, target, ("off", "on"), {"on": {s: eff for s in states}},
                                      active_action="on"))
    elif ablate == "v":
        if rng.random() < 0.5 or L < 2:
            attributes = [Attribute("provenance", "provenance", ("authentic", "fraudulent"),
                                    {"authentic": 0, "fraudulent": 0})]
        else:
            attributes = [Attribute("alignment", "alignment", ("aligned", "misaligned"),
                                    {"aligned": 0, "misaligned": None})]
    elif ablate == "vi":
        entities[1] = Entity(ids[1], False, price_setter=True)
    elif ablate == "vii":
        i = B[0]
        welfare[i] = LinearWelfare(tuple(0 for _ in range(L)), welfare[i].offsets, declared_monotone=False)
        delegates = [replace(x, objective=welfare[i]) if x.principal == i else x for x in delegates]


    state_objs = tuple(InstitutionalState(s, protections=protections) for s in states)
    e = Economy(
        entities=tuple(entities), sigma=sigma, grids=grids, commodities=commodities, rights=rights,
        rights_class=rights_class, states=state_objs, welfare=welfare, delegates=tuple(delegates),
        channels=tuple(channels), feasibility=FeasibilityData(omega, (), mode),
        attributes=tuple(attributes),
    )
    actions = {c.channel_id: c.active_action for c in channels}
    cand = EquilibriumCandidate(FeasibleState(bundles, "s0", actions), w)
    return _checked(e), cand


def generate_delegation_instance(seed: int):
    """A principal with concave welfare, a counterparty, and a delegate with
    a random linear or log-linear objective; returns ``(economy, candidate, delegate)``."""
    rng = random.Random(seed)
    side = rng.randint(3, 6)
    g = _square(side)
    if rng.random() < 0.5:
        W = LinearWelfare((rng.randint(1, 4), rng.randint(1, 4)))
    else:
        W = LogLinearWelfare((rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)))
    if rng.random() < 0.5:
        U = LinearWelfare((rng.randint(0, 4), rng.randint(0, 4)))
    else:
        U = LogLinearWelfare((rng.uniform(0, 2.0), rng.uniform(0, 2.0)))
    z_h = _rand_point(rng, side, 2)
    z_k = _rand_point(rng, side, 2)
    ents = (Entity("h", True), Entity("k", True), Entity("d", False))
    e = Economy(
        entities=ents, sigma={"h": "agent", "k": "agent", "d": "delegate"},
        grids={"h": g, "k": g}, commodities=("x",), rights=("r",),
        rights_class={"h": _priced(), "k": _priced()},
        states=(InstitutionalState("s0"),),
        welfare={"h": W, "k": LinearWelfare((1, 1))},
        delegates=(DelegateSpec("d", "h", U),),
        feasibility=FeasibilityData(tuple(a + b for a, b in zip(z_h, z_k))),
    )
    p = (rng.randint(1, 3), rng.randint(1, 3))
    return _checked(e), EquilibriumCandidate(FeasibleState({"h": z_h, "k": z_k}, "s0"), p), "d"


def generate_epsilon_instance(seed: int, epsilon: float):
    """Instance for the degradation bound; returns ``(economy, candidate, delta)``.

    Welfare is ``(w + eta_i) . z`` with prices ``w``.  The unpriced residual
    ``eta_i`` has Euclidean norm at most ``epsilon / (2 (sqrt(L) + 1))``, which
    keeps any improver's summed gain under the bound; ``delta`` is drawn with
    sup-norm at most ``epsilon``.
    """
    rng = random.Random(seed)
    n = rng.randint(2, 3)
    L = 2 if rng.random() < 0.8 else 1
    side = rng.randint(3, 5)
    w = tuple(rng.randint(1, 3) for _ in range(L))
    eta_max = epsilon / (2 * (math.sqrt(L) + 1))
    ids = [f"h{k}" for k in range(n)]
    lattice = Grid.lattice([range(side)] * L)
    grids = {i: lattice for i in ids}
    grids["a"] = Grid.singleton(tuple(0 for _ in range(L)))
    welfare, bundles = {}, {}
    for i in ids:
        raw = [rng.uniform(-1, 1) for _ in range(L)]
        norm = math.sqrt(sum(x * x for x in raw)) or 1.0
        scale = rng.uniform(0.5, 1.0) * eta_max / norm
        welfare[i] = LinearWelfare(tuple(wk + scale * x for wk, x in zip(w, raw)))
        bundles[i] = _rand_point(rng, side, L)
    bundles["a"] = grids["a"].points[0]
    omega = tuple(sum(bundles[i][k] for i in bundles) for k in range(L))
    e = Economy(
        entities=tuple(Entity(i, True) for i in ids) + (Entity("a", False),),
        sigma={**{i: "agent" for i in ids}, "a": "tool"}, grids=grids,
        commodities=tuple(f"x{k}" for k in range(L)),
        states=(InstitutionalState("s0"),), welfare=welfare,
        feasibility=FeasibilityData(omega),
    )
    delta = tuple(rng.uniform(-epsilon, epsilon) for _ in range(L))
    return _checked(e), EquilibriumCandidate(FeasibleState(bundles, "s0"), w), delta


def generate_classical_instance(seed: int):
    """Tool-only economy with constant rights coordinates and heterogeneous
    linear welfare; the allocation is a random feasible one."""
    rng = random.Random(seed)
    n_h = rng.randint(2, 3)
    n_t = rng.randint(1, MAX_ENTITIES - n_h)
    L_x = rng.randint(1, 2)
    L_r = rng.randint(0, 1)
    side = rng.randint(2, 4)
    r_val = tuple(rng.randint(0, 2) for _ in range(L_r))
    axes = [range(side)] * L_x + [[v] for v in r_val]
    lattice = Grid.lattice(axes)
    ids = [f"h{k}" for k in range(n_h)]
    tools = [f"t{k}" for k in range(n_t)]
    grids, welfare, bundles = {}, {}, {}
    for i in ids:
        grids[i] = lattice
        welfare[i] = LinearWelfare(tuple(rng.randint(1, 4) for _ in range(L_x + L_r)))
        bundles[i] = rng.choice(lattice.points)
    for t in tools:
        z = tuple(rng.randrange(side) for _ in range(L_x)) + r_val
        grids[t] = Grid.singleton(z)
        bundles[t] = z
    omega = tuple(sum(b[k] for b in bundles.values()) for k in range(L_x + L_r))
    mode = FeasibilityMode.FREE_DISPOSAL if rng.random() < 0.5 else FeasibilityMode.EXACT_BALANCE
    if mode == FeasibilityMode.FREE_DISPOSAL:
        omega = tuple(v + rng.randint(0, 1) for v in omega[:L_x]) + omega[L_x:]
    e = Economy(
        entities=tuple(Entity(i, True) for i in ids) + tuple(Entity(t, False) for t in tools),
        sigma={**{i: "agent" for i in ids}, **{t: "tool" for t in tools}}, grids=grids,
        commodities=tuple(f"x{k}" for k in range(L_x)), rights=tuple(f"r{k}" for k in range(L_r)),
        rights_class={i: RightsClassification(("assigned",) * L_r) for i in ids},
        states=(InstitutionalState("s0"),), welfare=welfare,
        feasibility=FeasibilityData(omega, (), mode),
    )
    return _checked(e), FeasibleState(bundles, "s0")


def generate_channel_instance(seed: int):
    """Conforming base economy plus random action channels, some governed,
    some compensated, some with zero effect."""
    rng = random.Random(seed)
    e, cand = generate_random_economy(seed, {"side": rng.randint(2, 4), "L": rng.randint(1, 2)})
    B = e.welfare_bearing_ordered()
    channels, governed = [], set()
    for k in range(rng.randint(0, 3)):
        target = rng.choice(B)
        actor = rng.choice([i for i in e.ids if i != target])
        acts = ("off",) + tuple(f"a{j}" for j in range(rng.randint(1, 2)))
        effect = {a: {s.state_id: rng.choice([-2, -1, 0, 0, 1]) for s in e.states} for a in acts[1:]}
        cid = f"c{k}"
        channels.append(ActionChannel(cid, actor, target, acts, effect,
                                      active_action=rng.choice(acts),
                                      compensated=rng.random() < 0.25))
        if rng.random() < 0.3:
            governed.add(cid)
    states = tuple(replace(s, governed_channels=governed) for s in e.states)
    e = replace(e, channels=tuple(channels), states=states)
    fs = FeasibleState(cand.state.bundles, cand.state.state, {c.channel_id: c.active_action for c in channels})
    return _checked(e), EquilibriumCandidate(fs, cand.prices)


def generate_tiny_instance(seed: int):
    """Small instance with at most ``10**4`` raw grid combinations, mixed
    welfare forms, pinned rights, tools, production and optional channels;
    the candidate is a random feasible state."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(2, 3)
        L = rng.randint(1, 2)
        side = rng.randint(2, 3)
        if (side**L) ** n <= 10**4:
            break
    L_r = rng.randint(0, L - 1)
    ids = [f"e{k}" for k in range(n)]
    sigma = {ids[0]: "agent"}
    for i in ids[1:]:
        sigma[i] = rng.choice(["agent", "ws", "tool"])
    humans = {ids[0]} | {i for i in ids[1:] if sigma[i] == "agent" and rng.random() < 0.5}
    if len(humans) == n:
        humans.discard(ids[-1])
        if sigma[ids[-1]] == "agent":
            sigma[ids[-1]] = "ws"
    lattice = Grid.lattice([range(side)] * L)
    grids, welfare, rc = {}, {}, {}
    for i in ids:
        if sigma[i] == "tool":
            grids[i] = Grid.singleton(_rand_point(rng, side, L))
            continue
        grids[i] = lattice
        if rng.random() < 0.5:
            welfare[i] = LinearWelfare(tuple(rng.randint(-1, 3) for _ in range(L)))
        else:
            welfare[i] = TabulatedWelfare({(p, None): rng.randint(0, 4) for p in lattice.points})
        rc[i] = RightsClassification(tuple(rng.choice(["priced", "assigned"]) for _ in range(L_r)))
    pts = {i: rng.choice(grids[i].points) for i in ids}
    omega = tuple(sum(pts[i][k] for i in ids) for k in range(L))
    prod = [tuple(0 for _ in range(L))]
    if rng.random() < 0.4:
        prod.append(tuple(rng.randint(-1, 1) for _ in range(L)))
    mode = rng.choice([FeasibilityMode.EXACT_BALANCE, FeasibilityMode.FREE_DISPOSAL])
    channels = []
    B = [i for i in ids if sigma[i] in ("agent", "ws")]
    if rng.random() < 0.4:
        target = rng.choice(B)
        actor = rng.choice([i for i in ids if i != target])
        channels.append(ActionChannel("m", actor, target, ("off", "on"),
                                      {"on": {"s0": rng.choice([-2, -1, 1])}},
                                      active_action=rng.choice(["off", "on"]),
                                      compensated=rng.random() < 0.3))
    e = Economy(
        entities=tuple(Entity(i, i in humans) for i in ids), sigma=sigma, grids=grids,
        commodities=tuple(f"x{k}" for k in range(L - L_r)), rights=tuple(f"r{k}" for k in range(L_r)),
        rights_class=rc, states=(InstitutionalState("s0"),), welfare=welfare,
        channels=tuple(channels), feasibility=FeasibilityData(omega, tuple(prod), mode),
    )
    _checked(e)
    ref = FeasibleState(pts, "s0")
    feasible = list(enumerate_feasible(e, "s0", reference=ref))
    fs = rng.choice(feasible)
    fs = FeasibleState(fs.bundles, "s0", {c.channel_id: c.active_action for c in channels})
    return e, fs
