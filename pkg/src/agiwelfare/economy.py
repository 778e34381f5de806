"""Domain types for a finite AGI economy and its structural validation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

from .errors import InputError
from .grid import Grid, qkey
from .welfare import TOL, WelfareFunction


class Status(str, enum.Enum):
    TOOL = "tool"
    DELEGATE = "delegate"
    AGENT = "agent"
    WS = "ws"


class RightsTag(str, enum.Enum):
    PRICED = "priced"
    ASSIGNED = "assigned"
    PROTECTED = "protected"


class FeasibilityMode(str, enum.Enum):
    EXACT_BALANCE = "exact"
    FREE_DISPOSAL = "free_disposal"


VERIFICATION_KINDS = ("provenance", "liability", "quality", "alignment")


@dataclass(frozen=True)
class Entity:
    id: str
    is_human: bool
    price_setter: bool = False


@dataclass(frozen=True)
class RightsClassification:
    """One tag per rights coordinate; ``None`` marks an unclassified coordinate."""

    tags: tuple
    reassignable: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(
            self, "tags", tuple(None if t is None else RightsTag(t) for t in self.tags)
        )
        object.__setattr__(self, "reassignable", frozenset(self.reassignable))


@dataclass(frozen=True)
class InstitutionalState:
    state_id: str
    governed_channels: frozenset = frozenset()
    verified_attributes: frozenset = frozenset()
    protections: frozenset = frozenset()
    liability: Mapping[str, str] | None = None
    internalized_delegates: frozenset = frozenset()

    def __post_init__(self):
        for name in ("governed_channels", "verified_attributes", "protections",
                     "internalized_delegates"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.liability is not None:
            object.__setattr__(self, "liability", dict(self.liability))


@dataclass(frozen=True)
class DelegateSpec:
    delegate: str
    principal: str
    objective: WelfareFunction
    predecessor: str | None = None
    agency_cost: Mapping | None = None  # principal bundle -> nonnegative cost

    def __post_init__(self):
        if self.agency_cost is not None:
            object.__setattr__(
                self, "agency_cost", {tuple(k): v for k, v in dict(self.agency_cost).items()}
            )

    def agency_cost_at(self, bundle):
        if self.agency_cost is None:
            return None
        want = qkey(bundle)
        for k, v in self.agency_cost.items():
            if qkey(k) == want:
                return v
        return None


@dataclass(frozen=True)
class ActionChannel:
    """An actor's finite action menu and its welfare effect on one target.

    ``effect[action][state]`` is the welfare delta on the target measured
    against the target's pre-manipulation welfare function.
    """

    channel_id: str
    actor: str
    target: str
    actions: tuple
    effect: Mapping[str, Mapping[str, object]]
    null_action: str = "off"
    active_action: str | None = None
    compensated: bool = False
    price_schedule: Mapping[str, object] | None = None

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(self.actions))
        object.__setattr__(self, "effect", {a: dict(v) for a, v in dict(self.effect).items()})
        if self.active_action is None:
            object.__setattr__(self, "active_action", self.null_action)
        if self.price_schedule is not None:
            object.__setattr__(self, "price_schedule", dict(self.price_schedule))

    def effect_of(self, action: str, state: str):
        return self.effect.get(action, {}).get(state, 0)

    def transfer_of(self, action: str, state: str):
        """Compensating transfer received by the target."""
        if self.price_schedule is not None:
            return self.price_schedule.get(action, 0)
        if self.compensated:
            return -self.effect_of(action, state)
        return 0


@dataclass(frozen=True)
class Attribute:
    """A declared exchange attribute and the price coordinate quoted per value."""

    name: str
    kind: str
    values: tuple
    price_coordinate: Mapping[str, int | None]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        object.__setattr__(self, "price_coordinate", dict(self.price_coordinate))


@dataclass(frozen=True)
class FeasibilityData:
    omega: tuple
    production: tuple = ()
    mode: FeasibilityMode = FeasibilityMode.EXACT_BALANCE

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(self.omega))
        prod = tuple(tuple(y) for y in self.production)
        if not prod:
            prod = (tuple(0 for _ in self.omega),)
        object.__setattr__(self, "production", prod)
        object.__setattr__(self, "mode", FeasibilityMode(self.mode))

    @property
    def targets(self) -> tuple:
        """The aggregate bounds ``omega - y`` for ``y`` in the production set."""
        return tuple(tuple(w - v for w, v in zip(self.omega, y)) for y in self.production)


@dataclass(frozen=True)
class FeasibleState:
    bundles: Mapping[str, tuple]
    state: str
    actions: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "bundles", {k: tuple(v) for k, v in dict(self.bundles).items()})
        object.__setattr__(self, "actions", dict(self.actions))


@dataclass(frozen=True)
class EquilibriumCandidate:
    state: FeasibleState
    prices: tuple

    def __post_init__(self):
        object.__setattr__(self, "prices", tuple(self.prices))


@dataclass(frozen=True)
class Economy:
    entities: tuple
    sigma: Mapping[str, Status]
    grids: Mapping[str, Grid]
    commodities: tuple
    rights: tuple = ()
    rights_class: Mapping[str, RightsClassification] = field(default_factory=dict)
    states: tuple = ()
    welfare: Mapping[str, WelfareFunction] = field(default_factory=dict)
    delegates: tuple = ()
    channels: tuple = ()
    feasibility: FeasibilityData | None = None
    attributes: tuple = ()
    exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "sigma", {k: Status(v) for k, v in dict(self.sigma).items()})
        object.__setattr__(self, "grids", dict(self.grids))
        object.__setattr__(self, "commodities", tuple(self.commodities))
        object.__setattr__(self, "rights", tuple(self.rights))
        object.__setattr__(self, "rights_class", dict(self.rights_class))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "welfare", dict(self.welfare))
        object.__setattr__(self, "delegates", tuple(self.delegates))
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "attributes", tuple(self.attributes))

    # cached_property writes straight into __dict__, which frozen dataclasses allow
    @cached_property
    def _entity_index(self) -> dict:
        return {e.id: e for e in self.entities}

    @property
    def L_x(self) -> int:
        return len(self.commodities)

    @property
    def L_r(self) -> int:
        return len(self.rights)

    @property
    def L(self) -> int:
        return self.L_x + self.L_r

    @property
    def tol(self) -> float:
        return 0.0 if self.exact else TOL

    @property
    def ids(self) -> tuple:
        return tuple(e.id for e in self.entities)

    def entity(self, eid: str) -> Entity:
        try:
            return self._entity_index[eid]
        except KeyError:
            raise InputError(f"unknown entity {eid!r}") from None

    def state(self, state_id) -> InstitutionalState:
        if isinstance(state_id, InstitutionalState):
            return state_id
        for s in self.states:
            if s.state_id == state_id:
                return s
        raise InputError(f"unknown institutional state {state_id!r}")

    def channel(self, channel_id: str) -> ActionChannel:
        for c in self.channels:
            if c.channel_id == channel_id:
                return c
        raise InputError(f"unknown channel {channel_id!r}")

    def delegate_spec(self, d: str) -> DelegateSpec:
        for spec in self.delegates:
            if spec.delegate == d:
                return spec
        raise InputError(f"no delegate spec for {d!r}")

    @cached_property
    def welfare_bearing(self) -> frozenset:
        return welfare_bearing_set(self.sigma, self.entities)

    def welfare_bearing_ordered(self) -> tuple:
        return tuple(i for i in self.ids if i in self.welfare_bearing)

    def with_status(self, eid: str) -> Status | None:
        return self.sigma.get(eid)

    def tools(self) -> tuple:
        return tuple(i for i in self.ids if self.sigma.get(i) == Status.TOOL)

    def holders(self) -> tuple:
        """Entities holding a bundle; delegates' use is carried by their principals."""
        return tuple(i for i in self.ids if self.sigma.get(i) != Status.DELEGATE)

    def action_labels(self) -> frozenset:
        return frozenset(a for c in self.channels for a in c.actions)

    def pinned_coordinates(self, eid: str, strict: bool = False) -> tuple:
        """Augmented-bundle indices held fixed in budgets and Pareto comparisons."""
        if strict:
            return ()
        rc = self.rights_class.get(eid)
        if rc is None:
            return ()
        out = []
        for k, tag in enumerate(rc.tags):
            if tag == RightsTag.PROTECTED or (
                tag == RightsTag.ASSIGNED and k not in rc.reassignable
            ):
                out.append(self.L_x + k)
        return tuple(out)


def welfare_bearing_set(sigma: Mapping, entities: Sequence[Entity]) -> frozenset:
    """Humans together with every entity assigned agent or welfare-subject status."""
    return frozenset(
        e.id for e in entities
        if e.is_human or Status(sigma.get(e.id, Status.TOOL)) in (Status.AGENT, Status.WS)
    )


@dataclass(frozen=True)
class Violation:
    entity: str | None
    clause: str
    message: str

    def to_dict(self) -> dict:
        return {"entity": self.entity, "clause": self.clause, "message": self.message}


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def resolve_chain(e: Economy, d: str) -> list:
    """Follow predecessor links from ``d``; returns the visited path ending at a
    non-delegate.  Raises InputError on a cycle or dangling link."""
    path = [d]
    seen = {d}
    cur = d
    while e.sigma.get(cur) == Status.DELEGATE:
        spec = e.delegate_spec(cur)
        nxt = spec.predecessor if spec.predecessor is not None else spec.principal
        if nxt in seen:
            raise InputError(f"predecessor chain from {d!r} does not terminate (cycle at {nxt!r})")
        seen.add(nxt)
        path.append(nxt)
        cur = nxt
    return path


def validate_economy(e: Economy) -> ValidationResult:
    """Collect every structural violation; never raises on bad data."""
    out: list[Violation] = []

    def bad(entity, clause, message):
        out.append(Violation(entity, clause, message))

    ids = [x.id for x in e.entities]
    if len(set(ids)) != len(ids):
        bad(None, "entities: unique ids", "entity ids are not unique")
    if not any(x.is_human for x in e.entities):
        bad(None, "entities: at least one human", "economy has no human entity")
    if not any(not x.is_human for x in e.entities):
        bad(None, "entities: at least one AI", "economy has no AI entity")

    for i in ids:
        if i not in e.sigma:
            bad(i, "sigma: total", f"sigma does not assign a status to {i!r}")
    for i in e.sigma:
        if i not in ids:
            bad(i, "sigma: total", f"sigma names unknown entity {i!r}")
    for x in e.entities:
        if x.is_human and e.sigma.get(x.id) in (Status.DELEGATE, Status.TOOL):
            bad(x.id, "sigma: humans welfare-bearing",
                f"human {x.id!r} may not be labelled {e.sigma[x.id].value}")
    B = e.welfare_bearing
    if not B:
        bad(None, "sigma: welfare-bearing set nonempty", "welfare-bearing set is empty")

    state_ids = [s.state_id for s in e.states]
    if not state_ids:
        bad(None, "states", "economy declares no institutional state")
    if len(set(state_ids)) != len(state_ids):
        bad(None, "states", "state ids are not unique")

    for i in ids:
        st = e.sigma.get(i)
        if st is None:
            continue
        if st != Status.DELEGATE:
            g = e.grids.get(i)
            if g is None:
                bad(i, "grids", f"{i!r} has no admissible bundle grid")
            elif g.dim != e.L:
                bad(i, "grids", f"grid of {i!r} has dimension {g.dim}, expected {e.L}")
        if i in B:
            W = e.welfare.get(i)
            if W is None:
                bad(i, "welfare", f"welfare-bearing {i!r} has no welfare function")
            rc = e.rights_class.get(i)
            if e.L_r and (rc is None or len(rc.tags) != e.L_r):
                bad(i, "rights classification",
                    f"{i!r} needs one rights tag per rights coordinate ({e.L_r})")
            if W is not None and i in e.grids and e.grids[i].dim == e.L:
                for s in state_ids:
                    try:
                        for p in e.grids[i]:
                            W(p, s)
                    except InputError as exc:
                        bad(i, "welfare", str(exc))
                        break

    # delegates
    specs = {}
    for spec in e.delegates:
        if spec.delegate in specs:
            bad(spec.delegate, "delegates", "duplicate delegate spec")
        specs[spec.delegate] = spec
        if e.sigma.get(spec.delegate) != Status.DELEGATE:
            bad(spec.delegate, "delegates", f"{spec.delegate!r} is not labelled delegate")
        if spec.principal not in B:
            bad(spec.delegate, "delegates: principal welfare-bearing",
                f"principal {spec.principal!r} is not welfare-bearing")
        if spec.predecessor is not None and spec.predecessor not in ids:
            bad(spec.delegate, "delegates", f"unknown predecessor {spec.predecessor!r}")
        if spec.objective is None:
            bad(spec.delegate, "delegates", "delegate has no objective")
        if spec.agency_cost is not None and any(v < 0 for v in spec.agency_cost.values()):
            bad(spec.delegate, "delegates", "agency cost must be nonnegative")
    for i in ids:
        if e.sigma.get(i) == Status.DELEGATE and i not in specs:
            bad(i, "delegates: principal map total", f"delegate {i!r} has no principal")
    for d in specs:
        if e.sigma.get(d) != Status.DELEGATE:
            continue
        try:
            path = resolve_chain(e, d)
        except InputError:
            bad(d, "delegates: rho chain", "rho chain does not terminate")
            continue
        if path[-1] != specs[d].principal:
            bad(d, "delegates: rho chain",
                f"chain from {d!r} ends at {path[-1]!r}, not its principal {specs[d].principal!r}")

    for c in e.channels:
        if c.actor == c.target:
            bad(c.actor, "channels", f"channel {c.channel_id!r} targets its own actor")
        if c.target not in B:
            bad(c.target, "channels", f"channel {c.channel_id!r} target is not welfare-bearing")
        if c.actor not in ids:
            bad(c.actor, "channels", f"channel {c.channel_id!r} actor is unknown")
        if c.null_action not in c.actions:
            bad(c.actor, "channels", f"channel {c.channel_id!r} lacks its null action")
        elif any(v != 0 for v in c.effect.get(c.null_action, {}).values()):
            bad(c.actor, "channels", f"null action of {c.channel_id!r} has nonzero effect")
        if c.active_action not in c.actions:
            bad(c.actor, "channels", f"active action of {c.channel_id!r} is undeclared")

    labels = e.action_labels()
    for s in e.states:
        if s.liability is not None:
            missing = sorted(labels - set(s.liability))
            if missing:
                bad(None, "states: liability assignment",
                    f"liability map of {s.state_id!r} misses actions {missing}")
            for a, holder in s.liability.items():
                if holder not in ids:
                    bad(holder, "states: liability assignment", f"unknown liable entity for {a!r}")

    f = e.feasibility
    if f is None:
        bad(None, "feasibility", "economy declares no feasibility data")
    else:
        if len(f.omega) != e.L:
            bad(None, "feasibility", f"endowment has dimension {len(f.omega)}, expected {e.L}")
        if tuple(0 for _ in f.omega) not in {tuple(y) for y in f.production} and not any(
            all(v == 0 for v in y) for y in f.production
        ):
            bad(None, "feasibility", "production set must contain 0")

    for a in e.attributes:
        for v, k in a.price_coordinate.items():
            if k is not None and not (0 <= k < e.L):
                bad(None, "attributes", f"attribute {a.name!r} value {v!r} prices unknown coordinate {k}")

    return ValidationResult(tuple(out))
