"""JSON economy files.

Numbers are JSON integers, JSON decimals, or strings holding a rational such
as ``"3/4"``.  With ``exact=True`` every number is read as a
:class:`fractions.Fraction`.  :func:`emit_economy` writes the canonical form:
sorted keys, two-space indent, integral values as integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .economy import (
    ActionChannel,
    Attribute,
    DelegateSpec,
    Economy,
    Entity,
    EquilibriumCandidate,
    FeasibilityData,
    FeasibleState,
    InstitutionalState,
    RightsClassification,
    validate_economy,
)
from .errors import FileSyntaxError, InputError
from .grid import Grid
from .welfare import (
    LinearWelfare,
    LogLinearWelfare,
    ShiftedWelfare,
    TabulatedWelfare,
    WelfareFunction,
)

FORMAT = "agiwelfare-economy"
VERSION = 1
SECTIONS = ("entities", "sigma", "grids", "rights", "states", "welfare", "delegates",
            "channels", "feasibility", "attributes", "candidate")

__all__ = ["ParsedFile", "parse_economy", "parse_economy_file", "emit_economy", "economy_to_dict"]


@dataclass
class ParsedFile:
    economy: Economy
    candidate: EquilibriumCandidate | None = None
    lindahl: object = None


class _Reader:
    def __init__(self, text: str, exact: bool):
        self.text = text
        self.exact = exact

    def where(self, token: str) -> tuple:
        idx = self.text.find(json.dumps(token))
        if idx < 0:
            return 0, 0
        line = self.text.count("\n", 0, idx) + 1
        col = idx - (self.text.rfind("\n", 0, idx) + 1) + 1
        return line, col

    def num(self, v):
        if isinstance(v, bool):
            raise FileSyntaxError(f"expected a number, got {v!r}", *self.where(v))
        if isinstance(v, int):
            return Fraction(v) if self.exact else v
        if isinstance(v, float):
            return Fraction(repr(v)) if self.exact else v
        if isinstance(v, str):
            try:
                q = Fraction(v.strip())
            except (ValueError, ZeroDivisionError):
                raise FileSyntaxError(f"malformed number {v!r}", *self.where(v)) from None
            if self.exact:
                return q
            return int(q) if q.denominator == 1 else float(q)
        raise FileSyntaxError(f"expected a number, got {type(v).__name__}", 0, 0)

    def vec(self, v) -> tuple:
        if not isinstance(v, list):
            raise InputError(f"expected a list of numbers, got {v!r}")
        return tuple(self.num(x) for x in v)

    def welfare(self, d) -> WelfareFunction:
        form = d.get("form")
        mono = bool(d.get("declared_monotone", form in ("linear", "loglinear")))
        hint = d.get("lipschitz_hint")
        hint = None if hint is None else self.num(hint)
        offsets = {k: self.num(v) for k, v in d.get("offsets", {}).items()}
        if form == "linear":
            return LinearWelfare(self.vec(d["weights"]), offsets, mono, hint)
        if form == "loglinear":
            shift = d.get("shift", 1)
            shift = self.vec(shift) if isinstance(shift, list) else self.num(shift)
            return LogLinearWelfare(self.vec(d["exponents"]), shift, offsets, mono, hint)
        if form == "tabulated":
            table = {(self.vec(r["point"]), r.get("state")): self.num(r["value"]) for r in d["table"]}
            return TabulatedWelfare(table, mono, hint)
        if form == "shifted":
            return ShiftedWelfare(self.welfare(d["base"]), self.num(d.get("shift", 0)))
        raise InputError(f"unknown welfare form {form!r}")


def parse_economy(text: str, exact: bool = False, validate: bool = True) -> ParsedFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise FileSyntaxError("top level must be an object", 1, 1)
    r = _Reader(text, exact)
    try:
        return _build(raw, r, validate)
    except InputError:
        raise
    except KeyError as exc:
        raise InputError(f"missing required field {exc.args[0]!r}") from None
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None


def _build(raw: dict, r: _Reader, validate: bool) -> ParsedFile:
    unknown = set(raw) - set(SECTIONS) - {"format", "version", "lindahl"}
    if unknown:
        raise InputError(f"unknown sections {sorted(unknown)}")
    entities = tuple(
        Entity(x["id"], bool(x["human"]), bool(x.get("price_setter", False)))
        for x in raw.get("entities", [])
    )
    grids = {}
    for i, g in raw.get("grids", {}).items():
        if "lattice" in g:
            grids[i] = Grid.lattice([r.vec(a) for a in g["lattice"]])
        else:
            grids[i] = Grid(tuple(r.vec(p) for p in g["points"]))
    rights = raw.get("rights", {})
    rights_class = {
        i: RightsClassification(tuple(c["tags"]), frozenset(c.get("reassignable", [])))
        for i, c in rights.get("classification", {}).items()
    }
    states = tuple(
        InstitutionalState(
            s["id"],
            frozenset(s.get("governed_channels", [])),
            frozenset(s.get("verified_attributes", [])),
            frozenset(s.get("protections", [])),
            s.get("liability"),
            frozenset(s.get("internalized_delegates", [])),
        )
        for s in raw.get("states", [])
    )
    welfare = {i: r.welfare(w) for i, w in raw.get("welfare", {}).items()}
    delegates = []
    for d in raw.get("delegates", []):
        cost = d.get("agency_cost")
        if cost is not None:
            cost = {r.vec(c["point"]): r.num(c["cost"]) for c in cost}
        delegates.append(DelegateSpec(d["delegate"], d["principal"], r.welfare(d["objective"]),
                                      d.get("predecessor"), cost))
    channels = []
    for c in raw.get("channels", []):
        sched = c.get("price_schedule")
        channels.append(ActionChannel(
            c["id"], c["actor"], c["target"], tuple(c["actions"]),
            {a: {s: r.num(v) for s, v in m.items()} for a, m in c.get("effect", {}).items()},
            c.get("null_action", "off"), c.get("active_action"), bool(c.get("compensated", False)),
            None if sched is None else {a: r.num(v) for a, v in sched.items()},
        ))
    f = raw.get("feasibility")
    feas = None
    if f is not None:
        feas = FeasibilityData(r.vec(f["omega"]), tuple(r.vec(y) for y in f.get("production", [])),
                               f.get("mode", "exact"))
    attributes = tuple(
        Attribute(a["name"], a["kind"], tuple(a["values"]), dict(a["price_coordinate"]))
        for a in raw.get("attributes", [])
    )
    e = Economy(
        entities=entities, sigma=raw.get("sigma", {}), grids=grids,
        commodities=tuple(rights.get("commodities", [])), rights=tuple(rights.get("coordinates", [])),
        rights_class=rights_class, states=states, welfare=welfare, delegates=tuple(delegates),
        channels=tuple(channels), feasibility=feas, attributes=attributes, exact=r.exact,
    )
    if validate:
        res = validate_economy(e)
        if not res.ok:
            raise InputError("; ".join(
                f"{v.entity or '<economy>'}: {v.message}" for v in res.violations))
    cand = None
    c = raw.get("candidate")
    if c is not None:
        fs = FeasibleState({i: r.vec(b) for i, b in c["bundles"].items()}, c["state"], c.get("actions", {}))
        cand = EquilibriumCandidate(fs, r.vec(c["prices"]))
    lind = None
    if "lindahl" in raw:
        from .lindahl import LindahlBlock

        lb = raw["lindahl"]
        lind = LindahlBlock(
            r.vec(lb["p_s"]),
            {i: r.vec(v) for i, v in lb["lambdas"].items()},
            {s: r.vec(v) for s, v in lb["state_embedding"].items()},
        )
    return ParsedFile(e, cand, lind)


def parse_economy_file(path, exact: bool = False, validate: bool = True) -> ParsedFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_economy(text, exact, validate)


# ---------------------------------------------------------------- emission

def _n(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float) and v.is_integer():
        return int(v)
    return v


def _v(vec) -> list:
    return [_n(x) for x in vec]


def _welfare_dict(W: WelfareFunction) -> dict:
    if isinstance(W, LinearWelfare):
        d = {"form": "linear", "weights": _v(W.weights)}
    elif isinstance(W, LogLinearWelfare):
        d = {"form": "loglinear", "exponents": _v(W.exponents), "shift": _v(W.shift)}
    elif isinstance(W, TabulatedWelfare):
        rows = [{"point": _v(p), "state": s, "value": _n(v)} for (p, s), v in W.table.items()]
        rows.sort(key=lambda x: (x["state"] or "", [float(Fraction(str(c))) for c in x["point"]]))
        return {"form": "tabulated", "table": rows, "declared_monotone": W.declared_monotone}
    elif isinstance(W, ShiftedWelfare):
        return {"form": "shifted", "base": _welfare_dict(W.base), "shift": _n(W.shift)}
    else:
        raise InputError(f"cannot serialise welfare of type {type(W).__name__}")
    if W.offsets:
        d["offsets"] = {k: _n(v) for k, v in W.offsets.items()}
    d["declared_monotone"] = W.declared_monotone
    if W.lipschitz_hint is not None:
        d["lipschitz_hint"] = _n(W.lipschitz_hint)
    return d


def economy_to_dict(e: Economy, cand: EquilibriumCandidate | None = None, lindahl=None) -> dict:
    out = {
        "format": FORMAT,
        "version": VERSION,
        "entities": [
            {"id": x.id, "human": x.is_human, **({"price_setter": True} if x.price_setter else {})}
            for x in e.entities
        ],
        "sigma": {k: v.value for k, v in e.sigma.items()},
        "grids": {
            i: ({"lattice": [_v(a) for a in g.axes]} if g.axes is not None else {"points": [_v(p) for p in g.points]})
            for i, g in e.grids.items()
        },
        "rights": {
            "commodities": list(e.commodities),
            "coordinates": list(e.rights),
            "classification": {
                i: {"tags": [None if t is None else t.value for t in rc.tags],
                    **({"reassignable": sorted(rc.reassignable)} if rc.reassignable else {})}
                for i, rc in e.rights_class.items()
            },
        },
        "states": [
            {
                "id": s.state_id,
                "governed_channels": sorted(s.governed_channels),
                "verified_attributes": sorted(s.verified_attributes),
                "protections": sorted(s.protections),
                "internalized_delegates": sorted(s.internalized_delegates),
                **({"liability": dict(s.liability)} if s.liability is not None else {}),
            }
            for s in e.states
        ],
        "welfare": {i: _welfare_dict(W) for i, W in e.welfare.items()},
        "delegates": [
            {
                "delegate": d.delegate,
                "principal": d.principal,
                "objective": _welfare_dict(d.objective),
                **({"predecessor": d.predecessor} if d.predecessor is not None else {}),
                **({"agency_cost": [{"point": _v(p), "cost": _n(c)} for p, c in sorted(d.agency_cost.items())]}
                   if d.agency_cost is not None else {}),
            }
            for d in e.delegates
        ],
        "channels": [
            {
                "id": c.channel_id,
                "actor": c.actor,
                "target": c.target,
                "actions": list(c.actions),
                "effect": {a: {s: _n(v) for s, v in m.items()} for a, m in c.effect.items()},
                "null_action": c.null_action,
                "active_action": c.active_action,
                "compensated": c.compensated,
                **({"price_schedule": {a: _n(v) for a, v in c.price_schedule.items()}}
                   if c.price_schedule is not None else {}),
            }
            for c in e.channels
        ],
        "feasibility": {
            "omega": _v(e.feasibility.omega),
            "production": [_v(y) for y in e.feasibility.production],
            "mode": e.feasibility.mode.value,
        },
        "attributes": [
            {"name": a.name, "kind": a.kind, "values": list(a.values),
             "price_coordinate": dict(a.price_coordinate)}
            for a in e.attributes
        ],
    }
    if cand is not None:
        out["candidate"] = {
            "state": cand.state.state,
            "bundles": {i: _v(b) for i, b in cand.state.bundles.items()},
            "actions": dict(cand.state.actions),
            "prices": _v(cand.prices),
        }
    if lindahl is not None:
        out["lindahl"] = {
            "p_s": _v(lindahl.p_s),
            "lambdas": {i: _v(v) for i, v in lindahl.lambdas.items()},
            "state_embedding": {s: _v(v) for s, v in lindahl.state_embedding.items()},
        }
    return out


def emit_economy(e: Economy, cand: EquilibriumCandidate | None = None, lindahl=None) -> str:
    return json.dumps(economy_to_dict(e, cand, lindahl), sort_keys=True, indent=2) + "\n"
