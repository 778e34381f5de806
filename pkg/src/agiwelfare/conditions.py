"""The seven sufficient conditions and the diagnostic report built from them.

Each checker returns a :class:`ConditionEntry`.  :func:`diagnose` evaluates
all seven in order without short-circuiting and records the first failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .delegation import chain_divergence, delegate_chains, divergence_profile
from .economy import VERIFICATION_KINDS, Economy, EquilibriumCandidate, Status, validate_economy
from .equilibrium import (
    check_consumer_optimization,
    check_delegate_accounting,
    check_rights_coverage,
    check_tool_fixedness,
)
from .errors import InputError
from .externality import detect_autonomy_externalities
from .welfare import check_local_nonsatiation

__all__ = [
    "CONDITIONS",
    "MARGINS",
    "ConditionEntry",
    "DiagnosticReport",
    "check_condition_i",
    "check_condition_ii",
    "check_condition_iii",
    "check_condition_iv",
    "check_condition_v",
    "check_condition_vi",
    "check_condition_vii",
    "diagnose",
]

CONDITIONS = ("i", "ii", "iii", "iv", "v", "vi", "vii")
MARGINS = {
    "i": "ontological ambiguity",
    "ii": "rights incompleteness",
    "iii": "delegation divergence",
    "iv": "autonomy externality",
    "v": "verification bottleneck",
    "vi": "strategic pricing",
    "vii": "regularity",
}

PASS, FAIL, NA = "pass", "fail", "not-applicable"


@dataclass
class ConditionEntry:
    condition: str
    verdict: str
    witness: object = None
    note: str = ""

    @property
    def margin_name(self) -> str:
        return MARGINS[self.condition]

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "margin_name": self.margin_name,
            "verdict": self.verdict,
            "witness": self.witness,
            "note": self.note,
        }


def _entry(cond, failures, note="") -> ConditionEntry:
    if failures:
        return ConditionEntry(cond, FAIL, failures, note)
    return ConditionEntry(cond, PASS, None, note)


def check_condition_i(e: Economy) -> ConditionEntry:
    """The status map is declared, total, and keeps humans welfare-bearing."""
    failures = []
    for x in e.entities:
        st = e.sigma.get(x.id)
        if st is None:
            failures.append({"entity": x.id, "reason": "no status assigned"})
        elif x.is_human and st in (Status.DELEGATE, Status.TOOL):
            failures.append({"entity": x.id, "reason": f"human labelled {st.value}"})
    known = set(e.ids)
    for i in e.sigma:
        if i not in known:
            failures.append({"entity": i, "reason": "status assigned to unknown entity"})
    return _entry("i", failures, "status map checked as a declaration made before exchange")


def check_condition_ii(e: Economy, cand: EquilibriumCandidate) -> ConditionEntry:
    return _entry("ii", check_rights_coverage(e, cand).failures)


def check_condition_iii(e: Economy, cand: EquilibriumCandidate, chain_mode: str = "sum") -> ConditionEntry:
    """Delegate accounting, with chains of two or more links judged on their
    composed divergence instead of link by link."""
    s = e.state(cand.state.state)
    acct = check_delegate_accounting(e, cand)
    by_delegate = {f["delegate"]: f for f in acct.failures}
    failures = []
    chained = set()
    for chain in delegate_chains(e):
        if len(chain) < 2:
            continue
        chained.update(chain)
        internalized = all(d in s.internalized_delegates and d not in by_delegate for d in chain)
        if internalized:
            continue
        prof = chain_divergence(e, chain, cand, mode=chain_mode)
        if prof.sup_abs > e.tol:
            failures.append({"delegate": prof.delegate, "principal": prof.principal,
                             "level": "composed", "sup_abs": float(prof.sup_abs)})
    for d, f in by_delegate.items():
        if d in chained:
            continue
        prof = divergence_profile(e, d, cand)
        failures.append({"delegate": d, "principal": prof.principal, "level": "link",
                         "leg": f["leg"], "sup_abs": float(prof.sup_abs)})
    return _entry("iii", failures)


def check_condition_iv(e: Economy, cand: EquilibriumCandidate) -> ConditionEntry:
    return _entry("iv", [x.to_dict() for x in detect_autonomy_externalities(e, cand)])


def check_condition_v(e: Economy, cand: EquilibriumCandidate) -> ConditionEntry:
    """Verification-relevant attributes must be priced value by value or
    verified at the candidate state, and distinct values may not share a
    price coordinate."""
    s = e.state(cand.state.state)
    failures = []
    for a in e.attributes:
        if a.kind not in VERIFICATION_KINDS:
            continue
        unpriced = [v for v in a.values if a.price_coordinate.get(v) is None]
        if unpriced and a.name not in s.verified_attributes:
            failures.append({"attribute": a.name, "reason": "unpriced", "values": unpriced})
        shared: dict = {}
        for v in a.values:
            k = a.price_coordinate.get(v)
            if k is not None:
                shared.setdefault(k, []).append(v)
        for k, vals in sorted(shared.items()):
            if len(vals) > 1:
                failures.append({"attribute": a.name, "reason": "pooling",
                                 "coordinate": k, "values": vals})
    return _entry("v", failures)


def check_condition_vi(e: Economy, cand: EquilibriumCandidate) -> ConditionEntry:
    failures = []
    for x in e.entities:
        if x.price_setter:
            failures.append({"entity": x.id, "reason": "price-setting capability"})
    co = check_consumer_optimization(e, cand)
    if not co.passed:
        failures.append({"sub_check": "consumer optimization", "failures": co.failures})
    tf = check_tool_fixedness(e, cand)
    if not tf.passed:
        failures.append({"sub_check": "tool fixedness", "failures": tf.failures})
    return _entry("vi", failures, "price taking is a structural flag; there is no game layer")


def check_condition_vii(e: Economy, cand: EquilibriumCandidate | None = None,
                        radius: float | None = None) -> ConditionEntry:
    failures = []
    for i in e.welfare_bearing_ordered():
        g = e.grids[i]
        for st in e.states:
            res = check_local_nonsatiation(e.welfare[i], g, st.state_id, radius, tol=e.tol)
            if not res.passed:
                failures.append({
                    "entity": i,
                    "state": st.state_id,
                    "points": [[float(c) for c in p] for p, _, _ in res.failing],
                })
    return _entry("vii", failures, "nonsatiation checked at interior grid points")


@dataclass
class DiagnosticReport:
    entries: dict = field(default_factory=dict)

    @property
    def first_fail(self) -> str | None:
        return next((c for c in CONDITIONS if self.entries[c].verdict == FAIL), None)

    @property
    def failing(self) -> list:
        return [c for c in CONDITIONS if self.entries[c].verdict == FAIL]

    @property
    def all_pass(self) -> bool:
        return not self.failing

    def to_dict(self) -> dict:
        return {
            "first_fail": self.first_fail,
            "all_pass": self.all_pass,
            "conditions": [self.entries[c].to_dict() for c in CONDITIONS],
        }


_SIGMA_CLAUSES = ("sigma: total", "sigma: humans welfare-bearing")


def diagnose(e: Economy, cand: EquilibriumCandidate | None, chain_mode: str = "sum") -> DiagnosticReport:
    """Evaluate conditions (i) through (vii) in order.

    Violations of the status map are reported through condition (i); any
    other structural violation is an input error.
    """
    res = validate_economy(e)
    other = [v for v in res.violations if v.clause not in _SIGMA_CLAUSES]
    if other:
        raise InputError("invalid economy: " + "; ".join(f"{v.clause}: {v.message}" for v in other))
    entries = {"i": check_condition_i(e)}
    if entries["i"].verdict == FAIL or cand is None:
        reason = "status map invalid" if cand is not None else "no candidate supplied"
        for c in CONDITIONS[1:]:
            entries[c] = ConditionEntry(c, NA, None, reason)
        if cand is None and entries["i"].verdict != FAIL:
            entries["vii"] = check_condition_vii(e)
        return DiagnosticReport(entries)
    entries["ii"] = check_condition_ii(e, cand)
    entries["iii"] = check_condition_iii(e, cand, chain_mode)
    entries["iv"] = check_condition_iv(e, cand)
    entries["v"] = check_condition_v(e, cand)
    entries["vi"] = check_condition_vi(e, cand)
    entries["vii"] = check_condition_vii(e, cand)
    return DiagnosticReport(entries)
