"""Clause-by-clause verification of a candidate autonomy-complete equilibrium.

A candidate is a feasible state plus a price vector over the augmented
bundle.  Each clause check returns a :class:`ClauseVerdict`; the aggregate
:func:`verify_equilibrium` never short-circuits so every report is complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .economy import (
    Economy,
    EquilibriumCandidate,
    FeasibilityMode,
    FeasibleState,
    RightsTag,
    resolve_chain,
)
from .errors import ConfigurationError, DomainError, InputError, ResourceCapError
from .feasibility import DEFAULT_CAP, aggregate_support_check, enumerate_feasible, is_feasible, varying_sets
from .grid import dot, norm2, qkey
from .welfare import estimate_lipschitz

__all__ = [
    "BudgetSet",
    "ClauseVerdict",
    "EquilibriumVerdict",
    "EpsilonResult",
    "budget_set",
    "check_consumer_optimization",
    "check_tool_fixedness",
    "check_delegate_accounting",
    "check_rights_coverage",
    "verify_equilibrium",
    "epsilon_gap_bound",
    "max_improver_gain",
    "search_prices",
]


@dataclass(frozen=True)
class BudgetSet:
    owner: str
    points: tuple
    wealth: object

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, z) -> bool:
        k = qkey(z)
        return any(qkey(p) == k for p in self.points)


@dataclass
class ClauseVerdict:
    clause: str
    passed: bool
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "clause": self.clause,
            "passed": self.passed,
            "failures": list(self.failures),
            "details": self.details,
        }


def _num(v):
    return float(v)


def budget_set(e: Economy, i: str, cand: EquilibriumCandidate, prices=None) -> BudgetSet:
    """Grid points of ``i`` costing no more than ``z_i*`` at the candidate prices,
    with assigned and protected rights coordinates pinned to ``z_i*``."""
    if i not in e.welfare_bearing:
        raise DomainError(f"{i!r} is not welfare-bearing; it has no budget set")
    p = cand.prices if prices is None else tuple(prices)
    z_star = cand.state.bundles[i]
    wealth = dot(p, z_star)
    g = e.grids[i]
    pinned = e.pinned_coordinates(i)
    if pinned:
        g = g.restrict({k: z_star[k] for k in pinned})
    pts = () if g is None else tuple(z for z in g.points if dot(p, z) <= wealth + e.tol)
    return BudgetSet(i, pts, wealth)


def check_consumer_optimization(e: Economy, cand: EquilibriumCandidate, prices=None) -> ClauseVerdict:
    s = cand.state.state
    per, failures = {}, []
    tol = e.tol
    for i in e.welfare_bearing_ordered():
        W = e.welfare[i]
        z_star = cand.state.bundles[i]
        v_star = W(z_star, s)
        best, best_v = None, v_star
        for z in budget_set(e, i, cand, prices).points:
            v = W(z, s)
            if v > best_v + tol:
                best, best_v = z, v
        per[i] = {
            "passed": best is None,
            "value": _num(v_star),
            "witness": None if best is None else [_num(c) for c in best],
            "witness_value": None if best is None else _num(best_v),
        }
        if best is not None:
            failures.append({"entity": i, "witness": per[i]["witness"],
                             "value": per[i]["value"], "witness_value": per[i]["witness_value"]})
    return ClauseVerdict("consumer optimization", not failures, failures, {"entities": per})


def check_tool_fixedness(e: Economy, cand: EquilibriumCandidate) -> ClauseVerdict:
    failures = []
    for t in e.tools():
        g = e.grids.get(t)
        z = cand.state.bundles.get(t)
        if g is None or len(g) != 1:
            failures.append({"entity": t, "reason": f"grid has {0 if g is None else len(g)} points"})
        elif z is None or qkey(g.points[0]) != qkey(z):
            failures.append({"entity": t, "reason": "candidate bundle differs from fixed position"})
    return ClauseVerdict("tool fixedness", not failures, failures)


def principal_budget(e: Economy, d: str, cand: EquilibriumCandidate) -> BudgetSet:
    chain = resolve_chain(e, d)
    return budget_set(e, chain[-1], cand)


def check_delegate_accounting(e: Economy, cand: EquilibriumCandidate) -> ClauseVerdict:
    """Each delegate is faithful on its principal's budget grid, or internalized
    at the candidate state with an agency cost defined on that grid."""
    s = e.state(cand.state.state)
    failures, per = [], {}
    for spec in e.delegates:
        gamma = principal_budget(e, spec.delegate, cand)
        W = e.welfare[spec.principal]
        faithful = all(
            abs(spec.objective(z, s.state_id) - W(z, s.state_id)) <= e.tol for z in gamma.points
        )
        if faithful:
            per[spec.delegate] = "faithful"
            continue
        if spec.delegate in s.internalized_delegates:
            missing = [z for z in gamma.points if spec.agency_cost_at(z) is None]
            if not missing:
                per[spec.delegate] = "internalized"
                continue
            failures.append({"delegate": spec.delegate, "leg": "internalized",
                             "reason": "agency cost undefined on part of the principal's budget grid",
                             "points": [[_num(c) for c in z] for z in missing[:5]]})
        else:
            failures.append({"delegate": spec.delegate, "leg": "faithful",
                             "reason": "objective differs from principal welfare and is not internalized"})
        per[spec.delegate] = "failed"
    return ClauseVerdict("delegate accounting", not failures, failures, {"delegates": per})


def check_rights_coverage(e: Economy, cand: EquilibriumCandidate) -> ClauseVerdict:
    s = e.state(cand.state.state)
    failures = []
    for i in e.welfare_bearing_ordered():
        rc = e.rights_class.get(i)
        tags = rc.tags if rc is not None else ()
        for k, name in enumerate(e.rights):
            tag = tags[k] if k < len(tags) else None
            if tag is None:
                failures.append({"entity": i, "coordinate": name, "reason": "untagged"})
            elif tag == RightsTag.PROTECTED and name not in s.protections:
                failures.append({"entity": i, "coordinate": name,
                                 "reason": f"protected but state {s.state_id!r} lacks the protection"})
    return ClauseVerdict("rights coverage", not failures, failures)


@dataclass
class EquilibriumVerdict:
    passed: bool
    clauses: dict
    first_failed: str | None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "first_failed": self.first_failed,
            "clauses": {k: v.to_dict() for k, v in self.clauses.items()},
        }


def _support_clause(e: Economy, cand: EquilibriumCandidate, prices) -> ClauseVerdict:
    cov = check_rights_coverage(e, cand)
    sup = aggregate_support_check(e, cand.state, prices)
    failures = list(cov.failures)
    if not sup.passed:
        failures.append({"reason": "prices do not attain their maximum at the equilibrium aggregate",
                         "counterexample": [_num(c) for c in sup.counterexample]})
    return ClauseVerdict("rights coverage and support", not failures, failures,
                         {"support": sup.to_dict()})


def verify_equilibrium(e: Economy, cand: EquilibriumCandidate, prices=None) -> EquilibriumVerdict:
    """Check all four clauses.  ``prices`` overrides the candidate's prices."""
    if not is_feasible(e, cand.state, reference=cand.state):
        raise InputError("candidate state is not feasible")
    p = cand.prices if prices is None else tuple(prices)
    if len(p) != e.L:
        raise InputError(f"price vector has length {len(p)}, expected {e.L}")
    c2 = EquilibriumCandidate(cand.state, p)
    clauses = {
        "1": check_consumer_optimization(e, c2),
        "2": check_tool_fixedness(e, c2),
        "3": check_delegate_accounting(e, c2),
        "4": _support_clause(e, c2, p),
    }
    first = next((k for k, v in clauses.items() if not v.passed), None)
    return EquilibriumVerdict(first is None, clauses, first)


def max_improver_gain(e: Economy, fs_star: FeasibleState, cap: int = DEFAULT_CAP):
    """Largest summed welfare gain over welfare-bearing entities among feasible
    states at ``fs_star``'s institutional state that weakly improve everyone
    and strictly improve someone.  Returns 0 when there is no such state."""
    s = fs_star.state
    tol = e.tol
    B = e.welfare_bearing
    sets = varying_sets(e, fs_star)
    targets = [qkey(t) for t in e.feasibility.targets]
    exact = e.feasibility.mode == FeasibilityMode.EXACT_BALANCE
    upper = [max(t[k] for t in targets) for k in range(e.L)]
    levels = []
    for i, pts in sets.items():
        if i not in B:
            levels.append([(tuple(float(c) for c in p), 0.0, False) for p in pts])
            continue
        W = e.welfare[i]
        w0 = W(fs_star.bundles[i], s)
        lvl = []
        for p in pts:
            g = W(p, s) - w0
            if g >= -tol:
                lvl.append((tuple(float(c) for c in p), float(g), g > tol))
        levels.append(lvl)
    rest_min = []
    for k in range(len(levels)):
        rest = levels[k + 1:]
        rest_min.append([sum(min(x[0][c] for x in lv) for lv in rest) if all(rest) else 0.0
                         for c in range(e.L)])
    neg = float("-inf")
    # per reachable partial sum: best gain using no strict entry, best with one
    states = {tuple(0.0 for _ in range(e.L)): (0.0, neg)}
    work = 0
    for k, lvl in enumerate(levels):
        nxt = {}
        for key, (weak, strong) in states.items():
            for vec, g, strict in lvl:
                work += 1
                t = qkey(tuple(a + b for a, b in zip(key, vec)))
                if any(t[c] + rest_min[k][c] > upper[c] + 1e-9 for c in range(e.L)):
                    continue
                if strict:
                    w2, s2 = neg, max(weak, strong) + g
                else:
                    w2, s2 = weak + g, strong + g
                ow, os_ = nxt.get(t, (neg, neg))
                nxt[t] = (max(ow, w2), max(os_, s2))
        if work > cap:
            raise ResourceCapError(work, cap, "improver gain search")
        states = nxt
    best = 0.0
    for key, (_, strong) in states.items():
        if strong == neg:
            continue
        if exact:
            ok = key in targets
        else:
            ok = any(all(a <= b + 1e-9 for a, b in zip(key, t)) for t in targets)
        if ok:
            best = max(best, strong)
    return best


@dataclass
class EpsilonResult:
    measured_gap: float
    bound: float
    holds: bool
    lipschitz: dict

    def to_dict(self) -> dict:
        return {
            "measured_gap": self.measured_gap,
            "bound": self.bound,
            "holds": self.holds,
            "lipschitz": dict(sorted(self.lipschitz.items())),
        }


def epsilon_gap_bound(e: Economy, cand: EquilibriumCandidate, epsilon: float, delta,
                      cap: int = DEFAULT_CAP) -> EpsilonResult:
    """Measured improver gap against the degradation bound
    ``epsilon * sum_i L_i * |z_i*|`` with ``L_i`` estimated on the budget
    region at the perturbed prices ``p* + delta``."""
    delta = tuple(delta)
    if epsilon < 0:
        raise InputError("epsilon must be nonnegative")
    if len(delta) != e.L:
        raise InputError(f"delta has length {len(delta)}, expected {e.L}")
    dmax = max((abs(float(d)) for d in delta), default=0.0)
    if epsilon == 0 and dmax > 0:
        raise InputError("epsilon is 0 but delta is nonzero")
    if dmax > float(epsilon) + 1e-12:
        raise InputError(f"|delta|_inf = {dmax} exceeds epsilon = {epsilon}")
    perturbed = tuple(p + d for p, d in zip(cand.prices, delta))
    v = verify_equilibrium(e, cand, prices=perturbed)
    bad = [k for k in ("2", "3", "4") if not v.clauses[k].passed]
    if bad:
        raise InputError(f"clauses {', '.join(bad)} fail at the perturbed prices")
    s = cand.state.state
    lips, bound = {}, 0.0
    for i in e.welfare_bearing_ordered():
        region = budget_set(e, i, cand, perturbed).points
        L_i = estimate_lipschitz(e.welfare[i], region, s)
        lips[i] = L_i
        bound += L_i * norm2(cand.state.bundles[i])
    bound *= float(epsilon)
    gap = max_improver_gain(e, cand.state, cap)
    return EpsilonResult(float(gap), bound, gap <= bound + 1e-9, lips)


def search_prices(e: Economy, s, price_grid, cap: int = DEFAULT_CAP) -> list:
    """All (feasible state, price) pairs at ``s`` from ``price_grid`` that verify.

    Convenience only: an empty result says nothing about existence.
    """
    prices = [tuple(p) for p in price_grid]
    if not prices:
        return []
    out = []
    for fs in enumerate_feasible(e, s, cap=cap):
        for p in prices:
            cand = EquilibriumCandidate(fs, p)
            try:
                ok = verify_equilibrium(e, cand).passed
            except ConfigurationError:
                continue
            if ok:
                out.append(cand)
    return out
