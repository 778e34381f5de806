"""Exhaustive autonomy-Pareto efficiency oracle at a fixed institutional state.

The search never materialises the full product of grids.  Each welfare-bearing
entity is first restricted to its weak upper contour set (every improver must
weakly improve everyone), then a backward pass records which aggregate sums
each suffix of entities can reach, and whether it can do so with a strict
gain.  Partial sums are pruned with linear bounds along the coordinate axes
and the linear welfare directions.  If the root admits a feasible strict
completion, a forward pass rebuilds the first improver in enumeration order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .economy import Economy, FeasibilityMode, FeasibleState, Status
from .errors import DomainError, InputError, ResourceCapError
from .feasibility import DEFAULT_CAP, varying_sets
from .grid import qkey
from .welfare import LinearWelfare

__all__ = [
    "ParetoVerdict",
    "autonomy_pareto_check",
    "classical_pareto_check",
    "compare_status_assignments",
    "realized_welfare",
    "channel_adjustment",
    "in_classical_subdomain",
]


def channel_adjustment(e: Economy, target: str, state: str, actions) -> object:
    """Net welfare delta on ``target`` from all channels under an action profile.

    A governed, uncompensated channel is absorbed by the institutional state;
    otherwise the effect applies and any compensating transfer is added.  The
    actor pays the transfers on its own channels.
    """
    st = e.state(state)
    total = 0
    for c in e.channels:
        a = actions.get(c.channel_id, c.active_action)
        if c.actor == target:
            total -= c.transfer_of(a, st.state_id)
        if c.target != target:
            continue
        absorbed = c.channel_id in st.governed_channels and not c.compensated
        if not absorbed:
            total += c.effect_of(a, st.state_id)
        total += c.transfer_of(a, st.state_id)
    return total


def realized_welfare(e: Economy, i: str, bundle, state: str, actions=None):
    return e.welfare[i](bundle, state) + channel_adjustment(e, i, state, actions or {})


@dataclass
class ParetoVerdict:
    efficient: bool
    improver: FeasibleState | None = None
    improved_entity: str | None = None
    welfare_table: dict = field(default_factory=dict)
    state: str | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "efficient": self.efficient,
            "state": self.state,
            "improved_entity": self.improved_entity,
            "improver": None,
            "welfare_table": {
                k: {"before": float(b), "after": float(a)}
                for k, (b, a) in sorted(self.welfare_table.items())
            },
            "notes": list(self.notes),
        }
        if self.improver is not None:
            out["improver"] = {
                "state": self.improver.state,
                "bundles": {k: [float(c) for c in v] for k, v in sorted(self.improver.bundles.items())},
                "actions": dict(sorted(self.improver.actions.items())),
            }
        return out


def _directions(e: Economy, dim: int, project) -> list:
    dirs = []
    for k in range(dim):
        dirs.append(tuple(1.0 if c == k else 0.0 for c in range(dim)))
    for i in e.welfare_bearing_ordered():
        W = e.welfare.get(i)
        if isinstance(W, LinearWelfare):
            v = tuple(float(c) for c in project(W.weights))
            if any(v) and v not in dirs:
                dirs.append(v)
    return dirs


def _search(entries, targets, mode, dirs, cap, tol=1e-9):
    """Find the first combination (one entry per level) whose summed vector is
    feasible and which includes at least one strict entry.

    ``entries[k]`` is a list of ``(payload, vector, strict)`` in enumeration
    order.  Returns the list of chosen payloads or ``None``.
    """
    n = len(entries)
    if any(not lvl for lvl in entries):
        return None
    dim = len(targets[0])
    exact = mode == FeasibilityMode.EXACT_BALANCE

    def proj(v, d):
        return sum(a * b for a, b in zip(v, d))

    t_hi = [max(proj(t, d) for t in targets) for d in dirs]
    t_lo = [min(proj(t, d) for t in targets) for d in dirs]
    bounded = [exact or all(c >= 0 for c in d) for d in dirs]

    # Drop single entries that cannot be completed by any choice at the other
    # levels; repeat until the per-level bounds stop moving.
    entries = [list(lvl) for lvl in entries]
    while True:
        lo = [[min(proj(x[1], d) for x in lvl) for d in dirs] for lvl in entries]
        hi = [[max(proj(x[1], d) for x in lvl) for d in dirs] for lvl in entries]
        sum_lo = [sum(col) for col in zip(*lo)]
        sum_hi = [sum(col) for col in zip(*hi)]
        changed = False
        for k, lvl in enumerate(entries):
            keep = []
            for x in lvl:
                ok = True
                for j, d in enumerate(dirs):
                    v = proj(x[1], d)
                    if bounded[j] and v + sum_lo[j] - lo[k][j] > t_hi[j] + tol:
                        ok = False
                        break
                    if exact and v + sum_hi[j] - hi[k][j] < t_lo[j] - tol:
                        ok = False
                        break
                if ok:
                    keep.append(x)
            if len(keep) != len(lvl):
                changed = True
                if not keep:
                    return None
                entries[k] = keep
        if not changed:
            break
    pre_lo = [[0.0] * len(dirs)]
    pre_hi = [[0.0] * len(dirs)]
    for k in range(n):
        pre_lo.append([a + b for a, b in zip(pre_lo[-1], lo[k])])
        pre_hi.append([a + b for a, b in zip(pre_hi[-1], hi[k])])

    def suffix_ok(s, k):
        # suffix sum over levels k.. must be completable by some prefix over 0..k-1
        for j, d in enumerate(dirs):
            v = proj(s, d)
            if bounded[j] and v + pre_lo[k][j] > t_hi[j] + tol:
                return False
            if exact and v + pre_hi[k][j] < t_lo[j] - tol:
                return False
        return True

    zero = tuple(0.0 for _ in range(dim))
    suffix = [None] * (n + 1)
    suffix[n] = {zero: False}
    work = 0
    for k in range(n - 1, -1, -1):
        nxt: dict = {}
        for s, flag in suffix[k + 1].items():
            for _, vec, strict in entries[k]:
                work += 1
                t = qkey(tuple(a + b for a, b in zip(s, vec)))
                if not suffix_ok(t, k):
                    continue
                f = flag or strict
                if not nxt.get(t, False):
                    nxt[t] = f
        if work > cap:
            raise ResourceCapError(work, cap, "Pareto search")
        suffix[k] = nxt

    def completes(P, F, k):
        # exists suffix from level k completing prefix sum P with a strict gain
        table = suffix[k]
        if exact:
            for t in targets:
                need = qkey(tuple(a - b for a, b in zip(t, P)))
                if need in table and (F or table[need]):
                    return True
            return False
        for s, f in table.items():
            if not (F or f):
                continue
            for t in targets:
                if all(a + b <= c + tol for a, b, c in zip(P, s, t)):
                    return True
        return False

    P, F = zero, False
    if not completes(P, F, 0):
        return None
    chosen = []
    for k in range(n):
        for payload, vec, strict in entries[k]:
            P2 = qkey(tuple(a + b for a, b in zip(P, vec)))
            F2 = F or strict
            if completes(P2, F2, k + 1):
                chosen.append(payload)
                P, F = P2, F2
                break
        else:  # pragma: no cover - guarded by the root check
            raise AssertionError("improver reconstruction failed")
    return chosen


def _action_profiles(e: Economy, base: dict, vary: bool):
    current = {c.channel_id: base.get(c.channel_id, c.active_action) for c in e.channels}
    yield current
    if not vary or not e.channels:
        return
    ids = [c.channel_id for c in e.channels]
    for combo in itertools.product(*(c.actions for c in e.channels)):
        prof = dict(zip(ids, combo))
        if prof != current:
            yield prof


def _oracle(e: Economy, fs_star: FeasibleState, strict: bool, cap: int, vary_actions: bool,
            project=None, targets=None, alt_state=None) -> ParetoVerdict:
    if project is None:
        project = lambda v: tuple(float(c) for c in v)  # noqa: E731
    star_state = e.state(fs_star.state).state_id
    state = star_state if alt_state is None else e.state(alt_state).state_id
    tol = e.tol
    B = e.welfare_bearing
    sets = varying_sets(e, fs_star, strict)
    holders = list(sets)
    if targets is None:
        targets = [tuple(float(c) for c in t) for t in e.feasibility.targets]
    dim = len(targets[0])
    dirs = _directions(e, dim, project)
    base_actions = dict(fs_star.actions)
    star_val = {
        i: realized_welfare(e, i, fs_star.bundles[i], star_state, base_actions)
        for i in holders if i in B
    }
    raw = {i: {p: e.welfare[i](p, state) for p in sets[i]} for i in holders if i in B}
    for prof in _action_profiles(e, base_actions, vary_actions):
        action_changed = prof != {c.channel_id: base_actions.get(c.channel_id, c.active_action)
                                  for c in e.channels}
        entries = []
        for i in holders:
            if i not in B:
                entries.append([((i, p), project(p), False) for p in sets[i]])
                continue
            adj = channel_adjustment(e, i, state, prof)
            lvl = []
            for p in sets[i]:
                v = raw[i][p] + adj
                if v >= star_val[i] - tol:
                    lvl.append(((i, p), project(p), v > star_val[i] + tol))
            entries.append(lvl)
        found = _search(entries, targets, e.feasibility.mode, dirs, cap)
        if found is None:
            continue
        bundles = dict(p for p in found)
        for i in holders:
            bundles.setdefault(i, fs_star.bundles[i])
        improver = FeasibleState(bundles, state, prof if e.channels else {})
        table, first = {}, None
        for i in e.welfare_bearing_ordered():
            after = realized_welfare(e, i, bundles[i], state, prof)
            table[i] = (star_val[i], after)
            if first is None and after > star_val[i] + tol:
                first = i
        notes = ["action profile differs from candidate"] if action_changed else []
        return ParetoVerdict(False, improver, first, table, state, notes)
    return ParetoVerdict(True, state=state)


def autonomy_pareto_check(
    e: Economy,
    fs_star: FeasibleState,
    strict: bool = False,
    cap: int = DEFAULT_CAP,
    vary_actions: bool = True,
) -> ParetoVerdict:
    """Search for a feasible state at ``fs_star``'s institutional state that weakly
    improves every welfare-bearing entity and strictly improves one.

    Tools stay at their candidate bundles and pinned rights coordinates stay
    fixed (``strict=True`` varies all rights coordinates).  When the economy
    has action channels their action profiles are searched as well.
    """
    return _oracle(e, fs_star, strict, cap, vary_actions)


def in_classical_subdomain(e: Economy) -> list:
    """Features that take ``e`` outside the classical subdomain (empty if inside)."""
    problems = []
    for x in e.entities:
        if not x.is_human and e.sigma.get(x.id) != Status.TOOL:
            problems.append(f"non-human {x.id!r} is {e.sigma.get(x.id).value}, not tool")
    if e.welfare_bearing != frozenset(x.id for x in e.entities if x.is_human):
        problems.append("welfare-bearing set differs from the human set")
    for k in range(e.L_x, e.L):
        vals = {qkey((p[k],)) for i in e.holders() for p in e.grids[i]}
        if len(vals) > 1:
            problems.append(f"rights coordinate {e.rights[k - e.L_x]!r} varies across grids")
    return problems


def classical_pareto_check(e: Economy, fs_star: FeasibleState, cap: int = DEFAULT_CAP) -> ParetoVerdict:
    """Ordinary Pareto efficiency of the consumption allocation, for economies
    in the classical subdomain (all AI entities tools, rights constant)."""
    problems = in_classical_subdomain(e)
    if problems:
        raise DomainError("not in the classical subdomain: " + "; ".join(problems))
    if e.channels:
        raise DomainError("not in the classical subdomain: economy has action channels")
    L_x = e.L_x
    rights_sum = tuple(
        float(sum(fs_star.bundles[i][k] for i in e.holders())) for k in range(L_x, e.L)
    )
    targets = []
    for t in e.feasibility.targets:
        tr = tuple(float(c) for c in t[L_x:])
        if e.feasibility.mode == FeasibilityMode.EXACT_BALANCE:
            ok = qkey(tr) == qkey(rights_sum)
        else:
            ok = all(a <= b + 1e-9 for a, b in zip(rights_sum, tr))
        if ok:
            targets.append(tuple(float(c) for c in t[:L_x]))
    if not targets:
        raise InputError("candidate rights aggregate is infeasible")
    verdict = _oracle(
        e, fs_star, False, cap, False,
        project=lambda v: tuple(float(c) for c in v[:L_x]), targets=targets,
    )
    verdict.notes.append("comparison over consumption coordinates only")
    return verdict


@dataclass
class StatusComparison:
    first: ParetoVerdict
    second: ParetoVerdict
    agree: bool
    policy_differences: list

    def to_dict(self) -> dict:
        return {
            "sigma1": self.first.to_dict(),
            "sigma2": self.second.to_dict(),
            "agree": self.agree,
            "policy_differences": list(self.policy_differences),
            "adjudication": "none: each assignment is evaluated separately",
        }


def compare_status_assignments(e: Economy, fs_star: FeasibleState, sigma1, sigma2,
                               cap: int = DEFAULT_CAP) -> StatusComparison:
    """Run the oracle independently under two welfare-status assignments."""
    econs = []
    for sig in (sigma1, sigma2):
        e2 = replace(e, sigma=dict(sig))
        for i in e2.welfare_bearing:
            if i not in e2.welfare:
                raise InputError(f"{i!r} is welfare-bearing under an assignment but has no welfare function")
        econs.append(e2)
    v1 = autonomy_pareto_check(econs[0], fs_star, cap=cap)
    v2 = autonomy_pareto_check(econs[1], fs_star, cap=cap)
    diffs = []
    for i in e.holders():
        fixed = [
            ec.sigma.get(i) == Status.TOOL for ec in econs
        ]
        if fixed[0] != fixed[1]:
            diffs.append(
                f"{i!r} bundle is {'fixed' if fixed[0] else 'variable'} under sigma1 "
                f"and {'fixed' if fixed[1] else 'variable'} under sigma2"
            )
    return StatusComparison(v1, v2, v1.efficient == v2.efficient, diffs)
