"""Resource balance against endowment and production, and enumeration of
feasible states at a fixed institutional state."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

from .economy import (
    Economy,
    FeasibilityData,
    FeasibilityMode,
    FeasibleState,
    Status,
)
from .errors import ConfigurationError, InputError, ResourceCapError
from .grid import dot, qkey, vadd

__all__ = [
    "DEFAULT_CAP",
    "FeasibilityData",
    "FeasibleState",
    "SupportResult",
    "aggregate",
    "aggregate_support_check",
    "achievable_sums",
    "enumerate_feasible",
    "is_feasible",
    "balance_ok",
    "varying_sets",
]

DEFAULT_CAP = 10**7


def aggregate(e: Economy, bundles) -> tuple:
    total = tuple(0 for _ in range(e.L))
    for i in e.holders():
        total = vadd(total, bundles[i])
    return total


def balance_ok(f: FeasibilityData, total, tol: float) -> bool:
    for target in f.targets:
        if f.mode == FeasibilityMode.EXACT_BALANCE:
            if qkey(total) == qkey(target):
                return True
        elif all(a <= b + tol for a, b in zip(total, target)):
            return True
    return False


def is_feasible(e: Economy, fs: FeasibleState, reference: FeasibleState | None = None) -> bool:
    """Resource balance plus grid membership; tools must sit at their fixed
    positions (their singleton grid point, or ``reference``'s bundle)."""
    for i in e.holders():
        b = fs.bundles.get(i)
        if b is None or b not in e.grids[i]:
            return False
        if e.sigma.get(i) == Status.TOOL:
            g = e.grids[i]
            if reference is not None:
                if qkey(b) != qkey(reference.bundles[i]):
                    return False
            elif len(g) != 1:
                return False
    return balance_ok(e.feasibility, aggregate(e, fs.bundles), e.tol)


def varying_sets(e: Economy, reference: FeasibleState | None, strict: bool = False) -> dict:
    """Admissible bundles per holder under the coordinate-variation policy,
    in enumeration order (lexicographically descending).

    Tools are fixed; assigned (non-reassignable) and protected rights
    coordinates of welfare-bearing entities are pinned to ``reference``.
    ``strict=True`` varies every rights coordinate.
    """
    out = {}
    for i in e.holders():
        g = e.grids[i]
        if e.sigma.get(i) == Status.TOOL:
            if reference is not None:
                out[i] = [reference.bundles[i]]
            elif len(g) == 1:
                out[i] = [g.points[0]]
            else:
                raise InputError(f"tool {i!r} has no fixed position")
            continue
        pinned = e.pinned_coordinates(i, strict=strict)
        if pinned and reference is not None:
            sub = g.restrict({k: reference.bundles[i][k] for k in pinned})
            pts = list(sub.points) if sub is not None else []
        else:
            pts = list(g.points)
        out[i] = pts[::-1]
    return out


def _product_size(sets) -> int:
    return math.prod(len(v) for v in sets.values())


def enumerate_feasible(
    e: Economy,
    s,
    reference: FeasibleState | None = None,
    strict: bool = False,
    cap: int = DEFAULT_CAP,
) -> Iterator[FeasibleState]:
    """Yield every feasible state at ``s`` under the variation policy, in
    deterministic order (by entity, then lexicographically descending bundle)."""
    state_id = e.state(s).state_id
    sets = varying_sets(e, reference, strict)
    size = _product_size(sets)
    if size > cap:
        raise ResourceCapError(size, cap, "feasible-state enumeration")
    holders = list(sets)
    actions = dict(reference.actions) if reference is not None else {}
    f, tol = e.feasibility, e.tol
    for combo in itertools.product(*(sets[i] for i in holders)):
        total = tuple(0 for _ in range(e.L))
        for b in combo:
            total = vadd(total, b)
        if balance_ok(f, total, tol):
            yield FeasibleState(dict(zip(holders, combo)), state_id, actions)


def achievable_sums(sets: list, bound=None) -> set:
    """Quantized aggregate sums reachable by picking one point from each set.

    With ``bound`` given, partial sums exceeding it (after reserving the
    componentwise minimum of the remaining sets) are pruned.
    """
    dim = len(sets[0][0]) if sets and sets[0] else 0
    mins = []
    for k in range(len(sets)):
        rest = sets[k + 1:]
        mins.append(tuple(sum(min(float(p[c]) for p in st) for st in rest) for c in range(dim)))
    sums = {tuple(0.0 for _ in range(dim))}
    for k, st in enumerate(sets):
        nxt = set()
        for a in sums:
            for p in st:
                t = qkey(tuple(x + float(y) for x, y in zip(a, p)))
                if bound is not None and any(
                    t[c] + mins[k][c] > bound[c] + 1e-9 for c in range(dim)
                ):
                    continue
                nxt.add(t)
        sums = nxt
    return sums


@dataclass
class SupportResult:
    passed: bool
    counterexample: tuple | None = None
    equilibrium_value: float = 0.0
    best_value: float = 0.0
    note: str = "support tested over grid-achievable aggregates"

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "counterexample": None if self.counterexample is None else list(self.counterexample),
            "equilibrium_value": self.equilibrium_value,
            "best_value": self.best_value,
            "note": self.note,
        }


def aggregate_support_check(
    e: Economy, fs_star: FeasibleState, p, strict: bool = False
) -> SupportResult:
    """Check that ``p`` attains its maximum over grid-achievable feasible
    aggregates at the equilibrium aggregate."""
    f = e.feasibility
    if f.mode == FeasibilityMode.FREE_DISPOSAL and any(c < 0 for c in p):
        raise ConfigurationError("free-disposal economies require nonnegative prices")
    tol = e.tol
    star = aggregate(e, fs_star.bundles)
    v_star = float(dot(p, star))
    best, best_a = v_star, None
    if f.mode == FeasibilityMode.EXACT_BALANCE:
        if len(f.targets) == 1 and qkey(star) == qkey(f.targets[0]):
            return SupportResult(True, None, v_star, v_star)
        sets = list(varying_sets(e, fs_star, strict).values())
        reach = achievable_sums(sets)
        for t in f.targets:
            if qkey(t) in reach:
                v = float(dot(p, t))
                if v > best + tol:
                    best, best_a = v, tuple(t)
    else:
        sets = list(varying_sets(e, fs_star, strict).values())
        for t in f.targets:
            for a in achievable_sums(sets, bound=t):
                if all(x <= float(y) + 1e-9 for x, y in zip(a, t)):
                    v = float(dot(p, a))
                    if v > best + tol:
                        best, best_a = v, a
    return SupportResult(best_a is None, best_a, v_star, best)
