"""Personalised prices on the institutional state and the cross-state oracle.

A :class:`LindahlBlock` embeds each institutional state as a real vector and
gives every welfare-bearing entity a personalised price on that embedding.
The personalised prices must add up to the public price.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .economy import Economy, EquilibriumCandidate, FeasibleState
from .equilibrium import ClauseVerdict
from .errors import InputError
from .feasibility import DEFAULT_CAP
from .grid import dot
from .pareto import ParetoVerdict, _oracle, autonomy_pareto_check

__all__ = ["LindahlBlock", "lindahl_budget_check", "cross_state_pareto_check"]

SUM_TOL = 1e-9


@dataclass(frozen=True)
class LindahlBlock:
    p_s: tuple
    lambdas: Mapping[str, tuple]
    state_embedding: Mapping[str, tuple] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "p_s", tuple(self.p_s))
        object.__setattr__(self, "lambdas", {k: tuple(v) for k, v in dict(self.lambdas).items()})
        object.__setattr__(
            self, "state_embedding", {k: tuple(v) for k, v in dict(self.state_embedding).items()}
        )
        dim = len(self.p_s)
        for k, v in self.lambdas.items():
            if len(v) != dim:
                raise InputError(f"lambda of {k!r} has dimension {len(v)}, expected {dim}")
        for k, v in self.state_embedding.items():
            if len(v) != dim:
                raise InputError(f"embedding of state {k!r} has dimension {len(v)}, expected {dim}")
        self.assert_sum()

    def assert_sum(self) -> None:
        """Raise unless the personalised prices add up to ``p_s``."""
        for k in range(len(self.p_s)):
            total = sum(v[k] for v in self.lambdas.values())
            if abs(total - self.p_s[k]) > SUM_TOL:
                raise InputError(
                    f"personalised prices sum to {total} on coordinate {k}, not p_s = {self.p_s[k]}"
                )

    @classmethod
    def zero(cls, entities, states, dim: int = 1) -> LindahlBlock:
        z = tuple(0 for _ in range(dim))
        return cls(z, {i: z for i in entities}, {s: z for s in states})

    def embed(self, state: str) -> tuple:
        try:
            return self.state_embedding[state]
        except KeyError:
            raise InputError(f"state {state!r} has no embedding") from None

    def to_dict(self) -> dict:
        return {
            "p_s": [float(c) for c in self.p_s],
            "lambdas": {k: [float(c) for c in v] for k, v in sorted(self.lambdas.items())},
            "state_embedding": {
                k: [float(c) for c in v] for k, v in sorted(self.state_embedding.items())
            },
        }


def _lambda(block: LindahlBlock, i: str) -> tuple:
    try:
        return block.lambdas[i]
    except KeyError:
        raise InputError(f"no personalised price for welfare-bearing {i!r}") from None


def lindahl_budget_check(e: Economy, cand: EquilibriumCandidate, block: LindahlBlock,
                         cross_state: bool = False) -> ClauseVerdict:
    """Consumer optimization with the wealth term ``p.z + lambda_i.embed(s)``.

    By default the state stays at the candidate's, where the Lindahl term
    appears on both sides.  ``cross_state=True`` lets each entity also pick
    any embedded state at its personalised price.
    """
    block.assert_sum()
    s_star = cand.state.state
    states = [st.state_id for st in e.states] if cross_state else [s_star]
    p, tol = cand.prices, e.tol
    per, failures = {}, []
    for i in e.welfare_bearing_ordered():
        lam = _lambda(block, i)
        W = e.welfare[i]
        z_star = cand.state.bundles[i]
        wealth = dot(p, z_star) + dot(lam, block.embed(s_star))
        g = e.grids[i]
        pinned = e.pinned_coordinates(i)
        if pinned:
            g = g.restrict({k: z_star[k] for k in pinned})
        v_star = W(z_star, s_star)
        best, best_v, best_s = None, v_star, None
        for s in states:
            ls = dot(lam, block.embed(s))
            for z in g.points:
                if dot(p, z) + ls <= wealth + tol:
                    v = W(z, s)
                    if v > best_v + tol:
                        best, best_v, best_s = z, v, s
        per[i] = {
            "passed": best is None,
            "value": float(v_star),
            "witness": None if best is None else [float(c) for c in best],
            "witness_value": None if best is None else float(best_v),
        }
        if cross_state:
            per[i]["witness_state"] = best_s
        if best is not None:
            f = {"entity": i, "witness": per[i]["witness"], "value": per[i]["value"],
                 "witness_value": per[i]["witness_value"]}
            if cross_state:
                f["witness_state"] = best_s
            failures.append(f)
    return ClauseVerdict("consumer optimization", not failures, failures, {"entities": per})


def cross_state_pareto_check(e: Economy, fs_star: FeasibleState, block: LindahlBlock,
                             cap: int = DEFAULT_CAP) -> ParetoVerdict:
    """Pareto oracle over every declared institutional state.

    The candidate's own state is scanned first, so a single-state economy
    gets exactly the base verdict.  For an improver at another state the
    verdict notes the public-price value of the state change,
    ``p_s . (embed(s') - embed(s*))``, which the personalised prices split.
    """
    block.assert_sum()
    for st in e.states:
        block.embed(st.state_id)
    for i in e.welfare_bearing_ordered():
        _lambda(block, i)
    base = autonomy_pareto_check(e, fs_star, cap=cap)
    if not base.efficient:
        return base
    s_star = e.state(fs_star.state).state_id
    for st in e.states:
        if st.state_id == s_star:
            continue
        v = _oracle(e, fs_star, False, cap, True, alt_state=st.state_id)
        if not v.efficient:
            delta = [a - b for a, b in zip(block.embed(st.state_id), block.embed(s_star))]
            cost = float(dot(block.p_s, delta))
            shares = {i: float(dot(_lambda(block, i), delta)) for i in e.welfare_bearing_ordered()}
            v.notes.append(f"cross-state improver at {st.state_id!r}")
            v.notes.append(f"state change valued at {cost} at the public price")
            v.notes.append("personalised shares " + ", ".join(
                f"{k}={shares[k]}" for k in sorted(shares)))
            return v
    return base
