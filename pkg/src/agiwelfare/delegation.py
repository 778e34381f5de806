"""Delegate divergence profiles, chain composition and the welfare-loss bound."""

from __future__ import annotations

from dataclasses import dataclass, field

from .economy import Economy, EquilibriumCandidate, Status, resolve_chain
from .equilibrium import budget_set
from .errors import DomainError, InputError
from .pareto import ParetoVerdict, autonomy_pareto_check

__all__ = [
    "DivergenceProfile",
    "DelegationBound",
    "CertificationFailure",
    "divergence_profile",
    "resolve_principal",
    "chain_divergence",
    "delegate_chains",
    "delegation_loss_and_bound",
    "certify_delegation_failure",
]


@dataclass
class DivergenceProfile:
    delegate: str
    principal: str
    values: dict  # budget point -> U_d - W_principal
    sup_abs: float

    def to_dict(self) -> dict:
        return {
            "delegate": self.delegate,
            "principal": self.principal,
            "sup_abs": float(self.sup_abs),
            "values": [
                {"point": [float(c) for c in p], "value": float(v)} for p, v in self.values.items()
            ],
        }


def resolve_principal(e: Economy, d: str) -> str:
    """Ultimate principal of ``d`` reached through the predecessor chain."""
    if e.sigma.get(d) != Status.DELEGATE:
        raise InputError(f"{d!r} is not a delegate")
    return resolve_chain(e, d)[-1]


def _spec(e: Economy, d: str):
    if e.sigma.get(d) != Status.DELEGATE:
        raise InputError(f"{d!r} is not a delegate")
    spec = e.delegate_spec(d)
    if spec.objective is None:
        raise InputError(f"delegate {d!r} has no objective")
    return spec


def _profile(delegate, principal, values) -> DivergenceProfile:
    sup = max((abs(v) for v in values.values()), default=0)
    return DivergenceProfile(delegate, principal, values, sup)


def divergence_profile(e: Economy, d: str, cand: EquilibriumCandidate) -> DivergenceProfile:
    """Pointwise ``U_d - W_h`` on the principal's budget set at the candidate."""
    spec = _spec(e, d)
    h = resolve_principal(e, d)
    s = cand.state.state
    W = e.welfare[h]
    pts = budget_set(e, h, cand).points
    values = {z: spec.objective(z, s) - W(z, s) for z in pts}
    return _profile(d, h, values)


def chain_divergence(e: Economy, chain, cand: EquilibriumCandidate, mode: str = "sum") -> DivergenceProfile:
    """Composed divergence of a delegation chain on the head principal's budget.

    ``chain`` lists delegates from the one nearest the principal outward.
    ``mode="sum"`` adds the links' divergences against the principal.
    ``mode="incremental"`` adds each link's departure from its predecessor,
    which telescopes to the outermost delegate's divergence.
    """
    chain = list(chain)
    if not chain:
        raise InputError("empty delegation chain")
    heads = {resolve_principal(e, d) for d in chain}
    if len(heads) != 1:
        raise InputError(f"chain mixes principals {sorted(heads)}")
    h = heads.pop()
    s = cand.state.state
    pts = budget_set(e, h, cand).points
    W = e.welfare[h]
    if mode == "sum":
        profiles = [divergence_profile(e, d, cand) for d in chain]
        values = {z: sum(p.values[z] for p in profiles) for z in pts}
    elif mode == "incremental":
        values = {}
        for z in pts:
            prev, total = W(z, s), 0
            for d in chain:
                u = _spec(e, d).objective(z, s)
                total += u - prev
                prev = u
            values[z] = total
    else:
        raise InputError(f"unknown chain mode {mode!r}")
    return _profile("+".join(chain), h, values)


def delegate_chains(e: Economy) -> list:
    """Maximal predecessor chains, each listed from the principal side outward.

    A delegate whose chain has a single link appears as a one-element chain.
    """
    delegates = [s.delegate for s in e.delegates if e.sigma.get(s.delegate) == Status.DELEGATE]
    preds = {e.delegate_spec(d).predecessor for d in delegates}
    leaves = [d for d in delegates if d not in preds]
    chains = []
    for leaf in leaves:
        path = resolve_chain(e, leaf)[:-1]
        chains.append(list(reversed(path)))
    return chains


def _argmax(W, pts, s):
    """First maximiser in descending lexicographic order."""
    best, best_v = None, None
    for z in sorted(pts, reverse=True):
        v = W(z, s)
        if best is None or v > best_v:
            best, best_v = z, v
    return best


@dataclass
class DelegationBound:
    delegate: str
    principal: str
    w_argmax: tuple
    u_argmax: tuple
    loss: float
    bound: float
    holds: bool
    regime: str
    divergence_gap: float  # D(u_argmax) - D(w_argmax), the intermediate term
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "delegate": self.delegate,
            "principal": self.principal,
            "w_argmax": [float(c) for c in self.w_argmax],
            "u_argmax": [float(c) for c in self.u_argmax],
            "loss": self.loss,
            "bound": self.bound,
            "holds": self.holds,
            "regime": self.regime,
            "divergence_gap": self.divergence_gap,
            "notes": list(self.notes),
        }


def delegation_loss_and_bound(e: Economy, d: str, cand: EquilibriumCandidate) -> DelegationBound:
    """Welfare the principal loses when the delegate picks its own argmax on
    the principal's budget, against twice the sup of the divergence there."""
    spec = _spec(e, d)
    prof = divergence_profile(e, d, cand)
    pts = list(prof.values)
    if not pts:
        raise InputError(f"principal of {d!r} has an empty budget set")
    s = cand.state.state
    W = e.welfare[prof.principal]
    w_arg = _argmax(W, pts, s)
    u_arg = _argmax(spec.objective, pts, s)
    loss = float(W(w_arg, s) - W(u_arg, s))
    bound = 2 * float(prof.sup_abs)
    gap = float(prof.values[u_arg] - prof.values[w_arg])
    regime = "quantitative" if W.concave_family else "qualitative"
    notes = []
    if regime == "qualitative":
        notes.append("principal welfare is not in a concave family; the bound is advisory")
    return DelegationBound(d, prof.principal, w_arg, u_arg, loss, bound,
                           loss <= bound + 1e-9, regime, gap, notes)


@dataclass
class CertificationFailure:
    delegate: str
    suspended: bool
    message: str
    verdict: ParetoVerdict

    def to_dict(self) -> dict:
        return {
            "delegate": self.delegate,
            "suspended": self.suspended,
            "message": self.message,
            "pareto": self.verdict.to_dict(),
        }


def certify_delegation_failure(e: Economy, d: str, cand: EquilibriumCandidate) -> CertificationFailure:
    """Report that clearing at the candidate prices no longer certifies
    efficiency, with the oracle's improver attached when one exists."""
    spec = _spec(e, d)
    s = e.state(cand.state.state)
    prof = divergence_profile(e, d, cand)
    faithful = prof.sup_abs <= e.tol
    internalized = d in s.internalized_delegates and all(
        spec.agency_cost_at(z) is not None for z in prof.values
    )
    if faithful or internalized:
        raise DomainError(f"delegate {d!r} is accounted for; nothing to certify-fail")
    verdict = autonomy_pareto_check(e, cand.state)
    if verdict.efficient:
        msg = (f"efficiency inference suspended for {d!r}; the oracle found no improver "
               "at this state")
    else:
        msg = (f"efficiency inference suspended for {d!r}; a feasible improver exists "
               f"for {verdict.improved_entity!r}")
    return CertificationFailure(d, True, msg, verdict)
