"""Autonomy externalities on action channels and their Pigouvian correction."""

from __future__ import annotations

from dataclasses import dataclass, replace

from .economy import ActionChannel, Economy, EquilibriumCandidate
from .errors import ConfigurationError, InputError

__all__ = [
    "AutonomyExternality",
    "detect_autonomy_externalities",
    "pigouvian_tau",
    "apply_correction",
]


@dataclass(frozen=True)
class AutonomyExternality:
    channel: str
    actor: str
    target: str
    action: str
    effect: object

    def to_dict(self) -> dict:
        return {
            "channel": self.channel,
            "actor": self.actor,
            "target": self.target,
            "action": self.action,
            "effect": float(self.effect),
        }


def detect_autonomy_externalities(e: Economy, cand: EquilibriumCandidate) -> list:
    """Non-null actions with a nonzero effect on a welfare-bearing target that
    are neither compensated nor governed at the candidate state."""
    s = e.state(cand.state.state)
    B = e.welfare_bearing
    out = []
    for c in e.channels:
        if c.target not in B or c.compensated or c.channel_id in s.governed_channels:
            continue
        for a in c.actions:
            if a == c.null_action:
                continue
            eff = c.effect_of(a, s.state_id)
            if eff != 0:
                out.append(AutonomyExternality(c.channel_id, c.actor, c.target, a, eff))
    return out


def pigouvian_tau(e: Economy, channel: str | ActionChannel, cand: EquilibriumCandidate,
                  step: float = 1.0) -> dict:
    """Corrective price per action: the negated effect on the target at the
    candidate state.

    Actions form a finite menu, so the marginal effect degenerates to the
    finite difference from the null action.  ``step`` is accepted for parity
    with a directional-derivative reading and must be positive.
    """
    c = e.channel(channel) if isinstance(channel, str) else channel
    if step <= 0:
        raise ConfigurationError("step must be positive")
    if c.null_action not in c.actions:
        raise InputError(f"channel {c.channel_id!r} has no null action")
    s = e.state(cand.state.state).state_id
    base = c.effect_of(c.null_action, s)
    # adding 0 turns a negated zero effect into a plain 0.0
    return {a: (base - c.effect_of(a, s)) + 0 for a in c.actions}


def apply_correction(e: Economy, channel: str, tau: dict, state: str | None = None) -> Economy:
    """Return an economy whose channel is compensated by the schedule ``tau``
    and governed at ``state`` (every state when omitted).

    The revised state keeps its id so existing candidates stay valid.
    """
    c = e.channel(channel)
    missing = [a for a in c.actions if a not in tau]
    if missing:
        raise InputError(f"tau is undefined for actions {missing}")
    new_c = replace(c, compensated=True, price_schedule={a: tau[a] for a in c.actions})
    channels = tuple(new_c if x.channel_id == channel else x for x in e.channels)
    states = []
    for s in e.states:
        if state is None or s.state_id == state:
            s = replace(s, governed_channels=s.governed_channels | {channel})
        states.append(s)
    if state is not None and state not in {s.state_id for s in e.states}:
        raise InputError(f"unknown institutional state {state!r}")
    return replace(e, channels=channels, states=tuple(states))
