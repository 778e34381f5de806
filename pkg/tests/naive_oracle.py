"""Brute-force Pareto oracle used to cross-check the production search.

It shares nothing with the production code path beyond the economy types:
every holder's admissible bundles and every channel action profile are
listed, the full Cartesian product is walked, and each combination is
filtered for balance and compared against the candidate entity by entity.
"""

from __future__ import annotations

import itertools

TOL = 1e-9


def _tol(e):
    return 0 if e.exact else TOL


def _pinned(e, i):
    rc = e.rights_class.get(i)
    if rc is None:
        return []
    out = []
    for k, tag in enumerate(rc.tags):
        name = None if tag is None else tag.value
        if name == "protected" or (name == "assigned" and k not in rc.reassignable):
            out.append(len(e.commodities) + k)
    return out


def _options(e, i, ref):
    if e.sigma[i].value == "tool":
        return [tuple(ref)]
    pins = _pinned(e, i)
    return [
        tuple(p) for p in e.grids[i].points
        if all(abs(p[k] - ref[k]) <= _tol(e) for k in pins)
    ]


def _balanced(e, total):
    f = e.feasibility
    tol = _tol(e)
    prods = f.production or [tuple(0 for _ in f.omega)]
    for y in prods:
        target = [w - v for w, v in zip(f.omega, y)]
        if f.mode.value == "exact":
            if all(abs(a - b) <= 1e-9 for a, b in zip(total, target)):
                return True
        elif all(a <= b + tol for a, b in zip(total, target)):
            return True
    return False


def _welfare(e, i, bundle, s, actions):
    v = e.welfare[i](bundle, s)
    governed = e.state(s).governed_channels
    for c in e.channels:
        a = actions.get(c.channel_id, c.active_action)
        pay = 0
        if c.price_schedule is not None:
            pay = c.price_schedule.get(a, 0)
        elif c.compensated:
            pay = -c.effect.get(a, {}).get(s, 0)
        if c.actor == i:
            v -= pay
        if c.target == i:
            if c.compensated or c.channel_id not in governed:
                v += c.effect.get(a, {}).get(s, 0)
            v += pay
    return v


def naive_pareto(e, fs, state=None, limit=10**6):
    """Return ``(efficient, improver_bundles, improver_actions)``.

    ``state`` swaps the institutional state of the alternative while the
    candidate is still valued at its own state.
    """
    s0 = fs.state
    s1 = s0 if state is None else state
    holders = [i for i in e.ids if e.sigma[i].value != "delegate"]
    bearers = [i for i in e.ids if e.entity(i).is_human or e.sigma[i].value in ("agent", "ws")]
    base = {i: _welfare(e, i, fs.bundles[i], s0, fs.actions) for i in bearers}
    opts = [_options(e, i, fs.bundles[i]) for i in holders]
    chans = [c for c in e.channels]
    profiles = [dict(zip([c.channel_id for c in chans], combo))
                for combo in itertools.product(*[c.actions for c in chans])]
    tol = _tol(e)
    seen = 0
    for combo in itertools.product(*opts):
        seen += 1
        if seen > limit:
            raise RuntimeError("naive oracle limit exceeded")
        total = [sum(col) for col in zip(*combo)]
        if not _balanced(e, total):
            continue
        bundles = dict(zip(holders, combo))
        for acts in profiles:
            vals = {i: _welfare(e, i, bundles[i], s1, acts) for i in bearers}
            if all(vals[i] >= base[i] - tol for i in bearers) and any(
                vals[i] > base[i] + tol for i in bearers
            ):
                return False, bundles, acts
    return True, None, None


def naive_raw_size(e, fs):
    n = 1
    for i in e.ids:
        if e.sigma[i].value != "delegate":
            n *= len(_options(e, i, fs.bundles[i]))
    for c in e.channels:
        n *= len(c.actions)
    return n


def naive_max_gain(e, fs, limit=10**6):
    """Largest summed welfare gain over feasible states that weakly improve
    every welfare-bearing entity (0 when none exists)."""
    s = fs.state
    holders = [i for i in e.ids if e.sigma[i].value != "delegate"]
    bearers = [i for i in e.ids if e.entity(i).is_human or e.sigma[i].value in ("agent", "ws")]
    base = {i: _welfare(e, i, fs.bundles[i], s, fs.actions) for i in bearers}
    opts = [_options(e, i, fs.bundles[i]) for i in holders]
    tol = _tol(e)
    best = 0
    for n, combo in enumerate(itertools.product(*opts)):
        if n > limit:
            raise RuntimeError("naive oracle limit exceeded")
        if not _balanced(e, [sum(col) for col in zip(*combo)]):
            continue
        bundles = dict(zip(holders, combo))
        vals = {i: _welfare(e, i, bundles[i], s, fs.actions) for i in bearers}
        if all(vals[i] >= base[i] - tol for i in bearers):
            best = max(best, sum(vals[i] - base[i] for i in bearers))
    return best


def naive_budget(e, i, bundle, prices):
    """Grid points of ``i`` no dearer than ``bundle`` at ``prices`` with pinned
    coordinates held at ``bundle``'s values."""
    wealth = sum(p * z for p, z in zip(prices, bundle))
    return [
        tuple(z) for z in _options(e, i, bundle)
        if sum(p * c for p, c in zip(prices, z)) <= wealth + _tol(e)
    ]
