"""Autonomy-conditioned welfare functions over (consumption, rights) bundles.

Three families are supported: linear, log-linear on shifted-positive bundles
and tabulated.  Every function is evaluated at a grid point and an
institutional state id; states are plain labels, so continuity is only ever
checked in the bundle coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError
from .grid import Grid, dot, qkey

TOL = 1e-9


def _state_id(s) -> str:
    return s if isinstance(s, str) else s.state_id


class WelfareFunction:
    """Base class; subclasses implement :meth:`value`."""

    form: str = "abstract"
    declared_monotone: bool = False
    lipschitz_hint: float | None = None

    def value(self, bundle: Sequence, state: str):
        raise NotImplementedError

    def __call__(self, bundle: Sequence, state) -> float:
        return self.value(bundle, _state_id(state))

    @property
    def concave_family(self) -> bool:
        return False


@dataclass(frozen=True)
class LinearWelfare(WelfareFunction):
    weights: tuple
    offsets: Mapping[str, object] = field(default_factory=dict)
    declared_monotone: bool = True
    lipschitz_hint: float | None = None
    form = "linear"

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "offsets", dict(self.offsets))

    def value(self, bundle, state):
        return dot(self.weights, bundle) + self.offsets.get(state, 0)

    @property
    def concave_family(self) -> bool:
        return True


@dataclass(frozen=True)
class LogLinearWelfare(WelfareFunction):
    """``sum_k alpha_k * log(z_k + shift_k) + offset(s)``; concave for alpha >= 0."""

    exponents: tuple
    shift: tuple | float = 1.0
    offsets: Mapping[str, object] = field(default_factory=dict)
    declared_monotone: bool = True
    lipschitz_hint: float | None = None
    form = "loglinear"

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if not isinstance(self.shift, (tuple, list)):
            object.__setattr__(self, "shift", tuple(self.shift for _ in self.exponents))
        else:
            object.__setattr__(self, "shift", tuple(self.shift))
        object.__setattr__(self, "offsets", dict(self.offsets))
        if any(a < 0 for a in self.exponents):
            raise ValueError("log-linear exponents must be nonnegative")

    def value(self, bundle, state):
        total = 0.0
        for a, z, c in zip(self.exponents, bundle, self.shift):
            arg = float(z) + float(c)
            if arg <= 0:
                raise DomainError(f"log-linear welfare undefined at {tuple(bundle)}")
            total += float(a) * math.log(arg)
        return total + float(self.offsets.get(state, 0))

    @property
    def concave_family(self) -> bool:
        return True


@dataclass(frozen=True)
class TabulatedWelfare(WelfareFunction):
    """Lookup table keyed by ``(point, state)``; a ``None`` state matches any state."""

    table: Mapping
    declared_monotone: bool = False
    lipschitz_hint: float | None = None
    form = "tabulated"
    _lookup: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "table", dict(self.table))
        object.__setattr__(
            self, "_lookup", {(qkey(p), s): v for (p, s), v in self.table.items()}
        )

    def value(self, bundle, state):
        k = qkey(bundle)
        if (k, state) in self._lookup:
            return self._lookup[(k, state)]
        if (k, None) in self._lookup:
            return self._lookup[(k, None)]
        raise DomainError(f"no tabulated welfare at {tuple(bundle)} in state {state!r}")


@dataclass(frozen=True)
class ShiftedWelfare(WelfareFunction):
    """``base + constant``; used to build delegate objectives off a principal's welfare."""

    base: WelfareFunction
    shift: object = 0
    form = "shifted"

    def value(self, bundle, state):
        return self.base.value(bundle, state) + self.shift

    @property
    def concave_family(self) -> bool:
        return self.base.concave_family


def eval_welfare(W: WelfareFunction, bundle: Sequence, state, grid: Grid | None = None):
    """Evaluate ``W`` at ``bundle``; with ``grid`` given, off-grid bundles are rejected."""
    if grid is not None and bundle not in grid:
        raise DomainError(f"bundle {tuple(bundle)} is not on the owner's grid")
    return W(bundle, state)


def _values(W, points, state) -> np.ndarray:
    return np.array([float(W(p, state)) for p in points], dtype=float)


def default_radius(grid: Grid) -> float:
    steps = [s for s in grid.steps() if s > 0]
    if not steps:
        return 0.0
    return max(steps) * math.sqrt(grid.dim)


@dataclass
class LnsResult:
    passed: bool
    failing: list = field(default_factory=list)  # (point, value, best neighbour value)
    frontier: list = field(default_factory=list)
    radius: float = 0.0

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "radius": self.radius,
            "failing": [
                {"point": list(p), "value": v, "best_neighbor": b} for p, v, b in self.failing
            ],
            "frontier": [list(p) for p in self.frontier],
        }


def check_local_nonsatiation(
    W: WelfareFunction, grid: Grid, state, radius: float | None = None, tol: float = TOL
) -> LnsResult:
    """Check that every interior grid point has a strictly preferred grid point
    within ``radius``.

    Failing points that are not interior are reported as ``frontier`` and do
    not fail the check.
    """
    steps = [s for s in grid.steps() if s > 0]
    max_step = max(steps) if steps else 0.0
    if radius is None:
        radius = default_radius(grid)
    if steps and radius < max_step - 1e-12:
        raise ConfigurationError(
            f"radius {radius} is smaller than the grid step {max_step}; check would be vacuous"
        )
    pts = np.array([[float(c) for c in p] for p in grid.points])
    vals = _values(W, grid.points, state)
    diff = pts[:, None, :] - pts[None, :, :]
    near = np.sqrt((diff**2).sum(axis=2)) <= radius + 1e-12
    np.fill_diagonal(near, False)
    masked = np.where(near, vals[None, :], -np.inf)
    best = masked.max(axis=1)
    failing, frontier = [], []
    for idx in np.nonzero(~(best > vals + tol))[0]:
        p = grid.points[idx]
        b = float(best[idx]) if np.isfinite(best[idx]) else None
        if grid.is_interior(p):
            failing.append((p, float(vals[idx]), b))
        else:
            frontier.append(p)
    return LnsResult(passed=not failing, failing=failing, frontier=frontier, radius=radius)


def estimate_lipschitz(W: WelfareFunction, region: Sequence, state) -> float:
    """Tight Lipschitz constant of ``W`` on a finite region (exact pairwise max)."""
    points = list(region)
    if len(points) < 2:
        return 0.0
    pts = np.array([[float(c) for c in p] for p in points])
    vals = _values(W, points, state)
    dist = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    dval = np.abs(vals[:, None] - vals[None, :])
    mask = dist > 0
    if not mask.any():
        return 0.0
    return float((dval[mask] / dist[mask]).max())


def check_upper_contour_convexity(
    W: WelfareFunction, grid: Grid, state, b0: Sequence, tol: float = TOL
) -> bool:
    """Discrete convexity proxy for the upper contour set of ``b0``.

    Returns False iff two weakly preferred grid points have an on-grid midpoint
    that is strictly dispreferred.  This is an approximation of convexity.
    """
    if b0 not in grid:
        raise DomainError(f"bundle {tuple(b0)} is not on the grid")
    level = W(b0, state)
    preferred = [p for p in grid.points if W(p, state) >= level - tol]
    for i, a in enumerate(preferred):
        for b in preferred[i + 1:]:
            mid = grid.lookup(tuple((x + y) / 2 for x, y in zip(a, b)))
            if mid is not None and W(mid, state) < level - tol:
                return False
    return True
