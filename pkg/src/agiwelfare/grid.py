"""Finite admissible bundle sets and small vector helpers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Point = tuple

# Sums of float grid values are compared through this quantized key so that
# 0.1 + 0.2 lands on the grid point 0.3.
KEY_DIGITS = 9


def qkey(point: Sequence) -> tuple:
    return tuple(round(float(c), KEY_DIGITS) + 0.0 for c in point)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def vadd(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def norm2(a: Sequence) -> float:
    return math.sqrt(sum(float(x) ** 2 for x in a))


def dist2(a: Sequence, b: Sequence) -> float:
    return math.sqrt(sum((float(x) - float(y)) ** 2 for x, y in zip(a, b)))


@dataclass(frozen=True)
class Grid:
    """A finite set of admissible augmented bundles, stored in ascending order.

    ``axes`` is set when the grid is an axis-aligned lattice; explicit point
    lists leave it ``None``.
    """

    points: tuple
    axes: tuple | None = None
    _index: dict = field(default=None, compare=False, repr=False, hash=False)
    _coords: tuple = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        pts = tuple(sorted({qkey(p): tuple(p) for p in self.points}.values()))
        if not pts:
            raise ValueError("grid must contain at least one point")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ValueError("grid points have inconsistent dimension")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_index", {qkey(p): p for p in pts})
        coords = tuple(tuple(sorted({p[k] for p in pts})) for k in range(len(pts[0])))
        object.__setattr__(self, "_coords", coords)

    @classmethod
    def lattice(cls, axes: Iterable[Iterable]) -> Grid:
        axes = tuple(tuple(sorted(set(a))) for a in axes)
        return cls(tuple(itertools.product(*axes)), axes=axes)

    @classmethod
    def singleton(cls, point: Sequence) -> Grid:
        return cls((tuple(point),))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, point) -> bool:
        return qkey(point) in self._index

    def lookup(self, point) -> Point | None:
        """Return the stored grid point equal to ``point`` (after quantization)."""
        return self._index.get(qkey(point))

    def coordinate_values(self, k: int) -> tuple:
        return self._coords[k]

    def steps(self) -> list[float]:
        """Smallest spacing along each coordinate; 0 for degenerate coordinates."""
        out = []
        for k in range(self.dim):
            vals = self.coordinate_values(k)
            gaps = [float(b - a) for a, b in zip(vals, vals[1:])]
            out.append(min(gaps) if gaps else 0.0)
        return out

    def is_interior(self, point: Sequence) -> bool:
        """True when the point is strictly inside the grid's range on every
        non-degenerate coordinate."""
        for k in range(self.dim):
            vals = self.coordinate_values(k)
            if len(vals) < 2:
                continue
            if not (vals[0] < point[k] < vals[-1]):
                return False
        return True

    def restrict(self, pinned: dict) -> Grid | None:
        """Sub-grid of points whose coordinates equal ``pinned[k]`` for each k."""
        pts = [
            p for p in self.points
            if all(round(float(p[k]) - float(v), KEY_DIGITS) == 0 for k, v in pinned.items())
        ]
        return Grid(tuple(pts)) if pts else None
