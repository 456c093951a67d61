"""Points, instances, solutions and the gamma-dispersion cost functions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

# relative tolerance for threshold comparisons unless an operation says otherwise
REL_TOL = 1e-9


class DispersionError(Exception):
    """Base class for all errors raised by this package."""


class TooFewNeighbors(DispersionError):
    pass


class InvalidInstance(DispersionError):
    pass


class UnsupportedRegime(InvalidInstance):
    """The requested (gamma, mode) pair has no algorithm behind it."""


class BudgetExceeded(DispersionError):
    pass


class NoSolution(DispersionError):
    pass


class Mode(str, enum.Enum):
    PLANE = "plane"
    LINE = "line"


class Method(str, enum.Enum):
    GREEDY = "greedy"
    FRAMEWORK = "framework"
    ORACLE = "oracle"


@dataclass(frozen=True)
class Point:
    x: float
    y: float = 0.0

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"non-finite coordinate in Point({self.x!r}, {self.y!r})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class Instance:
    """A point set ``points`` from which ``k`` points are to be chosen.

    ``gamma`` selects how many nearest neighbours contribute to a point's
    cost. In ``Mode.LINE`` every point must have ``y == 0``.
    """

    points: tuple[Point, ...]
    k: int
    gamma: int = 2
    mode: Mode = Mode.PLANE

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "mode", Mode(self.mode))
        n = len(self.points)
        if self.gamma not in (1, 2):
            raise InvalidInstance(f"gamma must be 1 or 2, got {self.gamma}")
        if not (self.gamma + 1 <= self.k <= n):
            raise InvalidInstance(
                f"k={self.k} outside [gamma+1, n] = [{self.gamma + 1}, {n}]"
            )
        if self.mode is Mode.LINE and any(p.y != 0.0 for p in self.points):
            raise InvalidInstance("line instances require y == 0 for every point")

    @property
    def n(self) -> int:
        return len(self.points)

    @classmethod
    def from_coords(cls, coords, k: int, gamma: int = 2, mode: Mode = Mode.PLANE) -> "Instance":
        pts = []
        for c in coords:
            if isinstance(c, (int, float)):
                pts.append(Point(c, 0.0))
            else:
                pts.append(Point(*c))
        return cls(tuple(pts), k, gamma, mode)

    def coords(self) -> np.ndarray:
        return np.array([(p.x, p.y) for p in self.points], dtype=float).reshape(-1, 2)

    def distance_matrix(self) -> np.ndarray:
        return distance_matrix(self.points)


@dataclass(frozen=True)
class Solution:
    indices: tuple[int, ...]
    cost: float
    method: Method
    lower_bound: Optional[float] = None
    stats: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(int(i) for i in self.indices)))
        object.__setattr__(self, "method", Method(self.method))


def dist(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def distance_matrix(points: Sequence[Point]) -> np.ndarray:
    """Pairwise distances built from :func:`dist` so every solver sees identical values."""
    n = len(points)
    out = np.zeros((n, n), dtype=float)
    for i in range(n):
        for j in range(i + 1, n):
            out[i, j] = out[j, i] = dist(points[i], points[j])
    return out


def _points(points) -> Sequence[Point]:
    return points.points if isinstance(points, Instance) else points


def nearest_indices(points, p_idx: int, s: Iterable[int], gamma: int) -> list[int]:
    """The ``gamma`` members of ``s - {p_idx}`` closest to point ``p_idx``.

    Ties in distance go to the smaller index. ``p_idx`` does not have to be
    a member of ``s``.
    """
    pts = _points(points)
    others = sorted({int(i) for i in s} - {p_idx})
    if len(others) < gamma:
        raise TooFewNeighbors(
            f"point {p_idx} has {len(others)} other members, needs {gamma}"
        )
    p = pts[p_idx]
    ranked = sorted(others, key=lambda q: (dist(p, pts[q]), q))
    return ranked[:gamma]


def cost_point(points, p_idx: int, s: Iterable[int], gamma: int) -> float:
    """Sum of distances from ``p_idx`` to its ``gamma`` nearest members of ``s``."""
    pts = _points(points)
    nearest = nearest_indices(pts, p_idx, s, gamma)
    total = 0.0
    for q in nearest:
        total += dist(pts[p_idx], pts[q])
    return total


def cost_set(points, s: Iterable[int], gamma: int) -> float:
    """Minimum of :func:`cost_point` over the members of ``s``."""
    pts = _points(points)
    members = sorted({int(i) for i in s})
    if len(members) <= gamma:
        raise TooFewNeighbors(f"a set of {len(members)} points has no {gamma}-dispersion cost")
    return min(cost_point(pts, p, members, gamma) for p in members)


def solution_from(instance: Instance, indices: Iterable[int], method: Method, **kw) -> Solution:
    idx = tuple(sorted(int(i) for i in indices))
    return Solution(idx, cost_set(instance.points, idx, instance.gamma), method, **kw)
