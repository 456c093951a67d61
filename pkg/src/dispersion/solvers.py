"""Greedy, seed-and-grow and exhaustive solvers for gamma-dispersion."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .core import (
    BudgetExceeded,
    Instance,
    InvalidInstance,
    Method,
    Mode,
    NoSolution,
    Solution,
    UnsupportedRegime,
    cost_set,
    solution_from,
)

DEFAULT_BUDGET = 10**7
_CHUNK = 50_000


@dataclass(frozen=True)
class FrameworkState:
    """Bookkeeping of a seed-and-grow run.

    ``alpha`` is the seed cost of the accepted seed, ``rho = alpha / lambda_``
    its growth threshold and ``beta`` the best threshold accepted so far.
    """

    lambda_: float
    alpha: float = 0.0
    rho: float = 0.0
    beta: float = 0.0
    best: Optional[tuple[int, ...]] = None


def lambda_for(gamma: int, mode: Mode | str) -> float:
    mode = Mode(mode)
    if gamma == 2:
        return 1.0 if mode is Mode.LINE else 2.0 * math.sqrt(3.0)
    if gamma == 1 and mode is Mode.PLANE:
        return 2.0
    raise UnsupportedRegime(f"no framework constant for gamma={gamma} on a {mode.value}")


def greedy_dispersion(instance: Instance) -> Solution:
    if instance.gamma != 2 or instance.mode is not Mode.PLANE:
        raise UnsupportedRegime("greedy dispersion is defined for gamma=2 in the plane")
    D = instance.distance_matrix()
    members = _kernels.greedy(D, instance.k)
    return solution_from(
        instance,
        members,
        Method.GREEDY,
        stats={"seed": tuple(sorted(int(i) for i in members[:3]))},
    )


def _seed_array(instance: Instance, seed: Iterable[int]) -> np.ndarray:
    seed = np.array(sorted(int(i) for i in seed), dtype=np.int64)
    if len(seed) != instance.gamma + 1 or len(set(seed.tolist())) != len(seed):
        raise InvalidInstance(f"seed must hold {instance.gamma + 1} distinct indices")
    if seed.min() < 0 or seed.max() >= instance.n:
        raise InvalidInstance("seed index out of range")
    return seed


def framework_grow(
    instance: Instance,
    seed: Iterable[int],
    rho: float,
    *,
    literal: bool = False,
    D: Optional[np.ndarray] = None,
) -> Optional[tuple[int, ...]]:
    """Grow ``seed`` to ``k`` points keeping the set cost at least ``rho``.

    Each step takes, among the candidates that keep the threshold, the one
    closest to the current set (smallest own cost, then smallest index).
    With ``literal=True`` the closest candidate overall is taken and the
    threshold only filters ties. Returns None when no candidate qualifies
    before ``k`` is reached.
    """
    seed = _seed_array(instance, seed)
    if D is None:
        D = instance.distance_matrix()
    n, k = instance.n, instance.k
    members = np.empty(max(k, len(seed)), dtype=np.int64)
    m = _kernels.grow(
        D, seed, k, instance.gamma, float(rho), literal,
        members, np.zeros(n, dtype=np.bool_), np.empty(n), np.empty(n), np.empty(n), np.empty(n),
    )
    if m < k:
        return None
    return tuple(sorted(int(i) for i in members[:m]))


def framework_solve(instance: Instance, *, literal: bool = False) -> Solution:
    lam = lambda_for(instance.gamma, instance.mode)
    D = instance.distance_matrix()
    found, members, alpha, beta, n_seeds, n_attempts = _kernels.framework(
        D, instance.k, instance.gamma, lam, literal
    )
    if not found:
        raise NoSolution("no seed grew to k points")
    best = tuple(sorted(int(i) for i in members))
    state = FrameworkState(lam, float(alpha), float(alpha) / lam, float(beta), best)
    return solution_from(
        instance,
        best,
        Method.FRAMEWORK,
        lower_bound=float(beta),
        stats={"state": state, "seeds": int(n_seeds), "attempts": int(n_attempts)},
    )


def brute_force_opt(instance: Instance, budget: int = DEFAULT_BUDGET) -> Solution:
    """Exhaustive optimum over all k-subsets, first lexicographic subset on ties."""
    n, k, gamma = instance.n, instance.k, instance.gamma
    total = math.comb(n, k)
    if total > budget:
        raise BudgetExceeded(f"C({n},{k}) = {total} subsets exceeds budget {budget}")
    D = instance.distance_matrix()
    combos = itertools.combinations(range(n), k)
    best_cost = -np.inf
    best_idx: tuple[int, ...] = ()
    while True:
        chunk = np.array(list(itertools.islice(combos, _CHUNK)), dtype=np.int64)
        if chunk.size == 0:
            break
        sub = D[chunk[:, :, None], chunk[:, None, :]]
        diag = np.arange(k)
        sub[:, diag, diag] = np.inf
        if gamma == 1:
            per_point = sub.min(axis=2)
        else:
            two = np.partition(sub, 1, axis=2)
            per_point = two[:, :, 0] + two[:, :, 1]
        costs = per_point.min(axis=1)
        at = int(np.argmax(costs))
        if costs[at] > best_cost:
            best_cost = float(costs[at])
            best_idx = tuple(int(i) for i in chunk[at])
    return Solution(best_idx, cost_set(instance.points, best_idx, gamma), Method.ORACLE)


SOLVERS = {
    Method.GREEDY: greedy_dispersion,
    Method.FRAMEWORK: framework_solve,
    Method.ORACLE: brute_force_opt,
}


def solve(instance: Instance, method: Method | str, **kw) -> Solution:
    return SOLVERS[Method(method)](instance, **kw)
