"""Wall-clock timing of solvers and log-log growth-rate fits."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Instance, Method
from .instances import Family, GeneratorSpec, generate
from .solvers import solve


@dataclass(frozen=True)
class Timing:
    n: int
    k: int
    gamma: int
    mode: str
    wall_ms: float
    cost: float


def warm_up(method: Method | str = Method.FRAMEWORK) -> None:
    """Trigger JIT compilation outside of any timed region."""
    for family, gamma in ((Family.COLLINEAR, 2), (Family.UNIFORM, 2), (Family.UNIFORM, 1)):
        inst = generate(GeneratorSpec(family, 8, 4, gamma, seed=0))
        try:
            solve(inst, method)
        except Exception:
            pass


def time_solver(instance: Instance, method: Method | str, repeats: int = 1) -> Timing:
    best = float("inf")
    sol = None
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        sol = solve(instance, method)
        best = min(best, time.perf_counter() - t0)
    return Timing(instance.n, instance.k, instance.gamma, instance.mode.value, best * 1e3, sol.cost)


def loglog_slope(ns: Sequence[float], times: Sequence[float]) -> float:
    """Least-squares slope of log(time) against log(n)."""
    slope, _ = np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(times, float)), 1)
    return float(slope)


def scaling_run(
    sizes: Sequence[int],
    k: int = 10,
    gamma: int = 2,
    family: Family | str = Family.COLLINEAR,
    seed: int = 0,
    extent: float = 100.0,
    method: Method | str = Method.FRAMEWORK,
    repeats: int = 1,
) -> list[Timing]:
    warm_up(method)
    out = []
    for n in sizes:
        inst = generate(GeneratorSpec(Family(family), n, k, gamma, seed, extent))
        out.append(time_solver(inst, method, repeats))
    return out
