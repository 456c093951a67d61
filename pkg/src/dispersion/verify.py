"""Executable checks of the disk-packing lemmas and ratio sweeps against the oracle."""

from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence

from .core import (
    BudgetExceeded,
    DispersionError,
    Instance,
    Method,
    Mode,
    Point,
    Solution,
    TooFewNeighbors,
    cost_point,
    cost_set,
    dist,
    nearest_indices,
)
from .instances import Family, GeneratorSpec, Xoshiro256, generate
from .solvers import DEFAULT_BUDGET, brute_force_opt, lambda_for, solve

BOUNDARY_BAND = 1e-12
RATIO_TOL = 1e-9


class PreconditionUnmet(DispersionError):
    """The lemma's hypothesis does not hold for the given input."""


class Containment(str, enum.Enum):
    OUTSIDE = "outside"
    ON_BOUNDARY = "on_boundary"
    PROPERLY_CONTAINED = "properly_contained"


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius >= 0:
            raise ValueError(f"disk radius must be non-negative, got {self.radius}")


def containment(d: Disk, p: Point) -> Containment:
    r = d.radius
    gap = dist(d.center, p) - r
    if abs(gap) <= BOUNDARY_BAND * r:
        return Containment.ON_BOUNDARY
    return Containment.PROPERLY_CONTAINED if gap < 0 else Containment.OUTSIDE


def disk_radius(instance: Instance, opt: Solution) -> float:
    """Radius cost(OPT)/lambda for the planar lemmas.

    The lemmas are statements about points in the plane, so collinear
    inputs use the planar constant of their gamma.
    """
    return opt.cost / lambda_for(instance.gamma, Mode.PLANE)


def _opt_disks(instance: Instance, opt: Solution) -> list[Disk]:
    r = disk_radius(instance, opt)
    return [Disk(instance.points[i], r) for i in opt.indices]


def _proper_count(d: Disk, pts: Iterable[Point]) -> int:
    return sum(containment(d, p) is Containment.PROPERLY_CONTAINED for p in pts)


def check_opt_disk_lemma(instance: Instance, opt: Solution) -> bool:
    """No disk of radius cost(OPT)/lambda centred at an input point properly
    contains more than gamma optimal points."""
    r = disk_radius(instance, opt)
    opt_pts = [instance.points[i] for i in opt.indices]
    return all(_proper_count(Disk(c, r), opt_pts) <= instance.gamma for c in instance.points)


def check_corollaries(instance: Instance, opt: Solution) -> bool:
    """Each input point lies in at most gamma+1 optimal disks and strictly
    inside at most gamma of them."""
    disks = _opt_disks(instance, opt)
    for p in instance.points:
        kinds = [containment(d, p) for d in disks]
        inside = sum(c is not Containment.OUTSIDE for c in kinds)
        proper = sum(c is Containment.PROPERLY_CONTAINED for c in kinds)
        if inside > instance.gamma + 1 or proper > instance.gamma:
            return False
    return True


def check_counting_lemma(instance: Instance, opt: Solution, partial: Iterable[int]) -> bool:
    partial = sorted({int(i) for i in partial})
    if len(partial) >= instance.k:
        raise PreconditionUnmet(f"partial set has {len(partial)} >= k points")
    r = disk_radius(instance, opt)
    try:
        c = cost_set(instance.points, partial, instance.gamma)
    except TooFewNeighbors:
        c = math.inf  # no member has gamma neighbours, so nothing falls below rho
    if c < r:
        raise PreconditionUnmet(f"cost {c} of partial set is below rho={r}")
    pts = [instance.points[i] for i in partial]
    return any(_proper_count(d, pts) <= instance.gamma - 1 for d in _opt_disks(instance, opt))


def check_line_structure(instance: Instance, opt: Solution) -> bool:
    """Every point achieving the optimal cost sits between its two nearest
    optimal points, which are its immediate neighbours along the line."""
    if instance.mode is not Mode.LINE or instance.gamma != 2:
        raise PreconditionUnmet("line structure applies to gamma=2 line instances")
    pts = instance.points
    order = sorted(opt.indices, key=lambda i: (pts[i].x, i))
    target = opt.cost
    for pos, o in enumerate(order):
        c = cost_point(pts, o, opt.indices, 2)
        if abs(c - target) > BOUNDARY_BAND * max(target, 1.0):
            continue
        if pos == 0 or pos == len(order) - 1:
            return False
        if set(nearest_indices(pts, o, opt.indices, 2)) != {order[pos - 1], order[pos + 1]}:
            return False
    return True


def ratio_bound(method: Method | str, gamma: int, mode: Mode | str) -> float:
    method, mode = Method(method), Mode(mode)
    if method is Method.GREEDY:
        return 2.0 * math.sqrt(3.0)
    if method is Method.ORACLE:
        return 1.0
    return lambda_for(gamma, mode)


def passes(ratio: float, bound: float) -> bool:
    return ratio <= bound + RATIO_TOL


@dataclass(frozen=True)
class RatioReport:
    trial: int
    n: int
    k: int
    gamma: int
    mode: str
    seed: int
    oracle_cost: float
    alg_cost: float
    ratio: float
    bound: float
    passed: bool
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


def compute_ratio(oracle_cost: float, alg_cost: float) -> float:
    if alg_cost > 0:
        return oracle_cost / alg_cost
    return 1.0 if oracle_cost == 0 else math.inf


def ratio_report(
    instance: Instance,
    method: Method | str,
    *,
    trial: int = 0,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    solver=None,
    opt: Optional[Solution] = None,
) -> RatioReport:
    method = Method(method)
    bound = ratio_bound(method, instance.gamma, instance.mode)
    head = dict(trial=trial, n=instance.n, k=instance.k, gamma=instance.gamma,
                mode=instance.mode.value, seed=seed, bound=bound)
    try:
        if opt is None:
            opt = brute_force_opt(instance, budget=budget)
    except BudgetExceeded as e:
        return RatioReport(**head, oracle_cost=math.nan, alg_cost=math.nan,
                           ratio=math.nan, passed=False, error=f"BudgetExceeded: {e}")
    alg = solver(instance) if solver is not None else solve(instance, method)
    ratio = compute_ratio(opt.cost, alg.cost)
    return RatioReport(**head, oracle_cost=opt.cost, alg_cost=alg.cost, ratio=ratio,
                       passed=passes(ratio, bound))


@dataclass(frozen=True)
class SweepSpec:
    """Recipe for a family of random trials; trial ``t`` uses seed ``seed + t``."""

    family: Family
    n_min: int
    n_max: int
    k_min: int
    k_max: int
    gamma: int = 2
    seed: int = 0
    extent: float = 1.0

    def trial_spec(self, trial: int) -> GeneratorSpec:
        rng = Xoshiro256(self.seed + trial)
        n = rng.randint(self.n_min, self.n_max)
        k_lo = max(self.k_min, self.gamma + 1)
        k = rng.randint(k_lo, max(k_lo, min(self.k_max, n)))
        return GeneratorSpec(self.family, n, k, self.gamma, self.seed + trial, self.extent)


def _run_trial(args) -> RatioReport:
    sweep, trial, method, budget = args
    gs = sweep.trial_spec(trial)
    return ratio_report(generate(gs), method, trial=trial, seed=gs.seed, budget=budget)


def run_ratio_sweep(
    sweep: SweepSpec,
    trials: int,
    algorithm: Method | str = Method.FRAMEWORK,
    *,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> list[RatioReport]:
    jobs = [(sweep, t, Method(algorithm), budget) for t in range(trials)]
    if workers <= 1:
        return [_run_trial(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_trial, jobs))


def lemma_partials(instance: Instance, opt: Solution, extra: Sequence[Sequence[int]] = ()) -> list[tuple[int, ...]]:
    """Partial sets worth feeding the counting lemma: opt minus one point,
    the (gamma+1)-subsets of opt, and any caller-supplied sets below size k."""
    out = set()
    idx = opt.indices
    for i in range(len(idx)):
        out.add(idx[:i] + idx[i + 1:])
    for c in itertools.combinations(idx, instance.gamma + 1):
        if len(c) < instance.k:
            out.add(c)
    for s in extra:
        s = tuple(sorted(s))
        if len(s) < instance.k:
            out.add(s)
    return sorted(out)


def check_all_lemmas(instance: Instance, opt: Solution, extra_partials=()) -> dict[str, bool]:
    """Run every applicable lemma check; hypothesis failures of the counting
    lemma are skipped, not counted as violations."""
    results = {
        "opt_disk": check_opt_disk_lemma(instance, opt),
        "corollaries": check_corollaries(instance, opt),
    }
    counting = True
    for part in lemma_partials(instance, opt, extra_partials):
        try:
            counting = counting and check_counting_lemma(instance, opt, part)
        except PreconditionUnmet:
            continue
    results["counting"] = counting
    if instance.mode is Mode.LINE and instance.gamma == 2:
        results["line_structure"] = check_line_structure(instance, opt)
    return results
