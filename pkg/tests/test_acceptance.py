"""Acceptance gate: each test checks one criterion at its stated tolerance
and prints a single PASS/FAIL line for it."""

import math
import time

import pytest

from dispersion import (
    Instance,
    Method,
    Point,
    brute_force_opt,
    cost_set,
    framework_solve,
    greedy_dispersion,
)
from dispersion.bench import loglog_slope, scaling_run
from dispersion.instances import Family, Xoshiro256, generate, read_instance
from dispersion.verify import SweepSpec, check_all_lemmas

TOL = 1e-9
SQRT3 = math.sqrt(3.0)
PER_CELL = 90  # 3 families x 2 gammas x 90 = 540 instances
LINE_TRIALS = 220


def report(capsys, number, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


@pytest.fixture(scope="module")
def plane_corpus():
    """(instance, oracle, greedy-or-None, framework) for the plane sweep."""
    rows = []
    t0 = time.perf_counter()
    for gamma in (1, 2):
        for fam in (Family.UNIFORM, Family.GRID, Family.CLUSTERED):
            sweep = SweepSpec(fam, 6, 12, gamma + 1, 6, gamma, seed=1000 * gamma)
            for t in range(PER_CELL):
                inst = generate(sweep.trial_spec(t))
                greedy = greedy_dispersion(inst) if gamma == 2 else None
                rows.append((inst, brute_force_opt(inst), greedy, framework_solve(inst)))
    return rows, time.perf_counter() - t0


@pytest.fixture(scope="module")
def line_corpus():
    rows = []
    t0 = time.perf_counter()
    sweep = SweepSpec(Family.COLLINEAR, 5, 14, 3, 7, 2, seed=5000, extent=100.0)
    for t in range(LINE_TRIALS):
        inst = generate(sweep.trial_spec(t))
        rows.append((inst, brute_force_opt(inst), framework_solve(inst)))
    return rows, time.perf_counter() - t0


def test_criterion_1_oracle_dominance(plane_corpus, capsys):
    rows, elapsed = plane_corpus
    bad = 0
    for inst, opt, greedy, fw in rows:
        for sol in (greedy, fw):
            if sol is not None and sol.cost > opt.cost + TOL * opt.cost:
                bad += 1
    gammas = {inst.gamma for inst, *_ in rows}
    ok = len(rows) >= 500 and gammas == {1, 2} and bad == 0 and elapsed < 120
    report(capsys, 1, ok, f"{len(rows)} instances, {bad} above oracle, {elapsed:.1f}s")


def test_criterion_2_plane_gamma2_bounds(plane_corpus, capsys):
    rows, _ = plane_corpus
    worst_g = worst_f = 0.0
    count = 0
    for inst, opt, greedy, fw in rows:
        if inst.gamma != 2:
            continue
        count += 1
        worst_g = max(worst_g, opt.cost / greedy.cost)
        worst_f = max(worst_f, opt.cost / fw.cost)
    bound = 2 * SQRT3 + TOL
    ok = count > 0 and worst_g <= bound and worst_f <= bound
    report(capsys, 2, ok, f"{count} instances, worst greedy {worst_g:.4f}, worst framework {worst_f:.4f}")


def test_criterion_3_plane_gamma1_bound(plane_corpus, capsys):
    rows, _ = plane_corpus
    ratios = [opt.cost / fw.cost for inst, opt, _, fw in rows if inst.gamma == 1]
    worst = max(ratios)
    ok = len(ratios) > 0 and worst <= 2 + TOL
    report(capsys, 3, ok, f"{len(ratios)} instances, worst {worst:.4f}")


def test_criterion_4_line_exactness(line_corpus, capsys):
    rows, elapsed = line_corpus
    off = sum(abs(fw.cost - opt.cost) > TOL * opt.cost for _, opt, fw in rows)
    ok = len(rows) >= 200 and off == 0 and elapsed < 60
    report(capsys, 4, ok, f"{len(rows)} instances, {off} inexact, {elapsed:.1f}s")


def test_criterion_5_lemma_suite(plane_corpus, line_corpus, capsys):
    failures = []
    total = 0
    plane_rows, _ = plane_corpus
    line_rows, _ = line_corpus
    for inst, opt, *sols in list(plane_rows) + list(line_rows):
        partials = [s.indices[:-1] for s in sols if s is not None]
        res = check_all_lemmas(inst, opt, partials)
        total += 1
        if not all(res.values()):
            failures.append((inst.n, inst.k, inst.gamma, res))
    report(capsys, 5, not failures, f"{total} instances, {len(failures)} with a false check")


def test_criterion_6_hand_fixtures(fixtures_dir, capsys):
    def load(name):
        return read_instance((fixtures_dir / "hand" / name).read_bytes())

    checks = []
    line4 = load("collinear4.txt")
    for sol in (framework_solve(line4), brute_force_opt(line4)):
        checks.append(sol.indices == (0, 1, 3) and abs(sol.cost - 3.0) <= 1e-12)
    tri = load("triangle.txt")
    checks.append(abs(cost_set(tri, range(3), 2) - 2.0) <= 1e-12)
    for sol in (greedy_dispersion(tri), framework_solve(tri), brute_force_opt(tri)):
        checks.append(abs(sol.cost - 2.0) <= 1e-12)
    sq = load("square_center.txt")
    for sol in (greedy_dispersion(sq), brute_force_opt(sq)):
        checks.append(abs(sol.cost - 2.0) <= 1e-12)
    report(capsys, 6, all(checks), f"{sum(checks)}/{len(checks)} exact")


def _random_points(rng, n):
    # eighth-unit lattice keeps rotations well conditioned
    return [Point(rng.randint(-80, 80) / 8, rng.randint(-80, 80) / 8) for _ in range(n)]


def test_criterion_7_core_properties(capsys):
    rng = Xoshiro256(7)
    trials = 10_000
    failed = 0
    for _ in range(trials):
        gamma = rng.randint(1, 2)
        n = rng.randint(gamma + 2, 9)
        pts = _random_points(rng, n)
        members = list(range(n))
        # monotone: a superset never has larger cost
        drop = rng.randint(0, n - 1)
        sub = members[:drop] + members[drop + 1:]
        base = cost_set(pts, members, gamma)
        ok = base <= cost_set(pts, sub, gamma)
        # rigid motions and scaling
        theta = rng.uniform(0, 2 * math.pi)
        tx, ty, c = rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(0.01, 100)
        ct, sn = math.cos(theta), math.sin(theta)
        moved = [Point(ct * p.x - sn * p.y + tx, sn * p.x + ct * p.y + ty) for p in pts]
        ok &= math.isclose(cost_set(moved, members, gamma), base, rel_tol=1e-9, abs_tol=1e-9)
        scaled = [Point(c * p.x, c * p.y) for p in pts]
        ok &= math.isclose(cost_set(scaled, members, gamma), c * base, rel_tol=1e-12, abs_tol=1e-300)
        failed += not ok
    report(capsys, 7, failed == 0, f"{trials} trials, {failed} failed")


def test_criterion_8_line_scaling(capsys):
    sizes = [50, 100, 200, 400]
    t0 = time.perf_counter()
    rows = scaling_run(sizes, k=10, gamma=2)
    elapsed = time.perf_counter() - t0
    slope = loglog_slope(sizes, [r.wall_ms for r in rows])
    ok = 3.3 <= slope <= 4.7 and elapsed < 300
    times = ", ".join(f"n={r.n}: {r.wall_ms / 1e3:.2f}s" for r in rows)
    report(capsys, 8, ok, f"slope {slope:.2f}, {times}, total {elapsed:.1f}s")
