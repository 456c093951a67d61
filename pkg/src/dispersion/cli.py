"""Command-line entry point: ``dispersion {solve,verify,gen,bench,plot}``.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 unsupported regime or oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import math
import shlex
import sys
import time
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from . import solvers
from .bench import loglog_slope, scaling_run, time_solver, warm_up
from .core import (
    BudgetExceeded,
    Instance,
    InvalidInstance,
    Method,
    NoSolution,
    UnsupportedRegime,
    cost_set,
)
from .instances import (
    Family,
    GeneratorSpec,
    InvalidSpec,
    InvariantViolation,
    ParseError,
    fixture_path,
    generate,
    instance_digest,
    read_instance,
    write_instance,
)
from .verify import (
    PreconditionUnmet,
    RatioReport,
    SweepSpec,
    check_all_lemmas,
    check_line_structure,
    ratio_report,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAPABILITY = 0, 1, 2, 3

CSV_COLUMNS = ["trial", "n", "k", "gamma", "mode", "seed",
               "oracle_cost", "alg_cost", "ratio", "bound", "pass"]


class UsageError(Exception):
    pass


def fmt(x: Optional[float]) -> str:
    """12 significant digits, '.' decimal separator, independent of locale."""
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".12g")


def _load(path: str) -> Instance:
    try:
        data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    return read_instance(data)


def _echo(argv: Sequence[str]) -> str:
    return "dispersion " + " ".join(shlex.quote(a) for a in argv)


# ---- solve ---------------------------------------------------------------

def cmd_solve(args, argv) -> int:
    inst = _load(args.instance)
    method = Method(args.algorithm)
    t0 = time.perf_counter()
    if method is Method.ORACLE:
        sol = solvers.brute_force_opt(inst, budget=args.budget)
    elif method is Method.FRAMEWORK:
        sol = solvers.framework_solve(inst, literal=args.literal)
    else:
        sol = solvers.solve(inst, method)
    wall = (time.perf_counter() - t0) * 1e3
    out = [
        f"command: {_echo(argv)}",
        f"instance: {instance_digest(inst)}",
        f"algorithm: {method.value}",
        f"indices: {' '.join(map(str, sol.indices))}",
        f"cost: {fmt(sol.cost)}",
    ]
    if sol.lower_bound is not None:
        out.append(f"lower_bound: {fmt(sol.lower_bound)}")
    out.append(f"wall_ms: {wall:.3f}")
    print("\n".join(out))
    return EXIT_OK


# ---- verify --------------------------------------------------------------

def _row(rep: RatioReport, passed: bool) -> list[str]:
    return [str(rep.trial), str(rep.n), str(rep.k), str(rep.gamma), rep.mode, str(rep.seed),
            fmt(rep.oracle_cost), fmt(rep.alg_cost), fmt(rep.ratio), fmt(rep.bound),
            "true" if passed else "false"]


def _verify_one(inst: Instance, check: str, method: Method, trial: int, seed: int, budget: int):
    opt = None
    if check != "ratio":
        opt = solvers.brute_force_opt(inst, budget=budget)
    rep = ratio_report(inst, method, trial=trial, seed=seed, budget=budget, opt=opt)
    passed = rep.passed
    if check == "lemmas":
        passed = passed and all(check_all_lemmas(inst, opt).values())
    elif check == "line-structure":
        passed = passed and check_line_structure(inst, opt)
    return rep, passed


def cmd_verify(args, argv) -> int:
    method = Method(args.algorithm)
    rows = []
    budget_hit = False
    if args.sweep:
        sweep = SweepSpec(Family(args.sweep), args.n_min, args.n_max, args.k_min, args.k_max,
                          args.gamma, args.seed, args.extent)
        cases = []
        for t in range(args.trials):
            gs = sweep.trial_spec(t)
            cases.append((generate(gs), t, gs.seed))
    else:
        if not args.instance:
            raise UsageError("verify needs an instance file or --sweep")
        cases = [(_load(args.instance), 0, 0)]
    for inst, trial, seed in cases:
        try:
            rep, passed = _verify_one(inst, args.check, method, trial, seed, args.budget)
        except BudgetExceeded as e:
            print(f"error: trial {trial}: {e}", file=sys.stderr)
            budget_hit = True
            continue
        if rep.error:
            print(f"error: trial {trial}: {rep.error}", file=sys.stderr)
            budget_hit = True
        rows.append((rep, passed))

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep, passed in rows:
        w.writerow(_row(rep, passed))
    if budget_hit:
        return EXIT_CAPABILITY
    return EXIT_OK if all(p for _, p in rows) else EXIT_FAIL


# ---- gen -----------------------------------------------------------------

def cmd_gen(args, argv) -> int:
    spec = GeneratorSpec(Family(args.family), args.n, args.k, args.gamma, args.seed, args.extent)
    data = write_instance(generate(spec))
    if args.fixture_dir:
        path = fixture_path(args.fixture_dir, spec)
    elif args.output:
        path = Path(args.output)
    else:
        sys.stdout.write(data.decode("utf-8"))
        return EXIT_OK
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    print(path)
    return EXIT_OK


# ---- bench ---------------------------------------------------------------

def cmd_bench(args, argv) -> int:
    method = Method(args.algorithm)
    if args.instances:
        warm_up(method)
        timings = [time_solver(_load(p), method, args.repeats) for p in args.instances]
    else:
        timings = scaling_run(args.sizes, args.k, args.gamma, args.family, args.seed,
                              args.extent, method, args.repeats)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "k", "gamma", "mode", "wall_ms", "cost"])
    for t in timings:
        w.writerow([t.n, t.k, t.gamma, t.mode, f"{t.wall_ms:.3f}", fmt(t.cost)])
    if len({t.n for t in timings}) >= 2:
        slope = loglog_slope([t.n for t in timings], [t.wall_ms for t in timings])
        print(f"# log-log slope of wall time vs n: {slope:.3f}")
    return EXIT_OK


# ---- plot ----------------------------------------------------------------

def render_svg(inst: Instance, selected: Sequence[int], radius: Optional[float] = None,
               size: int = 480, margin: int = 24) -> str:
    xy = inst.coords()
    lo = xy.min(axis=0)
    span = float(max((xy.max(axis=0) - lo).max(), 1e-12))
    if radius:
        lo = lo - radius
        span += 2 * radius
    scale = (size - 2 * margin) / span

    def px(x, y):
        return margin + (x - lo[0]) * scale, size - margin - (y - lo[1]) * scale

    chosen = set(selected)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f"<title>{escape(f'n={inst.n} k={inst.k} gamma={inst.gamma} {inst.mode.value}')}</title>",
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    if radius:
        for i in sorted(chosen):
            cx, cy = px(*xy[i])
            parts.append(f'<circle class="disk" cx="{cx:.3f}" cy="{cy:.3f}" r="{radius * scale:.3f}" '
                         'fill="none" stroke="#4477aa" stroke-dasharray="4 3"/>')
    for i, (x, y) in enumerate(xy):
        cx, cy = px(x, y)
        if i in chosen:
            parts.append(f'<circle class="point selected" data-index="{i}" cx="{cx:.3f}" '
                         f'cy="{cy:.3f}" r="5" fill="#cc3311" stroke="black"/>')
        else:
            parts.append(f'<circle class="point" data-index="{i}" cx="{cx:.3f}" '
                         f'cy="{cy:.3f}" r="3" fill="#999999"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_plot(args, argv) -> int:
    inst = _load(args.instance)
    radius = None
    if args.indices is not None:
        try:
            selected = sorted({int(t) for t in args.indices.replace(",", " ").split()})
        except ValueError:
            raise UsageError(f"bad --indices {args.indices!r}") from None
        if any(i < 0 or i >= inst.n for i in selected):
            raise UsageError("--indices out of range")
        cost = None
    else:
        sol = solvers.solve(inst, args.algorithm)
        selected, cost = sol.indices, sol.cost
    if args.disks:
        if cost is None:
            cost = cost_set(inst, selected, inst.gamma)
        radius = cost / solvers.lambda_for(inst.gamma, inst.mode)
    svg = render_svg(inst, selected, radius)
    if args.output:
        Path(args.output).write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# ---- parser --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dispersion", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1,
                   help="cap on worker count (solvers currently run single-threaded)")
    sub = p.add_subparsers(dest="command", required=True)
    algos = [m.value for m in Method]

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("instance", help="instance file, or - for stdin")
    s.add_argument("--algorithm", choices=algos, default="framework")
    s.add_argument("--literal", action="store_true",
                   help="framework: take the globally closest candidate instead of the closest qualifying one")
    s.add_argument("--budget", type=int, default=solvers.DEFAULT_BUDGET)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="compare against the oracle and check lemmas; CSV on stdout")
    v.add_argument("instance", nargs="?")
    v.add_argument("--sweep", choices=[f.value for f in Family])
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--n-min", type=int, default=6)
    v.add_argument("--n-max", type=int, default=12)
    v.add_argument("--k-min", type=int, default=3)
    v.add_argument("--k-max", type=int, default=6)
    v.add_argument("--gamma", type=int, default=2, choices=[1, 2])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--extent", type=float, default=1.0)
    v.add_argument("--check", choices=["ratio", "lemmas", "line-structure"], default="ratio")
    v.add_argument("--algorithm", choices=["greedy", "framework"], default="framework")
    v.add_argument("--budget", type=int, default=solvers.DEFAULT_BUDGET)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate an instance in canonical text form")
    g.add_argument("family", choices=[f.value for f in Family])
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--gamma", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--extent", type=float, default=1.0)
    dest = g.add_mutually_exclusive_group()
    dest.add_argument("-o", "--output")
    dest.add_argument("--fixture-dir", help="write to <dir>/<family>/<n>_<k>_<gamma>_<seed>.txt")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time a solver over instance files or a size sweep")
    b.add_argument("instances", nargs="*")
    b.add_argument("--algorithm", choices=algos, default="framework")
    b.add_argument("--family", choices=[f.value for f in Family], default="collinear")
    b.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    b.add_argument("--k", type=int, default=10)
    b.add_argument("--gamma", type=int, default=2)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--extent", type=float, default=100.0)
    b.add_argument("--repeats", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    pl = sub.add_parser("plot", help="render an instance and a selection as SVG")
    pl.add_argument("instance")
    pl.add_argument("--algorithm", choices=algos, default="framework")
    pl.add_argument("--indices", help="comma or space separated indices instead of solving")
    pl.add_argument("--disks", action="store_true", help="draw disks of radius cost/lambda")
    pl.add_argument("-o", "--output")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, argv)
    except (UnsupportedRegime, BudgetExceeded, NoSolution) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (ParseError, InvariantViolation, InvalidInstance, InvalidSpec,
            PreconditionUnmet, UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
