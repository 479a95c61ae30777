"""Command-line interface.

Exit codes: 0 success, 1 verification failed, 2 usage or parse error,
3 search budget exceeded. Summaries go to stdout as ``key=value`` lines;
the effective configuration and diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import instance_io, mcr_solver, st_solver
from .disk_graph import Instance, UnionFind, linked
from .errors import BudgetExceededError, ConnRestoreError, InfeasibleError, InvalidParameterError
from .geometry import covering_grid, distance
from .reduction import st_via_mcr

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_CAP = 10**7


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _config(args) -> list[str]:
    skip = {"func"}
    items = [f"{k}={v}" for k, v in sorted(vars(args).items()) if k not in skip]
    return ["config " + " ".join(items)]


def _echo(args) -> list[str]:
    lines = _config(args)
    for line in lines:
        print(f"# {line}", file=sys.stderr)
    return lines


def _load(path: str) -> Instance:
    return instance_io.read_instance(Path(path).read_text())


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def _grid(instance: Instance, args):
    step = args.grid_step if args.grid_step is not None else instance.range / 2
    args.grid_step = step
    return covering_grid(instance.nodes, step, args.margin)


def cmd_gen(args) -> int:
    config = _echo(args)
    inst = instance_io.generate_random(args.n, args.L, args.r, args.seed)
    text = instance_io.write_instance(inst, config)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    print(f"nodes={len(inst)}", file=sys.stderr)
    return EXIT_OK


def cmd_solve_st(args) -> int:
    inst = _load(args.instance)
    if args.mode == "exact":
        grid = _grid(inst, args)
        config = _echo(args)
        sol = st_solver.solve_exact_grid(inst, grid, budget=args.subset_cap)
    else:
        config = _echo(args)
        sol = st_solver.steinerized_mst(inst)
    _write(args.out, instance_io.write_steiner(sol, config))
    print(f"h={sol.h}")
    return EXIT_OK


def _cost_model(inst: Instance, name: str) -> mcr_solver.CostModel:
    if name == "indicator":
        return mcr_solver.CostModel.indicator()
    return mcr_solver.CostModel.euclidean()


def cmd_solve_mcr(args) -> int:
    inst = _load(args.instance)
    cost = _cost_model(inst, args.cost)
    if args.mode == "exact":
        grid = _grid(inst, args)
        config = _echo(args)
        mapping = mcr_solver.solve_exact_grid(inst, cost, grid, budget=args.assignment_cap)
    else:
        config = _echo(args)
        mapping = mcr_solver.solve_heuristic(inst, cost)
    _write(args.out, instance_io.write_mapping(mapping, config))
    print(f"cost={instance_io.fmt(mapping.total_cost)}")
    print(f"moved={len(mapping.moved(inst))}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    inst = _load(args.instance)
    grid = _grid(inst, args)
    config = _echo(args)
    budget = args.assignment_cap

    def oracle(instance, cost, cands):
        return mcr_solver.solve_exact_grid(instance, cost, cands, budget=budget)

    def trace(iteration, aux, cost):
        if args.verbose:
            print(f"iteration={iteration} auxiliary={aux} cost={instance_io.fmt(cost)}",
                  file=sys.stderr)

    result = st_via_mcr(inst, grid, oracle, on_iteration=trace)
    _write(args.out, instance_io.write_steiner(result.as_solution(), config))
    print(f"steiner_count={result.steiner_count}")
    return EXIT_OK


def _largest_gap(points, r: float) -> tuple[int, float]:
    """Component count and the shortest distance separating some component from the rest."""
    uf = UnionFind(len(points))
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if linked(points[i], points[j], r):
                uf.union(i, j)
    groups = uf.groups()
    if len(groups) <= 1:
        return len(groups), 0.0
    # bottleneck of the component MST: the gap no relay-free fix can bridge
    comp = {i: g for g, block in enumerate(groups) for i in block}
    pairs = sorted((distance(points[i], points[j]), comp[i], comp[j])
                   for i in range(len(points)) for j in range(i + 1, len(points))
                   if comp[i] != comp[j])
    merge = UnionFind(len(groups))
    gap = 0.0
    for d, a, b in pairs:
        if merge.union(a, b):
            gap = d
    return len(groups), gap


def cmd_verify(args) -> int:
    inst = _load(args.instance)
    _echo(args)
    sol = instance_io.read_solution(Path(args.solution).read_text(), inst)
    if isinstance(sol, mcr_solver.Mapping):
        points = list(sol.targets)
        ok = mcr_solver.verify_mapping(inst, sol)
    else:
        points = list(inst.nodes) + list(sol.steiner_points)
        ok = st_solver.verify_solution(inst, sol)
    print(f"feasible={'true' if ok else 'false'}")
    if not ok:
        count, gap = _largest_gap(points, inst.range)
        print(f"components={count}")
        print(f"gap={instance_io.fmt(gap)}")
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_render(args) -> int:
    inst = _load(args.instance)
    _echo(args)
    sol = None
    if args.solution:
        sol = instance_io.read_solution(Path(args.solution).read_text(), inst)
    svg = instance_io.render_svg(inst, sol)
    if args.out:
        _write(args.out, svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def bench_row(seed: int, n: int, L: float, r: float, step: float | None,
              subset_cap: int, assignment_cap: int) -> tuple:
    inst = instance_io.generate_random(n, L, r, seed)
    grid = covering_grid(inst.nodes, step if step is not None else r / 2)
    exact = st_solver.solve_exact_grid(inst, grid, budget=subset_cap).h
    mst = st_solver.steinerized_mst(inst).h
    red = st_via_mcr(inst, grid, lambda i, c, g: mcr_solver.solve_exact_grid(
        i, c, g, budget=assignment_cap)).steiner_count
    return seed, exact, mst, red, exact == red


def cmd_bench(args) -> int:
    _echo(args)
    if args.seeds < 0:
        raise InvalidParameterError("seed count must be nonnegative")
    seeds = range(args.seed, args.seed + args.seeds)
    job = (args.n, args.L, args.r, args.grid_step, args.subset_cap, args.assignment_cap)
    print("seed,exact_h,mst_h,reduce_h,agree", flush=True)
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = pool.map(bench_row, seeds, *[[v] * len(seeds) for v in job])
            for row in rows:
                _print_row(row)
    else:
        for s in seeds:
            _print_row(bench_row(s, *job))
    return EXIT_OK


def _print_row(row) -> None:
    seed, exact, mst, red, agree = row
    print(f"{seed},{exact},{mst},{red},{'true' if agree else 'false'}", flush=True)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="connrestore",
                                     description="Steiner-point and movement-based connectivity restoration")
    sub = parser.add_subparsers(dest="command", required=True)

    def grid_flags(p):
        p.add_argument("--grid-step", type=float, default=None, help="candidate grid spacing (default r/2)")
        p.add_argument("--margin", type=float, default=0.0, help="grid margin around the nodes' bounding box")

    def budgets(p):
        p.add_argument("--subset-cap", type=_positive_int, default=DEFAULT_CAP,
                       help="work cap of the exact Steiner search")
        p.add_argument("--assignment-cap", type=_positive_int, default=DEFAULT_CAP,
                       help="partial assignments the exact MCR search may expand")

    p = sub.add_parser("gen", help="generate a seeded random instance")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-L", type=float, required=True, help="side of the square")
    p.add_argument("-r", type=float, required=True, help="communication range")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve-st", help="minimum Steiner points")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("exact", "mst"), default="exact")
    grid_flags(p)
    budgets(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_solve_st)

    p = sub.add_parser("solve-mcr", help="minimum-cost relocation")
    p.add_argument("instance")
    p.add_argument("--cost", choices=("indicator", "euclidean"), default="euclidean")
    p.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    grid_flags(p)
    budgets(p)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_solve_mcr)

    p = sub.add_parser("reduce", help="Steiner count through repeated exact MCR calls")
    p.add_argument("instance")
    grid_flags(p)
    budgets(p)
    p.add_argument("-v", "--verbose", action="store_true", help="per-iteration trace on stderr")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check a Steiner solution or mapping file")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw an instance (and solution) as SVG")
    p.add_argument("instance")
    p.add_argument("--solution")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="compare exact, MST and reduction counts over seeds")
    p.add_argument("--seeds", type=int, default=10, help="number of seeds")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("-n", type=int, default=3)
    p.add_argument("-L", type=float, default=4.0)
    p.add_argument("-r", type=float, default=1.0)
    p.add_argument("--grid-step", type=float, default=None)
    p.add_argument("--jobs", type=_positive_int, default=1)
    budgets(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        return _fail(str(exc), EXIT_BUDGET)
    except (InfeasibleError, ConnRestoreError, OSError) as exc:
        return _fail(str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
