import pytest

from connrestore.disk_graph import Instance
from connrestore.errors import IterationCapExceededError
from connrestore.geometry import Grid, Point, covering_grid
from connrestore.instance_io import generate_random
from connrestore.mcr_solver import Mapping
from connrestore.oracle import brute_force_mcr
from connrestore.reduction import iteration_bound, st_via_mcr, verify_theorem1
from connrestore.st_solver import solve_exact_grid, verify_solution


def test_connected_input_never_enters_the_loop():
    result = st_via_mcr(Instance([(0, 0)], 1))
    assert result.steiner_count == 0
    assert result.trace == ((0, 0.0),)


def test_two_apart(two_apart):
    inst, grid = two_apart
    result = st_via_mcr(inst, grid)
    assert result.steiner_count == 1
    assert result.placements == (Point(0, 1),)
    assert [c for _, c in result.trace] == [1, 0]


def test_matches_exact_steiner_on_the_same_grid():
    inst = Instance([(0, 0), (3.5, 0)], 1)
    grid = covering_grid(inst.nodes, 0.5)
    assert st_via_mcr(inst, grid).steiner_count == 3 == solve_exact_grid(inst, grid).h


@pytest.mark.parametrize("nodes, grid, expected", [
    ([(0, 0), (0, 2)], Grid(Point(0, 0), 1, 1, 3), 1),
    ([(0, 0), (0, 3)], Grid(Point(0, 0), 1, 1, 4), 2),
    ([(0, 0), (2, 2)], Grid(Point(0, 0), 1, 3, 3), 3),
])
def test_with_brute_force_mcr_as_the_oracle(nodes, grid, expected):
    # fully independent of the dynamic program inside the exact MCR solver
    inst = Instance(nodes, 1)
    result = st_via_mcr(inst, grid, brute_force_mcr)
    assert result.steiner_count == expected
    assert verify_solution(inst, result.placements)


@pytest.mark.parametrize("nodes, r, expected", [
    ([(0, 0), (10, 0)], 1.0, 121),
    ([(4, 4)], 1.0, 1),
    ([(0, 0), (3, 1)], 1.5, 9),
])
def test_iteration_bound(nodes, r, expected):
    assert iteration_bound(Instance(nodes, r)) == expected


def test_iteration_cap_stops_a_broken_oracle():
    def never_satisfied(inst, cost, cands):
        return Mapping(tuple(Point(9, 9) for _ in inst.nodes), 1.0)

    inst = Instance([(0, 0), (0, 2)], 1)
    with pytest.raises(IterationCapExceededError):
        st_via_mcr(inst, Grid(Point(0, 0), 1, 1, 3), never_satisfied)


@pytest.mark.parametrize("seed", range(12))
def test_loop_exit_semantics_and_monotone_trace(seed):
    inst = generate_random(2 + seed % 3, 4.0, 1.0, 700 + seed)
    result = st_via_mcr(inst, covering_grid(inst.nodes, 0.5))
    costs = [c for _, c in result.trace]
    assert costs[-1] == 0 and all(c > 0 for c in costs[:-1])
    assert all(a >= b for a, b in zip(costs, costs[1:]))
    assert [u for u, _ in result.trace] == list(range(result.steiner_count + 1))
    assert result.mapping.moved(inst.with_nodes(list(inst.nodes) + list(result.placements))) == []
    assert result.steiner_count <= iteration_bound(inst)


def test_verify_theorem1_examples(two_apart, unit_square):
    inst, grid = two_apart
    report = verify_theorem1(inst, grid)
    assert (report.reduction_count, report.oracle_count) == (1, 1) and report.ok
    report = verify_theorem1(unit_square)
    assert (report.reduction_count, report.oracle_count) == (0, 0) and report.ok


def test_verify_theorem1_seeded_three_node_instances():
    grid = Grid(Point(0, 0), 0.5, 5, 5)
    reports = [verify_theorem1(generate_random(3, 2.0, 1.0, seed), grid) for seed in range(10)]
    assert all(r.equal and r.ok for r in reports)
