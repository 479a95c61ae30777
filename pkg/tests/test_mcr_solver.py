import math

import pytest
from hypothesis import given, settings, strategies as st

from connrestore.disk_graph import Instance, points_connected
from connrestore.errors import BudgetExceededError, InvalidParameterError
from connrestore.geometry import Grid, Point, covering_grid, distance
from connrestore.instance_io import generate_random
from connrestore.mcr_solver import (CostModel, Mapping, identity, solve_exact_grid,
                                    solve_heuristic, total_cost, verify_mapping)
from connrestore.oracle import brute_force_mcr

EUC = CostModel.euclidean()
IND = CostModel.indicator()


def test_total_cost_examples():
    inst = Instance([(0, 0), (0, 3)], 1)
    assert total_cost(inst, EUC, identity(inst, EUC)) == 0
    assert total_cost(inst, IND, identity(inst, IND)) == 0
    moved = Mapping((Point(0, 1), Point(0, 2)), 2.0)
    assert total_cost(inst, EUC, moved) == pytest.approx(2.0, abs=1e-9)
    assert total_cost(inst, IND, moved) == 2


def test_verify_mapping_examples():
    inst = Instance([(0, 0), (0, 3)], 1)
    assert verify_mapping(inst, Mapping((Point(0, 1), Point(0, 2)), 2))
    assert not verify_mapping(inst, identity(inst, EUC))
    assert verify_mapping(inst, Mapping((Point(7, 7), Point(7, 7)), 0))
    assert not verify_mapping(inst, Mapping((Point(0, 0),), 0))


def test_cost_model_validation():
    with pytest.raises(InvalidParameterError):
        CostModel("teleport")
    with pytest.raises(InvalidParameterError):
        CostModel.per_node_table([1.0, -2.0])


def test_two_apart_euclidean_matches_oracle(two_apart):
    inst, grid = two_apart
    exact = solve_exact_grid(inst, EUC, grid)
    oracle = brute_force_mcr(inst, EUC, grid)
    # one node steps onto the midpoint: the d - r bound is attained
    assert exact.total_cost == oracle.total_cost == pytest.approx(1.0)
    assert exact.targets == (Point(0, 0), Point(0, 1))


def test_free_node_bridges_at_no_cost():
    inst = Instance([(0, 0), (0, 2), (5, 5)], 1)
    cost = CostModel.indicator({0, 1})
    mapping = solve_exact_grid(inst, cost, Grid(Point(0, 0), 1, 1, 3))
    assert mapping.total_cost == 0
    assert mapping.targets == (Point(0, 0), Point(0, 2), Point(0, 1))


@pytest.mark.parametrize("cost", [EUC, IND, CostModel.per_node_table([2, 1, 3, 1])])
def test_connected_input_is_left_alone(unit_square, cost):
    grid = covering_grid(unit_square.nodes, 0.5)
    for solver in (lambda: solve_exact_grid(unit_square, cost, grid),
                   lambda: solve_heuristic(unit_square, cost)):
        mapping = solver()
        assert mapping.total_cost == 0
        assert mapping.targets == unit_square.nodes


def test_heuristic_examples():
    two = Instance([(0, 0), (0, 3)], 1)
    mapping = solve_heuristic(two, EUC)
    assert verify_mapping(two, mapping)
    assert mapping.total_cost >= 2 - 1e-9
    spread = Instance([(0, 0), (10, 0), (5, 9)], 1)
    for cost in (EUC, IND):
        assert verify_mapping(spread, solve_heuristic(spread, cost))


def test_heuristic_uses_free_nodes_as_relays():
    inst = Instance([(0, 0), (3, 0), (9, 9), (9, 8)], 1)
    mapping = solve_heuristic(inst, CostModel.indicator({0, 1}))
    assert mapping.total_cost == 0
    assert mapping.moved(inst) == [2, 3]


def test_heuristic_falls_back_to_contraction():
    # every node free: relays cannot be anchored, so the nodes are stacked
    inst = Instance([(0, 0), (4, 0), (0, 4)], 1)
    mapping = solve_heuristic(inst, CostModel.indicator(set()))
    assert verify_mapping(inst, mapping) and mapping.total_cost == 0


@pytest.mark.parametrize("seed", range(16))
@pytest.mark.parametrize("cost", [EUC, IND, CostModel.per_node_table([1.0, 2.5, 0.5, 4.0])],
                         ids=["euclidean", "indicator", "table"])
def test_exact_matches_oracle(seed, cost):
    inst = generate_random(2 + seed % 3, 3.0, 1.0, 300 + seed)
    grid = Grid(Point(0, 0), 0.75, 5, 5)
    exact = solve_exact_grid(inst, cost, grid)
    oracle = brute_force_mcr(inst, cost, grid)
    assert exact.total_cost == pytest.approx(oracle.total_cost, abs=1e-9)
    assert exact.total_cost == pytest.approx(total_cost(inst, cost, exact), abs=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_exact_with_free_nodes_matches_oracle(seed):
    inst = generate_random(4, 3.0, 1.0, 500 + seed)
    cost = CostModel.indicator({0, 1})
    grid = Grid(Point(0, 0), 1.0, 4, 4)
    assert solve_exact_grid(inst, cost, grid).total_cost == brute_force_mcr(inst, cost, grid).total_cost


def test_exact_is_deterministic():
    inst = generate_random(3, 3.0, 1.0, 77)
    grid = Grid(Point(0, 0), 0.75, 5, 5)
    assert solve_exact_grid(inst, EUC, grid) == solve_exact_grid(inst, EUC, grid)


def test_budget_exceeded():
    inst = generate_random(4, 6.0, 1.0, 4)
    with pytest.raises(BudgetExceededError):
        solve_exact_grid(inst, EUC, covering_grid(inst.nodes, 0.5), budget=50)


coords = st.floats(-3, 3)


@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=5), st.data())
def test_indicator_zero_iff_no_original_moves(pts, data):
    inst = Instance(pts, 1.0)
    originals = data.draw(st.sets(st.integers(0, len(pts) - 1)))
    cost = CostModel.indicator(originals)
    targets = [p if data.draw(st.booleans()) else Point(p.x + data.draw(st.sampled_from([0.5, -2.0])), p.y)
               for p in inst.nodes]
    moved_originals = [v for v in originals if not inst.nodes[v].close_to(targets[v])]
    assert (total_cost(inst, cost, targets) == 0) == (not moved_originals)
    assert total_cost(inst, cost, targets) == len(moved_originals)


@given(st.floats(1.01, 6), st.floats(0, 2 * math.pi), st.floats(0, 1), st.floats(0, 2 * math.pi))
def test_euclidean_two_node_lower_bound(d, angle, where, turn):
    # any pair of targets within range costs at least d - r
    inst = Instance([(0, 0), (d * math.cos(angle), d * math.sin(angle))], 1.0)
    a = Point(where * inst.nodes[1].x, where * inst.nodes[1].y)
    b = Point(a.x + math.cos(turn), a.y + math.sin(turn))
    assert points_connected([a, b], 1.0)
    assert total_cost(inst, EUC, [a, b]) >= d - 1 - 1e-9


@pytest.mark.parametrize("d", [1.5, 2.0, 2.75, 3.2])
@pytest.mark.parametrize("step", [0.5, 0.25])
def test_euclidean_two_node_refinement(d, step):
    inst = Instance([(0, 0), (d, 0)], 1.0)
    cost = solve_exact_grid(inst, EUC, covering_grid(inst.nodes, step)).total_cost
    assert d - 1 - 1e-9 <= cost <= d - 1 + step


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 6), st.floats(0, 6)), min_size=1, max_size=6))
def test_heuristic_always_feasible(pts):
    inst = Instance(pts, 1.0)
    for cost in (EUC, IND, CostModel.indicator({0})):
        mapping = solve_heuristic(inst, cost)
        assert verify_mapping(inst, mapping)
        assert mapping.total_cost == pytest.approx(total_cost(inst, cost, mapping), abs=1e-9)
