"""Solving the Steiner-point problem with an exact MCR solver as a black box.

The loop adds one zero-cost auxiliary node at a time and re-solves MCR under the
indicator cost, which charges 1 for every original node that moves. As soon as
the optimum moves no original node, the auxiliary nodes' targets connect the
network on their own and their number is the minimum Steiner count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .disk_graph import Instance
from .errors import IterationCapExceededError
from .geometry import EPS, BoundingBox, Point, centroid, covering_grid
from .mcr_solver import CostModel, Mapping, solve_exact_grid as mcr_exact
from .st_solver import SteinerSolution, verify_solution

MCROracle = Callable[[Instance, CostModel, object], Mapping]


@dataclass
class ReductionState:
    auxiliary: list[Point] = field(default_factory=list)
    iterations: int = 0
    last_mapping: Mapping | None = None
    last_cost: float = math.inf


@dataclass(frozen=True)
class ReductionResult:
    steiner_count: int
    placements: tuple[Point, ...]
    trace: tuple[tuple[int, float], ...]  # (|U|, indicator cost) per oracle call
    mapping: Mapping
    cost: CostModel

    def as_solution(self) -> SteinerSolution:
        return SteinerSolution(self.placements, "reduction")


def iteration_bound(instance: Instance) -> int:
    """``(floor(L/r) + 1)^2`` circles of radius ``r`` cover the ``L x L`` bounding square."""
    side = BoundingBox.of(instance.nodes).side
    return (math.floor(side / instance.range + EPS) + 1) ** 2


def st_via_mcr(instance: Instance, candidates=None, mcr_oracle: MCROracle | None = None,
               *, on_iteration: Callable[[int, int, float], None] | None = None) -> ReductionResult:
    """Minimum Steiner count of ``instance`` from repeated exact MCR calls.

    ``mcr_oracle(instance, cost, candidates)`` must return an optimal mapping;
    it defaults to the grid-restricted exact solver. ``on_iteration`` receives
    ``(iteration, |U|, cost)`` after every oracle call.
    """
    oracle = mcr_oracle or (lambda inst, cost, cands: mcr_exact(inst, cost, cands))
    if candidates is None:
        candidates = covering_grid(instance.nodes, instance.range / 2)
    nodes = list(instance.nodes)
    cost = CostModel.indicator(range(len(nodes)))
    cap = iteration_bound(instance)
    start = centroid(nodes)
    state = ReductionState()
    trace = []

    def call():
        state.last_mapping = oracle(instance.with_nodes(nodes + state.auxiliary), cost, candidates)
        # indicator costs are integers, so the loop test below is exact
        state.last_cost = state.last_mapping.total_cost
        trace.append((len(state.auxiliary), state.last_cost))
        if on_iteration:
            on_iteration(state.iterations, len(state.auxiliary), state.last_cost)

    call()
    while state.last_cost > 0:
        if state.iterations >= cap:
            raise IterationCapExceededError(
                f"reduction passed the covering bound of {cap} iterations")
        state.auxiliary.append(start)
        state.iterations += 1
        call()

    placements = state.last_mapping.targets[len(nodes):]
    return ReductionResult(len(state.auxiliary), tuple(placements), tuple(trace),
                           state.last_mapping, cost)


@dataclass(frozen=True)
class EquivalenceReport:
    reduction_count: int
    oracle_count: int
    final_cost: float
    originals_unmoved: bool
    placements_feasible: bool
    iterations_within_bound: bool
    trace: tuple[tuple[int, float], ...]

    @property
    def equal(self) -> bool:
        return self.reduction_count == self.oracle_count

    @property
    def ok(self) -> bool:
        return (self.equal and self.final_cost == 0 and self.originals_unmoved
                and self.placements_feasible and self.iterations_within_bound)


def verify_theorem1(instance: Instance, candidates=None, max_h: int | None = None) -> EquivalenceReport:
    """Run the reduction and the exhaustive Steiner oracle on the same candidates."""
    from .oracle import brute_force_min_steiner

    if candidates is None:
        candidates = covering_grid(instance.nodes, instance.range / 2)
    result = st_via_mcr(instance, candidates)
    expected = brute_force_min_steiner(instance, candidates, max_h)
    unmoved = all(a.close_to(b, EPS) for a, b in zip(instance.nodes, result.mapping.targets))
    return EquivalenceReport(
        reduction_count=result.steiner_count,
        oracle_count=expected,
        final_cost=result.mapping.total_cost,
        originals_unmoved=unmoved,
        placements_feasible=verify_solution(instance, result.placements),
        iterations_within_bound=result.steiner_count <= iteration_bound(instance),
        trace=result.trace,
    )
