"""Movement-based connectivity restoration (MCR).

Find a relocation ``M`` of the nodes minimising the summed movement cost such that
the disk graph re-induced at the new positions is connected.

The exact solver is a depth-first branch and bound over the nodes that carry a
cost. Zero-cost ("free") nodes are not branched on: once every costly node has a
target, the question left is whether the free nodes can bridge the fixed
positions, which is a minimum-Steiner-point query answered by
:func:`connrestore.st_solver.min_connector_count`. Nodes whose cost is the same
for every target other than their own position (the indicator cost) are branched
on two options only, stay or move, and a moved node joins the free pool.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .disk_graph import Instance, UnionFind, linked, points_connected
from .errors import BudgetExceededError, InvalidParameterError
from .geometry import EPS, Point, centroid, covering_grid, distance, to_array
from .st_solver import (DEFAULT_BUDGET, candidate_points, lex_first_connectors,
                        min_connector_count, steinerized_mst)

INDICATOR = "indicator"
EUCLIDEAN = "euclidean"
TABLE = "per-node-table"

_TOL = 1e-9


@dataclass(frozen=True)
class CostModel:
    """Movement cost ``c(v, p)`` of sending node ``v`` to point ``p``.

    ``original_set`` lists the charged node ids (``None`` charges every node);
    moving any other node is free. For ``per-node-table`` the cost is
    ``weights[v] * distance``.
    """

    kind: str
    original_set: frozenset | None = None
    weights: tuple | None = None

    def __post_init__(self):
        if self.kind not in (INDICATOR, EUCLIDEAN, TABLE):
            raise InvalidParameterError(f"unknown cost kind {self.kind!r}")
        if self.original_set is not None:
            object.__setattr__(self, "original_set", frozenset(self.original_set))
        if self.kind == TABLE:
            if self.weights is None:
                raise InvalidParameterError("per-node-table cost needs weights")
            w = tuple(float(x) for x in self.weights)
            if any(not (x >= 0 and math.isfinite(x)) for x in w):
                raise InvalidParameterError("weights must be finite and nonnegative")
            object.__setattr__(self, "weights", w)

    @classmethod
    def indicator(cls, original_set=None) -> CostModel:
        return cls(INDICATOR, original_set)

    @classmethod
    def euclidean(cls, original_set=None) -> CostModel:
        return cls(EUCLIDEAN, original_set)

    @classmethod
    def per_node_table(cls, weights, original_set=None) -> CostModel:
        return cls(TABLE, original_set, tuple(weights))

    def charges(self, v: int) -> bool:
        return self.original_set is None or v in self.original_set

    def originals(self, instance: Instance) -> list[int]:
        return [v for v in range(len(instance)) if self.charges(v)]

    def cost(self, instance: Instance, v: int, p) -> float:
        if not self.charges(v):
            return 0.0
        d = distance(instance.nodes[v], p)
        if self.kind == INDICATOR:
            return 0.0 if d <= EPS else 1.0
        if self.kind == EUCLIDEAN:
            return d
        return self.weights[v] * d


@dataclass(frozen=True)
class Mapping:
    targets: tuple[Point, ...]
    total_cost: float

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(Point(*p) for p in self.targets))

    def moved(self, instance: Instance) -> list[int]:
        return [v for v, (a, b) in enumerate(zip(instance.nodes, self.targets))
                if not a.close_to(b)]


def total_cost(instance: Instance, cost: CostModel, mapping) -> float:
    targets = mapping.targets if isinstance(mapping, Mapping) else mapping
    if len(targets) != len(instance):
        raise InvalidParameterError("mapping is not defined on every node")
    return math.fsum(cost.cost(instance, v, p) for v, p in enumerate(targets))


def _make_mapping(instance: Instance, cost: CostModel, targets: Sequence) -> Mapping:
    targets = tuple(Point(*p) for p in targets)
    return Mapping(targets, total_cost(instance, cost, targets))


def identity(instance: Instance, cost: CostModel) -> Mapping:
    return _make_mapping(instance, cost, instance.nodes)


def verify_mapping(instance: Instance, mapping) -> bool:
    """True iff the disk graph re-induced at the mapped positions is connected."""
    targets = mapping.targets if isinstance(mapping, Mapping) else mapping
    if len(targets) != len(instance):
        return False
    return points_connected(targets, instance.range)


def mcr_candidates(instance: Instance, cost: CostModel, candidates) -> list[Point]:
    """Candidate targets: the given points, then every charged node's own position
    that is not already among them (so that staying put is always representable)."""
    points = candidate_points(candidates)
    for v in cost.originals(instance):
        p = instance.nodes[v]
        if not any(p.close_to(q) for q in points):
            points.append(p)
    return points


# node classes of the branch and bound
_FREE, _BINARY, _GENERAL = 0, 1, 2
_FLOAT = -1


def solve_exact_grid(instance: Instance, cost: CostModel, candidates=None, *,
                     step: float | None = None, budget: int = DEFAULT_BUDGET) -> Mapping:
    """Minimum-cost connected relocation with targets restricted to the candidates.

    ``candidates`` defaults to the covering grid with spacing ``step`` (default
    ``r / 2``); charged nodes' own positions are always added. Equal-cost optima
    are resolved by the smallest vector of candidate indices in node-id order.
    Raises :class:`BudgetExceededError` once ``budget`` partial assignments have
    been expanded.
    """
    n, r = len(instance), instance.range
    if n == 0:
        raise InvalidParameterError("instance has no nodes")
    if candidates is None:
        candidates = covering_grid(instance.nodes, step if step is not None else r / 2)
    cands = mcr_candidates(instance, cost, candidates)
    carr = to_array(cands)
    m = len(cands)
    rows = np.array([[cost.cost(instance, v, p) for p in cands] for v in range(n)])

    kind, options = [], []
    for v in range(n):
        row = rows[v]
        if not row.any():
            kind.append(_FREE)
            options.append([])
            continue
        home = np.array([instance.nodes[v].close_to(p) for p in cands])
        away = row[~home]
        own = int(np.flatnonzero(home)[0])
        if away.size and np.ptp(away) <= _TOL:
            kind.append(_BINARY)
            opts = [(float(row[own]), own), (float(away[0]), _FLOAT)]
        else:
            kind.append(_GENERAL)
            opts = [(float(row[p]), p) for p in range(m)]
        options.append(sorted(opts, key=lambda o: (o[0], m if o[1] == _FLOAT else o[1])))

    decide = [v for v in range(n) if kind[v] != _FREE]
    free_count = n - len(decide)
    tail = [0.0] * (len(decide) + 1)
    for i in range(len(decide) - 1, -1, -1):
        tail[i] = tail[i + 1] + options[decide[i]][0][0]

    # incumbent: every node stacked on one candidate is always connected
    stack_costs = rows.sum(axis=0)
    p0 = int(np.argmin(stack_costs))
    best = {"cost": float(stack_costs[p0]), "key": None, "assign": None, "stack": p0}
    assign: dict[int, int] = {}
    state = {"visited": 0}

    def key_of(a):
        return tuple(m if a[v] == _FLOAT else a[v] for v in decide)

    def connectable(spare: int) -> bool:
        fixed = [carr[a] for a in assign.values() if a != _FLOAT]
        if len(fixed) <= 1:
            return True
        if spare == 0:
            return points_connected(fixed, r)
        return min_connector_count(fixed, carr, r, budget) <= spare

    def dfs(i: int, partial: float, floats: int):
        if i == len(decide):
            if not connectable(free_count + floats):
                return
            key = key_of(assign)
            if partial < best["cost"] - _TOL or (
                    partial <= best["cost"] + _TOL and best["key"] is not None and key < best["key"]):
                best.update(cost=partial, key=key, assign=dict(assign), stack=None)
            return
        v = decide[i]
        for c, target in options[v]:
            if partial + c + tail[i + 1] > best["cost"] + _TOL:
                break
            state["visited"] += 1
            if state["visited"] > budget:
                raise BudgetExceededError(f"more than {budget} partial assignments expanded")
            assign[v] = target
            spare = free_count + floats + (target == _FLOAT) + len(decide) - i - 1
            if target == _FLOAT or i + 1 == len(decide) or connectable(spare):
                dfs(i + 1, partial + c, floats + (target == _FLOAT))
            del assign[v]

    dfs(0, 0.0, 0)

    if best["assign"] is None:
        return _make_mapping(instance, cost, [cands[best["stack"]]] * n)
    chosen = best["assign"]
    targets: list[Point | None] = [None] * n
    for v, a in chosen.items():
        if a != _FLOAT:
            targets[v] = cands[a]
    fixed_ids = [v for v in range(n) if targets[v] is not None]
    floaters = [v for v in range(n) if targets[v] is None]
    if fixed_ids:
        links = lex_first_connectors([targets[v] for v in fixed_ids], cands, r, budget)
        anchor = targets[fixed_ids[0]]
    else:
        links, anchor = [], cands[0]
    for slot, v in enumerate(floaters):
        targets[v] = cands[links[slot]] if slot < len(links) else anchor
    return _make_mapping(instance, cost, targets)


def _components(points: Sequence[Point], r: float) -> list[list[int]]:
    uf = UnionFind(len(points))
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if linked(points[i], points[j], r):
                uf.union(i, j)
    return uf.groups()


def _closest_pair(a: list[int], b: list[int], pos: list[Point]) -> tuple[float, int, int]:
    return min((distance(pos[i], pos[j]), i, j) for i in a for j in b)


def solve_heuristic(instance: Instance, cost: CostModel, contraction: float = 0.1) -> Mapping:
    """Fast feasible relocation without optimality guarantee.

    1. Free nodes fill the relay points of the charged nodes' Steinerized MST.
    2. While disconnected, the two closest components are joined by translating
       the cheaper of the two straight towards the other until their nearest
       members are exactly ``r`` apart.
    3. As a last resort every node contracts towards the centroid by a fraction
       ``contraction`` of its distance per round.
    """
    n, r = len(instance), instance.range
    if n == 0:
        raise InvalidParameterError("instance has no nodes")
    pos = list(instance.nodes)
    if points_connected(pos, r):
        return identity(instance, cost)

    free = [v for v in range(n) if not any(cost.cost(instance, v, p) for p in _probe(instance, v))]
    charged = [v for v in range(n) if v not in free]
    if free:
        if charged:
            relays = list(steinerized_mst(instance.with_nodes([pos[v] for v in charged])).steiner_points)
            anchor = pos[charged[0]]
        else:
            relays, anchor = [], pos[0]
        spare = list(free)
        for relay in relays:
            if not spare:
                break
            v = min(spare, key=lambda u: (distance(pos[u], relay), u))
            spare.remove(v)
            pos[v] = relay
        for v in spare:
            pos[v] = anchor

    def moved_cost(ids, delta):
        return sum(cost.cost(instance, v, Point(pos[v].x + delta[0], pos[v].y + delta[1]))
                   - cost.cost(instance, v, pos[v]) for v in ids)

    for _ in range(n):
        comps = _components(pos, r)
        if len(comps) <= 1:
            break
        d, a, b, ia, ib = min(_closest_pair(ca, cb, pos) + (x, y)
                              for x, ca in enumerate(comps) for y, cb in enumerate(comps) if x < y)
        ux, uy = (pos[b].x - pos[a].x) / d, (pos[b].y - pos[a].y) / d
        shift = d - r
        forward = (ux * shift, uy * shift)
        backward = (-ux * shift, -uy * shift)
        if moved_cost(comps[ia], forward) <= moved_cost(comps[ib], backward):
            ids, delta = comps[ia], forward
        else:
            ids, delta = comps[ib], backward
        for v in ids:
            pos[v] = Point(pos[v].x + delta[0], pos[v].y + delta[1])

    while not points_connected(pos, r):
        c = centroid(pos)
        pos = [Point(p.x + contraction * (c.x - p.x), p.y + contraction * (c.y - p.y)) for p in pos]
    return _make_mapping(instance, cost, pos)


def _probe(instance: Instance, v: int) -> list[Point]:
    # a node is treated as free if moving it costs nothing in any direction
    p = instance.nodes[v]
    step = instance.range
    return [Point(p.x + step, p.y), Point(p.x, p.y + step), Point(p.x - step, p.y - step)]
