"""Exhaustive reference solvers, used only to check the real solvers.

Nothing here is pruned or clever beyond vectorising the enumeration with numpy,
and nothing is shared with the solver modules apart from the geometry and the
instance/cost/mapping types.
"""

from __future__ import annotations

import itertools
import math

import numba
import numpy as np

from .disk_graph import Instance
from .errors import BudgetExceededError, SearchSpaceTooLargeError
from .geometry import EPS, Grid, Point, pairwise_distances, to_array
from .mcr_solver import CostModel, Mapping

MCR_LIMIT = 10**6
_CHUNK = 100_000


def _points(candidates) -> list[Point]:
    if isinstance(candidates, Grid):
        return candidates.points()
    return [Point(*p) for p in candidates]


def _all_connected(adj: np.ndarray) -> np.ndarray:
    """Row-wise connectivity of a batch of ``(B, N, N)`` adjacency matrices."""
    batch, size, _ = adj.shape
    if size <= 1:
        return np.ones(batch, dtype=bool)
    if size > 63:
        reach = np.zeros((batch, size), dtype=bool)
        reach[:, 0] = True
        for _ in range(size - 1):
            reach = reach | (adj & reach[:, None, :]).any(axis=2)
        return reach.all(axis=1)
    # neighbour sets as bitmasks, then flood from node 0
    bits = np.left_shift(np.uint64(1), np.arange(size, dtype=np.uint64))
    masks = np.bitwise_or.reduce(np.where(adj, bits, np.uint64(0)), axis=2)
    reach = np.full(batch, np.uint64(1))
    for _ in range(size - 1):
        grown = reach.copy()
        for i in range(size):
            grown |= np.where(reach & bits[i], masks[:, i], np.uint64(0))
        if np.array_equal(grown, reach):
            break
        reach = grown
    return reach == bits.sum()


@numba.njit(cache=True)
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@numba.njit(cache=True)
def _some_subset_connects(near, n, m, k):
    """Walk every ``k``-subset of the ``m`` candidates in lexicographic order and
    report whether any of them, together with the ``n`` terminals, is connected."""
    size = n + k
    pick = np.arange(k)
    nodes = np.empty(size, dtype=np.int64)
    parent = np.empty(size, dtype=np.int64)
    for i in range(n):
        nodes[i] = i
    while True:
        for i in range(k):
            nodes[n + i] = n + pick[i]
        for i in range(size):
            parent[i] = i
        groups = size
        for i in range(size):
            for j in range(i + 1, size):
                if near[nodes[i], nodes[j]]:
                    a = _find(parent, i)
                    b = _find(parent, j)
                    if a != b:
                        parent[b] = a
                        groups -= 1
        if groups <= 1:
            return True
        i = k - 1
        while i >= 0 and pick[i] == m - k + i:
            i -= 1
        if i < 0:
            return False
        pick[i] += 1
        for j in range(i + 1, k):
            pick[j] = pick[j - 1] + 1


def brute_force_min_steiner(instance: Instance, candidates, max_h: int | None = None) -> int:
    """Smallest ``k`` such that some ``k``-subset of ``candidates`` connects the nodes.

    Every subset of size 0, 1, ... is tried in order. Raises
    :class:`BudgetExceededError` if nothing of size ``max_h`` or less works.
    """
    cands = _points(candidates)
    n, m = len(instance), len(cands)
    max_h = m if max_h is None else max_h
    pts = np.vstack([to_array(instance.nodes), to_array(cands)])
    near = pairwise_distances(pts) <= instance.range + EPS
    for k in range(min(max_h, m) + 1):
        if _some_subset_connects(near, n, m, k):
            return k
    raise BudgetExceededError(f"no connecting subset of size <= {max_h}")


def brute_force_mcr(instance: Instance, cost: CostModel, candidates,
                    limit: int = MCR_LIMIT) -> Mapping:
    """Cheapest connected assignment of every node to a candidate point.

    Candidates are the given points plus the own position of every charged
    node. Assignments are scanned in lexicographic order (node 0 most
    significant) and the first cheapest one wins.
    """
    n = len(instance)
    cands = _points(candidates)
    for v in range(n):
        if cost.charges(v):
            p = instance.nodes[v]
            if all(math.hypot(p.x - q.x, p.y - q.y) > EPS for q in cands):
                cands.append(p)
    m = len(cands)
    if m ** n > limit:
        raise SearchSpaceTooLargeError(f"{m}^{n} assignments exceed the limit {limit}")
    price = np.array([[cost.cost(instance, v, p) for p in cands] for v in range(n)])
    near = pairwise_distances(to_array(cands)) <= instance.range + EPS
    best_cost, best_row = math.inf, None
    total = m ** n
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        # decode indices big-endian so node 0 is the most significant digit
        digits = np.empty((len(flat), n), dtype=np.int64)
        rest = flat.copy()
        for v in range(n - 1, -1, -1):
            digits[:, v] = rest % m
            rest //= m
        ok = _all_connected(near[digits[:, :, None], digits[:, None, :]])
        totals = price[np.arange(n), digits].sum(axis=1)
        totals[~ok] = math.inf
        i = int(np.argmin(totals))
        if totals[i] < best_cost - 1e-9:
            best_cost, best_row = float(totals[i]), digits[i]
    targets = tuple(cands[int(j)] for j in best_row)
    return Mapping(targets, math.fsum(cost.cost(instance, v, p) for v, p in enumerate(targets)))
