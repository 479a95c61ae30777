"""Unit-disk communication graphs: induction from positions, connectivity, Euclidean MST."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidParameterError
from .geometry import EPS, Point, as_point, distance


@dataclass(frozen=True)
class Instance:
    """Node positions (ids are list indices) and the common communication range."""

    nodes: tuple[Point, ...]
    range: float

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(as_point(p) for p in self.nodes))
        if not (self.range > 0 and math.isfinite(self.range)):
            raise InvalidParameterError(f"range must be positive and finite, got {self.range}")

    def __len__(self) -> int:
        return len(self.nodes)

    def with_nodes(self, nodes: Sequence) -> Instance:
        return Instance(tuple(nodes), self.range)


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True

    def groups(self) -> list[list[int]]:
        """Blocks ordered by their smallest member, members ascending."""
        blocks: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            blocks.setdefault(self.find(i), []).append(i)
        return sorted(blocks.values(), key=lambda b: b[0])


def linked(p, q, r: float) -> bool:
    return distance(p, q) <= r + EPS


@dataclass(frozen=True)
class DiskGraph:
    instance: Instance
    edges: frozenset = field(default_factory=frozenset)

    def neighbours(self, v: int) -> list[int]:
        return sorted(u for e in self.edges if v in e for u in e if u != v)


def induce(instance: Instance) -> DiskGraph:
    """Link every pair of nodes at distance at most ``r`` (plus tolerance)."""
    nodes, r = instance.nodes, instance.range
    edges = frozenset(
        frozenset((i, j))
        for i in range(len(nodes))
        for j in range(i + 1, len(nodes))
        if linked(nodes[i], nodes[j], r)
    )
    return DiskGraph(instance, edges)


def components(graph: DiskGraph) -> list[list[int]]:
    uf = UnionFind(len(graph.instance))
    for e in graph.edges:
        a, b = tuple(e)
        uf.union(a, b)
    return uf.groups()


def is_connected(graph: DiskGraph) -> bool:
    # empty and single-node graphs count as connected
    return len(components(graph)) <= 1


def points_connected(points: Sequence, r: float) -> bool:
    """Connectivity of the disk graph on ``points`` without building a DiskGraph."""
    pts = [tuple(p) for p in points]
    uf = UnionFind(len(pts))
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if linked(pts[i], pts[j], r) and uf.union(i, j) and uf.count == 1:
                return True
    return uf.count <= 1


def euclidean_mst(points: Sequence) -> list[tuple[int, int]]:
    """Kruskal on the complete Euclidean graph.

    Ties are broken by ``(length, i, j)`` with ``i < j``, so the tree is unique for
    a given point order. Returns the edges in the order they were accepted.
    """
    pts = [tuple(p) for p in points]
    if not pts:
        raise InvalidParameterError("MST of an empty point set")
    pairs = sorted((distance(pts[i], pts[j]), i, j)
                   for i in range(len(pts)) for j in range(i + 1, len(pts)))
    uf = UnionFind(len(pts))
    tree = []
    for _, i, j in pairs:
        if uf.union(i, j):
            tree.append((i, j))
            if len(tree) == len(pts) - 1:
                break
    return tree
