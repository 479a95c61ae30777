"""Planar geometry primitives: points, distances, bounding boxes and candidate grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidParameterError

# Absolute tolerance for every coordinate comparison in the package.
EPS = 1e-9


@dataclass(frozen=True, order=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidParameterError(f"non-finite coordinate in ({self.x}, {self.y})")
        # normalise ints (and numpy scalars) so equality/hash/repr are stable
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y

    def close_to(self, other: Point, tol: float = EPS) -> bool:
        return distance(self, other) <= tol


def as_point(p) -> Point:
    if isinstance(p, Point):
        return p
    x, y = p
    return Point(x, y)


def distance(p, q) -> float:
    """Euclidean distance between two points (anything unpacking to ``(x, y)``)."""
    px, py = p
    qx, qy = q
    return math.hypot(px - qx, py - qy)


def to_array(points: Iterable) -> np.ndarray:
    """Stack points into an ``(n, 2)`` float array (shape ``(0, 2)`` when empty)."""
    arr = np.array([tuple(p) for p in points], dtype=float)
    return arr.reshape(-1, 2)


def pairwise_distances(a: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    b = a if b is None else b
    diff = a[:, None, :] - b[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


@dataclass(frozen=True)
class BoundingBox:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if self.xmax < self.xmin or self.ymax < self.ymin:
            raise InvalidParameterError("bounding box corners are inverted")

    @classmethod
    def of(cls, points: Iterable) -> BoundingBox:
        pts = [tuple(p) for p in points]
        if not pts:
            raise InvalidParameterError("bounding box of an empty point set")
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        return cls(min(xs), min(ys), max(xs), max(ys))

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def side(self) -> float:
        """Side length of the smallest axis-aligned square containing the box."""
        return max(self.width, self.height)

    def inflate(self, margin: float) -> BoundingBox:
        return BoundingBox(self.xmin - margin, self.ymin - margin,
                           self.xmax + margin, self.ymax + margin)


@dataclass(frozen=True)
class Grid:
    """A rectangular lattice of ``columns x rows`` points spaced ``step`` apart.

    Points are enumerated row-major from ``origin``: x varies fastest. That order
    is the tie-breaking order of every grid-restricted solver.
    """

    origin: Point
    step: float
    columns: int
    rows: int

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise InvalidParameterError(f"grid step must be positive, got {self.step}")
        if self.columns < 1 or self.rows < 1:
            raise InvalidParameterError("grid needs at least one column and one row")

    def __len__(self) -> int:
        return self.columns * self.rows

    def points(self) -> list[Point]:
        ox, oy = self.origin
        return [Point(ox + i * self.step, oy + j * self.step)
                for j in range(self.rows) for i in range(self.columns)]

    def array(self) -> np.ndarray:
        return to_array(self.points())

    def contains(self, p, tol: float = EPS) -> bool:
        """True if ``p`` coincides with one of the lattice points."""
        x, y = p
        i = (x - self.origin.x) / self.step
        j = (y - self.origin.y) / self.step
        ri, rj = round(i), round(j)
        if not (0 <= ri < self.columns and 0 <= rj < self.rows):
            return False
        return distance(p, (self.origin.x + ri * self.step, self.origin.y + rj * self.step)) <= tol


def _count(extent: float, step: float, rounding) -> int:
    # absorb float noise such as 0.3 / 0.1 = 2.9999999999999996
    return int(rounding(extent / step + (-EPS if rounding is math.ceil else EPS))) + 1


def grid_points(box: BoundingBox, step: float) -> list[Point]:
    """Lattice points of spacing ``step`` inside ``box`` (inclusive), row-major from the lower-left corner."""
    if not step > 0:
        raise InvalidParameterError(f"grid step must be positive, got {step}")
    return lattice(box, step).points()


def lattice(box: BoundingBox, step: float) -> Grid:
    """The :class:`Grid` behind :func:`grid_points`: it never extends past ``box``."""
    if not step > 0:
        raise InvalidParameterError(f"grid step must be positive, got {step}")
    return Grid(Point(box.xmin, box.ymin), step,
                _count(box.width, step, math.floor), _count(box.height, step, math.floor))


def covering_grid(points: Sequence, step: float, margin: float = 0.0) -> Grid:
    """Smallest grid anchored at the lower-left corner of ``points`` (minus ``margin``)
    whose extent reaches or passes the upper-right corner (plus ``margin``).

    With ``margin=0`` every point of the set lies inside the lattice's hull, so
    clamping onto the lattice box maps grid points to grid points and never
    lengthens a distance. Grid-restricted optima are therefore the same as on any
    larger aligned grid.
    """
    if not step > 0:
        raise InvalidParameterError(f"grid step must be positive, got {step}")
    box = BoundingBox.of(points).inflate(margin)
    return Grid(Point(box.xmin, box.ymin), step,
                _count(box.width, step, math.ceil), _count(box.height, step, math.ceil))


def centroid(points: Sequence) -> Point:
    pts = [tuple(p) for p in points]
    if not pts:
        raise InvalidParameterError("centroid of an empty point set")
    return Point(sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
