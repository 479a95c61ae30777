"""Plain-text instance and solution files, seeded instance generation and SVG rendering.

Instance document::

    # comments are allowed anywhere
    r 1
    v 0 0 0
    v 1 0 2

Steiner solution document: ``s <x> <y>`` lines. Mapping document: a ``cost <value>``
header followed by one ``m <id> <x> <y>`` line per node. Numbers are written with
12 significant digits.
"""

from __future__ import annotations

import math
from typing import Iterable

from .disk_graph import Instance, linked
from .errors import InvalidParameterError, ParseError
from .geometry import EPS, BoundingBox, Point
from .rng import SplitMix64
from .st_solver import EXACT_GRID, SteinerSolution


def fmt(value: float) -> str:
    s = format(float(value), ".12g")
    return "0" if s == "-0" else s


def _number(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"not a number: {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(lineno, f"non-finite number: {token!r}")
    return value


def _content_lines(document: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, raw in enumerate(document.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def read_instance(document: str) -> Instance:
    r = None
    nodes: list[Point] = []
    last = 0
    for lineno, tokens in _content_lines(document):
        last = lineno
        tag = tokens[0]
        if r is None:
            if tag != "r":
                raise ParseError(lineno, "missing 'r <range>' line before the nodes")
            if len(tokens) != 2:
                raise ParseError(lineno, "expected 'r <range>'")
            r = _number(tokens[1], lineno)
            if r <= 0:
                raise ParseError(lineno, f"range must be positive, got {tokens[1]}")
            continue
        if tag == "r":
            raise ParseError(lineno, "duplicate 'r' line")
        if tag != "v" or len(tokens) != 4:
            raise ParseError(lineno, "expected 'v <id> <x> <y>'")
        if tokens[1] != str(len(nodes)):
            raise ParseError(lineno, f"expected node id {len(nodes)}, got {tokens[1]}")
        nodes.append(Point(_number(tokens[2], lineno), _number(tokens[3], lineno)))
    if r is None:
        raise ParseError(last + 1 if last else 1, "missing 'r <range>' line")
    return Instance(tuple(nodes), r)


def write_instance(instance: Instance, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"r {fmt(instance.range)}")
    lines += [f"v {i} {fmt(p.x)} {fmt(p.y)}" for i, p in enumerate(instance.nodes)]
    return "\n".join(lines) + "\n"


def write_steiner(solution: SteinerSolution, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"# method {solution.method} h={solution.h}")
    lines += [f"s {fmt(p.x)} {fmt(p.y)}" for p in solution.steiner_points]
    return "\n".join(lines) + "\n"


def write_mapping(mapping, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"cost {fmt(mapping.total_cost)}")
    lines += [f"m {i} {fmt(p.x)} {fmt(p.y)}" for i, p in enumerate(mapping.targets)]
    return "\n".join(lines) + "\n"


def read_solution(document: str, instance: Instance | None = None):
    """Parse a Steiner solution or a mapping document.

    Returns a :class:`SteinerSolution` or a ``Mapping``. When ``instance`` is given
    a mapping must cover each of its ids exactly once.
    """
    from .mcr_solver import Mapping

    steiner: list[Point] = []
    targets: dict[int, Point] = {}
    cost = None
    kind = None
    last = 0
    for lineno, tokens in _content_lines(document):
        last = lineno
        tag = tokens[0]
        line_kind = {"s": "steiner", "m": "mapping", "cost": "mapping"}.get(tag)
        if line_kind is None:
            raise ParseError(lineno, f"unknown line tag {tag!r}")
        if kind is not None and line_kind != kind:
            raise ParseError(lineno, "mixes Steiner points and mapping lines")
        kind = line_kind
        if tag == "s":
            if len(tokens) != 3:
                raise ParseError(lineno, "expected 's <x> <y>'")
            steiner.append(Point(_number(tokens[1], lineno), _number(tokens[2], lineno)))
        elif tag == "cost":
            if len(tokens) != 2 or cost is not None:
                raise ParseError(lineno, "expected a single 'cost <value>' header")
            cost = _number(tokens[1], lineno)
        else:
            if len(tokens) != 4:
                raise ParseError(lineno, "expected 'm <id> <x> <y>'")
            try:
                node = int(tokens[1])
            except ValueError:
                raise ParseError(lineno, f"bad node id {tokens[1]!r}") from None
            if node in targets:
                raise ParseError(lineno, f"node {node} mapped twice")
            targets[node] = Point(_number(tokens[2], lineno), _number(tokens[3], lineno))
    if kind != "mapping":
        return SteinerSolution(tuple(steiner), EXACT_GRID)
    end = last + 1
    if cost is None:
        raise ParseError(end, "mapping without a 'cost' header")
    expected = len(instance) if instance is not None else len(targets)
    missing = [i for i in range(expected) if i not in targets]
    if missing:
        raise ParseError(end, f"mapping does not cover node ids {missing}")
    extra = sorted(set(targets) - set(range(expected)))
    if extra:
        raise ParseError(end, f"mapping names unknown node ids {extra}")
    return Mapping(tuple(targets[i] for i in range(expected)), cost)


def generate_random(count: int, box_side: float, range_: float, seed: int) -> Instance:
    """``count`` points uniform in ``[0, box_side)^2`` drawn from SplitMix64(``seed``).

    Each point consumes two draws, x first. Coordinates are rounded to 12
    significant digits so the in-memory instance equals its serialisation.
    """
    if not count >= 1:
        raise InvalidParameterError(f"node count must be at least 1, got {count}")
    if not box_side > 0 or not math.isfinite(box_side):
        raise InvalidParameterError(f"box side must be positive, got {box_side}")
    if not range_ > 0 or not math.isfinite(range_):
        raise InvalidParameterError(f"range must be positive, got {range_}")
    rng = SplitMix64(seed)
    nodes = []
    for _ in range(count):
        x = float(fmt(box_side * rng.uniform()))
        y = float(fmt(box_side * rng.uniform()))
        nodes.append(Point(x, y))
    return Instance(tuple(nodes), float(range_))


# --- SVG -----------------------------------------------------------------

_NODE = 'fill="#d62728" stroke="#7f0000" stroke-width="1"'
_COVER = 'fill="none" stroke="#1f77b4" stroke-width="1" stroke-dasharray="6,4"'
_ADDED = 'fill="#2ca02c" stroke="#145214" stroke-width="1" stroke-dasharray="2,2"'
_ADDED_COVER = 'fill="none" stroke="#2ca02c" stroke-width="1" stroke-dasharray="2,3"'
_EDGE = 'stroke="#555555" stroke-width="1.5"'
_ARROW = 'stroke="#ff7f0e" stroke-width="1.5" marker-end="url(#arrow)"'


def render_svg(instance: Instance, solution=None, scale: float = 60.0) -> str:
    """Draw nodes, their dashed coverage circles and the links between them.

    Steiner points are drawn as green dotted nodes. A mapping is drawn at its
    target positions, with an arrow from the original to the target of every
    node that moved.
    """
    from .mcr_solver import Mapping

    r = instance.range
    originals = list(instance.nodes)
    added: list[Point] = []
    arrows: list[tuple[Point, Point]] = []
    placed = originals
    if isinstance(solution, SteinerSolution):
        added = list(solution.steiner_points)
    elif isinstance(solution, Mapping):
        placed = list(solution.targets)
        arrows = [(a, b) for a, b in zip(originals, placed) if not a.close_to(b)]
    elif solution is not None:
        raise TypeError(f"cannot render {type(solution).__name__}")

    everything = originals + placed + added
    box = BoundingBox.of(everything).inflate(r)
    width, height = box.width * scale, box.height * scale

    def sx(x):
        return fmt((x - box.xmin) * scale)

    def sy(y):  # SVG y grows downwards
        return fmt((box.ymax - y) * scale)

    dot = fmt(max(3.0, 0.08 * r * scale))
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(width)}" '
        f'height="{fmt(height)}" viewBox="0 0 {fmt(width)} {fmt(height)}">',
        '<defs><marker id="arrow" markerWidth="10" markerHeight="7" refX="10" refY="3.5" '
        'orient="auto"><polygon points="0 0, 10 3.5, 0 7" fill="#ff7f0e"/></marker></defs>',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    vertices = placed + added
    out.append('<g id="links">')
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            a, b = vertices[i], vertices[j]
            if linked(a, b, r) and not a.close_to(b, EPS):
                out.append(f'<line x1="{sx(a.x)}" y1="{sy(a.y)}" x2="{sx(b.x)}" '
                           f'y2="{sy(b.y)}" {_EDGE}/>')
    out.append("</g>")
    out.append('<g id="moves">')
    for a, b in arrows:
        out.append(f'<line x1="{sx(a.x)}" y1="{sy(a.y)}" x2="{sx(b.x)}" y2="{sy(b.y)}" {_ARROW}/>')
    out.append("</g>")
    out.append('<g id="coverage">')
    for p in placed:
        out.append(f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="{fmt(r * scale)}" {_COVER}/>')
    for p in added:
        out.append(f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="{fmt(r * scale)}" {_ADDED_COVER}/>')
    out.append("</g>")
    out.append('<g id="nodes">')
    for i, p in enumerate(placed):
        out.append(f'<circle class="node" id="v{i}" cx="{sx(p.x)}" cy="{sy(p.y)}" r="{dot}" {_NODE}/>')
    for i, p in enumerate(added):
        out.append(f'<circle class="steiner" id="s{i}" cx="{sx(p.x)}" cy="{sy(p.y)}" r="{dot}" {_ADDED}/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
