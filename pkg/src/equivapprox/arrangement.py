"""Exact cell decomposition of a line (or point) arrangement in the plane (or line).

Cells are relatively open convex polyhedra inside a bounding box that
contains every vertex of the arrangement.  Each cell records its sign
vector against the caller's functionals, an interior sample point, its
vertices and the cells of one lower dimension on its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .geometry import AffineFunctional, InputError, Point, centroid, eval_affine, sign


@dataclass(frozen=True)
class Cell:
    index: int
    dimension: int
    signs: tuple[int, ...]
    sample: Point
    vertices: tuple[Point, ...]
    boundary: tuple[int, ...]
    on_box: bool = False


@dataclass(frozen=True)
class Arrangement:
    functionals: tuple[AffineFunctional, ...]
    cells: tuple[Cell, ...]
    box_radius: Fraction

    def locate(self, point: Sequence[Fraction]) -> Cell | None:
        key = tuple(sign(eval_affine(f, point)) for f in self.functionals)
        found = self._by_signs().get(key)
        if found is None or not self._in_box(point):
            return None
        return found

    def _in_box(self, point: Sequence[Fraction]) -> bool:
        return all(abs(x) <= self.box_radius for x in point)

    def _by_signs(self) -> dict[tuple[int, ...], Cell]:
        cache = self.__dict__.get("_sign_index")
        if cache is None:
            # Box-boundary cells repeat the signs of the interior cell they bound.
            cache = {cell.signs: cell for cell in self.cells if not cell.on_box}
            object.__setattr__(self, "_sign_index", cache)
        return cache

    def closure(self, index: int) -> set[int]:
        """Indices of the cell and every cell on its boundary, recursively."""
        seen = {index}
        stack = [index]
        while stack:
            for b in self.cells[stack.pop()].boundary:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        return seen

    def select(self, predicate: Callable[[Cell], bool]) -> list[int]:
        return [c.index for c in self.cells if predicate(c)]


def _dedupe_lines(functionals: Sequence[AffineFunctional]) -> tuple[list[AffineFunctional], list[tuple[int, int]]]:
    """Distinct geometric hyperplanes plus, per input, (line index, orientation)."""
    lines: list[AffineFunctional] = []
    index: dict[tuple, int] = {}
    mapping = []
    for f in functionals:
        lead = next(a for a in f.gradient if a != 0)
        canon = f.scaled(1 / lead)
        key = (canon.constant, canon.gradient)
        if key not in index:
            index[key] = len(lines)
            lines.append(canon)
        mapping.append((index[key], 1 if lead > 0 else -1))
    return lines, mapping


def _intersection(f: AffineFunctional, g: AffineFunctional) -> Point | None:
    (a1, b1), (a2, b2) = f.gradient, g.gradient
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    c1, c2 = -f.constant, -g.constant
    return ((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det)


def _foot_of_perpendicular(f: AffineFunctional) -> Point:
    norm = sum((a * a for a in f.gradient), Fraction(0))
    return tuple(-f.constant * a / norm for a in f.gradient)


def build_arrangement(functionals: Sequence[AffineFunctional], dimension: int, min_radius: object = 1) -> Arrangement:
    """Decompose a box of R^dimension (dimension 1 or 2) by the given hyperplanes."""
    for f in functionals:
        if f.dimension != dimension:
            raise InputError("functional dimension does not match the arrangement")
    if dimension == 1:
        return _build_line(functionals, Fraction(min_radius))
    if dimension == 2:
        return _build_plane(functionals, Fraction(min_radius))
    raise InputError("arrangements are supported in dimensions 1 and 2 only")


def _build_line(functionals: Sequence[AffineFunctional], min_radius: Fraction) -> Arrangement:
    roots = sorted({-f.constant / f.gradient[0] for f in functionals})
    radius = max([abs(r) for r in roots] + [min_radius - 1]) + 1
    points = sorted(set(roots) | {-radius, radius})

    def signs_at(p: Point) -> tuple[int, ...]:
        return tuple(sign(eval_affine(f, p)) for f in functionals)

    cells: list[Cell] = []
    for x in points:
        p = (x,)
        cells.append(Cell(len(cells), 0, signs_at(p), p, (p,), (), abs(x) == radius))
    for i in range(len(points) - 1):
        a, b = (points[i],), (points[i + 1],)
        mid = ((points[i] + points[i + 1]) / 2,)
        cells.append(Cell(len(cells), 1, signs_at(mid), mid, (a, b), (i, i + 1)))
    return Arrangement(tuple(functionals), tuple(cells), radius)


def _build_plane(functionals: Sequence[AffineFunctional], min_radius: Fraction) -> Arrangement:
    lines, mapping = _dedupe_lines(functionals)
    crossings: dict[tuple[int, int], Point] = {}
    extent = [min_radius - 1]
    for i in range(len(lines)):
        extent.extend(abs(x) for x in _foot_of_perpendicular(lines[i]))
        for j in range(i + 1, len(lines)):
            p = _intersection(lines[i], lines[j])
            if p is not None:
                crossings[(i, j)] = p
                extent.extend(abs(x) for x in p)
    radius = max(extent) + 1
    box = [
        AffineFunctional(radius, (Fraction(-1), Fraction(0))),
        AffineFunctional(radius, (Fraction(1), Fraction(0))),
        AffineFunctional(radius, (Fraction(0), Fraction(-1))),
        AffineFunctional(radius, (Fraction(0), Fraction(1))),
    ]
    all_lines = list(lines)
    box_ids = []
    for wall in box:
        canon = wall.normalized()
        match = next((k for k, l in enumerate(all_lines) if l == canon), None)
        if match is None:
            match = len(all_lines)
            all_lines.append(canon)
        box_ids.append((match, 1 if wall.gradient[0] + wall.gradient[1] > 0 else -1))
    for i in range(len(all_lines)):
        for j in range(max(i + 1, len(lines)), len(all_lines)):
            p = _intersection(all_lines[i], all_lines[j])
            if p is not None:
                crossings[(i, j)] = p

    def inside(p: Point) -> bool:
        return abs(p[0]) <= radius and abs(p[1]) <= radius

    vertex_index: dict[Point, int] = {}
    on_line: list[set[int]] = [set() for _ in all_lines]
    for (i, j), p in crossings.items():
        if not inside(p):
            continue
        v = vertex_index.setdefault(p, len(vertex_index))
        on_line[i].add(v)
        on_line[j].add(v)
    vertices = sorted(vertex_index, key=vertex_index.get)

    def line_signs(p: Point) -> tuple[int, ...]:
        return tuple(sign(eval_affine(l, p)) for l in all_lines)

    vertex_signs = [line_signs(p) for p in vertices]
    edges: list[tuple[int, int, int]] = []
    for k, line in enumerate(all_lines):
        direction = (-line.gradient[1], line.gradient[0])
        ordered = sorted(on_line[k], key=lambda v: vertices[v][0] * direction[0] + vertices[v][1] * direction[1])
        for a, b in zip(ordered, ordered[1:]):
            edges.append((a, b, k))

    faces: dict[tuple[int, ...], list[int]] = {}
    edge_signs = []
    for e, (a, b, k) in enumerate(edges):
        mid = centroid([vertices[a], vertices[b]])
        base = list(line_signs(mid))
        edge_signs.append(tuple(base))
        for side in (1, -1):
            signs = list(base)
            signs[k] = side
            in_box = all(signs[bid] * orient >= 0 for bid, orient in box_ids)
            if in_box:
                faces.setdefault(tuple(signs), []).append(e)

    def on_box(p: Point) -> bool:
        return abs(p[0]) == radius or abs(p[1]) == radius

    def user_signs(line_sign: Sequence[int]) -> tuple[int, ...]:
        return tuple(line_sign[idx] * orient for idx, orient in mapping)

    cells: list[Cell] = []
    for v, p in enumerate(vertices):
        cells.append(Cell(v, 0, user_signs(vertex_signs[v]), p, (p,), (), on_box(p)))
    offset = len(cells)
    for e, (a, b, _) in enumerate(edges):
        pa, pb = vertices[a], vertices[b]
        mid = centroid([pa, pb])
        cells.append(Cell(offset + e, 1, user_signs(edge_signs[e]), mid, (pa, pb), (a, b), on_box(mid)))
    for signs, boundary in sorted(faces.items()):
        corner_ids = sorted({v for e in boundary for v in edges[e][:2]})
        corners = tuple(vertices[v] for v in corner_ids)
        index = len(cells)
        cells.append(
            Cell(index, 2, user_signs(signs), centroid(corners), corners, tuple(sorted(offset + e for e in boundary)))
        )
    return Arrangement(tuple(functionals), tuple(cells), radius)
