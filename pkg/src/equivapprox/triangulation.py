"""Triangulations respecting sign sets of a line arrangement, and equivariant gluing.

Inputs are cylindrical cell decompositions of a compact set in R^1 or R^2 over the
first coordinate.  Curved sets are described by hand (declared graph orderings);
semilinear sets are described automatically from exact line data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .geometry import (
    AffineFunctional,
    InputError,
    Point,
    affine_independent,
    centroid,
    nullspace,
    rank,
    sign,
    solve_linear,
    to_fraction,
)
from .simplicial import SimplicialComplex

FIXTURE_DIR = Path(__file__).parent / "fixtures"

CellId = tuple


@dataclass(frozen=True)
class SamplePosition:
    """A base sample point placed on, or strictly between, projected arrangement points.

    kind "equals" means the sample is arrangement point ``index``; kind "between"
    means it lies in slot ``index``, where slot 0 is below every point and slot k above.
    """

    kind: str
    index: int
    label: str = ""


@dataclass(frozen=True)
class GraphSpec:
    name: str
    section_signs: tuple[int | None, ...]
    left: int | None = None
    right: int | None = None
    in_a: bool = True
    tags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class BandSpec:
    in_a: bool = True
    tags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class ColumnSpec:
    """Graphs and bands over a base point (kind "point") or base interval (kind "interval")."""

    kind: str
    index: int
    graphs: tuple[GraphSpec, ...]
    bands: tuple[BandSpec, ...]


@dataclass(frozen=True)
class BaseCellSpec:
    in_a: bool = True
    tags: frozenset[str] = frozenset()


@dataclass(frozen=True)
class DecompositionDescription:
    dimension: int
    functionals: tuple[AffineFunctional, ...]
    samples: tuple[SamplePosition, ...]
    columns: tuple[ColumnSpec, ...] = ()
    base_points: tuple[BaseCellSpec, ...] = ()
    base_intervals: tuple[BaseCellSpec, ...] = ()
    subsets: tuple[str, ...] = ()

    def column(self, kind: str, index: int) -> ColumnSpec | None:
        for col in self.columns:
            if col.kind == kind and col.index == index:
                return col
        return None


@dataclass(frozen=True)
class TriangulationResult:
    complex: SimplicialComplex
    vertex_cells: tuple[CellId, ...]
    cell_dimensions: Mapping[CellId, int]
    polyhedra: Mapping[CellId, frozenset[frozenset[int]]]
    respect: Mapping[frozenset[int], tuple[int, ...]]
    adaptedness: Mapping[str, frozenset[frozenset[int]]]
    functionals: tuple[AffineFunctional, ...]
    simplex_cells: Mapping[frozenset[int], CellId]

    def carrier(self, simplex: Iterable[int]) -> CellId:
        """The cell containing the open simplex."""
        return self.simplex_cells[frozenset(simplex)]

    def polyhedra_of_dimension(self, k: int) -> list[CellId]:
        return [c for c in self.polyhedra if self.cell_dimensions[c] == k]

    def vertex_of_cell(self, cell: CellId) -> Point:
        return self.complex.vertices[self.vertex_cells.index(cell)]


# Projection of an arrangement


def project_arrangement(functionals: Sequence[AffineFunctional], target_dimension: int) -> list[AffineFunctional]:
    """Hyperplanes of R^target that are projections of flats of the arrangement.

    The projection forgets the last coordinate.  Results are normalized so the
    leading nonzero coefficient is 1, and deduplicated.
    """
    if not functionals:
        return []
    n = functionals[0].dimension
    if target_dimension != n - 1:
        raise InputError("projection drops exactly the last coordinate")
    found: dict[tuple, AffineFunctional] = {}
    for size in range(1, min(n, len(functionals)) + 1):
        for subset in combinations(functionals, size):
            rows = [list(f.gradient) for f in subset]
            rhs = [-f.constant for f in subset]
            base = solve_linear(rows, rhs)
            if base is None:
                continue
            directions = [d[:-1] for d in nullspace(rows, n)]
            if rank(directions) != target_dimension - 1 if directions else target_dimension - 1 != 0:
                continue
            normals = nullspace([list(d) for d in directions], target_dimension) if directions else _unit_normals(target_dimension)
            if len(normals) != 1:
                continue
            normal = normals[0]
            point = base[:-1]
            constant = -sum((a * x for a, x in zip(normal, point)), Fraction(0))
            f = AffineFunctional(constant, tuple(normal)).normalized()
            found[(f.constant, f.gradient)] = f
    return sorted(found.values(), key=lambda f: (f.gradient, f.constant))


def _unit_normals(dimension: int) -> list[tuple[Fraction, ...]]:
    return [tuple(Fraction(int(i == j)) for j in range(dimension)) for i in range(dimension)]


def arrangement_points(functionals: Sequence[AffineFunctional]) -> list[Fraction]:
    """Sorted roots of univariate functionals."""
    return sorted({-f.constant / f.gradient[0] for f in functionals})


# The placement schema


def _slot_key(position: SamplePosition) -> int:
    return 2 * position.index + (1 if position.kind == "equals" else 0)


def tau_segment_map(positions: Sequence[SamplePosition], points: Sequence[Fraction]) -> list[Fraction]:
    """Order-preserving images of base samples: arrangement points stay fixed, others are spread evenly."""
    points = [Fraction(c) for c in points]
    if any(a >= b for a, b in zip(points, points[1:])):
        raise InputError("arrangement points must be strictly increasing")
    k = len(points)
    if k == 0:
        if any(p.kind != "between" or p.index != 0 for p in positions):
            raise InputError("inconsistent classification: no arrangement points to equal")
        return [Fraction(i) for i in range(len(positions))]
    keys = []
    for p in positions:
        if p.kind == "equals" and not 0 <= p.index < k:
            raise InputError(f"inconsistent classification: no arrangement point {p.index}")
        if p.kind == "between" and not 0 <= p.index <= k:
            raise InputError(f"inconsistent classification: no slot {p.index}")
        if p.kind not in ("equals", "between"):
            raise InputError(f"unknown sample kind {p.kind!r}")
        keys.append(_slot_key(p))
    for a, b, pa in zip(keys, keys[1:], positions):
        if a > b or (a == b and pa.kind == "equals"):
            raise InputError("inconsistent classification: samples are not strictly increasing")
    return _spread(keys, points)


def _spread(keys: Sequence[int], points: Sequence[Fraction]) -> list[Fraction]:
    k = len(points)
    counts: dict[int, int] = {}
    for key in keys:
        if key % 2 == 0:
            counts[key // 2] = counts.get(key // 2, 0) + 1
    seen: dict[int, int] = {}
    out = []
    for key in keys:
        if key % 2 == 1:
            out.append(points[key // 2])
            continue
        slot = key // 2
        seen[slot] = seen.get(slot, 0) + 1
        mu, p_i = seen[slot], counts[slot]
        if slot == 0:
            out.append(points[0] - p_i + mu - 1)
        elif slot == k:
            out.append(points[k - 1] + mu)
        else:
            out.append(points[slot - 1] + mu * (points[slot] - points[slot - 1]) / (p_i + 1))
    return out


def _classify_graph(signs: Sequence[int | None], sections: Sequence[Fraction | None]) -> int:
    """Slot key of a graph against the distinct sorted section values."""
    pairs = [(value, s) for value, s in zip(sections, signs) if value is not None]
    if any(s is None for _, s in pairs):
        raise InputError("ordering inconsistency: a graph lacks a sign against a section")
    pairs.sort(key=lambda item: item[0])
    distinct = sorted({v for v, _ in pairs})
    by_value: dict[Fraction, int] = {}
    for value, s in pairs:
        if by_value.setdefault(value, s) != s:
            raise InputError("ordering inconsistency: coinciding sections carry different signs")
    ordered = [by_value[v] for v in distinct]
    if any(a < b for a, b in zip(ordered, ordered[1:])):
        raise InputError("ordering inconsistency: signs do not decrease along the sections")
    if ordered.count(0) > 1:
        raise InputError("ordering inconsistency: a graph equals two distinct sections")
    if 0 in ordered:
        return 2 * ordered.index(0) + 1
    return 2 * sum(1 for s in ordered if s > 0)


def section_values(functionals: Sequence[AffineFunctional], base: Sequence[Fraction]) -> list[Fraction | None]:
    """Last coordinate where each functional vanishes above ``base``, if unique."""
    out: list[Fraction | None] = []
    for f in functionals:
        last = f.gradient[-1]
        if last == 0:
            out.append(None)
            continue
        partial = f.constant + sum((a * x for a, x in zip(f.gradient[:-1], base)), Fraction(0))
        out.append(-partial / last)
    return out


def assign_column_coordinates(
    base: Sequence[Fraction], functionals: Sequence[AffineFunctional], graphs: Sequence[GraphSpec]
) -> tuple[list[Fraction], list[Fraction]]:
    """Last coordinates for the graphs and the bands of one column."""
    sections = section_values(functionals, base)
    distinct = sorted({v for v in sections if v is not None})
    keys = [_classify_graph(g.section_signs, sections) for g in graphs]
    for a, b in zip(keys, keys[1:]):
        if a > b or (a == b and a % 2 == 1):
            raise InputError("ordering inconsistency: graphs out of order against the sections")
    if distinct:
        graph_values = _spread(keys, distinct)
    else:
        graph_values = [Fraction(i) for i in range(len(graphs))]
    band_values = [(a + b) / 2 for a, b in zip(graph_values, graph_values[1:])]
    return graph_values, band_values


def assign_cell_vertex(
    base: Sequence[Fraction], functionals: Sequence[AffineFunctional], graphs: Sequence[GraphSpec], cell: tuple[str, int]
) -> Point:
    """The vertex for graph ``("graph", j)`` or band ``("band", j)`` of a column over ``base``."""
    graph_values, band_values = assign_column_coordinates(base, functionals, graphs)
    kind, j = cell
    value = graph_values[j] if kind == "graph" else band_values[j]
    return tuple(Fraction(x) for x in base) + (value,)


# Cone subdivision


def cone_subdivide(
    cells: Sequence[CellId],
    dimensions: Mapping[CellId, int],
    faces: Mapping[CellId, Iterable[CellId]],
    apex: Mapping[CellId, Point] | None = None,
) -> dict[CellId, frozenset[frozenset[CellId]]]:
    """Simplices of each closed polyhedron as cones from its apex over its subdivided boundary.

    ``faces`` lists the proper faces of each cell.  Vertices of the output simplices
    are cell ids; when apexes are supplied every cone is checked for degeneracy.
    """
    out: dict[CellId, frozenset[frozenset[CellId]]] = {}
    for cell in sorted(cells, key=lambda c: dimensions[c]):
        boundary: set[frozenset[CellId]] = set()
        for face in faces[cell]:
            if dimensions[face] >= dimensions[cell]:
                raise InputError("a face must have lower dimension than its cell")
            if face not in out:
                raise InputError(f"face {face!r} of {cell!r} is not a cell")
            boundary.update(out[face])
        if dimensions[cell] > 0 and not boundary:
            raise InputError(f"cell {cell!r} has empty boundary")
        simplices = set(boundary)
        simplices.add(frozenset([cell]))
        for s in boundary:
            cone = s | {cell}
            if apex is not None and not affine_independent([apex[v] for v in sorted(cone, key=repr)]):
                raise InputError(f"apex of {cell!r} lies in the span of a boundary simplex")
            simplices.add(cone)
        out[cell] = frozenset(simplices)
    return out


# Building the cell structure of a description


@dataclass
class _Cells:
    dimension: dict[CellId, int] = field(default_factory=dict)
    point: dict[CellId, Point] = field(default_factory=dict)
    faces: dict[CellId, set[CellId]] = field(default_factory=dict)
    tags: dict[CellId, frozenset[str]] = field(default_factory=dict)

    def add(self, cell: CellId, dim: int, point: Point, faces: Iterable[CellId], tags: frozenset[str]) -> None:
        self.dimension[cell] = dim
        self.point[cell] = point
        self.faces[cell] = set(faces)
        self.tags[cell] = tags


def base_coordinates(description: DecompositionDescription) -> list[Fraction]:
    base_functionals = project_arrangement(description.functionals, description.dimension - 1) if description.dimension == 2 else list(description.functionals)
    return tau_segment_map(description.samples, arrangement_points(base_functionals))


def _cells_1d(description: DecompositionDescription) -> _Cells:
    xs = base_coordinates(description)
    p = len(xs)
    points = description.base_points or tuple(BaseCellSpec() for _ in range(p))
    intervals = description.base_intervals or tuple(BaseCellSpec() for _ in range(p - 1))
    if len(points) != p or len(intervals) != max(p - 1, 0):
        raise InputError("base cell flags do not match the samples")
    cells = _Cells()
    for i, spec in enumerate(points):
        if spec.in_a:
            cells.add(("point", i), 0, (xs[i],), (), spec.tags)
    for i, spec in enumerate(intervals):
        if spec.in_a:
            ends = [("point", i), ("point", i + 1)]
            if not all(e in cells.dimension for e in ends):
                raise InputError("the described set is not closed: an interval lacks an endpoint")
            cells.add(("interval", i), 1, ((xs[i] + xs[i + 1]) / 2,), ends, spec.tags)
    return cells


def _column_cells(col: ColumnSpec, kind_dim: int) -> list[tuple[CellId, int]]:
    out = []
    for j, g in enumerate(col.graphs):
        if g.in_a:
            out.append(((col.kind, col.index, "graph", j), kind_dim))
    for j, b in enumerate(col.bands):
        if b.in_a:
            out.append(((col.kind, col.index, "band", j), kind_dim + 1))
    return out


def _span_cells(col: ColumnSpec, low: int, high: int) -> list[CellId]:
    cells: list[CellId] = [(col.kind, col.index, "graph", j) for j in range(low, high + 1)]
    cells.extend((col.kind, col.index, "band", j) for j in range(low, high))
    return cells


def _cells_2d(description: DecompositionDescription) -> _Cells:
    xs = base_coordinates(description)
    functionals = description.functionals
    cells = _Cells()
    columns = sorted(description.columns, key=lambda c: (c.index, c.kind != "point"))
    for col in columns:
        if len(col.bands) != max(len(col.graphs) - 1, 0):
            raise InputError("a column needs one band between each pair of consecutive graphs")
        if col.kind == "point":
            base = (xs[col.index],)
        elif col.kind == "interval":
            base = ((xs[col.index] + xs[col.index + 1]) / 2,)
        else:
            raise InputError(f"unknown column kind {col.kind!r}")
        graph_values, band_values = assign_column_coordinates(base, functionals, col.graphs)
        base_dim = 0 if col.kind == "point" else 1
        left = description.column("point", col.index) if col.kind == "interval" else None
        right = description.column("point", col.index + 1) if col.kind == "interval" else None
        for j, g in enumerate(col.graphs):
            if not g.in_a:
                continue
            faces: list[CellId] = []
            if col.kind == "interval":
                if g.left is None or g.right is None or left is None or right is None:
                    raise InputError(f"graph {g.name} needs endpoint graphs on both sides")
                faces = [("point", col.index, "graph", g.left), ("point", col.index + 1, "graph", g.right)]
            cells.add((col.kind, col.index, "graph", j), base_dim, base + (graph_values[j],), faces, g.tags)
        for j, b in enumerate(col.bands):
            if not b.in_a:
                continue
            faces = [(col.kind, col.index, "graph", j), (col.kind, col.index, "graph", j + 1)]
            if col.kind == "interval":
                lo, hi = col.graphs[j], col.graphs[j + 1]
                if lo.left > hi.left or lo.right > hi.right:
                    raise InputError("ordering inconsistency: endpoint graphs cross")
                faces += _span_cells(left, lo.left, hi.left)
                faces += _span_cells(right, lo.right, hi.right)
            cells.add((col.kind, col.index, "band", j), base_dim + 1, base + (band_values[j],), faces, b.tags)
    for cell, faces in cells.faces.items():
        for face in faces:
            if face not in cells.dimension:
                raise InputError(f"the described set is not closed: {face!r} bounds {cell!r} but is not in A")
    # Close the face lists transitively so cones see every lower-dimensional face.
    for cell in sorted(cells.dimension, key=lambda c: cells.dimension[c]):
        closure = set(cells.faces[cell])
        for face in list(cells.faces[cell]):
            closure |= cells.faces[face]
        cells.faces[cell] = closure
    return cells


def triangulate_respecting(description: DecompositionDescription) -> TriangulationResult:
    """Triangulate the described compact set so every open simplex lies in one sign set."""
    if description.dimension == 1:
        cells = _cells_1d(description)
        # Intervals are already simplices on their two endpoints.
        order = sorted((c for c in cells.dimension if cells.dimension[c] == 0), key=repr)
        polyhedra = {}
        for c, faces in cells.faces.items():
            top = frozenset(faces) if faces else frozenset([c])
            polyhedra[c] = frozenset([top]) | frozenset(frozenset([f]) for f in faces)
    elif description.dimension == 2:
        cells = _cells_2d(description)
        order = sorted(cells.dimension, key=lambda c: (cells.dimension[c], repr(c)))
        polyhedra = cone_subdivide(order, cells.dimension, cells.faces, cells.point)
    else:
        raise InputError("descriptions of dimension 1 or 2 only")
    index = {c: i for i, c in enumerate(order)}
    vertices = tuple(cells.point[c] for c in order)
    if len(set(vertices)) != len(vertices):
        raise InputError("two cells were assigned the same vertex")
    indexed = {c: frozenset(frozenset(index[v] for v in s) for s in poly) for c, poly in polyhedra.items()}
    complex_ = SimplicialComplex(vertices, frozenset(s for poly in indexed.values() for s in poly))
    respect = respect_certificate(complex_, description.functionals)
    simplex_cells: dict[frozenset[int], CellId] = {}
    for c, poly in indexed.items():
        for s in poly:
            # An open simplex lies in the cell of the smallest polyhedron containing it.
            current = simplex_cells.get(s)
            if current is None or cells.dimension[c] < cells.dimension[current]:
                simplex_cells[s] = c
    adapted: dict[str, set[frozenset[int]]] = {name: set() for name in description.subsets}
    for s, c in simplex_cells.items():
        for tag in cells.tags[c]:
            adapted.setdefault(tag, set()).add(s)
    return TriangulationResult(
        complex_,
        tuple(order),
        dict(cells.dimension),
        indexed,
        respect,
        {k: frozenset(v) for k, v in adapted.items()},
        tuple(description.functionals),
        simplex_cells,
    )


def simplex_sign_tuple(points: Sequence[Point], functionals: Sequence[AffineFunctional]) -> tuple[int, ...] | None:
    """Sign tuple of the open simplex, or None when it straddles a hyperplane."""
    signs = []
    center = centroid(points)
    for f in functionals:
        values = {sign(f(p)) for p in points}
        if 1 in values and -1 in values:
            return None
        signs.append(sign(f(center)))
    return tuple(signs)


def respect_certificate(complex_: SimplicialComplex, functionals: Sequence[AffineFunctional]) -> dict[frozenset[int], tuple[int, ...]]:
    out = {}
    for s in complex_.simplices:
        signs = simplex_sign_tuple(complex_.points(s), functionals)
        if signs is None:
            raise InputError(f"simplex {sorted(s)} meets two sign sets")
        out[s] = signs
    return out


# Fixture parsing


def _parse_tags(raw: object) -> frozenset[str]:
    return frozenset(raw or ())


def _parse_sign(raw: object) -> int | None:
    if raw is None:
        return None
    table = {"-": -1, "0": 0, "+": 1, -1: -1, 0: 0, 1: 1}
    if raw not in table:
        raise InputError(f"bad sign {raw!r}")
    return table[raw]


def parse_description(data: Mapping) -> DecompositionDescription:
    try:
        dimension = int(data["dimension"])
        functionals = tuple(
            AffineFunctional(to_fraction(row[0]), tuple(to_fraction(x) for x in row[1:])) for row in data["functionals"]
        )
        samples = tuple(
            SamplePosition(s["kind"], int(s["index"]), str(s.get("label", ""))) for s in data["samples"]
        )
        columns = []
        for col in data.get("columns", []):
            graphs = tuple(
                GraphSpec(
                    str(g.get("name", "")),
                    tuple(_parse_sign(x) for x in g["signs"]),
                    g.get("left"),
                    g.get("right"),
                    bool(g.get("in_a", True)),
                    _parse_tags(g.get("tags")),
                )
                for g in col["graphs"]
            )
            raw_bands = col.get("bands")
            if raw_bands is None:
                bands = tuple(BandSpec() for _ in range(max(len(graphs) - 1, 0)))
            else:
                bands = tuple(BandSpec(bool(b.get("in_a", True)), _parse_tags(b.get("tags"))) for b in raw_bands)
            columns.append(ColumnSpec(col["kind"], int(col["index"]), graphs, bands))
        base_points = tuple(BaseCellSpec(bool(b.get("in_a", True)), _parse_tags(b.get("tags"))) for b in data.get("base_points", []))
        base_intervals = tuple(
            BaseCellSpec(bool(b.get("in_a", True)), _parse_tags(b.get("tags"))) for b in data.get("base_intervals", [])
        )
        subsets = tuple(data.get("subsets", ()))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed decomposition description: {exc}") from exc
    for f in functionals:
        if f.dimension != dimension:
            raise InputError("functional dimension does not match the description")
    return DecompositionDescription(dimension, functionals, samples, tuple(columns), base_points, base_intervals, subsets)


def load_description(path: str | Path) -> DecompositionDescription:
    with open(path) as handle:
        return parse_description(json.load(handle))


def load_fixture_description(name: str) -> DecompositionDescription:
    return load_description(FIXTURE_DIR / f"{name}.json")


# Semilinear input


@dataclass(frozen=True)
class SemilinearRegion:
    """A set that is a union of sign-set cells of ``functionals``, with exact membership."""

    functionals: tuple[AffineFunctional, ...]
    contains: Callable[[Point], bool]
    name: str = ""


def _dedupe(functionals: Iterable[AffineFunctional]) -> list[AffineFunctional]:
    out: list[AffineFunctional] = []
    seen = set()
    for f in functionals:
        key = f.normalized()
        if (key.constant, key.gradient) not in seen:
            seen.add((key.constant, key.gradient))
            out.append(key)
    return out


def describe_semilinear(
    region: SemilinearRegion,
    functionals: Sequence[AffineFunctional] = (),
    subsets: Mapping[str, SemilinearRegion] | None = None,
) -> DecompositionDescription:
    """Cylindrical description of a compact semilinear set in R^1 or R^2.

    Every defining line joins the arrangement, so the placement schema keeps the
    actual coordinates and the triangulation realizes the set itself.
    """
    subsets = dict(subsets or {})
    lines = _dedupe(list(functionals) + list(region.functionals) + [f for s in subsets.values() for f in s.functionals])
    if not lines:
        raise InputError("a semilinear region needs defining functionals")
    n = lines[0].dimension

    def tags_at(point: Point) -> frozenset[str]:
        return frozenset(name for name, sub in subsets.items() if sub.contains(point))

    if n == 1:
        xs = arrangement_points(lines)
        samples = tuple(SamplePosition("equals", i) for i in range(len(xs)))
        points = tuple(BaseCellSpec(region.contains((x,)), tags_at((x,))) for x in xs)
        intervals = []
        for a, b in zip(xs, xs[1:]):
            mid = ((a + b) / 2,)
            intervals.append(BaseCellSpec(region.contains(mid), tags_at(mid)))
        return DecompositionDescription(1, tuple(lines), samples, (), points, tuple(intervals), tuple(subsets))
    if n != 2:
        raise InputError("semilinear synthesis supports dimensions 1 and 2")
    xs = arrangement_points(project_arrangement(lines, 1))
    graph_lines = [f for f in lines if f.gradient[1] != 0]
    samples = tuple(SamplePosition("equals", i) for i in range(len(xs)))

    def column(kind: str, index: int, x: Fraction, left: list[Fraction] | None, right: list[Fraction] | None):
        values = sorted({-(f.constant + f.gradient[0] * x) / f.gradient[1] for f in graph_lines})
        graphs = []
        for y in values:
            signs = tuple(None if f.gradient[1] == 0 else sign(y - (-(f.constant + f.gradient[0] * x) / f.gradient[1])) for f in lines)
            lend = rend = None
            if kind == "interval":
                through = next(f for f in graph_lines if -(f.constant + f.gradient[0] * x) / f.gradient[1] == y)
                at_left = -(through.constant + through.gradient[0] * xs[index]) / through.gradient[1]
                at_right = -(through.constant + through.gradient[0] * xs[index + 1]) / through.gradient[1]
                lend, rend = left.index(at_left), right.index(at_right)
            graphs.append(GraphSpec(f"y={y}", signs, lend, rend, region.contains((x, y)), tags_at((x, y))))
        bands = []
        for a, b in zip(values, values[1:]):
            mid = (x, (a + b) / 2)
            bands.append(BandSpec(region.contains(mid), tags_at(mid)))
        return ColumnSpec(kind, index, tuple(graphs), tuple(bands)), values

    columns = []
    point_values = []
    for i, x in enumerate(xs):
        col, values = column("point", i, x, None, None)
        columns.append(col)
        point_values.append(values)
    for i in range(len(xs) - 1):
        col, _ = column("interval", i, (xs[i] + xs[i + 1]) / 2, point_values[i], point_values[i + 1])
        columns.append(col)
    for col in columns:
        if not any(g.in_a for g in col.graphs) and not any(b.in_a for b in col.bands):
            continue
        if col.bands and (col.bands[0].in_a is None):
            raise InputError("unbounded band")
    return DecompositionDescription(2, tuple(lines), samples, tuple(columns), (), (), tuple(subsets))


def triangulate_semilinear(
    region: SemilinearRegion,
    functionals: Sequence[AffineFunctional] = (),
    subsets: Mapping[str, SemilinearRegion] | None = None,
) -> TriangulationResult:
    return triangulate_respecting(describe_semilinear(region, functionals, subsets))


def region_is_symmetric(region: SemilinearRegion, group: object) -> bool:
    """Membership agrees at the images of sample points of every cell of the arrangement."""
    from .arrangement import build_arrangement

    lines = []
    for g in group.elements:
        lines.extend(f.compose_linear(g.inverse_matrix()) for f in region.functionals)
    lines = _dedupe(lines)
    n = lines[0].dimension
    if n > 2:
        raise InputError("symmetry sampling supports dimensions 1 and 2")
    samples = [c.sample for c in build_arrangement(lines, n).cells]
    for p in samples:
        inside = region.contains(p)
        if any(region.contains(g.apply(p)) != inside for g in group.generator_elements()):
            return False
    return True


# Equivariant gluing


@dataclass(frozen=True)
class EquivariantTriangulation:
    result: TriangulationResult
    chamber_simplices: frozenset[frozenset[int]]
    chamber_complex: SimplicialComplex


def _in_closed_chamber(point: Point, chamber: Sequence[AffineFunctional]) -> bool:
    return all(f(point) >= 0 for f in chamber)


def equivariant_triangulation(
    base: TriangulationResult,
    group: object,
    regions: Sequence[SemilinearRegion] = (),
) -> EquivariantTriangulation:
    """Glue the images of the closed-chamber part of a wall-respecting triangulation.

    ``base`` must respect every chamber functional.  Semilinear ``regions`` (A and
    the subsets) are checked for symmetry first.
    """
    chamber = group.chamber
    if not chamber:
        raise InputError("the group needs chamber functionals")
    from .reflection_group import verify_fundamental_region

    verify_fundamental_region(group)
    for region in regions:
        if not region_is_symmetric(region, group):
            raise InputError(f"region {region.name or '?'} is not symmetric")
    walls = {(f.normalized().constant, f.normalized().gradient) for f in base.functionals}
    for f in chamber:
        g = f.normalized()
        if (g.constant, g.gradient) not in walls:
            raise InputError("the base triangulation must respect every chamber functional")
    cx = base.complex
    inside = frozenset(s for s in cx.simplices if all(_in_closed_chamber(cx.vertices[v], chamber) for v in s))
    used = sorted({v for s in inside for v in s})
    # Gluing is well defined only if chamber points mapped into the chamber are fixed.
    for v in used:
        p = cx.vertices[v]
        for g in group.elements:
            q = g.apply(p)
            if _in_closed_chamber(q, chamber) and q != p:
                raise InputError(f"{g.label()} moves a chamber vertex to another chamber point")
    points: dict[Point, int] = {}
    vertex_cells: list[CellId] = []
    simplex_cells: dict[frozenset[int], CellId] = {}
    adaptedness: dict[str, set[frozenset[int]]] = {k: set() for k in base.adaptedness}
    tag_of = {s: [k for k, v in base.adaptedness.items() if s in v] for s in inside}
    for g in group.elements:
        for v in used:
            q = g.apply(cx.vertices[v])
            if q not in points:
                points[q] = len(points)
                vertex_cells.append((g.label(), base.vertex_cells[v]))
        for s in inside:
            image = frozenset(points[g.apply(cx.vertices[v])] for v in s)
            simplex_cells.setdefault(image, (g.label(), base.simplex_cells[s]))
            for tag in tag_of[s]:
                adaptedness[tag].add(image)
    dims = {c: base.cell_dimensions[c[1]] for c in set(simplex_cells.values()) | set(vertex_cells)}
    polyhedra: dict[CellId, set[frozenset[int]]] = {}
    for simplex, cell in simplex_cells.items():
        faces = polyhedra.setdefault(cell, set())
        faces.update(frozenset(c) for k in range(1, len(simplex) + 1) for c in combinations(sorted(simplex), k))
    vertices = tuple(sorted(points, key=points.get))
    glued = SimplicialComplex(vertices, frozenset(simplex_cells))
    result = TriangulationResult(
        glued,
        tuple(vertex_cells),
        dims,
        {c: frozenset(v) for c, v in polyhedra.items()},
        respect_certificate(glued, chamber),
        {k: frozenset(v) for k, v in adaptedness.items()},
        tuple(chamber),
        simplex_cells,
    )
    chamber_complex = SimplicialComplex(cx.vertices, inside)
    return EquivariantTriangulation(result, inside, chamber_complex)
