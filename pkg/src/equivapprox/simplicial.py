"""Concrete and abstract simplicial complexes, face posets, subdivisions and retractions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .geometry import (
    InfinitesimalScalar,
    InputError,
    LinearConstraint,
    Point,
    affine_independent,
    barycentric_coordinates,
    centroid,
    linear_feasible,
)

Simplex = frozenset


def _closure(facets: Iterable[Iterable[Hashable]]) -> frozenset[frozenset]:
    out: set[frozenset] = set()
    for facet in facets:
        facet = frozenset(facet)
        if not facet or facet in out:
            continue
        for k in range(1, len(facet) + 1):
            out.update(frozenset(c) for c in combinations(sorted(facet, key=repr), k))
    return frozenset(out)


def _maximal(simplices: Iterable[frozenset]) -> list[frozenset]:
    ordered = sorted(simplices, key=len, reverse=True)
    kept: list[frozenset] = []
    for s in ordered:
        if not any(s < t for t in kept):
            kept.append(s)
    return kept


@dataclass(frozen=True)
class AbstractComplex:
    """A subset-closed family of finite label sets."""

    simplices: frozenset[frozenset]

    @staticmethod
    def from_facets(facets: Iterable[Iterable[Hashable]]) -> AbstractComplex:
        return AbstractComplex(_closure(facets))

    @property
    def vertices(self) -> frozenset:
        return frozenset(v for s in self.simplices if len(s) == 1 for v in s)

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def facets(self) -> list[frozenset]:
        return _maximal(self.simplices)

    def of_dimension(self, k: int) -> list[frozenset]:
        return [s for s in self.simplices if len(s) == k + 1]

    def is_closed(self) -> bool:
        return all(s - {v} in self.simplices for s in self.simplices if len(s) > 1 for v in s)

    def relabel(self, mapping: Mapping[Hashable, Hashable]) -> AbstractComplex:
        return AbstractComplex(frozenset(frozenset(mapping[v] for v in s) for s in self.simplices))


@dataclass(frozen=True)
class SimplicialComplex:
    """Simplices are frozensets of indices into ``vertices``."""

    vertices: tuple[Point, ...]
    simplices: frozenset[frozenset[int]]

    @staticmethod
    def from_facets(vertices: Sequence[Sequence[Fraction]], facets: Iterable[Iterable[int]]) -> SimplicialComplex:
        points = tuple(tuple(Fraction(x) for x in p) for p in vertices)
        return SimplicialComplex(points, _closure(facets))

    @property
    def ambient_dimension(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def facets(self) -> list[frozenset[int]]:
        return _maximal(self.simplices)

    def of_dimension(self, k: int) -> list[frozenset[int]]:
        return sorted((s for s in self.simplices if len(s) == k + 1), key=sorted)

    def points(self, simplex: Iterable[int]) -> tuple[Point, ...]:
        return tuple(self.vertices[i] for i in sorted(simplex))

    def vertex_lookup(self) -> dict[Point, int]:
        cache = self.__dict__.get("_lookup")
        if cache is None:
            cache = {p: i for i, p in enumerate(self.vertices)}
            object.__setattr__(self, "_lookup", cache)
        return cache

    def image(self, simplex: Iterable[int], transform: Callable[[Point], Point]) -> frozenset[int] | None:
        lookup = self.vertex_lookup()
        out = []
        for i in simplex:
            j = lookup.get(transform(self.vertices[i]))
            if j is None:
                return None
            out.append(j)
        return frozenset(out)

    def vertex_permutation(self, transform: Callable[[Point], Point]) -> dict[int, int] | None:
        lookup = self.vertex_lookup()
        perm = {}
        for i, p in enumerate(self.vertices):
            j = lookup.get(transform(p))
            if j is None:
                return None
            perm[i] = j
        return perm

    def locate(self, point: Sequence[Fraction]) -> frozenset[int] | None:
        """The simplex whose relative interior contains ``point``."""
        point = tuple(Fraction(x) for x in point)
        for s in sorted(self.simplices, key=len):
            coords = barycentric_coordinates(point, self.points(s))
            if coords is not None and all(c > 0 for c in coords):
                return s
        return None

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def abstract(self) -> AbstractComplex:
        return AbstractComplex(self.simplices)

    def cell_complex(self) -> CellComplex:
        faces = {s: _closure([s]) for s in self.simplices}
        return CellComplex(
            tuple(sorted(self.simplices, key=lambda s: (len(s), sorted(s)))),
            {s: len(s) - 1 for s in self.simplices},
            faces,
            {s: self.points(s) for s in self.simplices},
        )


@dataclass(frozen=True)
class ComplexCertificate:
    simplices_checked: int
    pairs_checked: int


@dataclass(frozen=True)
class ComplexViolation:
    reason: str
    simplices: tuple[frozenset[int], ...]


def _bounding_boxes_meet(a: Sequence[Point], b: Sequence[Point]) -> bool:
    for axis in range(len(a[0])):
        if max(p[axis] for p in a) < min(p[axis] for p in b) or max(p[axis] for p in b) < min(p[axis] for p in a):
            return False
    return True


def improper_intersection(first: Sequence[Point], second: Sequence[Point], shared: Sequence[int]) -> bool:
    """True when the closed simplices meet outside the closed face spanned by ``shared``.

    ``shared`` lists positions in ``first`` whose vertices also belong to ``second``.
    """
    p, q = len(first), len(second)
    if len(shared) == p:
        return False
    dim = len(first[0])
    nvars = p + q
    constraints = []
    for i in range(nvars):
        unit = tuple(Fraction(int(j == i)) for j in range(nvars))
        constraints.append(LinearConstraint(unit, Fraction(0), ">="))
    constraints.append(LinearConstraint(tuple(Fraction(int(j < p)) for j in range(nvars)), Fraction(-1), "="))
    constraints.append(LinearConstraint(tuple(Fraction(int(j >= p)) for j in range(nvars)), Fraction(-1), "="))
    for axis in range(dim):
        coeffs = tuple(first[j][axis] for j in range(p)) + tuple(-second[j][axis] for j in range(q))
        constraints.append(LinearConstraint(coeffs, Fraction(0), "="))
    outside = tuple(Fraction(int(j < p and j not in shared)) for j in range(nvars))
    constraints.append(LinearConstraint(outside, Fraction(0), ">"))
    return linear_feasible(constraints, nvars)


def validate_complex(complex_: SimplicialComplex) -> ComplexCertificate | ComplexViolation:
    """Subset closure, affine independence, and proper pairwise intersections of facets."""
    for s in complex_.simplices:
        for v in s:
            if not 0 <= v < len(complex_.vertices):
                return ComplexViolation("unknown vertex index", (s,))
            if len(s) > 1 and s - {v} not in complex_.simplices:
                return ComplexViolation("not closed under faces", (s, s - {v}))
        if not affine_independent(complex_.points(s)):
            return ComplexViolation("affinely dependent vertices", (s,))
    facets = sorted(complex_.facets(), key=sorted)
    pairs = 0
    for a, b in combinations(facets, 2):
        pa, pb = complex_.points(a), complex_.points(b)
        if not _bounding_boxes_meet(pa, pb):
            continue
        pairs += 1
        order_a = sorted(a)
        shared = [i for i, v in enumerate(order_a) if v in b]
        if improper_intersection(pa, pb, shared):
            return ComplexViolation("closed simplices meet outside a common face", (a, b))
    return ComplexCertificate(len(complex_.simplices), pairs)


@dataclass(frozen=True)
class FacePoset:
    """A finite poset given by the strict down-sets of each element."""

    elements: tuple[Hashable, ...]
    below: Mapping[Hashable, frozenset]

    def less(self, a: Hashable, b: Hashable) -> bool:
        return a in self.below[b]

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return a == b or a in self.below[b]

    def flags(self, k: int) -> Iterator[tuple]:
        """All chains s_0 > s_1 > ... > s_k, lazily."""

        def extend(chain: tuple) -> Iterator[tuple]:
            if len(chain) == k + 1:
                yield chain
                return
            for nxt in sorted(self.below[chain[-1]], key=repr):
                yield from extend(chain + (nxt,))

        for top in self.elements:
            yield from extend((top,))

    def restricted(self, keep: Iterable[Hashable]) -> FacePoset:
        keep = frozenset(keep)
        return FacePoset(tuple(e for e in self.elements if e in keep), {e: self.below[e] & keep for e in keep})


@dataclass(frozen=True)
class CellComplex:
    """Regular cell complex with relatively open convex polyhedral cells."""

    cells: tuple[Hashable, ...]
    dimensions: Mapping[Hashable, int]
    faces: Mapping[Hashable, frozenset]
    corners: Mapping[Hashable, tuple[Point, ...]]

    def face_poset(self) -> FacePoset:
        return FacePoset(self.cells, {c: frozenset(self.faces[c]) - {c} for c in self.cells})

    def centroid_of(self, cell: Hashable) -> Point:
        return centroid(self.corners[cell])

    def contains(self, cell: Hashable, point: Sequence[Fraction]) -> bool:
        """Relative-interior membership: a convex combination of corners with all weights positive."""
        corners = self.corners[cell]
        n = len(corners)
        constraints = [LinearConstraint(tuple(Fraction(int(j == i)) for j in range(n)), Fraction(0), ">") for i in range(n)]
        constraints.append(LinearConstraint(tuple(Fraction(1) for _ in range(n)), Fraction(-1), "="))
        for axis in range(len(point)):
            constraints.append(LinearConstraint(tuple(c[axis] for c in corners), -Fraction(point[axis]), "="))
        return linear_feasible(constraints, n)

    def locate(self, point: Sequence[Fraction]) -> Hashable | None:
        for cell in sorted(self.cells, key=lambda c: self.dimensions[c]):
            if self.contains(cell, point):
                return cell
        return None


def face_poset_and_flags(complex_: SimplicialComplex) -> FacePoset:
    return complex_.cell_complex().face_poset()


def order_complex(poset: FacePoset) -> AbstractComplex:
    """Chains of the poset as simplices."""
    chains: set[frozenset] = set()

    def grow(chain: frozenset, bottom: Hashable) -> None:
        chains.add(chain)
        for nxt in poset.below[bottom]:
            grow(chain | {nxt}, nxt)

    for top in poset.elements:
        grow(frozenset([top]), top)
    return AbstractComplex(frozenset(chains))


@dataclass(frozen=True)
class Subdivision:
    """A realized order complex: vertex i sits at the centroid of ``vertex_cells[i]``."""

    complex: SimplicialComplex
    vertex_cells: tuple[Hashable, ...]
    cell_dimensions: Mapping[Hashable, int]

    def cell_index(self) -> dict[Hashable, int]:
        cache = self.__dict__.get("_cell_index")
        if cache is None:
            cache = {c: i for i, c in enumerate(self.vertex_cells)}
            object.__setattr__(self, "_cell_index", cache)
        return cache

    def ordered(self, simplex: Iterable[int]) -> tuple[int, ...]:
        """Vertices in strictly decreasing dimension of their cells."""
        return tuple(sorted(simplex, key=lambda v: -self.cell_dimensions[self.vertex_cells[v]]))

    def carrier(self, simplex: Iterable[int]) -> Hashable:
        """The cell containing the open subdivision simplex: its top-dimensional member."""
        return self.vertex_cells[self.ordered(simplex)[0]]

    def chain(self, simplex: Iterable[int]) -> frozenset:
        return frozenset(self.vertex_cells[v] for v in simplex)


def centroidal_realization(cells: CellComplex, chains: AbstractComplex | None = None) -> Subdivision:
    """Realize chains of cells linearly, placing each cell at its centroid."""
    if chains is None:
        chains = order_complex(cells.face_poset())
    for c in cells.cells:
        if not cells.corners[c]:
            raise InputError(f"cell {c!r} has no corner points")
    used = sorted(chains.vertices, key=lambda c: (cells.dimensions[c], repr(c)))
    index = {c: i for i, c in enumerate(used)}
    points = tuple(cells.centroid_of(c) for c in used)
    simplices = frozenset(frozenset(index[c] for c in s) for s in chains.simplices)
    return Subdivision(SimplicialComplex(points, simplices), tuple(used), dict(cells.dimensions))


def barycentric_subdivision(complex_: SimplicialComplex) -> Subdivision:
    return centroidal_realization(complex_.cell_complex())


def check_symmetric_complex(complex_: SimplicialComplex, group: object) -> bool:
    """True iff every group element maps every simplex onto a simplex of the complex."""
    for g in group.elements:
        perm = complex_.vertex_permutation(g.apply)
        if perm is None:
            return False
        for s in complex_.simplices:
            if frozenset(perm[v] for v in s) not in complex_.simplices:
                return False
    return True


# Markings and cores


@dataclass(frozen=True)
class MarkedComplex:
    """Hard pairs (face, simplex) among simplices of S; every other pair is soft."""

    base: SimplicialComplex
    in_s: frozenset[frozenset[int]]
    hard: frozenset[tuple[frozenset[int], frozenset[int]]]

    def __post_init__(self) -> None:
        for face, simplex in self.hard:
            if not face < simplex:
                raise InputError("a hard pair must be a proper face and a simplex")
            if face not in self.in_s or simplex not in self.in_s:
                raise InputError("only pairs of simplices of S may be hard")

    @staticmethod
    def all_soft(base: SimplicialComplex, in_s: Iterable[frozenset[int]]) -> MarkedComplex:
        return MarkedComplex(base, frozenset(in_s), frozenset())

    @staticmethod
    def all_hard(base: SimplicialComplex, in_s: Iterable[frozenset[int]]) -> MarkedComplex:
        in_s = frozenset(in_s)
        hard = frozenset((a, b) for b in in_s for a in in_s if a < b)
        return MarkedComplex(base, in_s, hard)

    def is_hard(self, face: frozenset[int], simplex: frozenset[int]) -> bool:
        return (face, simplex) in self.hard

    def is_symmetric(self, group: object) -> bool:
        for g in group.elements:
            perm = self.base.vertex_permutation(g.apply)
            if perm is None:
                return False

            def img(s: frozenset[int]) -> frozenset[int]:
                return frozenset(perm[v] for v in s)

            if {img(s) for s in self.in_s} != self.in_s:
                return False
            if {(img(a), img(b)) for a, b in self.hard} != self.hard:
                return False
        return True


def in_s_hat(marking: MarkedComplex, subdivision: Subdivision, simplex: Iterable[int]) -> bool:
    return subdivision.carrier(simplex) in marking.in_s


def mark_and_core(marking: MarkedComplex, subdivision: Subdivision, simplex: Iterable[int]) -> tuple[int, ...]:
    """The core: the longest prefix whose cells are pairwise hard in the earlier ones."""
    simplex = frozenset(simplex)
    if simplex not in subdivision.complex.simplices:
        raise InputError("simplex is not in the subdivision")
    if not in_s_hat(marking, subdivision, simplex):
        return ()
    ordered = subdivision.ordered(simplex)
    cells = [subdivision.vertex_cells[v] for v in ordered]
    core = [ordered[0]]
    for nu in range(1, len(ordered)):
        if all(marking.is_hard(cells[nu], cells[mu]) for mu in range(nu)):
            core.append(ordered[nu])
        else:
            break
    return tuple(core)


@dataclass(frozen=True)
class DeltaAtom:
    """functional(x) - delta_coefficient * delta  (relation)  0, relation in {>=, >, =, <=, <}."""

    functional: object
    delta_coefficient: Fraction
    relation: str


def _atom_constraints(atom: DeltaAtom, points: Sequence[Point], delta: object) -> LinearConstraint:
    f = atom.functional
    coeffs = tuple(f(p) for p in points)
    constant = -atom.delta_coefficient * delta if atom.delta_coefficient else Fraction(0)
    relation = atom.relation
    if relation in ("<=", "<"):
        coeffs = tuple(-c for c in coeffs)
        constant = -constant
        relation = ">=" if relation == "<=" else ">"
    # coefficients act on barycentric weights whose sum is pinned to 1 separately
    return LinearConstraint(coeffs, constant, relation)


def open_simplex_meets(points: Sequence[Point], conjunction: Sequence[DeltaAtom], delta: object) -> bool:
    """Does the open simplex meet the polyhedron cut out by the conjunction at this delta?"""
    n = len(points)
    constraints = [LinearConstraint(tuple(Fraction(int(j == i)) for j in range(n)), Fraction(0), ">") for i in range(n)]
    constraints.append(LinearConstraint(tuple(Fraction(1) for _ in range(n)), Fraction(-1), "="))
    constraints.extend(_atom_constraints(a, points, delta) for a in conjunction)
    return linear_feasible(constraints, n)


def pair_is_hard(
    face_points: Sequence[Point], simplex_points: Sequence[Point], family: Sequence[Sequence[DeltaAtom]], delta: object
) -> bool:
    for conjunction in family:
        if open_simplex_meets(simplex_points, conjunction, delta) and open_simplex_meets(face_points, conjunction, delta):
            return True
    return False


def separability_marking(
    base: SimplicialComplex,
    in_s: Iterable[frozenset[int]],
    family: Sequence[Sequence[DeltaAtom]],
) -> MarkedComplex:
    """Mark (face, simplex) soft iff cl(simplex ∩ S_delta) misses the open face for all small delta.

    ``family`` is S_delta as a union of conjunctions of atoms affine in x and delta;
    delta is treated as a formal positive infinitesimal.
    """
    in_s = frozenset(in_s)
    delta = InfinitesimalScalar.symbol(0)
    hard = set()
    for simplex in in_s:
        for face in in_s:
            if face < simplex and pair_is_hard(base.points(face), base.points(simplex), family, delta):
                hard.add((face, simplex))
    return MarkedComplex(base, in_s, frozenset(hard))


# Barycentric retraction


def barycentric_retraction(cells: CellComplex, region: Iterable[Hashable]) -> AbstractComplex:
    """Chains of cells of the region: the subdivision simplices whose closures lie in it."""
    region = frozenset(region)
    unknown = region - set(cells.cells)
    if unknown:
        raise InputError("region is not a union of cells of the complex")
    return order_complex(cells.face_poset().restricted(region))


def _maximal_flags(cells: CellComplex, top: Hashable) -> Iterator[tuple]:
    poset = cells.face_poset()

    def extend(chain: tuple) -> Iterator[tuple]:
        lower = [c for c in poset.below[chain[-1]] if cells.dimensions[c] == cells.dimensions[chain[-1]] - 1]
        if not lower:
            yield chain
            return
        for c in sorted(lower, key=repr):
            yield from extend(chain + (c,))

    yield from extend((top,))


def retracting_homotopy(t: object, point: Sequence[Fraction], cells: CellComplex, region: Iterable[Hashable]) -> Point:
    """Evaluate the barycentric retracting map at time t; t = 1 is the identity."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise InputError("t must lie in [0, 1]")
    region = frozenset(region)
    point = tuple(Fraction(x) for x in point)
    cell = cells.locate(point)
    if cell is None or cell not in region:
        raise InputError("point is not in the region")
    for flag in _maximal_flags(cells, cell):
        centers = [cells.centroid_of(c) for c in flag]
        coords = barycentric_coordinates(point, centers)
        if coords is None or any(c < 0 for c in coords):
            continue
        support = [(c, w, p) for c, w, p in zip(flag, coords, centers) if w > 0]
        outside = [(w, p) for c, w, p in support if c not in region]
        inside = [(w, p) for c, w, p in support if c in region]
        mass_out = sum((w for w, _ in outside), Fraction(0))
        mass_in = sum((w for w, _ in inside), Fraction(0))
        scale = (1 - t * mass_out) / mass_in
        dim = len(point)
        return tuple(
            t * sum((w * p[i] for w, p in outside), Fraction(0)) + scale * sum((w * p[i] for w, p in inside), Fraction(0))
            for i in range(dim)
        )
    raise InputError("point could not be placed in the subdivision")
