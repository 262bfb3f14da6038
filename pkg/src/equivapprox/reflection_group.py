"""Finite reflection groups acting on rational n-space."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arrangement import build_arrangement
from .geometry import (
    AffineFunctional,
    InputError,
    LinearConstraint,
    Point,
    Polynomial,
    dot,
    identity_matrix,
    linear_feasible,
    linear_feasible_point,
    mat_mul,
    mat_vec,
    nullspace,
    points_in_general_position_box,
    transpose,
)

DEFAULT_CAP = 10080

Matrix = tuple[tuple[Fraction, ...], ...]


class GroupNotFiniteError(InputError):
    pass


class FundamentalRegionError(InputError):
    def __init__(self, message: str, element: GroupElement | None = None) -> None:
        super().__init__(message)
        self.element = element


@dataclass(frozen=True)
class GroupElement:
    matrix: Matrix
    word: tuple[int, ...]

    def apply(self, point: Sequence[Fraction]) -> Point:
        return mat_vec(self.matrix, point)

    def inverse_matrix(self) -> Matrix:
        return transpose(self.matrix)

    @property
    def is_identity(self) -> bool:
        return self.matrix == identity_matrix(len(self.matrix))

    def label(self) -> str:
        return "e" if not self.word else "".join(f"s{i}" for i in self.word)


@dataclass(frozen=True)
class WallIntersection:
    """Walls where equality holds; the remaining chamber functionals stay >= 0."""

    equalities: frozenset[int]
    inequalities: frozenset[int]


@dataclass(frozen=True)
class ReflectionGroup:
    generators: tuple[AffineFunctional, ...]
    elements: tuple[GroupElement, ...]
    chamber: tuple[AffineFunctional, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def dimension(self) -> int:
        return self.generators[0].dimension

    def generator_elements(self) -> list[GroupElement]:
        return [self.element_of(reflection_matrix(g)) for g in self.generators]

    def element_of(self, matrix: Matrix) -> GroupElement:
        found = self._index().get(matrix)
        if found is None:
            raise InputError("matrix is not an element of this group")
        return found

    def _index(self) -> dict[Matrix, GroupElement]:
        cache = self.__dict__.get("_matrix_index")
        if cache is None:
            cache = {g.matrix: g for g in self.elements}
            object.__setattr__(self, "_matrix_index", cache)
        return cache

    def with_chamber(self, chamber: Sequence[AffineFunctional]) -> ReflectionGroup:
        return ReflectionGroup(self.generators, self.elements, tuple(chamber))


def reflection_matrix(functional: AffineFunctional) -> Matrix:
    if not functional.is_linear:
        raise InputError("reflecting hyperplanes must pass through the origin")
    r = functional.gradient
    norm = dot(r, r)
    n = len(r)
    return tuple(tuple(Fraction(int(i == j)) - 2 * r[i] * r[j] / norm for j in range(n)) for i in range(n))


def generate_group(
    reflections: Sequence[AffineFunctional],
    cap: int = DEFAULT_CAP,
    chamber: Sequence[AffineFunctional] = (),
) -> ReflectionGroup:
    """Enumerate the group generated by the reflections, breadth first."""
    if not reflections:
        raise InputError("at least one reflection is required")
    if cap < 1:
        raise InputError("cap must be at least 1")
    n = reflections[0].dimension
    if any(r.dimension != n for r in reflections):
        raise InputError("reflections live in different dimensions")
    generators = [reflection_matrix(r) for r in reflections]
    start = identity_matrix(n)
    words: dict[Matrix, tuple[int, ...]] = {start: ()}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for i, s in enumerate(generators):
            product = mat_mul(current, s)
            if product not in words:
                words[product] = words[current] + (i,)
                if len(words) > cap:
                    raise GroupNotFiniteError(f"group not finite at this cap ({cap})")
                queue.append(product)
    elements = tuple(GroupElement(m, w) for m, w in words.items())
    return ReflectionGroup(tuple(reflections), elements, tuple(chamber))


def _chamber_constraints(chamber: Sequence[AffineFunctional], matrix: Matrix | None, relation: str) -> list[LinearConstraint]:
    """Constraints for g(H) = {x : L(g^-1 x) (relation) 0}; matrix is g^-1."""
    out = []
    for f in chamber:
        g = f if matrix is None else f.compose_linear(matrix)
        out.append(LinearConstraint.from_functional(g, relation))
    return out


@dataclass(frozen=True)
class FundamentalRegionCertificate:
    elements_checked: int
    sample_points: int


def _coverage_samples(group: ReflectionGroup) -> list[Point]:
    n = group.dimension
    if n > 2:
        return points_in_general_position_box(n)
    walls = []
    for g in group.elements:
        for f in group.chamber:
            walls.append(f.compose_linear(g.inverse_matrix()))
    arrangement = build_arrangement(walls, n)
    samples = [c.sample for c in arrangement.cells]
    samples.extend(points_in_general_position_box(n))
    return samples


def verify_fundamental_region(group: ReflectionGroup) -> FundamentalRegionCertificate:
    """Check pairwise disjointness of chamber images and coverage of sample points."""
    chamber = group.chamber
    if not chamber:
        raise FundamentalRegionError("no chamber functionals supplied")
    n = group.dimension
    interior = _chamber_constraints(chamber, None, ">")
    if not linear_feasible(interior, n):
        raise FundamentalRegionError("the chamber is empty")
    checked = 0
    for g in group.elements:
        if g.is_identity:
            continue
        image = _chamber_constraints(chamber, g.inverse_matrix(), ">")
        if linear_feasible(interior + image, n):
            raise FundamentalRegionError(f"chamber meets its image under {g.label()}", g)
        checked += 1
    samples = _coverage_samples(group)
    for p in samples:
        if not any(all(f(g.apply(p)) >= 0 for f in chamber) for g in group.elements):
            raise FundamentalRegionError(f"sample point {tuple(map(str, p))} is not covered")
    return FundamentalRegionCertificate(checked, len(samples))


def orbit(item: Sequence[Fraction] | Sequence[Sequence[Fraction]], group: ReflectionGroup) -> set:
    """Orbit of a point, or of a simplex given as a sequence of points."""
    if item and isinstance(item[0], (tuple, list)):
        return {frozenset(g.apply(p) for p in item) for g in group.elements}
    return {g.apply(item) for g in group.elements}


def fixed_wall_intersection(element: GroupElement, group: ReflectionGroup) -> WallIntersection:
    """The face of the closed chamber that is shared with its image under ``element``."""
    if element.matrix not in group._index():
        raise InputError("element is not in the group")
    n = group.dimension
    closed = _chamber_constraints(group.chamber, None, ">=")
    image = _chamber_constraints(group.chamber, element.inverse_matrix(), ">=")
    equal = set()
    for i, f in enumerate(group.chamber):
        probe = LinearConstraint.from_functional(f, ">")
        if not linear_feasible(closed + image + [probe], n):
            equal.add(i)
    # The shared face must be fixed pointwise: check on a basis of its span.
    rows = [list(group.chamber[i].gradient) for i in sorted(equal)]
    for v in nullspace(rows, n):
        if element.apply(v) != v:
            raise InputError(f"{element.label()} does not fix the shared face pointwise")
    witness = linear_feasible_point(
        closed + [LinearConstraint.from_functional(group.chamber[i], "=") for i in equal], n
    )
    if witness is None or element.apply(witness) != witness:
        raise InputError(f"{element.label()} does not fix the shared face pointwise")
    all_walls = frozenset(range(len(group.chamber)))
    return WallIntersection(frozenset(equal), all_walls - frozenset(equal))


def is_invariant_family(functions: Sequence[Polynomial], group: ReflectionGroup) -> bool:
    family = set(functions)
    for g in group.generator_elements():
        if {h.compose_linear(g.matrix) for h in functions} != family:
            return False
    return True


def invariance_violation(functions: Sequence[Polynomial], group: ReflectionGroup) -> tuple[Polynomial, GroupElement] | None:
    """A function whose image under some generator leaves the family, if any."""
    family = set(functions)
    for g in group.generator_elements():
        for h in functions:
            if h.compose_linear(g.matrix) not in family:
                return h, g
    return None


def permutation_group(n: int) -> ReflectionGroup:
    """S_n acting on R^n by coordinate permutation, with chamber x1 <= ... <= xn."""
    walls = []
    for i in range(n - 1):
        grad = [Fraction(0)] * n
        grad[i], grad[i + 1] = Fraction(-1), Fraction(1)
        walls.append(AffineFunctional(Fraction(0), tuple(grad)))
    group = generate_group(walls, chamber=walls)
    return group


def permutation_of(element: GroupElement) -> tuple[int, ...] | None:
    """The coordinate permutation performed by a permutation matrix, if it is one."""
    perm = []
    for row in element.matrix:
        ones = [j for j, x in enumerate(row) if x == 1]
        if len(ones) != 1 or any(x not in (0, 1) for x in row):
            return None
        perm.append(ones[0])
    return tuple(perm)


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    seen = set()
    lengths = []
    for start in range(len(perm)):
        if start in seen:
            continue
        length = 0
        j = start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))
