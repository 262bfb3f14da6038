"""Rational simplicial homology with group actions, characters and Specht multiplicities."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .geometry import InputError

Column = dict[int, Fraction]
Partition = tuple[int, ...]


class NotSimplicialError(InputError):
    pass


class InconsistentCharacterError(ValueError):
    pass


def _sort_key(label: object) -> tuple:
    return (0, label) if isinstance(label, (int, Fraction)) else (1, repr(label))


def _sorted_labels(labels: Iterable[Hashable]) -> list:
    labels = list(labels)
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=_sort_key)


def _permutation_sign(values: Sequence[int]) -> int:
    """Sign of the permutation sorting ``values`` (distinct entries)."""
    seen = [False] * len(values)
    order = sorted(range(len(values)), key=values.__getitem__)
    parity = 0
    for start in range(len(values)):
        if seen[start]:
            continue
        j, length = start, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        parity += length - 1
    return -1 if parity % 2 else 1


@dataclass
class _Reduction:
    """Column reduction of one boundary map, persistence style (pivot = lowest row)."""

    pivots: dict[int, Column]
    cycles: dict[int, Column]

    @property
    def rank(self) -> int:
        return len(self.pivots)


class ChainComplex:
    """Oriented simplicial chains; simplices are sorted tuples of vertex indices."""

    def __init__(self, simplices: Iterable[Iterable[Hashable]], vertex_order: Sequence[Hashable] | None = None) -> None:
        faces: set[frozenset] = set()
        for s in simplices:
            s = frozenset(s)
            if not s:
                continue
            if s in faces:
                continue
            stack = [s]
            while stack:
                t = stack.pop()
                if t in faces:
                    continue
                faces.add(t)
                if len(t) > 1:
                    stack.extend(t - {v} for v in t)
        labels = {v for s in faces for v in s}
        if vertex_order is None:
            vertex_order = _sorted_labels(labels)
        else:
            missing = labels - set(vertex_order)
            if missing:
                raise InputError("vertex order does not cover all vertices")
        self.vertices: tuple = tuple(vertex_order)
        self.vertex_index: dict = {v: i for i, v in enumerate(self.vertices)}
        top = max((len(s) for s in faces), default=0)
        by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(top)]
        for s in faces:
            key = tuple(sorted(self.vertex_index[v] for v in s))
            by_dim[len(key) - 1].append(key)
        self.simplices: tuple[tuple[tuple[int, ...], ...], ...] = tuple(tuple(sorted(d)) for d in by_dim)
        self.index: list[dict[tuple[int, ...], int]] = [{s: i for i, s in enumerate(d)} for d in self.simplices]
        self._reductions: dict[int, _Reduction] = {}

    @property
    def dimension(self) -> int:
        return len(self.simplices) - 1

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if 0 <= k < len(self.simplices) else 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(d) for k, d in enumerate(self.simplices))

    def boundary_column(self, k: int, j: int) -> Column:
        simplex = self.simplices[k][j]
        if k == 0:
            return {}
        rows = self.index[k - 1]
        return {rows[simplex[:i] + simplex[i + 1 :]]: Fraction((-1) ** i) for i in range(len(simplex))}

    def boundary_matrix(self, k: int) -> list[list[Fraction]]:
        """Dense matrix of the boundary map from k-chains to (k-1)-chains."""
        nrows, ncols = self.count(k - 1), self.count(k)
        matrix = [[Fraction(0)] * ncols for _ in range(nrows)]
        for j in range(ncols):
            for i, v in self.boundary_column(k, j).items():
                matrix[i][j] = v
        return matrix

    def reduction(self, k: int) -> _Reduction:
        if k not in self._reductions:
            self._reductions[k] = self._reduce(k)
        return self._reductions[k]

    def _reduce(self, k: int) -> _Reduction:
        pivots: dict[int, Column] = {}
        cycles: dict[int, Column] = {}
        for j in range(self.count(k)):
            column = self.boundary_column(k, j)
            combination: Column = {j: Fraction(1)}
            while column:
                low = max(column)
                if low not in pivots:
                    break
                other, other_combo = pivots[low]
                factor = column[low] / other[low]
                _axpy(column, other, -factor)
                _axpy(combination, other_combo, -factor)
            if column:
                pivots[max(column)] = (column, combination)
            else:
                cycles[j] = combination
        return _Reduction({low: col for low, (col, _) in pivots.items()}, cycles)

    def rank(self, k: int) -> int:
        if k <= 0 or k > self.dimension:
            return 0
        return self.reduction(k).rank

    def homology_basis(self, k: int) -> dict[int, Column]:
        """Cycle representatives of a basis of H_k, keyed by their highest simplex."""
        if k < 0 or k > self.dimension:
            return {}
        if k == 0:
            cycles = {j: {j: Fraction(1)} for j in range(self.count(0))}
        else:
            cycles = self.reduction(k).cycles
        killed = self.reduction(k + 1).pivots if k + 1 <= self.dimension else {}
        return {j: z for j, z in cycles.items() if j not in killed}

    def homology_coordinates(self, k: int, chain: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Coordinates of a k-cycle in the basis from ``homology_basis``."""
        basis = self.homology_basis(k)
        killed = self.reduction(k + 1).pivots if k + 1 <= self.dimension else {}
        residue = {i: Fraction(v) for i, v in chain.items() if v != 0}
        coords: dict[int, Fraction] = {}
        while residue:
            low = max(residue)
            if low in killed:
                col = killed[low]
                _axpy(residue, col, -residue[low] / col[low])
            elif low in basis:
                coef = residue[low]
                coords[low] = coef
                _axpy(residue, basis[low], -coef)
            else:
                raise InputError("chain is not a cycle")
        return coords

    def chain_image(self, k: int, vertex_map: Mapping[int, int], chain: Mapping[int, Fraction]) -> Column:
        out: Column = {}
        for j, coef in chain.items():
            simplex = self.simplices[k][j]
            image = [vertex_map[v] for v in simplex]
            if len(set(image)) < len(image):
                continue
            key = tuple(sorted(image))
            target = self.index[k].get(key)
            if target is None:
                raise NotSimplicialError("vertex map does not send simplices to simplices")
            out[target] = out.get(target, Fraction(0)) + coef * _permutation_sign(image)
        return {i: v for i, v in out.items() if v != 0}

    def trace(self, k: int, vertex_map: Mapping[int, int]) -> Fraction:
        """Trace of the induced map on H_k for a simplicial self-map given on vertex indices."""
        total = Fraction(0)
        for j, z in self.homology_basis(k).items():
            total += self.homology_coordinates(k, self.chain_image(k, vertex_map, z)).get(j, Fraction(0))
        return total


def _axpy(target: Column, source: Mapping[int, Fraction], factor: Fraction) -> None:
    for i, v in source.items():
        value = target.get(i, Fraction(0)) + factor * v
        if value:
            target[i] = value
        else:
            target.pop(i, None)


def boundary_matrices(simplices: Iterable[Iterable[Hashable]]) -> ChainComplex:
    return ChainComplex(simplices)


def betti_numbers(chains: ChainComplex) -> tuple[int, ...]:
    """Rational Betti numbers b_0..b_top."""
    return tuple(
        chains.count(k) - chains.rank(k) - chains.rank(k + 1) for k in range(chains.dimension + 1)
    )


def padded_betti(betti: Sequence[int], length: int) -> tuple[int, ...]:
    return tuple(betti[k] if k < len(betti) else 0 for k in range(length))


# Symmetric group representation theory


def partitions(n: int, largest: int | None = None) -> list[Partition]:
    """Partitions of n in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, largest), 0, -1):
        out.extend((first,) + rest for rest in partitions(n - first, first))
    return out


def transpose_partition(shape: Partition) -> Partition:
    return tuple(sum(1 for part in shape if part > i) for i in range(shape[0])) if shape else ()


def hook_length_dimension(shape: Partition) -> int:
    conjugate = transpose_partition(shape)
    hooks = prod(shape[i] - j + conjugate[j] - i - 1 for i in range(len(shape)) for j in range(shape[i]))
    return factorial(sum(shape)) // hooks


def class_size(cycle_type: Partition) -> int:
    n = sum(cycle_type)
    centralizer = 1
    for length in set(cycle_type):
        mult = cycle_type.count(length)
        centralizer *= length**mult * factorial(mult)
    return factorial(n) // centralizer


def _validate_partition(shape: Sequence[int]) -> Partition:
    shape = tuple(int(p) for p in shape)
    if any(p <= 0 for p in shape) or any(a < b for a, b in zip(shape, shape[1:])):
        raise InputError(f"{shape} is not a partition")
    return shape


def sn_irreducible_character(shape: Sequence[int], cycle_type: Sequence[int]) -> int:
    """Value of the irreducible S_n character indexed by ``shape`` on a class, by Murnaghan-Nakayama."""
    shape = _validate_partition(shape)
    cycle_type = _validate_partition(sorted(cycle_type, reverse=True))
    if sum(shape) != sum(cycle_type):
        raise InputError("shape and cycle type partition different integers")
    length = len(shape)
    beta = frozenset(shape[i] + length - 1 - i for i in range(length))
    return _mn_beta(beta, cycle_type)


@lru_cache(maxsize=None)
def _mn_beta(beta: frozenset[int], cycles: Partition) -> int:
    if not cycles:
        return 1
    r, rest = cycles[0], cycles[1:]
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in beta:
            continue
        between = sum(1 for c in beta if target < c < b)
        total += (-1) ** between * _mn_beta((beta - {b}) | {target}, rest)
    return total


@dataclass(frozen=True)
class GCharacter:
    """Traces of group elements on homology, per degree, keyed by conjugacy class."""

    traces: dict[int, dict[Hashable, Fraction]]
    class_sizes: dict[Hashable, int]
    identity: Hashable

    def betti(self, k: int) -> int:
        return int(self.traces.get(k, {}).get(self.identity, 0))

    @property
    def group_order(self) -> int:
        return sum(self.class_sizes.values())


@dataclass(frozen=True)
class MultiplicityTable:
    n: int
    entries: dict[tuple[int, Partition], int]
    betti: tuple[int, ...]
    d: int | None = None

    def get(self, k: int, shape: Sequence[int]) -> int:
        return self.entries.get((k, tuple(shape)), 0)

    def nonzero(self) -> dict[tuple[int, Partition], int]:
        return {key: m for key, m in self.entries.items() if m}

    def restricted(self, degrees: Iterable[int]) -> dict[tuple[int, Partition], int]:
        keep = set(degrees)
        return {key: m for key, m in self.nonzero().items() if key[0] in keep}


def isotypic_multiplicities(character: GCharacter, n: int, d: int | None = None) -> MultiplicityTable:
    """Specht-module multiplicities in each homology degree of an S_n character."""
    shapes = partitions(n)
    missing = [mu for mu in shapes if mu not in character.class_sizes]
    if missing:
        raise InputError(f"character is missing classes {missing}")
    order = factorial(n)
    entries: dict[tuple[int, Partition], int] = {}
    betti = []
    for k in sorted(character.traces):
        traces = character.traces[k]
        b_k = character.betti(k)
        total_dimension = 0
        for shape in shapes:
            inner = sum(class_size(mu) * sn_irreducible_character(shape, mu) * traces[mu] for mu in shapes)
            value = Fraction(inner, order)
            if value.denominator != 1 or value < 0:
                raise InconsistentCharacterError(f"multiplicity of {shape} in degree {k} is {value}")
            entries[(k, shape)] = int(value)
            total_dimension += int(value) * hook_length_dimension(shape)
        if total_dimension != b_k:
            raise InconsistentCharacterError(f"dimension identity fails in degree {k}: {total_dimension} != {b_k}")
        betti.append(b_k)
    return MultiplicityTable(n, entries, tuple(betti), d)


@dataclass(frozen=True)
class VanishingViolation:
    degree: int
    shape: Partition
    multiplicity: int
    bound: str


def verify_vanishing_bounds(table: MultiplicityTable, d: int, n: int) -> list[VanishingViolation]:
    """Nonzero multiplicities that the degree-d vanishing bounds forbid; empty means pass."""
    if d < 2:
        raise InputError("the vanishing bounds need d >= 2")
    violations = []
    for (k, shape), m in sorted(table.nonzero().items()):
        if k <= len(shape) - 2 * d + 1:
            violations.append(VanishingViolation(k, shape, m, "length"))
        if k >= n - len(transpose_partition(shape)) + d + 1:
            violations.append(VanishingViolation(k, shape, m, "transpose length"))
    return violations


def character_orthogonality_defects(n: int) -> list[tuple[Partition, Partition, Fraction]]:
    """Pairs of irreducibles whose inner product differs from the Kronecker delta."""
    shapes = partitions(n)
    defects = []
    for a in shapes:
        for b in shapes:
            inner = Fraction(
                sum(class_size(mu) * sn_irreducible_character(a, mu) * sn_irreducible_character(b, mu) for mu in shapes),
                factorial(n),
            )
            if inner != (1 if a == b else 0):
                defects.append((a, b, inner))
    return defects


# Group actions on complexes


def conjugacy_classes(elements: Sequence[Hashable], multiply: Callable, inverse: Callable) -> list[list]:
    remaining = list(elements)
    classes = []
    while remaining:
        x = remaining[0]
        cls = {multiply(multiply(g, x), inverse(g)) for g in elements}
        classes.append([y for y in remaining if y in cls])
        remaining = [y for y in remaining if y not in cls]
    return classes


def character_from_actions(
    chains: ChainComplex,
    actions: Mapping[Hashable, Mapping[Hashable, Hashable]],
    class_of: Mapping[Hashable, Hashable],
    identity: Hashable,
    degrees: Iterable[int] | None = None,
) -> GCharacter:
    """Character on homology from vertex permutations, one representative per class.

    ``actions`` maps each representative to a label permutation of the complex vertices;
    ``class_of`` maps each representative to its class key and the class size is read
    from how many group elements were given per key.
    """
    if degrees is None:
        degrees = range(chains.dimension + 1)
    sizes: dict[Hashable, int] = {}
    reps: dict[Hashable, Hashable] = {}
    for g, key in class_of.items():
        sizes[key] = sizes.get(key, 0) + 1
        reps.setdefault(key, g)
    traces: dict[int, dict[Hashable, Fraction]] = {}
    for k in degrees:
        traces[k] = {}
        for key, g in reps.items():
            labels = actions[g]
            vertex_map = {chains.vertex_index[v]: chains.vertex_index[labels[v]] for v in chains.vertices}
            traces[k][key] = chains.trace(k, vertex_map)
    return GCharacter(traces, sizes, class_of[identity])


def homology_group_character(
    vertices: Sequence[Sequence[Fraction]],
    simplices: Iterable[Iterable[int]],
    group: object,
    degrees: Iterable[int] | None = None,
) -> GCharacter:
    """Character of a reflection group acting on a symmetric complex in R^n.

    Classes of groups of permutation matrices are keyed by cycle type, otherwise by
    the label of a representative.
    """
    from .reflection_group import cycle_type, permutation_of

    points = [tuple(p) for p in vertices]
    lookup = {p: i for i, p in enumerate(points)}
    chains = ChainComplex(simplices, vertex_order=range(len(points)))
    elements = list(group.elements)
    perms = [permutation_of(g) for g in elements]
    actions: dict[Hashable, dict[int, int]] = {}
    for g in elements:
        mapping = {}
        for i, p in enumerate(points):
            image = lookup.get(g.apply(p))
            if image is None:
                raise NotSimplicialError(f"{g.label()} moves a vertex off the complex")
            mapping[i] = image
        actions[g] = mapping
    if all(p is not None for p in perms):
        class_of = {g: cycle_type(p) for g, p in zip(elements, perms)}
    else:
        by_matrix = {g.matrix: g for g in elements}
        from .geometry import mat_mul, transpose

        classes = conjugacy_classes([g.matrix for g in elements], mat_mul, transpose)
        class_of = {}
        for cls in classes:
            label = min((by_matrix[m] for m in cls), key=lambda g: (len(g.word), g.word)).label()
            for m in cls:
                class_of[by_matrix[m]] = label
    identity = next(g for g in elements if g.is_identity)
    return character_from_actions(chains, actions, class_of, identity, degrees)


def equivariance_check(
    f: Mapping[Hashable, Hashable],
    generators: Sequence[Hashable],
    act_source: Callable[[Hashable, Hashable], Hashable],
    act_target: Callable[[Hashable, Hashable], Hashable],
    source_simplices: Iterable[Iterable[Hashable]] | None = None,
    target_simplices: Iterable[Iterable[Hashable]] | None = None,
) -> bool:
    """True iff g(f(x)) = f(g(x)) for every generator g and every x in the domain of f.

    When simplices are supplied, f must also send simplices onto simplices.
    """
    if source_simplices is not None and target_simplices is not None:
        targets = {frozenset(t) for t in target_simplices}
        for s in source_simplices:
            if frozenset(f[v] for v in s) not in targets:
                raise NotSimplicialError(f"image of {sorted(s, key=_sort_key)} is not a simplex")
    for g in generators:
        for x, fx in f.items():
            if act_target(g, fx) != f.get(act_source(g, x)):
                return False
    return True
