"""Independent brute-force routines used as test oracles.

Nothing here imports the package, so agreement with it is a genuine second route.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence


def closure(facets: Iterable[Iterable[int]]) -> set[frozenset[int]]:
    out: set[frozenset[int]] = set()
    for f in facets:
        f = tuple(f)
        for k in range(1, len(f) + 1):
            out.update(frozenset(c) for c in combinations(f, k))
    return out


def matrix_rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = max((len(r) for r in rows), default=0)
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def boundary(simplices: set[frozenset[int]], k: int) -> list[list[Fraction]]:
    """Dense matrix of d_k from k-simplices to (k-1)-simplices, sorted vertex orientation."""
    high = sorted((tuple(sorted(s)) for s in simplices if len(s) == k + 1))
    low = sorted((tuple(sorted(s)) for s in simplices if len(s) == k))
    index = {s: i for i, s in enumerate(low)}
    rows = [[Fraction(0)] * len(high) for _ in low]
    for j, s in enumerate(high):
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            rows[index[face]][j] += (-1) ** i
    return rows


def betti(simplices: set[frozenset[int]]) -> list[int]:
    top = max(len(s) for s in simplices) - 1
    counts = [sum(1 for s in simplices if len(s) == k + 1) for k in range(top + 1)]
    ranks = [0] + [matrix_rank(boundary(simplices, k)) for k in range(1, top + 1)] + [0]
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(top + 1)]


def induced_chain_matrix(simplices: set[frozenset[int]], k: int, vertex_map: dict[int, int]) -> list[list[Fraction]]:
    """Matrix of the chain map on k-chains induced by a simplicial automorphism."""
    basis = sorted(tuple(sorted(s)) for s in simplices if len(s) == k + 1)
    index = {s: i for i, s in enumerate(basis)}
    out = [[Fraction(0)] * len(basis) for _ in basis]
    for j, s in enumerate(basis):
        image = [vertex_map[v] for v in s]
        ordered = sorted(image)
        sign = permutation_sign([ordered.index(v) for v in image])
        out[index[tuple(ordered)]][j] = Fraction(sign)
    return out


def permutation_sign(p: Sequence[int]) -> int:
    sign = 1
    for i, j in combinations(range(len(p)), 2):
        if p[i] > p[j]:
            sign = -sign
    return sign


def homology_trace(simplices: set[frozenset[int]], k: int, vertex_map: dict[int, int]) -> Fraction:
    """Trace on H_k via the Hopf trace formula restricted to one degree.

    H_k = Z_k / B_k; trace(H_k) = trace(Z_k) - trace(B_k), computed with explicit bases.
    """
    n = sum(1 for s in simplices if len(s) == k + 1)
    f = induced_chain_matrix(simplices, k, vertex_map)
    d_k = boundary(simplices, k) if k > 0 else [[Fraction(0)] * n]
    cycles = nullspace(d_k, n)
    d_up = boundary(simplices, k + 1)
    boundaries = column_space(d_up)
    return restricted_trace(f, cycles) - restricted_trace(f, boundaries)


def nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def column_space(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    if not rows or not rows[0]:
        return []
    cols = [list(c) for c in zip(*rows)]
    basis: list[list[Fraction]] = []
    for c in cols:
        if matrix_rank(basis + [c]) > len(basis):
            basis.append(c)
    return basis


def restricted_trace(f: list[list[Fraction]], basis: list[list[Fraction]]) -> Fraction:
    """Trace of f on the invariant subspace spanned by ``basis``."""
    if not basis:
        return Fraction(0)
    images = [[sum(f[i][j] * v[j] for j in range(len(v))) for i in range(len(f))] for v in basis]
    total = Fraction(0)
    for idx, w in enumerate(images):
        coords = solve_in_basis(basis, w)
        total += coords[idx]
    return total


def solve_in_basis(basis: list[list[Fraction]], w: list[Fraction]) -> list[Fraction]:
    m, n = len(basis), len(w)
    aug = [[basis[j][i] for j in range(m)] + [w[i]] for i in range(n)]
    r = 0
    where = [-1] * m
    for c in range(m):
        p = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        piv = aug[r][c]
        aug[r] = [x / piv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        where[c] = r
        r += 1
    for i in range(r, n):
        assert aug[i][m] == 0, "vector not in span"
    return [aug[where[c]][m] if where[c] >= 0 else Fraction(0) for c in range(m)]


def sn_elements(n: int) -> list[tuple[int, ...]]:
    return list(permutations(range(n)))


def cycle_type(p: Sequence[int]) -> tuple[int, ...]:
    seen, lengths = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def hook_dimension(shape: Sequence[int]) -> int:
    from math import factorial

    n = sum(shape)
    conj = [sum(1 for r in shape if r > j) for j in range(shape[0])] if shape else []
    prod = 1
    for i, row in enumerate(shape):
        for j in range(row):
            prod *= row - j + conj[j] - i - 1
    return factorial(n) // prod


def realizable_signs_brute(lines: Sequence[tuple[Fraction, Fraction, Fraction]]) -> set[tuple[int, ...]]:
    """Sign vectors of the lines c + a x + b y on the plane, one witness per face.

    Vertices are pairwise intersections; every edge gets a witness between consecutive
    vertices on its line (or beyond the ends); every region touches some edge, so a
    witness is pushed off each edge witness along the normal, by less than the slack of
    every other line.
    """
    def value(line, p):
        c, a, b = line
        return c + a * p[0] + b * p[1]

    def sgn(v):
        return (v > 0) - (v < 0)

    witnesses: list[tuple[Fraction, Fraction]] = []
    edge_points: list[tuple[int, tuple[Fraction, Fraction]]] = []
    for i, (c, a, b) in enumerate(lines):
        base = (Fraction(0), -c / b) if b != 0 else (-c / a, Fraction(0))
        direction = (-b, a)
        params = []
        for j, (c2, a2, b2) in enumerate(lines):
            denom = a2 * direction[0] + b2 * direction[1]
            if j != i and denom != 0:
                params.append(-value((c2, a2, b2), base) / denom)
        params = sorted(set(params))
        ts = [p for p in params]
        if params:
            ts += [params[0] - 1, params[-1] + 1]
            ts += [(u + v) / 2 for u, v in zip(params, params[1:])]
        else:
            ts = [Fraction(0)]
        for t in ts:
            p = (base[0] + t * direction[0], base[1] + t * direction[1])
            witnesses.append(p)
            edge_points.append((i, p))
    for i, p in edge_points:
        c, a, b = lines[i]
        limit = None
        for j, other in enumerate(lines):
            rate = other[1] * a + other[2] * b
            v = value(other, p)
            if j == i or rate == 0 or v == 0:
                continue
            bound = abs(v / rate) / 2
            limit = bound if limit is None else min(limit, bound)
        s = limit if limit is not None else Fraction(1)
        witnesses += [(p[0] + s * a, p[1] + s * b), (p[0] - s * a, p[1] - s * b)]
    if not lines:
        return {()}
    return {tuple(sgn(value(l, p)) for l in lines) for p in witnesses}
