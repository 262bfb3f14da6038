"""Exact rational geometry: scalars, affine forms, polynomials and predicates.

Everything here works over :class:`fractions.Fraction`; nothing ever rounds.
Points are plain tuples of fractions.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence, Union

Point = tuple[Fraction, ...]
Scalar = Union[Fraction, "InfinitesimalScalar"]

DEFAULT_DEGREE_CAP = 8


class InputError(ValueError):
    """Raised for malformed or inconsistent input data."""


def to_fraction(value: object) -> Fraction:
    """Parse an exact rational from an int, Fraction or a "p/q" string."""
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise InputError(f"zero denominator in rational {value!r}") from None
        except ValueError:
            raise InputError(f"not a rational: {value!r}") from None
    raise InputError(f"not an exact rational: {value!r}")


def to_point(values: Iterable[object]) -> Point:
    return tuple(to_fraction(v) for v in values)


def format_fraction(value: Fraction) -> str:
    return str(value)


def sign(value: Scalar) -> int:
    if isinstance(value, InfinitesimalScalar):
        return value.sign()
    return (value > 0) - (value < 0)


# ---------------------------------------------------------------------------
# Formal infinitesimals
# ---------------------------------------------------------------------------


def _trim(exponents: tuple[int, ...]) -> tuple[int, ...]:
    end = len(exponents)
    while end and exponents[end - 1] == 0:
        end -= 1
    return exponents[:end]


def _padded(exponents: tuple[int, ...], length: int) -> tuple[int, ...]:
    return exponents + (0,) * (length - len(exponents))


@dataclass(frozen=True)
class InfinitesimalScalar:
    """Polynomial in a tower of positive infinitesimals s0 << s1 << ... << 1.

    ``terms`` maps exponent tuples (exponent of s0 first) to rational
    coefficients.  The sign is the sign of the coefficient on the
    monomial of largest magnitude, which is the lexicographically smallest
    exponent tuple.
    """

    terms: tuple[tuple[tuple[int, ...], Fraction], ...] = ()

    @staticmethod
    def from_terms(terms: dict[tuple[int, ...], Fraction]) -> InfinitesimalScalar:
        merged: dict[tuple[int, ...], Fraction] = {}
        for mono, coef in terms.items():
            key = _trim(tuple(mono))
            merged[key] = merged.get(key, Fraction(0)) + Fraction(coef)
        return InfinitesimalScalar(tuple(sorted((m, c) for m, c in merged.items() if c != 0)))

    @staticmethod
    def constant(value: object) -> InfinitesimalScalar:
        return InfinitesimalScalar.from_terms({(): to_fraction(value)})

    @staticmethod
    def symbol(index: int, coefficient: object = 1) -> InfinitesimalScalar:
        mono = (0,) * index + (1,)
        return InfinitesimalScalar.from_terms({mono: to_fraction(coefficient)})

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def standard_part(self) -> Fraction:
        return self.as_dict().get((), Fraction(0))

    def sign(self) -> int:
        if not self.terms:
            return 0
        width = max(len(m) for m, _ in self.terms)
        mono, coef = min(self.terms, key=lambda item: _padded(item[0], width))
        return 1 if coef > 0 else -1

    def evaluate(self, values: Sequence[object]) -> Fraction:
        """Substitute concrete rationals for the tower symbols."""
        concrete = [to_fraction(v) for v in values]
        total = Fraction(0)
        for mono, coef in self.terms:
            if len(mono) > len(concrete):
                raise InputError("not enough values for the infinitesimal tower")
            term = coef
            for base, power in zip(concrete, mono):
                term *= base**power
            total += term
        return total

    def _coerce(self, other: object) -> InfinitesimalScalar:
        if isinstance(other, InfinitesimalScalar):
            return other
        return InfinitesimalScalar.constant(other)

    def __add__(self, other: object) -> InfinitesimalScalar:
        merged = self.as_dict()
        for mono, coef in self._coerce(other).terms:
            merged[mono] = merged.get(mono, Fraction(0)) + coef
        return InfinitesimalScalar.from_terms(merged)

    __radd__ = __add__

    def __neg__(self) -> InfinitesimalScalar:
        return InfinitesimalScalar(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: object) -> InfinitesimalScalar:
        return self + (-self._coerce(other))

    def __rsub__(self, other: object) -> InfinitesimalScalar:
        return self._coerce(other) - self

    def __mul__(self, other: object) -> InfinitesimalScalar:
        right = self._coerce(other)
        product: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in right.terms:
                width = max(len(m1), len(m2))
                mono = tuple(a + b for a, b in zip(_padded(m1, width), _padded(m2, width)))
                product[mono] = product.get(mono, Fraction(0)) + c1 * c2
        return InfinitesimalScalar.from_terms(product)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> InfinitesimalScalar:
        if isinstance(other, InfinitesimalScalar):
            raise TypeError("division by an infinitesimal scalar is not supported")
        divisor = to_fraction(other)
        return InfinitesimalScalar(tuple((m, c / divisor) for m, c in self.terms))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = InfinitesimalScalar.constant(other)
        if not isinstance(other, InfinitesimalScalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __lt__(self, other: object) -> bool:
        return (self - self._coerce(other)).sign() < 0

    def __gt__(self, other: object) -> bool:
        return (self - self._coerce(other)).sign() > 0

    def __le__(self, other: object) -> bool:
        return not self > other

    def __ge__(self, other: object) -> bool:
        return not self < other

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coef in self.terms:
            symbols = "*".join(f"s{i}^{p}" if p > 1 else f"s{i}" for i, p in enumerate(mono) if p)
            parts.append(f"{coef}*{symbols}" if symbols else str(coef))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Affine functionals and polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineFunctional:
    """The map x -> constant + gradient . x with a nonzero gradient."""

    constant: Fraction
    gradient: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "constant", to_fraction(self.constant))
        object.__setattr__(self, "gradient", tuple(to_fraction(a) for a in self.gradient))
        if not self.gradient or all(a == 0 for a in self.gradient):
            raise InputError("affine functional needs a nonzero gradient")

    @staticmethod
    def linear(*gradient: object) -> AffineFunctional:
        return AffineFunctional(Fraction(0), tuple(to_fraction(a) for a in gradient))

    @property
    def dimension(self) -> int:
        return len(self.gradient)

    @property
    def is_linear(self) -> bool:
        return self.constant == 0

    def __call__(self, point: Sequence[Fraction]) -> Fraction:
        return eval_affine(self, point)

    def __neg__(self) -> AffineFunctional:
        return AffineFunctional(-self.constant, tuple(-a for a in self.gradient))

    def shifted(self, amount: object) -> AffineFunctional:
        return AffineFunctional(self.constant + to_fraction(amount), self.gradient)

    def scaled(self, factor: object) -> AffineFunctional:
        factor = to_fraction(factor)
        return AffineFunctional(self.constant * factor, tuple(a * factor for a in self.gradient))

    def normalized(self) -> AffineFunctional:
        """Rescale so the leading nonzero gradient entry equals 1."""
        lead = next(a for a in self.gradient if a != 0)
        return self.scaled(1 / lead)

    def compose_linear(self, matrix: Sequence[Sequence[Fraction]]) -> AffineFunctional:
        """Return x -> self(matrix @ x)."""
        n = len(self.gradient)
        grad = tuple(sum((self.gradient[i] * matrix[i][j] for i in range(n)), Fraction(0)) for j in range(n))
        return AffineFunctional(self.constant, grad)

    def to_polynomial(self) -> Polynomial:
        n = len(self.gradient)
        terms = {(0,) * n: self.constant}
        for i, a in enumerate(self.gradient):
            terms[tuple(1 if j == i else 0 for j in range(n))] = a
        return Polynomial.from_terms(n, terms)


def eval_affine(functional: AffineFunctional, point: Sequence[Fraction]) -> Fraction:
    if len(point) != len(functional.gradient):
        raise InputError(
            f"dimension mismatch: functional has {len(functional.gradient)} variables, point has {len(point)}"
        )
    total = functional.constant
    for a, x in zip(functional.gradient, point):
        total += a * x
    return total


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: exponent tuples mapped to nonzero rational coefficients."""

    nvars: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...] = field(default=())

    @staticmethod
    def from_terms(nvars: int, terms: dict[tuple[int, ...], object]) -> Polynomial:
        merged: dict[tuple[int, ...], Fraction] = {}
        for mono, coef in terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise InputError(f"bad exponent vector {mono} for {nvars} variables")
            merged[mono] = merged.get(mono, Fraction(0)) + to_fraction(coef)
        return Polynomial(nvars, tuple(sorted((m, c) for m, c in merged.items() if c != 0)))

    @staticmethod
    def constant(nvars: int, value: object) -> Polynomial:
        return Polynomial.from_terms(nvars, {(0,) * nvars: value})

    @staticmethod
    def variable(nvars: int, index: int) -> Polynomial:
        return Polynomial.from_terms(nvars, {tuple(1 if j == index else 0 for j in range(nvars)): 1})

    @staticmethod
    def parse(text: str, nvars: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> Polynomial:
        """Parse an arithmetic expression in x1..xn (or x, y, z)."""
        poly = _PolynomialParser(nvars).parse(text)
        if poly.degree > degree_cap:
            raise InputError(f"degree {poly.degree} exceeds the cap {degree_cap}: {text!r}")
        return poly

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.nvars:
            raise InputError(f"dimension mismatch: polynomial in {self.nvars} variables, point has {len(point)}")
        total = Fraction(0)
        for mono, coef in self.terms:
            term = coef
            for x, e in zip(point, mono):
                if e:
                    term *= x**e
            total += term
        return total

    def _check(self, other: Polynomial) -> None:
        if other.nvars != self.nvars:
            raise InputError("polynomials live in different numbers of variables")

    def __add__(self, other: object) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        self._check(other)
        merged = self.as_dict()
        for m, c in other.terms:
            merged[m] = merged.get(m, Fraction(0)) + c
        return Polynomial.from_terms(self.nvars, merged)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.nvars, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: object) -> Polynomial:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other: object) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: object) -> Polynomial:
        if not isinstance(other, Polynomial):
            factor = to_fraction(other)
            return Polynomial.from_terms(self.nvars, {m: c * factor for m, c in self.terms})
        self._check(other)
        product: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                mono = tuple(a + b for a, b in zip(m1, m2))
                product[mono] = product.get(mono, Fraction(0)) + c1 * c2
        return Polynomial.from_terms(self.nvars, product)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> Polynomial:
        result = Polynomial.constant(self.nvars, 1)
        for _ in range(power):
            result = result * self
        return result

    def compose_linear(self, matrix: Sequence[Sequence[Fraction]]) -> Polynomial:
        """Return x -> self(matrix @ x), expanded symbolically."""
        images = []
        for i in range(self.nvars):
            row = {tuple(1 if j == k else 0 for j in range(self.nvars)): matrix[i][k] for k in range(self.nvars)}
            images.append(Polynomial.from_terms(self.nvars, row))
        result = Polynomial.constant(self.nvars, 0)
        for mono, coef in self.terms:
            term = Polynomial.constant(self.nvars, coef)
            for image, e in zip(images, mono):
                if e:
                    term = term * image**e
            result = result + term
        return result

    def affine_part(self) -> AffineFunctional | None:
        """The polynomial as an affine functional, or None when it is not one."""
        if self.degree > 1:
            return None
        data = self.as_dict()
        gradient = tuple(data.get(tuple(1 if j == i else 0 for j in range(self.nvars)), Fraction(0)) for i in range(self.nvars))
        if all(a == 0 for a in gradient):
            return None
        return AffineFunctional(data.get((0,) * self.nvars, Fraction(0)), gradient)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, coef in self.terms:
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mono) if e]
            parts.append("*".join([str(coef)] + factors) if factors else str(coef))
        return " + ".join(parts)


class _PolynomialParser:
    _ALIASES = {"x": 0, "y": 1, "z": 2}

    def __init__(self, nvars: int) -> None:
        self.nvars = nvars

    def parse(self, text: str) -> Polynomial:
        try:
            tree = ast.parse(text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise InputError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
        return self._walk(tree.body, text)

    def _walk(self, node: ast.AST, text: str) -> Polynomial:
        n = self.nvars
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Polynomial.constant(n, node.value)
        if isinstance(node, ast.Name):
            name = node.id
            if name in self._ALIASES and self._ALIASES[name] < n:
                return Polynomial.variable(n, self._ALIASES[name])
            if name.startswith("x") and name[1:].isdigit() and 1 <= int(name[1:]) <= n:
                return Polynomial.variable(n, int(name[1:]) - 1)
            raise InputError(f"unknown variable {name!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = self._walk(node.operand, text)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int) and node.right.value >= 0):
                    raise InputError(f"exponents must be nonnegative integers in {text!r}")
                return self._walk(node.left, text) ** node.right.value
            left, right = self._walk(node.left, text), self._walk(node.right, text)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if right.degree != 0 or right.is_zero:
                    raise InputError(f"can only divide by nonzero constants in {text!r}")
                return left * (1 / right.as_dict()[(0,) * n])
        raise InputError(f"unsupported syntax in polynomial {text!r}")


def sign_vector(functions: Sequence[Polynomial | AffineFunctional], point: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(sign(f(point)) for f in functions)


# ---------------------------------------------------------------------------
# Point predicates
# ---------------------------------------------------------------------------


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def reflect_through(point: Sequence[Fraction], functional: AffineFunctional) -> Point:
    """Reflect through the linear hyperplane {functional = 0}."""
    if not functional.is_linear:
        raise InputError("reflection needs a linear functional (zero constant)")
    if len(point) != functional.dimension:
        raise InputError("dimension mismatch between point and hyperplane")
    r = functional.gradient
    factor = 2 * dot(point, r) / dot(r, r)
    return tuple(x - factor * a for x, a in zip(point, r))


def centroid(points: Sequence[Sequence[Fraction]]) -> Point:
    if not points:
        raise InputError("centroid of an empty vertex list")
    n = len(points)
    return tuple(sum(coords, Fraction(0)) / n for coords in zip(*points))


def affine_independent(points: Sequence[Sequence[Fraction]]) -> bool:
    if len(points) <= 1:
        return True
    base = points[0]
    rows = [[a - b for a, b in zip(p, base)] for p in points[1:]]
    return rank(rows) == len(rows)


def barycentric_coordinates(point: Sequence[Fraction], vertices: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...] | None:
    """Coefficients t with sum 1 and sum t_i v_i = point, or None off the affine hull."""
    if not vertices:
        raise InputError("empty vertex list")
    if not affine_independent(vertices):
        raise InputError("vertices are affinely dependent")
    # Unknowns t_1..t_k; equations: coordinates plus the partition of unity.
    rows = [[v[i] for v in vertices] for i in range(len(point))]
    rows.append([Fraction(1)] * len(vertices))
    rhs = list(point) + [Fraction(1)]
    return solve_linear(rows, rhs)


def convex_combination(weights: Sequence[Fraction], vertices: Sequence[Sequence[Fraction]]) -> Point:
    dim = len(vertices[0])
    return tuple(sum((w * v[i] for w, v in zip(weights, vertices)), Fraction(0)) for i in range(dim))


# ---------------------------------------------------------------------------
# Dense exact linear algebra
# ---------------------------------------------------------------------------


def row_reduce(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns (exact)."""
    matrix = [[Fraction(x) for x in row] for row in rows]
    if not matrix:
        return [], []
    ncols = len(matrix[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        lead = matrix[r][c]
        matrix[r] = [x / lead for x in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c] != 0:
                factor = matrix[i][c]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    return matrix, pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(row_reduce(rows)[1])


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    """One exact solution of rows @ x = rhs (free variables set to 0), or None."""
    ncols = len(rows[0]) if rows else 0
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = row_reduce(augmented)
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for row, c in zip(reduced, pivots):
        solution[c] = row[ncols]
    return tuple(solution)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """A basis of {x : rows @ x = 0}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    reduced, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, c in zip(reduced, pivots):
            vec[c] = -row[f]
        basis.append(tuple(vec))
    return basis


def mat_vec(matrix: Sequence[Sequence[Fraction]], vector: Sequence[Fraction]) -> Point:
    return tuple(dot(row, vector) for row in matrix)


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def transpose(matrix: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(zip(*matrix))


def identity_matrix(n: int) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# Exact linear feasibility (Fourier-Motzkin with strict inequalities)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearConstraint:
    """coefficients . x + constant  (relation)  0, relation in {">", ">=", "="}.

    The constant may be an :class:`InfinitesimalScalar`, in which case the
    feasibility answer holds for all sufficiently small tower values.
    """

    coefficients: tuple[Fraction, ...]
    constant: Scalar
    relation: str

    @staticmethod
    def from_functional(functional: AffineFunctional, relation: str) -> LinearConstraint:
        return LinearConstraint(functional.gradient, functional.constant, relation)

    def holds_at(self, point: Sequence[Fraction]) -> bool:
        value = self.constant + dot(self.coefficients, point)
        s = sign(value)
        return {">": s > 0, ">=": s >= 0, "=": s == 0}[self.relation]


def _combine(c1: tuple, c2: tuple, f1: Fraction, f2: Fraction) -> tuple:
    coeffs = tuple(f1 * a + f2 * b for a, b in zip(c1[0], c2[0]))
    return coeffs, f1 * c1[1] + f2 * c2[1]


def _normalize(coeffs: tuple[Fraction, ...], constant: Scalar, strict: bool) -> tuple:
    lead = next((abs(a) for a in coeffs if a != 0), None)
    if lead is None or lead == 1:
        return coeffs, constant, strict
    return tuple(a / lead for a in coeffs), constant / lead, strict


def _prune(constraints: Iterable[tuple]) -> list[tuple] | None:
    """Drop trivially true rows, detect trivially false ones, keep the tightest duplicate."""
    best: dict[tuple[Fraction, ...], tuple] = {}
    for coeffs, constant, strict in constraints:
        if all(a == 0 for a in coeffs):
            s = sign(constant)
            if s < 0 or (s == 0 and strict):
                return None
            continue
        coeffs, constant, strict = _normalize(coeffs, constant, strict)
        current = best.get(coeffs)
        if current is None:
            best[coeffs] = (coeffs, constant, strict)
            continue
        diff = sign(constant - current[1])
        if diff < 0 or (diff == 0 and strict and not current[2]):
            best[coeffs] = (coeffs, constant, strict)
    return list(best.values())


def _interval_choice(lower: list[tuple[Fraction, bool]], upper: list[tuple[Fraction, bool]]) -> Fraction:
    lo = max(lower, default=None, key=lambda item: (item[0], item[1]))
    hi = min(upper, default=None, key=lambda item: (item[0], not item[1]))
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return lo[0] + 1
    if lo is None:
        return hi[0] - 1
    if lo[0] == hi[0]:
        return lo[0]
    return (lo[0] + hi[0]) / 2


def linear_feasible_point(constraints: Sequence[LinearConstraint], dimension: int) -> Point | None:
    """An exact rational point satisfying every constraint, or None when none exists."""
    return _fourier_motzkin(constraints, dimension, want_point=True)


def linear_feasible(constraints: Sequence[LinearConstraint], dimension: int) -> bool:
    """Exact feasibility; infinitesimal constants are decided for small tower values."""
    return _fourier_motzkin(constraints, dimension, want_point=False) is not None


def _fourier_motzkin(constraints: Sequence[LinearConstraint], dimension: int, want_point: bool):
    for c in constraints:
        if len(c.coefficients) != dimension:
            raise InputError("constraint dimension mismatch")
        if c.relation not in (">", ">=", "="):
            raise InputError(f"unknown relation {c.relation!r}")
    equalities = [(tuple(c.coefficients), c.constant) for c in constraints if c.relation == "="]
    rows = [(tuple(c.coefficients), c.constant, c.relation == ">") for c in constraints if c.relation != "="]

    # Substitute equalities away, remembering how to recover each variable.
    solved: list[tuple[int, tuple[Fraction, ...], Scalar]] = []
    while equalities:
        coeffs, constant = equalities.pop()
        var = next((j for j in range(dimension - 1, -1, -1) if coeffs[j] != 0), None)
        if var is None:
            if sign(constant) != 0:
                return None
            continue
        pivot = coeffs[var]

        def eliminate(other_coeffs, other_const):
            factor = other_coeffs[var] / pivot
            if factor == 0:
                return other_coeffs, other_const
            new = tuple(a - factor * b for a, b in zip(other_coeffs, coeffs))
            return new, other_const - constant * factor

        equalities = [eliminate(c, k) for c, k in equalities]
        rows = [eliminate(c, k) + (s,) for c, k, s in rows]
        solved.append((var, coeffs, constant))

    pruned = _prune(rows)
    if pruned is None:
        return None
    stages: list[tuple[int, list[tuple]]] = []
    current = pruned
    for var in range(dimension - 1, -1, -1):
        if not any(c[0][var] != 0 for c in current):
            continue
        lower = [c for c in current if c[0][var] > 0]
        upper = [c for c in current if c[0][var] < 0]
        rest = [c for c in current if c[0][var] == 0]
        stages.append((var, current))
        produced = list(rest)
        for lo in lower:
            for up in upper:
                coeffs, constant = _combine(lo, up, -up[0][var], lo[0][var])
                produced.append((coeffs, constant, lo[2] or up[2]))
        current = _prune(produced)
        if current is None:
            return None
    if not want_point:
        return ()
    point = [Fraction(0)] * dimension
    for var, stage in reversed(stages):
        lower, upper = [], []
        for coeffs, constant, strict in stage:
            a = coeffs[var]
            if a == 0:
                continue
            rest = constant + sum((coeffs[j] * point[j] for j in range(dimension) if j != var), Fraction(0))
            bound = -rest / a
            (lower if a > 0 else upper).append((bound, strict))
        point[var] = _interval_choice(lower, upper)
    for var, coeffs, constant in reversed(solved):
        rest = constant + sum((coeffs[j] * point[j] for j in range(dimension) if j != var), Fraction(0))
        point[var] = -rest / coeffs[var]
    return tuple(point)


def points_in_general_position_box(dimension: int, radius: int = 2) -> list[Point]:
    """Deterministic rational lattice points in [-radius, radius]^n, shifted off the grid diagonal."""
    offsets = [Fraction(1, 7 + 2 * i) for i in range(dimension)]
    steps = range(-radius, radius + 1)
    points: list[Point] = []

    def build(prefix: list[Fraction]) -> None:
        if len(prefix) == dimension:
            points.append(tuple(prefix))
            return
        for s in steps:
            build(prefix + [Fraction(s) + offsets[len(prefix)]])

    build([])
    return points


def pairwise_distinct(points: Iterable[Point]) -> bool:
    seen = list(points)
    return len(set(seen)) == len(seen)


def all_subsets(items: Sequence, min_size: int = 1) -> list[tuple]:
    out: list[tuple] = []
    for k in range(min_size, len(items) + 1):
        out.extend(combinations(items, k))
    return out
