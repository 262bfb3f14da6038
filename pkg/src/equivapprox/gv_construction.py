"""Approximation of a P-set by a compact P'-closed set T, and the simplicial objects V, V'' and their nerves."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .geometry import (
    AffineFunctional,
    InputError,
    LinearConstraint,
    Point,
    Polynomial,
    linear_feasible,
    rank,
    sign,
    solve_linear,
    to_fraction,
)
from .reflection_group import ReflectionGroup, invariance_violation
from .simplicial import (
    AbstractComplex,
    CellComplex,
    DeltaAtom,
    SimplicialComplex,
    MarkedComplex,
    Subdivision,
    _closure,
    _maximal,
    centroidal_realization,
    mark_and_core,
)

RELATIONS = ("=", ">", ">=", "<=", "<")
ORDERINGS = ("thm110", "maintheorem")


# Formulas


@dataclass(frozen=True)
class Atom:
    """P[index]  relation  0."""

    index: int
    relation: str

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise InputError(f"unknown relation {self.relation!r}")

    def holds(self, s: int) -> bool:
        return {"=": s == 0, ">": s > 0, ">=": s >= 0, "<=": s <= 0, "<": s < 0}[self.relation]


@dataclass(frozen=True)
class Connective:
    op: str
    children: tuple

    def __post_init__(self) -> None:
        if self.op not in ("and", "or", "not"):
            raise InputError(f"unknown connective {self.op!r}")
        if self.op == "not" and len(self.children) != 1:
            raise InputError("negation takes exactly one argument")


Node = Atom | Connective


def _evaluate(node: Node, signs: Sequence[int]) -> bool:
    if isinstance(node, Atom):
        return node.holds(signs[node.index])
    if node.op == "and":
        return all(_evaluate(c, signs) for c in node.children)
    if node.op == "or":
        return any(_evaluate(c, signs) for c in node.children)
    return not _evaluate(node.children[0], signs)


def _atoms(node: Node) -> Iterable[Atom]:
    if isinstance(node, Atom):
        yield node
    else:
        for c in node.children:
            yield from _atoms(c)


def _is_closed(node: Node) -> bool:
    if isinstance(node, Atom):
        return node.relation in (">=", "<=")
    return node.op != "not" and all(_is_closed(c) for c in node.children)


@dataclass(frozen=True)
class PFormula:
    """A boolean combination of sign conditions on a family of polynomials."""

    polynomials: tuple[Polynomial, ...]
    tree: Node

    def __post_init__(self) -> None:
        for a in _atoms(self.tree):
            if not 0 <= a.index < len(self.polynomials):
                raise InputError(f"atom refers to missing polynomial {a.index}")

    @property
    def nvars(self) -> int:
        return self.polynomials[0].nvars

    @property
    def closed(self) -> bool:
        """Monotone combination of non-strict atoms only."""
        return _is_closed(self.tree)

    def holds_for_signs(self, signs: Sequence[int]) -> bool:
        return _evaluate(self.tree, signs)

    def __call__(self, point: Sequence[Fraction]) -> bool:
        return self.holds_for_signs([sign(h(point)) for h in self.polynomials])


def atom(index: int, relation: str) -> Atom:
    return Atom(index, relation)


def conj(*children: Node) -> Connective:
    return Connective("and", tuple(children))


def disj(*children: Node) -> Connective:
    return Connective("or", tuple(children))


def _parse_node(raw: object) -> Node:
    if not isinstance(raw, Mapping) or len(raw) != 1:
        raise InputError(f"formula node must be a one-key object: {raw!r}")
    (key, value), = raw.items()
    if key == "atom":
        return Atom(int(value[0]), str(value[1]))
    if key in ("and", "or"):
        return Connective(key, tuple(_parse_node(c) for c in value))
    if key == "not":
        return Connective("not", (_parse_node(value),))
    raise InputError(f"unknown formula key {key!r}")


def _node_json(node: Node) -> object:
    if isinstance(node, Atom):
        return {"atom": [node.index, node.relation]}
    if node.op == "not":
        return {"not": _node_json(node.children[0])}
    return {node.op: [_node_json(c) for c in node.children]}


def parse_formula(data: Mapping) -> PFormula:
    try:
        nvars = int(data["nvars"])
        polys = tuple(Polynomial.parse(str(p), nvars) for p in data["polynomials"])
        tree = _parse_node(data["formula"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed formula: {exc}") from exc
    if not polys:
        raise InputError("a formula needs at least one polynomial")
    return PFormula(polys, tree)


def formula_json(formula: PFormula) -> dict:
    return {
        "nvars": formula.nvars,
        "polynomials": [str(p) for p in formula.polynomials],
        "formula": _node_json(formula.tree),
    }


def load_formula(path: str | Path) -> PFormula:
    with open(path) as handle:
        return parse_formula(json.load(handle))


# Sign tuples


@dataclass(frozen=True)
class SignTuple:
    zero: frozenset[int]
    positive: frozenset[int]
    negative: frozenset[int]

    def __post_init__(self) -> None:
        if self.zero & self.positive or self.zero & self.negative or self.positive & self.negative:
            raise InputError("sign tuple parts must be disjoint")

    @property
    def size(self) -> int:
        return len(self.zero) + len(self.positive) + len(self.negative)

    @staticmethod
    def from_signs(signs: Sequence[int]) -> SignTuple:
        return SignTuple(
            frozenset(i for i, s in enumerate(signs) if s == 0),
            frozenset(i for i, s in enumerate(signs) if s > 0),
            frozenset(i for i, s in enumerate(signs) if s < 0),
        )

    def signs(self) -> tuple[int, ...]:
        out = []
        for i in range(self.size):
            if i in self.zero:
                out.append(0)
            elif i in self.positive:
                out.append(1)
            elif i in self.negative:
                out.append(-1)
            else:
                raise InputError("sign tuple does not partition the index range")
        return tuple(out)

    def extended(self, index: int, s: int) -> SignTuple:
        part = {0: self.zero, 1: self.positive, -1: self.negative}
        part[s] = part[s] | {index}
        return SignTuple(part[0], part[1], part[-1])

    def permuted(self, perm: Mapping[int, int]) -> SignTuple:
        return SignTuple(
            frozenset(perm[i] for i in self.zero),
            frozenset(perm[i] for i in self.positive),
            frozenset(perm[i] for i in self.negative),
        )


def _affine_family(polynomials: Sequence[Polynomial]) -> list[AffineFunctional] | None:
    out = []
    for h in polynomials:
        f = h.affine_part()
        if f is None:
            return None
        out.append(f)
    return out


def sign_set_constraints(functionals: Sequence[AffineFunctional], signs: Sequence[int]) -> list[LinearConstraint]:
    out = []
    for f, s in zip(functionals, signs):
        if s == 0:
            out.append(LinearConstraint.from_functional(f, "="))
        elif s > 0:
            out.append(LinearConstraint.from_functional(f, ">"))
        else:
            out.append(LinearConstraint.from_functional(-f, ">"))
    return out


def realizable_sign_vectors(functionals: Sequence[AffineFunctional], n: int) -> list[tuple[int, ...]]:
    """Every sign vector realized by the functionals on R^n, in lexicographic order.

    Depth-first over the functionals with infeasible prefixes pruned, so the work is
    proportional to the number of realized prefixes rather than 3^s.
    """
    out: list[tuple[int, ...]] = []

    def grow(prefix: tuple[int, ...]) -> None:
        if len(prefix) == len(functionals):
            out.append(prefix)
            return
        for s in (-1, 0, 1):
            candidate = prefix + (s,)
            if linear_feasible(sign_set_constraints(functionals[: len(candidate)], candidate), n):
                grow(candidate)

    grow(())
    return out


class UndecidedSignSetError(InputError):
    def __init__(self, tuples: Sequence[SignTuple]) -> None:
        listed = ", ".join(str(t.signs()) for t in tuples[:20])
        super().__init__(f"emptiness undecided for {len(tuples)} sign tuples: {listed}")
        self.tuples = list(tuples)


@dataclass(frozen=True)
class SignDecomposition:
    tuples: tuple[SignTuple, ...]
    flagged: tuple[SignTuple, ...] = ()


def sign_decomposition(
    formula: PFormula,
    polynomials: Sequence[Polynomial] | None = None,
    witnesses: Sequence[Sequence[Fraction]] = (),
    keep_all: bool = False,
) -> SignDecomposition:
    """Sign tuples with nonempty sign sets contained in the formula's set.

    Affine families are decided exactly by linear feasibility.  Otherwise a tuple is
    kept when a witness point realizes it, or kept and flagged in keep-all mode.
    """
    polys = tuple(polynomials) if polynomials is not None else formula.polynomials
    if polys != formula.polynomials:
        raise InputError("the formula is over a different polynomial family")
    s = len(polys)
    n = formula.nvars
    affine = _affine_family(polys)
    if affine is not None:
        kept = [signs for signs in realizable_sign_vectors(affine, n) if formula.holds_for_signs(signs)]
        return SignDecomposition(tuple(SignTuple.from_signs(sg) for sg in kept))
    candidates = [signs for signs in product((-1, 0, 1), repeat=s) if formula.holds_for_signs(signs)]
    seen = {tuple(sign(h(w)) for h in polys) for w in witnesses}
    kept = [signs for signs in candidates if signs in seen]
    undecided = [signs for signs in candidates if signs not in seen]
    if undecided and not keep_all:
        raise UndecidedSignSetError([SignTuple.from_signs(sg) for sg in undecided])
    flagged = tuple(SignTuple.from_signs(sg) for sg in undecided)
    return SignDecomposition(tuple(SignTuple.from_signs(sg) for sg in kept) + flagged, flagged)


# Shrinking and thickening families


@dataclass(frozen=True)
class Bound:
    """P[index] + shift  relation  0, relation in {>=, <=, =}."""

    index: int
    relation: str
    shift: Fraction

    def holds(self, value: Fraction) -> bool:
        v = value + self.shift
        return {">=": v >= 0, "<=": v <= 0, "=": v == 0}[self.relation]


def _canonical(bounds: Iterable[Bound]) -> tuple[Bound, ...]:
    return tuple(sorted(bounds, key=lambda b: (b.index, b.relation, b.shift)))


def build_family_formulas(tuple_: SignTuple, delta: object, eps: object) -> tuple[tuple[Bound, ...], tuple[Bound, ...]]:
    """The conjunction slices of S_delta and S_{delta,eps} for one sign tuple."""
    delta, eps = to_fraction(delta), to_fraction(eps)
    s_delta: list[Bound] = []
    s_delta_eps: list[Bound] = []
    for i in sorted(tuple_.zero | tuple_.positive | tuple_.negative):
        if i in tuple_.zero:
            s_delta.append(Bound(i, "=", Fraction(0)))
            s_delta_eps += [Bound(i, ">=", eps), Bound(i, "<=", -eps)]
        elif i in tuple_.positive:
            s_delta.append(Bound(i, ">=", -delta))
            s_delta_eps.append(Bound(i, ">=", -delta))
        else:
            s_delta.append(Bound(i, "<=", delta))
            s_delta_eps.append(Bound(i, "<=", delta))
    return tuple(s_delta), tuple(s_delta_eps)


def delta_atoms(tuple_: SignTuple, functionals: Sequence[AffineFunctional]) -> tuple[DeltaAtom, ...]:
    """The S_delta slice with delta left symbolic."""
    out = []
    for i, f in enumerate(functionals):
        if i in tuple_.zero:
            out.append(DeltaAtom(f, Fraction(0), "="))
        elif i in tuple_.positive:
            out.append(DeltaAtom(f, Fraction(1), ">="))
        elif i in tuple_.negative:
            out.append(DeltaAtom(f, Fraction(-1), "<="))
    return tuple(out)


# Parameters


@dataclass(frozen=True)
class ApproxParams:
    m: int
    eps: tuple[Fraction, ...]
    delta: tuple[Fraction, ...]
    r: Fraction
    ordering: str = "thm110"

    def __post_init__(self) -> None:
        object.__setattr__(self, "eps", tuple(to_fraction(e) for e in self.eps))
        object.__setattr__(self, "delta", tuple(to_fraction(d) for d in self.delta))
        object.__setattr__(self, "r", to_fraction(self.r))
        if self.m < 1:
            raise InputError("m must be at least 1")
        if len(self.eps) != self.m + 1 or len(self.delta) != self.m + 1:
            raise InputError(f"need {self.m + 1} values each of eps and delta")
        if self.r <= 0:
            raise InputError("the radius r must be positive")
        if self.ordering not in ORDERINGS:
            raise InputError(f"unknown ordering {self.ordering!r}")
        chain = self.chain()
        first_name, first = chain[0]
        if first <= 0:
            raise InputError(f"ordering violated: {first_name}={first} must be positive")
        for (a_name, a), (b_name, b) in zip(chain, chain[1:]):
            if not a < b:
                raise InputError(f"ordering violated: {a_name}={a} must be below {b_name}={b}")
        last_name, last = chain[-1]
        if last >= 1:
            raise InputError(f"ordering violated: {last_name}={last} must be below 1")

    def chain(self) -> list[tuple[str, Fraction]]:
        """The parameters in the order they must increase."""
        out = []
        for j in range(self.m + 1):
            e, d = (f"eps[{j}]", self.eps[j]), (f"delta[{j}]", self.delta[j])
            if self.ordering == "maintheorem" and j == 0:
                out += [d, e]
            else:
                out += [e, d]
        return out

    @property
    def delta_min(self) -> Fraction:
        return min(self.delta)

    @property
    def eps_max(self) -> Fraction:
        return max(self.eps)

    def scaled(self, factor: object) -> ApproxParams:
        factor = to_fraction(factor)
        return ApproxParams(self.m, tuple(e * factor for e in self.eps), tuple(d * factor for d in self.delta), self.r, self.ordering)

    @staticmethod
    def tower(m: int, r: object, ratio: int = 4, ordering: str = "thm110") -> ApproxParams:
        """Geometric tower with the largest parameter 1/ratio."""
        count = 2 * (m + 1)
        values = [Fraction(1, ratio ** (count - k)) for k in range(count)]
        first, second = values[0::2], values[1::2]
        if ordering == "maintheorem":
            delta = [first[0]] + second[1:]
            eps = [second[0]] + first[1:]
        else:
            eps, delta = first, second
        return ApproxParams(m, tuple(eps), tuple(delta), to_fraction(r), ordering)


def parse_params(data: Mapping, ordering: str | None = None) -> ApproxParams:
    try:
        return ApproxParams(
            int(data["m"]),
            tuple(to_fraction(x) for x in data["eps"]),
            tuple(to_fraction(x) for x in data["delta"]),
            to_fraction(data["r"]),
            ordering or data.get("ordering", "thm110"),
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed parameters: {exc}") from exc


# The approximating set


def ball_polynomial(nvars: int, r: Fraction) -> Polynomial:
    total = Polynomial.constant(nvars, r * r)
    for i in range(nvars):
        total = total - Polynomial.variable(nvars, i) ** 2
    return total


@dataclass(frozen=True)
class BoundedFormula:
    formula: PFormula
    ball_index: int
    already_bounded: bool


def bound_in_ball(formula: PFormula, r: object) -> BoundedFormula:
    """Conjoin r^2 - |x|^2 >= 0; the family gains one symmetric polynomial."""
    r = to_fraction(r)
    if r <= 0:
        raise InputError("the radius r must be positive")
    ball = ball_polynomial(formula.nvars, r)
    polys = formula.polynomials + (ball,)
    index = len(formula.polynomials)
    bounded = _inside_ball_certificate(formula, r) is not None
    return BoundedFormula(PFormula(polys, conj(formula.tree, Atom(index, ">="))), index, bounded)


def _inside_ball_certificate(formula: PFormula, r: Fraction) -> Fraction | None:
    """A box half-width b with n b^2 < r^2 containing the closure of the set, if found."""
    affine = _affine_family(formula.polynomials)
    if affine is None:
        return None
    n = formula.nvars
    decomposition = sign_decomposition(formula)
    for b in _box_candidates(r, n):
        if all(_closed_sign_set_in_box(affine, t.signs(), b, n) for t in decomposition.tuples):
            return b
    return None


def _box_candidates(r: Fraction, n: int) -> list[Fraction]:
    out = []
    for denominator in (1, 2, 4, 8, 16):
        b = Fraction(int(r * denominator), denominator)
        while b > 0 and n * b * b >= r * r:
            b -= Fraction(1, denominator)
        if b > 0:
            out.append(b)
    return sorted(set(out))


def _closed_constraints(functionals: Sequence[AffineFunctional], signs: Sequence[int]) -> list[LinearConstraint]:
    out = []
    for f, s in zip(functionals, signs):
        if s == 0:
            out.append(LinearConstraint.from_functional(f, "="))
        elif s > 0:
            out.append(LinearConstraint.from_functional(f, ">="))
        else:
            out.append(LinearConstraint.from_functional(-f, ">="))
    return out


def _closed_sign_set_in_box(functionals: Sequence[AffineFunctional], signs: Sequence[int], b: Fraction, n: int) -> bool:
    closed = _closed_constraints(functionals, signs)
    for axis in range(n):
        for direction in (1, -1):
            coeffs = tuple(Fraction(direction if j == axis else 0) for j in range(n))
            if linear_feasible(closed + [LinearConstraint(coeffs, -b, ">")], n):
                return False
    return True


@dataclass(frozen=True)
class Piece:
    """One conjunction S_{delta_i,eps_i}(B) of the union T."""

    level: int
    tuple_: SignTuple
    bounds: tuple[Bound, ...]


@dataclass(frozen=True)
class Approximation:
    source: PFormula
    params: ApproxParams
    tuples: tuple[SignTuple, ...]
    ball_index: int
    pieces: tuple[Piece, ...]
    t_formula: PFormula
    p_prime: tuple[Polynomial, ...]
    p_prime_labels: tuple[str, ...]
    emitted_count: int
    stated_count: int
    flagged_tuples: tuple[SignTuple, ...] = ()

    @property
    def count_discrepancy(self) -> bool:
        return self.emitted_count != self.stated_count

    def piece_constraints(self, piece: Piece, include_ball: bool = False) -> list[LinearConstraint]:
        """Linear constraints of a piece over the affine part of the family."""
        out = []
        for bd in piece.bounds:
            if bd.index == self.ball_index:
                if include_ball:
                    raise InputError("the ball clause is not linear")
                continue
            f = self.source.polynomials[bd.index].affine_part()
            if f is None:
                raise InputError("piece constraints need an affine family")
            g = f.shifted(bd.shift)
            if bd.relation == ">=":
                out.append(LinearConstraint.from_functional(g, ">="))
            elif bd.relation == "<=":
                out.append(LinearConstraint.from_functional(-g, ">="))
            else:
                out.append(LinearConstraint.from_functional(g, "="))
        return out

    def contains(self, point: Sequence[Fraction]) -> bool:
        """Membership in T through the pieces; ``t_formula`` gives the same answer over P'."""
        values = [h(point) for h in self.source.polynomials]
        values.append(ball_polynomial(self.source.nvars, self.params.r)(point))
        return any(all(b.holds(values[b.index]) for b in piece.bounds) for piece in self.pieces)


def _p_prime(polys: Sequence[Polynomial], params: ApproxParams) -> tuple[list[Polynomial], list[str], dict]:
    out, labels, where = [], [], {}
    for i, h in enumerate(polys):
        for j in range(params.m + 1):
            for name, value in (("-eps", -params.eps[j]), ("+eps", params.eps[j]), ("-delta", -params.delta[j]), ("+delta", params.delta[j])):
                where[(i, name, j)] = len(out)
                out.append(h + value)
                labels.append(f"h{i}{name}{j}")
    return out, labels, where


def build_approximation(
    formula: PFormula,
    params: ApproxParams,
    group: ReflectionGroup | None = None,
    witnesses: Sequence[Sequence[Fraction]] = (),
    keep_all: bool = False,
) -> Approximation:
    """T as the union over levels and sign tuples of the closed conjunctions, with its family P'."""
    if group is not None:
        bad = invariance_violation(list(formula.polynomials), group)
        if bad is not None:
            h, g = bad
            raise InputError(f"family is not invariant: {h} under {g.label()}")
    bounded = bound_in_ball(formula, params.r)
    decomposition = sign_decomposition(formula, witnesses=witnesses, keep_all=keep_all)
    s = len(formula.polynomials)
    ball = s
    if bounded.already_bounded:
        # The set sits strictly inside the ball, so the ball function is positive on every sign set.
        tuples = tuple(t.extended(ball, 1) for t in decomposition.tuples)
    else:
        raise InputError("the set is not certified to lie inside the open ball of radius r; increase r")
    polys = bounded.formula.polynomials
    p_prime, labels, where = _p_prime(polys, params)
    pieces = []
    disjuncts = []
    for j in range(params.m + 1):
        for t in tuples:
            _, slice_ = build_family_formulas(t, params.delta[j], params.eps[j])
            pieces.append(Piece(j, t, _canonical(slice_)))
            atoms = []
            for bd in slice_:
                if bd.relation == ">=" and bd.shift == params.eps[j] and bd.index in t.zero:
                    atoms.append(Atom(where[(bd.index, "+eps", j)], ">="))
                elif bd.relation == "<=" and bd.shift == -params.eps[j] and bd.index in t.zero:
                    atoms.append(Atom(where[(bd.index, "-eps", j)], "<="))
                elif bd.relation == ">=":
                    atoms.append(Atom(where[(bd.index, "-delta", j)], ">="))
                else:
                    atoms.append(Atom(where[(bd.index, "+delta", j)], "<="))
            disjuncts.append(conj(*atoms))
    if disjuncts:
        tree: Node = disj(*disjuncts)
    else:
        # Empty T: the ball function cannot be both >= delta and <= -delta.
        tree = conj(Atom(where[(ball, "-delta", 0)], ">="), Atom(where[(ball, "+delta", 0)], "<="))
    t_formula = PFormula(tuple(p_prime), tree)
    if group is not None:
        _check_t_symmetric(tuples, polys, group)
    return Approximation(
        formula,
        params,
        tuples,
        ball,
        tuple(pieces),
        t_formula,
        tuple(p_prime),
        tuple(labels),
        4 * (params.m + 1) * (s + 1),
        4 * params.m * (s + 1),
        decomposition.flagged,
    )


def family_permutation(polys: Sequence[Polynomial], g: object) -> dict[int, int]:
    """i -> j with P[i] composed with g equal to P[j]."""
    index = {h: i for i, h in enumerate(polys)}
    perm = {}
    for i, h in enumerate(polys):
        image = h.compose_linear(g.matrix)
        if image not in index:
            raise InputError(f"family is not invariant: {h} under {g.label()}")
        perm[i] = index[image]
    return perm


def _check_t_symmetric(tuples: Sequence[SignTuple], polys: Sequence[Polynomial], group: ReflectionGroup) -> None:
    family = set(tuples)
    for g in group.generator_elements():
        perm = family_permutation(polys, g)
        if {t.permuted(perm) for t in tuples} != family:
            raise InputError(f"the sign tuples are not permuted by {g.label()}")


def p_prime_report(approx: Approximation) -> dict:
    return {
        "emitted": approx.emitted_count,
        "stated_formula_4m(s+1)": approx.stated_count,
        "discrepancy": approx.count_discrepancy,
    }


# Geometry of the pieces


def piece_vertices(approx: Approximation, piece: Piece) -> list[Point]:
    """Vertices of a bounded piece polyhedron."""
    n = approx.source.nvars
    constraints = approx.piece_constraints(piece)
    out = set()
    for subset in combinations(constraints, n):
        rows = [list(c.coefficients) for c in subset]
        if rank(rows) < n:
            continue
        point = solve_linear(rows, [-c.constant for c in subset])
        if all(c.holds_at(point) for c in constraints):
            out.add(point)
    return sorted(out)


def piece_is_bounded(approx: Approximation, piece: Piece, radius: Fraction) -> bool:
    n = approx.source.nvars
    constraints = approx.piece_constraints(piece)
    for axis in range(n):
        for direction in (1, -1):
            coeffs = tuple(Fraction(direction if j == axis else 0) for j in range(n))
            if linear_feasible(constraints + [LinearConstraint(coeffs, -radius, ">")], n):
                return False
    return True


@dataclass(frozen=True)
class BallCertificate:
    pieces_checked: int
    vertices_checked: int


def ball_redundancy_certificate(approx: Approximation) -> BallCertificate:
    """Show the ball clauses never cut T: every piece is bounded and its vertices satisfy them."""
    r = approx.params.r
    poly = ball_polynomial(approx.source.nvars, r)
    vertices = 0
    for piece in approx.pieces:
        if not piece.bounds:
            continue
        if not piece_is_bounded(approx, piece, r):
            raise InputError(f"piece at level {piece.level} is not inside the ball")
        pts = piece_vertices(approx, piece)
        for p in pts:
            if poly(p) - approx.params.delta[piece.level] < 0:
                raise InputError(f"ball clause cuts piece at level {piece.level} near {tuple(map(str, p))}")
        vertices += len(pts)
    return BallCertificate(len(approx.pieces), vertices)


def pieces_meet(approx: Approximation, pieces: Sequence[Piece]) -> bool:
    constraints = [c for p in pieces for c in approx.piece_constraints(p)]
    return linear_feasible(constraints, approx.source.nvars)


def piece_image(approx: Approximation, piece: Piece, g: object) -> Piece:
    """The piece g(piece) = {x : piece holds at g^-1 x}."""
    inverse = type(g)(g.inverse_matrix(), ())
    perm = family_permutation(approx.source.polynomials, inverse)
    perm[approx.ball_index] = approx.ball_index
    bounds = _canonical(Bound(perm[b.index], b.relation, b.shift) for b in piece.bounds)
    return Piece(piece.level, piece.tuple_.permuted(perm), bounds)


# Simplicial side: cores, K_B, V, V''


@dataclass(frozen=True)
class SimplicialSetting:
    """A marked triangulation with its barycentric subdivision and the subcomplex S-hat."""

    marking: MarkedComplex
    subdivision: Subdivision
    s_hat: frozenset[frozenset[int]]
    cores: Mapping[frozenset[int], tuple[int, ...]]

    @property
    def complex(self):
        return self.subdivision.complex


def simplicial_setting(marking: MarkedComplex, subdivision: Subdivision) -> SimplicialSetting:
    s_hat = frozenset(s for s in subdivision.complex.simplices if subdivision.carrier(s) in marking.in_s)
    cores = {b: mark_and_core(marking, subdivision, b) for b in s_hat}
    return SimplicialSetting(marking, subdivision, s_hat, cores)


@dataclass(frozen=True)
class KBRegionSpec:
    K: frozenset[int]
    B: frozenset[int]
    core: tuple[int, ...]
    delta: object
    eps: object

    def __post_init__(self) -> None:
        if not self.B <= self.K:
            raise InputError("B must be a face of K")
        if not set(self.core) <= self.B:
            raise InputError("the core must lie in B")


def kb_membership(t: Mapping[int, Fraction], spec: KBRegionSpec) -> bool:
    """Barycentric point t of K lies in K_B(delta, eps)."""
    if set(t) != set(spec.K):
        raise InputError("barycentric coordinates do not match the simplex K")
    core_mass = sum((t[v] for v in spec.core), Fraction(0))
    if sign(core_mass - spec.delta) <= 0:
        return False
    return _eps_and_dominance(t, spec.B, spec.eps)


def _eps_and_dominance(t: Mapping[int, Fraction], face: Iterable[int], eps: object) -> bool:
    face = frozenset(face)
    mass = sum((t[v] for v in face), Fraction(0))
    if sign(mass - 1 + eps) <= 0:
        return False
    rest = [t[c] for c in t if c not in face]
    if rest and min(t[b] for b in face) <= max(rest):
        return False
    return True


def vpp_membership(t: Mapping[int, Fraction], K: frozenset[int], B: frozenset[int], eps: object) -> bool:
    """The region of K_B'' : mass near B above 1 - eps with B dominating."""
    if set(t) != set(K):
        raise InputError("barycentric coordinates do not match the simplex K")
    if not B <= K:
        raise InputError("B must be a face of K")
    return _eps_and_dominance(t, B, eps)


def vb_intersection(setting: SimplicialSetting, first: frozenset[int], second: frozenset[int]) -> frozenset[int] | None:
    """The simplex B0 of S-hat with cl(B0) meeting S-hat exactly where cl(B1) and cl(B2) do, or None."""
    for b in (first, second):
        if b not in setting.s_hat:
            raise InputError("both simplices must lie in S-hat")
    common = first & second
    if not common:
        return None
    sub = setting.subdivision
    ordered = sub.ordered(common)
    in_s = setting.marking.in_s
    for position, v in enumerate(ordered):
        if sub.vertex_cells[v] in in_s:
            return frozenset(ordered[position:])
    return None


def s_faces(setting: SimplicialSetting, b: frozenset[int]) -> list[frozenset[int]]:
    """Faces of b lying in S-hat."""
    return [frozenset(c) for k in range(1, len(b) + 1) for c in combinations(sorted(b), k) if frozenset(c) in setting.s_hat]


def point_in_v(setting: SimplicialSetting, K: frozenset[int], t: Mapping[int, Fraction], delta: object, eps: object, b: frozenset[int] | None = None) -> bool:
    """Membership of the point with positive barycentrics t on the open simplex K in V (or in V_b)."""
    candidates = s_faces(setting, b) if b is not None else s_faces(setting, K)
    for face in candidates:
        if face <= K and kb_membership(t, KBRegionSpec(K, face, setting.cores[face], delta, eps)):
            return True
    return False


def point_in_vpp(setting: SimplicialSetting, K: frozenset[int], t: Mapping[int, Fraction], eps: object) -> bool:
    return any(vpp_membership(t, K, face, eps) for face in s_faces(setting, K))


# Cell descriptors


@dataclass(frozen=True)
class CellDescriptor:
    K: frozenset[int]
    chain: tuple[frozenset[int], ...]
    delta_signs: tuple[tuple[frozenset[int], int], ...]
    eps_signs: tuple[tuple[frozenset[int], int], ...]
    witness: tuple[tuple[int, Fraction], ...]

    @property
    def key(self) -> tuple:
        return (self.K, self.chain, self.delta_signs, self.eps_signs)

    @property
    def coordinates(self) -> dict[int, Fraction]:
        return dict(self.witness)


def _chain_of(t: Mapping[int, Fraction]) -> tuple[frozenset[int], ...]:
    """Faces of K swept by decreasing barycentric value: a simplex of the subdivision of K."""
    values = sorted(set(t.values()), reverse=True)
    return tuple(frozenset(v for v in t if t[v] >= level) for level in values)


def _proper_subsets(vertices: Sequence[int]) -> list[frozenset[int]]:
    return [frozenset(c) for k in range(1, len(vertices)) for c in combinations(vertices, k)]


def descriptor_key(K: frozenset[int], t: Mapping[int, Fraction], delta: object, eps: object, use_delta: bool = True) -> tuple:
    subsets = _proper_subsets(sorted(K))
    dsigns = tuple((I, sign(sum((t[v] for v in I), Fraction(0)) - delta)) for I in subsets) if use_delta else ()
    esigns = tuple((I, sign(sum((t[v] for v in I), Fraction(0)) - eps)) for I in subsets)
    return (K, _chain_of(t), dsigns, esigns)


def _cell_samples(K: frozenset[int], delta: object, eps: object, use_delta: bool) -> list[dict[int, Fraction]]:
    """Witness barycentric points, one per cell of the refining arrangement inside open K."""
    verts = sorted(K)
    local = _local_cell_samples(len(verts) - 1, to_fraction(delta), to_fraction(eps), use_delta)
    return [{verts[i]: x for i, x in sample.items()} for sample in local]


@lru_cache(maxsize=64)
def _local_cell_samples(q: int, delta: Fraction, eps: Fraction, use_delta: bool) -> tuple[dict[int, Fraction], ...]:
    """The arrangement depends only on q and the parameters, so it is built once per dimension."""
    return tuple(_build_cell_samples(frozenset(range(q + 1)), delta, eps, use_delta))


def _build_cell_samples(K: frozenset[int], delta: object, eps: object, use_delta: bool) -> list[dict[int, Fraction]]:
    from .arrangement import build_arrangement

    verts = sorted(K)
    q = len(verts) - 1
    if q == 0:
        return [{verts[0]: Fraction(1)}]
    if q > 2:
        raise InputError("cell descriptors are enumerated for simplices of dimension at most 2")
    # Coordinates t_1..t_q; t_0 = 1 - sum.
    def functional_of(weights: Mapping[int, Fraction], constant: Fraction) -> AffineFunctional | None:
        w0 = weights.get(verts[0], Fraction(0))
        grad = tuple(weights.get(verts[i], Fraction(0)) - w0 for i in range(1, q + 1))
        const = constant + w0
        if all(a == 0 for a in grad):
            return None
        return AffineFunctional(const, grad)

    lines = []
    for v in verts:
        lines.append(functional_of({v: Fraction(1)}, Fraction(0)))
    for a, b in combinations(verts, 2):
        lines.append(functional_of({a: Fraction(1), b: Fraction(-1)}, Fraction(0)))
    for I in _proper_subsets(verts):
        for level in ((delta, eps) if use_delta else (eps,)):
            lines.append(functional_of({v: Fraction(1) for v in I}, -level))
    lines = [f for f in lines if f is not None]
    arrangement = build_arrangement(lines, q)
    out = []
    for cell in arrangement.cells:
        if cell.on_box:
            continue
        coords = {verts[i + 1]: cell.sample[i] for i in range(q)}
        coords[verts[0]] = 1 - sum(cell.sample, Fraction(0))
        if all(x > 0 for x in coords.values()):
            out.append(coords)
    return out


def cw_cells(setting: SimplicialSetting, delta: object, eps: object, use_delta: bool = True) -> list[CellDescriptor]:
    """Nonempty cells C_{delta,eps} (or C_eps) of every open simplex of the subdivision."""
    delta, eps = to_fraction(delta), to_fraction(eps)
    if not (0 < delta < 1 and 0 < eps < 1):
        raise InputError("delta and eps must lie in (0, 1)")
    out = []
    for K in sorted(setting.complex.simplices, key=lambda s: (len(s), sorted(s))):
        seen = set()
        for t in _cell_samples(K, delta, eps, use_delta):
            key = descriptor_key(K, t, delta, eps, use_delta)
            if key in seen:
                raise InputError("two arrangement cells share one descriptor")
            seen.add(key)
            out.append(CellDescriptor(K, key[1], key[2], key[3], tuple(sorted(t.items()))))
    return out


def descriptor_dimension(descriptor: CellDescriptor, delta: object, eps: object) -> int:
    """Dimension of the open cell through its witness: free parameters left by active equalities."""
    K = sorted(descriptor.K)
    t = descriptor.coordinates
    rows = [[Fraction(1)] * len(K)]
    for level, signs in ((delta, descriptor.delta_signs), (eps, descriptor.eps_signs)):
        for I, s in signs:
            if s == 0:
                rows.append([Fraction(int(v in I)) for v in K])
    for a, b in combinations(K, 2):
        if t[a] == t[b]:
            rows.append([Fraction(int(v == a)) - Fraction(int(v == b)) for v in K])
    return len(K) - rank(rows)


def descriptor_in_v_by_pattern(setting: SimplicialSetting, d: CellDescriptor) -> bool:
    """V-membership read off the sign pattern and the chain alone."""
    dsign = dict(d.delta_signs)
    esign = dict(d.eps_signs)
    rank_of = {}
    for position, face in enumerate(d.chain):
        for v in face:
            rank_of.setdefault(v, position)
    for face in s_faces(setting, d.K):
        core = frozenset(setting.cores[face])
        core_ok = core == d.K or dsign.get(core) == 1
        rest = d.K - face
        eps_ok = not rest or esign[rest] == -1
        dominance = all(rank_of[b] < rank_of[c] for b in face for c in rest)
        if core_ok and eps_ok and dominance:
            return True
    return False


@dataclass(frozen=True)
class VRegion:
    cells: tuple[CellDescriptor, ...]
    in_v: frozenset[tuple]
    per_b: Mapping[frozenset[int], frozenset[tuple]]
    delta: Fraction
    eps: Fraction
    mismatches: tuple[tuple, ...]


def v_region_cells(setting: SimplicialSetting, params: ApproxParams) -> VRegion:
    """Descriptors contained in V and in each V_B, tagged two ways and compared."""
    delta, eps = params.delta_min, params.eps_max
    cells = cw_cells(setting, delta, eps)
    in_v = set()
    per_b: dict[frozenset[int], set[tuple]] = {b: set() for b in setting.s_hat}
    # The point lies in V_b iff some S-hat face of b holds it in its K_B region.
    cofaces: dict[frozenset[int], list[frozenset[int]]] = {}
    for b in setting.s_hat:
        for face in s_faces(setting, b):
            cofaces.setdefault(face, []).append(b)
    mismatches = []
    faces_of: dict[frozenset[int], list[frozenset[int]]] = {}
    for d in cells:
        t = d.coordinates
        faces = faces_of.get(d.K)
        if faces is None:
            faces = faces_of[d.K] = s_faces(setting, d.K)
        hits = [f for f in faces if kb_membership(t, KBRegionSpec(d.K, f, setting.cores[f], delta, eps))]
        by_points = bool(hits)
        by_pattern = descriptor_in_v_by_pattern(setting, d)
        if by_points != by_pattern:
            mismatches.append(d.key)
        for f in hits:
            in_v.add(d.key)
            for b in cofaces.get(f, ()):
                per_b[b].add(d.key)
    return VRegion(tuple(cells), frozenset(in_v), {b: frozenset(v) for b, v in per_b.items()}, delta, eps, tuple(mismatches))


def v_double_prime_cells(setting: SimplicialSetting, eps: object) -> tuple[list[CellDescriptor], frozenset[tuple]]:
    """The eps-only refinement and the descriptors lying in V''."""
    eps = to_fraction(eps)
    cells = cw_cells(setting, Fraction(1, 2), eps, use_delta=False)
    inside = frozenset(d.key for d in cells if point_in_vpp(setting, d.K, d.coordinates, eps))
    return cells, inside


# Nerves


@dataclass(frozen=True)
class Nerve:
    """An abstract simplicial complex on cover labels, stored by its facets."""

    labels: tuple[Hashable, ...]
    facets: frozenset[frozenset]

    def skeleton(self, k: int) -> AbstractComplex:
        out: set[frozenset] = set()
        for facet in self.facets:
            items = sorted(facet, key=repr)
            for size in range(1, min(k + 1, len(items)) + 1):
                out.update(frozenset(c) for c in combinations(items, size))
        return AbstractComplex(frozenset(out))

    def contains(self, simplex: Iterable[Hashable]) -> bool:
        simplex = frozenset(simplex)
        return any(simplex <= f for f in self.facets)

    @property
    def dimension(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1


def _facets_from_witnesses(groups: Iterable[frozenset]) -> frozenset[frozenset]:
    return frozenset(_maximal({g for g in groups if g}))


def nerve_of_v(setting: SimplicialSetting) -> Nerve:
    """Nerve of {V_B : B in S-hat} from the intersection rule.

    A family meets iff folding pairwise intersections never becomes empty, and then
    every member contains the final simplex B0; so the facets are the families of all
    B whose intersection with some B0 returns B0.
    """
    labels = tuple(sorted(setting.s_hat, key=lambda s: (len(s), sorted(s))))
    groups = []
    for b0 in labels:
        members = frozenset(b for b in labels if vb_intersection(setting, b, b0) == b0)
        groups.append(members)
    facets = _facets_from_witnesses(groups)
    for facet in facets:
        if fold_intersection(setting, facet) is None:
            raise InputError("a nerve facet has empty intersection")
    return Nerve(labels, facets)


def fold_intersection(setting: SimplicialSetting, family: Iterable[frozenset[int]]) -> frozenset[int] | None:
    items = sorted(family, key=lambda s: (len(s), sorted(s)))
    current = items[0]
    if current not in setting.s_hat:
        raise InputError("family members must lie in S-hat")
    current = vb_intersection(setting, current, current)
    for b in items[1:]:
        current = vb_intersection(setting, current, b)
        if current is None:
            return None
    return current


def nerve_skeleton_by_rule(setting: SimplicialSetting, k: int) -> AbstractComplex:
    """All nerve simplices up to dimension k by depth-first folding of the intersection rule."""
    labels = sorted(setting.s_hat, key=lambda s: (len(s), sorted(s)))
    out: set[frozenset] = set()

    def grow(members: tuple[int, ...], current: frozenset[int]) -> None:
        out.add(frozenset(labels[i] for i in members))
        if len(members) == k + 1:
            return
        for j in range(members[-1] + 1, len(labels)):
            nxt = vb_intersection(setting, current, labels[j])
            if nxt is not None:
                grow(members + (j,), nxt)

    for i, b in enumerate(labels):
        grow((i,), b)
    return AbstractComplex(frozenset(out))


def nerve_of_cover(family: Sequence[frozenset], labels: Sequence[Hashable] | None = None) -> Nerve:
    """Nerve of a finite family of subcomplexes (sets of simplices) by exact intersection tests.

    Subcomplexes meet iff they share a vertex, so facets are the maximal label sets
    containing a common vertex; these are checked against direct intersections.
    """
    if labels is None:
        labels = tuple(range(len(family)))
    if len(labels) != len(family):
        raise InputError("one label per cover member is required")
    owners: dict[Hashable, set] = {}
    for label, member in zip(labels, family):
        for simplex in member:
            if len(simplex) == 1:
                owners.setdefault(next(iter(simplex)), set()).add(label)
    facets = _facets_from_witnesses(frozenset(v) for v in owners.values())
    lookup = dict(zip(labels, family))
    for facet in facets:
        common = None
        for label in facet:
            common = set(lookup[label]) if common is None else common & lookup[label]
        if not common:
            raise InputError("a nerve facet has empty intersection")
    return Nerve(tuple(labels), facets)


def nerve_skeleton_by_intersection(family: Sequence[frozenset], labels: Sequence[Hashable], k: int) -> AbstractComplex:
    """All nerve simplices up to dimension k by depth-first set intersection."""
    out: set[frozenset] = set()
    members = [frozenset(m) for m in family]

    def grow(chosen: tuple[int, ...], common: frozenset) -> None:
        out.add(frozenset(labels[i] for i in chosen))
        if len(chosen) == k + 1:
            return
        for j in range(chosen[-1] + 1, len(members)):
            nxt = common & members[j]
            if nxt:
                grow(chosen + (j,), nxt)

    for i, m in enumerate(members):
        if m:
            grow((i,), m)
    return AbstractComplex(frozenset(out))


def retraction_cover(setting: SimplicialSetting) -> tuple[list[frozenset], list[frozenset[int]]]:
    """br of cl(B) ∩ |S-hat| for each B in S-hat: chains of S-hat faces of B."""
    labels = sorted(setting.s_hat, key=lambda s: (len(s), sorted(s)))
    family = []
    for b in labels:
        faces = s_faces(setting, b)
        chains = _closure(_maximal_chains(faces))
        family.append(frozenset(chains))
    return family, labels


def _maximal_chains(faces: Sequence[frozenset[int]]) -> list[frozenset]:
    out: list[frozenset] = []

    def extend(chain: tuple) -> None:
        nxt = [f for f in faces if f < chain[-1]]
        if not nxt:
            out.append(frozenset(chain))
            return
        for f in nxt:
            extend(chain + (f,))

    tops = [f for f in faces if not any(f < g for g in faces)]
    for top in tops:
        extend((top,))
    return out


# T as a cell complex, and components


def t_cell_complex(approx: Approximation) -> CellComplex:
    """Cells of the arrangement of the affine members of P' that lie in T (planar families)."""
    from .arrangement import build_arrangement

    n = approx.source.nvars
    if n > 2:
        raise InputError("T cells are enumerated for planar families only")
    lines = []
    for h in approx.p_prime:
        f = h.affine_part()
        if f is not None:
            lines.append(f)
    arrangement = build_arrangement(lines, n, min_radius=approx.params.r + 1)
    keep = [c for c in arrangement.cells if not c.on_box and approx.contains(c.sample)]
    ids = {c.index for c in keep}
    faces = {}
    for c in keep:
        closure = arrangement.closure(c.index)
        if not closure <= ids:
            raise InputError("T is not closed in the arrangement")
        faces[c.index] = frozenset(closure)
    return CellComplex(
        tuple(sorted(ids)),
        {c.index: c.dimension for c in keep},
        faces,
        {c.index: c.vertices for c in keep},
    )


def t_subdivision(approx: Approximation) -> Subdivision:
    return centroidal_realization(t_cell_complex(approx))


def pieces_nerve(approx: Approximation, k: int) -> AbstractComplex:
    """Nerve of the closed convex pieces of T up to dimension k, by exact feasibility."""
    pieces = [p for p in approx.pieces]
    out: set[frozenset] = set()

    def grow(chosen: tuple[int, ...]) -> None:
        out.add(frozenset(chosen))
        if len(chosen) == k + 1:
            return
        for j in range(chosen[-1] + 1, len(pieces)):
            if pieces_meet(approx, [pieces[i] for i in chosen + (j,)]):
                grow(chosen + (j,))

    for i in range(len(pieces)):
        if pieces_meet(approx, [pieces[i]]):
            grow((i,))
    return AbstractComplex(frozenset(out))


def _union_find(items: Sequence[Hashable], linked: Iterable[tuple[Hashable, Hashable]]) -> list[frozenset]:
    parent = {x: x for x in items}

    def find(x: Hashable) -> Hashable:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in linked:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    groups: dict[Hashable, set] = {}
    for x in items:
        groups.setdefault(find(x), set()).add(x)
    return sorted((frozenset(g) for g in groups.values()), key=lambda g: sorted(map(repr, g)))


def t_components(approx: Approximation) -> list[frozenset[int]]:
    """Connected components of T as sets of piece indices (closed convex pieces chain together)."""
    live = [i for i, p in enumerate(approx.pieces) if pieces_meet(approx, [p])]
    links = [(i, j) for i, j in combinations(live, 2) if pieces_meet(approx, [approx.pieces[i], approx.pieces[j]])]
    return _union_find(live, links)


def s_components(complex_: SimplicialComplex, in_s: Iterable[frozenset[int]]) -> list[frozenset[frozenset[int]]]:
    """Connected components of a union of open simplices: linked when one is a face of the other."""
    in_s = sorted(in_s, key=lambda s: (len(s), sorted(s)))
    members = set(in_s)
    links = []
    for s in in_s:
        for k in range(1, len(s)):
            for face in combinations(sorted(s), k):
                if frozenset(face) in members:
                    links.append((frozenset(face), s))
    return _union_find(in_s, links)


def _piece_box(approx: Approximation, piece: Piece) -> list[tuple[Fraction, Fraction]] | None:
    """Exact bounding box of a bounded piece from its vertices; None when no box is certified."""
    if not piece_is_bounded(approx, piece, approx.params.r):
        return None
    points = piece_vertices(approx, piece)
    if not points:
        return None
    return [(min(p[a] for p in points), max(p[a] for p in points)) for a in range(approx.source.nvars)]


def _piece_meets_enlarged_simplex(approx: Approximation, piece: Piece, points: Sequence[Point], radius: Fraction) -> bool:
    """Does the piece meet the closed simplex thickened by the sup-norm ball of the radius?"""
    n = approx.source.nvars
    q = len(points)
    dim = n + q
    constraints = []
    for c in approx.piece_constraints(piece):
        constraints.append(LinearConstraint(tuple(c.coefficients) + (Fraction(0),) * q, c.constant, c.relation))
    for i in range(q):
        constraints.append(LinearConstraint(tuple(Fraction(0) for _ in range(n)) + tuple(Fraction(int(j == i)) for j in range(q)), Fraction(0), ">="))
    constraints.append(LinearConstraint((Fraction(0),) * n + (Fraction(1),) * q, Fraction(-1), "="))
    for axis in range(n):
        # |x_axis - sum_i w_i p_i[axis]| <= radius
        row = tuple(Fraction(int(j == axis)) for j in range(n)) + tuple(-p[axis] for p in points)
        constraints.append(LinearConstraint(tuple(-a for a in row), radius, ">="))
        constraints.append(LinearConstraint(row, radius, ">="))
    return linear_feasible(constraints, dim)


@dataclass(frozen=True)
class ComponentPairing:
    t_components: tuple[frozenset[int], ...]
    s_components: tuple[frozenset[frozenset[int]], ...]
    pairing: Mapping[int, int]
    bijective: bool
    equivariant: bool | None


def component_pairing(
    approx: Approximation,
    complex_: SimplicialComplex,
    in_s: Iterable[frozenset[int]],
    group: ReflectionGroup | None = None,
) -> ComponentPairing:
    """Pair each T component with the S components whose eps-enlargement it meets."""
    in_s = frozenset(in_s)
    tcs = t_components(approx)
    scs = s_components(complex_, in_s)
    radius = approx.params.eps_max
    boxes = [_piece_box(approx, piece) for piece in approx.pieces]

    def meets_simplex(p: int, s: frozenset[int]) -> bool:
        points = complex_.points(s)
        box = boxes[p]
        if box is not None:
            for axis, (lo, hi) in enumerate(box):
                coords = [q[axis] for q in points]
                if hi < min(coords) - radius or lo > max(coords) + radius:
                    return False
        return _piece_meets_enlarged_simplex(approx, approx.pieces[p], points, radius)

    meets: dict[int, set[int]] = {}
    for i, tc in enumerate(tcs):
        meets[i] = set()
        for j, sc in enumerate(scs):
            if any(meets_simplex(p, s) for p in sorted(tc) for s in sorted(sc, key=sorted)):
                meets[i].add(j)
    pairing = {i: next(iter(js)) for i, js in meets.items() if len(js) == 1}
    bijective = len(pairing) == len(tcs) == len(scs) and len(set(pairing.values())) == len(scs)
    equivariant = None
    if group is not None and bijective:
        equivariant = True
        piece_index = {p: i for i, p in enumerate(approx.pieces)}
        t_of_piece = {p: i for i, tc in enumerate(tcs) for p in tc}
        s_of_simplex = {s: j for j, sc in enumerate(scs) for s in sc}
        for g in group.generator_elements():
            perm = complex_.vertex_permutation(g.apply)
            if perm is None:
                raise InputError(f"{g.label()} does not preserve the triangulation")
            for i, tc in enumerate(tcs):
                p = min(tc)
                image_piece = piece_image(approx, approx.pieces[p], g)
                gi = t_of_piece[piece_index[image_piece]]
                s = min(scs[pairing[i]], key=sorted)
                gs = s_of_simplex[frozenset(perm[v] for v in s)]
                if pairing[gi] != gs:
                    equivariant = False
    return ComponentPairing(tuple(tcs), tuple(scs), pairing, bijective, equivariant)
