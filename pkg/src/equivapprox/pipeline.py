"""Fixture loading, the semilinear model, and the end-to-end verification checks."""

from __future__ import annotations

import hashlib
import json
import os
import random
from dataclasses import dataclass, field, fields, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .geometry import AffineFunctional, InputError, format_fraction, to_fraction, to_point
from .gv_construction import (
    ApproxParams,
    Approximation,
    KBRegionSpec,
    PFormula,
    SignDecomposition,
    SimplicialSetting,
    VRegion,
    ball_redundancy_certificate,
    build_approximation,
    component_pairing,
    delta_atoms,
    descriptor_key,
    kb_membership,
    nerve_of_cover,
    nerve_of_v,
    nerve_skeleton_by_intersection,
    nerve_skeleton_by_rule,
    p_prime_report,
    parse_formula,
    parse_params,
    pieces_nerve,
    point_in_v,
    retraction_cover,
    s_faces,
    sign_decomposition,
    simplicial_setting,
    t_subdivision,
    v_region_cells,
)
from .homology_rep import (
    ChainComplex,
    GCharacter,
    betti_numbers,
    character_orthogonality_defects,
    equivariance_check,
    homology_group_character,
    isotypic_multiplicities,
    padded_betti,
    verify_vanishing_bounds,
)
from .reflection_group import ReflectionGroup, generate_group, permutation_group, permutation_of
from .simplicial import SimplicialComplex, Subdivision, barycentric_subdivision, check_symmetric_complex, separability_marking
from .triangulation import (
    FIXTURE_DIR,
    EquivariantTriangulation,
    SemilinearRegion,
    equivariant_triangulation,
    triangulate_semilinear,
)

SEMILINEAR_FIXTURES = ("diamond_interior", "diamond_boundary", "square_boundary")
SAMPLE_COUNT = 10_000
SAMPLE_SEED = 20240917

# Disk worked example: tau on the 1-d sample points, counts, and the column over the base simplex (0, 1).
DISK_TAU = tuple(Fraction(k) for k in (-2, -1, 0, 1, 2))
DISK_POLYHEDRA, DISK_TRIANGLES = 10, 64
DISK_COLUMN = 2
DISK_COLUMN_VERTICES = tuple(
    (Fraction(1, 2), Fraction(y))
    for y in ("-1", "0", "1/2", "3/2", "-1/2", "1/4", "1")
)


# Reports


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: object = None
    detail: object = None


def jsonable(value: object) -> object:
    """Exact, order-stable JSON form: rationals as strings, sets sorted."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(value, Check):
        out = {"name": value.name, "passed": value.passed}
        if value.witness is not None:
            out["witness"] = jsonable(value.witness)
        if value.detail is not None:
            out["detail"] = jsonable(value.detail)
        return out
    if is_dataclass(value) and not isinstance(value, type):
        return {f.name: jsonable(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, Mapping):
        return {_key(k): jsonable(v) for k, v in sorted(value.items(), key=lambda kv: _key(kv[0]))}
    if isinstance(value, (set, frozenset)):
        items = [jsonable(v) for v in value]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _key(k: object) -> str:
    if isinstance(k, str):
        return k
    return json.dumps(jsonable(k), sort_keys=True)


def dumps(report: Mapping) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n"


# Inputs


def read_json(path: str | Path) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"missing file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from exc


def load_fixture(name: str) -> dict:
    return read_json(FIXTURE_DIR / f"{name}.json")


def _linear(raw: Sequence[object]) -> AffineFunctional:
    return AffineFunctional(Fraction(0), to_point(raw))


def parse_group(data: Mapping) -> ReflectionGroup:
    """Either {"permutation": n} or reflection normals with chamber normals (chamber side >= 0)."""
    if not isinstance(data, Mapping):
        raise InputError("group: expected an object")
    if "permutation" in data:
        return permutation_group(int(data["permutation"]))
    if "reflections" not in data:
        raise InputError("group: needs 'reflections' or 'permutation'")
    reflections = [_linear(v) for v in data["reflections"]]
    chamber = [_linear(v) for v in data.get("chamber", data["reflections"])]
    return generate_group(reflections, chamber=chamber)


@dataclass(frozen=True)
class SemilinearFixture:
    name: str
    formula: PFormula
    group: ReflectionGroup | None
    params: ApproxParams


def parse_semilinear_fixture(data: Mapping, ordering: str | None = None) -> SemilinearFixture:
    if "formula" not in data:
        raise InputError("fixture: missing 'formula'")
    formula = parse_formula(data["formula"])
    group = parse_group(data["group"]) if data.get("group") is not None else None
    params = parse_params_spec(data.get("params", {}), ordering)
    return SemilinearFixture(str(data.get("name", "")), formula, group, params)


def parse_params_spec(data: Mapping, ordering: str | None = None) -> ApproxParams:
    """Explicit eps/delta lists, or just m and r for the default geometric tower."""
    if not isinstance(data, Mapping) or "m" not in data or "r" not in data:
        raise InputError("params: need at least 'm' and 'r'")
    if "eps" in data or "delta" in data:
        return parse_params(data, ordering)
    return ApproxParams.tower(int(data["m"]), to_fraction(data["r"]), ordering=ordering or data.get("ordering", "thm110"))


def load_semilinear_fixture(name: str, ordering: str | None = None) -> SemilinearFixture:
    data = load_fixture(name)
    fixture = parse_semilinear_fixture(data, ordering)
    return SemilinearFixture(name, fixture.formula, fixture.group, fixture.params)


@dataclass(frozen=True)
class ComplexFixture:
    name: str
    complex: SimplicialComplex
    group: ReflectionGroup | None
    degree: int | None


def parse_complex(data: Mapping) -> ComplexFixture:
    try:
        vertices = tuple(to_point(v) for v in data["vertices"])
        facets = [[int(i) for i in s] for s in data["simplices"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"complex: {exc}") from exc
    for s in facets:
        if any(not 0 <= i < len(vertices) for i in s):
            raise InputError(f"complex: simplex {s} refers to a missing vertex")
    group = parse_group(data["group"]) if data.get("group") is not None else None
    degree = int(data["degree"]) if data.get("degree") is not None else None
    return ComplexFixture(str(data.get("name", "")), SimplicialComplex.from_facets(vertices, facets), group, degree)


def complex_json(complex_: SimplicialComplex) -> dict:
    return {
        "vertices": [list(p) for p in complex_.vertices],
        "simplices": sorted((sorted(s) for s in complex_.simplices), key=lambda s: (len(s), s)),
    }


# Memoized subdivisions


def _cache_dir() -> Path | None:
    path = os.environ.get("EQUIVAPPROX_CACHE")
    return Path(path) if path else None


def cached_barycentric_subdivision(complex_: SimplicialComplex) -> Subdivision:
    """Barycentric subdivision, memoized as JSON under EQUIVAPPROX_CACHE when set."""
    directory = _cache_dir()
    if directory is None:
        return barycentric_subdivision(complex_)
    key = hashlib.sha256(json.dumps(jsonable(complex_json(complex_)), sort_keys=True).encode()).hexdigest()
    path = directory / f"subdivision-{key}.json"
    if path.exists():
        data = read_json(path)
        vertices = tuple(to_point(v) for v in data["vertices"])
        simplices = frozenset(frozenset(s) for s in data["simplices"])
        cells = tuple(frozenset(c) for c in data["vertex_cells"])
        dims = {c: len(c) - 1 for c in cells}
        return Subdivision(SimplicialComplex(vertices, simplices), cells, dims)
    sub = barycentric_subdivision(complex_)
    directory.mkdir(parents=True, exist_ok=True)
    data = complex_json(sub.complex)
    data["vertex_cells"] = [sorted(c) for c in sub.vertex_cells]
    path.write_text(json.dumps(jsonable(data), sort_keys=True))
    return sub


# The semilinear model


def _closed_sign_set_member(functionals: Sequence[AffineFunctional], decomposition: SignDecomposition) -> Callable:
    rows = [t.signs() for t in decomposition.tuples]

    def contains(point: Sequence[Fraction]) -> bool:
        values = [f(point) for f in functionals]
        return any(all((s == 0 and v == 0) or (s > 0 and v >= 0) or (s < 0 and v <= 0) for s, v in zip(signs, values)) for signs in rows)

    return contains


@dataclass(frozen=True)
class SemilinearModel:
    fixture: SemilinearFixture
    functionals: tuple[AffineFunctional, ...]
    decomposition: SignDecomposition
    closure: SemilinearRegion
    region: SemilinearRegion
    triangulation: EquivariantTriangulation
    in_s: frozenset[frozenset[int]]
    setting: SimplicialSetting

    @property
    def complex(self) -> SimplicialComplex:
        return self.triangulation.result.complex

    @property
    def subdivision(self) -> Subdivision:
        return self.setting.subdivision

    @property
    def group(self) -> ReflectionGroup:
        return self.fixture.group

    def s_retraction(self) -> list[frozenset[int]]:
        """Simplices of the subdivision whose vertices all lie in cells of S: a subcomplex equivalent to S."""
        cells = self.subdivision.vertex_cells
        return [s for s in self.subdivision.complex.simplices if all(cells[v] in self.in_s for v in s)]


@dataclass(frozen=True)
class SemilinearTriangulation:
    functionals: tuple[AffineFunctional, ...]
    decomposition: SignDecomposition
    closure: SemilinearRegion
    region: SemilinearRegion
    triangulation: EquivariantTriangulation
    in_s: frozenset[frozenset[int]]


def semilinear_triangulation(fixture: SemilinearFixture) -> SemilinearTriangulation:
    """Symmetric triangulation of the closure of S with S as a union of open simplices."""
    formula = fixture.formula
    functionals = []
    for h in formula.polynomials:
        f = h.affine_part()
        if f is None:
            raise InputError(f"{fixture.name}: {h} is not affine; the model needs a semilinear set")
        functionals.append(f)
    if fixture.group is None:
        raise InputError(f"{fixture.name}: the model needs a group with a chamber")
    decomposition = sign_decomposition(formula)
    closure = SemilinearRegion(tuple(functionals), _closed_sign_set_member(functionals, decomposition), "closure")
    region = SemilinearRegion(tuple(functionals), formula, "S")
    base = triangulate_semilinear(closure, list(fixture.group.chamber), {"S": region})
    glued = equivariant_triangulation(base, fixture.group, [closure, region])
    return SemilinearTriangulation(tuple(functionals), decomposition, closure, region, glued, glued.result.adaptedness["S"])


def semilinear_model(fixture: SemilinearFixture) -> SemilinearModel:
    tri = semilinear_triangulation(fixture)
    family = [delta_atoms(t, tri.functionals) for t in tri.decomposition.tuples]
    complex_ = tri.triangulation.result.complex
    marking = separability_marking(complex_, tri.in_s, family)
    setting = simplicial_setting(marking, cached_barycentric_subdivision(complex_))
    return SemilinearModel(fixture, tri.functionals, tri.decomposition, tri.closure, tri.region, tri.triangulation, tri.in_s, setting)


def _is_permutation_group(group: ReflectionGroup) -> bool:
    return all(permutation_of(g) is not None for g in group.elements)


@dataclass(frozen=True)
class HomologySummary:
    betti: tuple[int, ...]
    character: GCharacter
    multiplicities: Mapping | None

    def as_json(self) -> dict:
        out = {"betti": list(self.betti), "character": {str(k): v for k, v in self.character.traces.items()}}
        if self.multiplicities is not None:
            out["multiplicities"] = {f"{k}:{list(shape)}": m for (k, shape), m in sorted(self.multiplicities.items())}
        return out


def homology_summary(vertices: Sequence, simplices: Iterable[frozenset[int]], group: ReflectionGroup, degrees: Sequence[int]) -> HomologySummary:
    simplices = list(simplices)
    betti = betti_numbers(ChainComplex(simplices))
    character = homology_group_character(vertices, simplices, group, degrees=degrees)
    table = None
    if _is_permutation_group(group):
        table = isotypic_multiplicities(character, group.dimension).restricted(degrees)
    return HomologySummary(tuple(betti), character, table)


def _truncated(summary: HomologySummary, m: int) -> tuple:
    traces = {k: dict(summary.character.traces[k]) for k in range(m)}
    return padded_betti(summary.betti, m)[:m], traces, summary.multiplicities


def s_homology(model: SemilinearModel) -> HomologySummary:
    m = model.fixture.params.m
    return homology_summary(model.subdivision.complex.vertices, model.s_retraction(), model.group, list(range(m)))


def t_homology(approx: Approximation, group: ReflectionGroup) -> HomologySummary:
    sub = t_subdivision(approx)
    return homology_summary(sub.complex.vertices, sub.complex.simplices, group, list(range(approx.params.m)))


# Checks per criterion


def check_homology_agreement(model: SemilinearModel, factors: Sequence[object] = (1, Fraction(1, 2), Fraction(1, 4))) -> tuple[list[Check], dict]:
    """Betti numbers and isotypic data of T against S below degree m, for each parameter scaling."""
    fixture = model.fixture
    m = fixture.params.m
    s_summary = s_homology(model)
    s_data = _truncated(s_summary, m)
    checks: list[Check] = []
    detail: dict = {"S": s_summary.as_json(), "T": {}}
    baseline = None
    for factor in factors:
        params = fixture.params.scaled(factor)
        approx = build_approximation(fixture.formula, params, fixture.group)
        try:
            cert = ball_redundancy_certificate(approx)
            checks.append(Check(f"{fixture.name}: ball function redundant (scale {factor})", True, None, {"vertices": cert.vertices_checked}))
        except InputError as exc:
            checks.append(Check(f"{fixture.name}: ball function redundant (scale {factor})", False, str(exc)))
        t_summary = t_homology(approx, fixture.group)
        t_data = _truncated(t_summary, m)
        detail["T"][str(to_fraction(factor))] = t_summary.as_json()
        checks.append(Check(f"{fixture.name}: Betti(T) = Betti(S) below degree m (scale {factor})", t_data[0] == s_data[0], {"S": s_data[0], "T": t_data[0]}))
        same_module = t_data[1] == s_data[1] and t_data[2] == s_data[2]
        checks.append(Check(f"{fixture.name}: same isotypic data for T and S (scale {factor})", same_module, None if same_module else {"S": s_summary.as_json(), "T": t_summary.as_json()}))
        if baseline is None:
            baseline = t_data
            nerve_betti = pieces_nerve_betti(approx)
            checks.append(Check(f"{fixture.name}: Betti(T) from cells = Betti(T) from the nerve of its pieces", nerve_betti == t_data[0], {"cells": t_data[0], "pieces": nerve_betti}))
        else:
            checks.append(Check(f"{fixture.name}: stable under scaling by {factor}", t_data == baseline, None if t_data == baseline else {"scale": factor}))
    return checks, detail


def check_nerves(model: SemilinearModel) -> tuple[list[Check], dict]:
    """Nerve of V against the nerve of the barycentric retractions, and its homology against S."""
    setting = model.setting
    name = model.fixture.name
    m = model.fixture.params.m
    nerve_v = nerve_of_v(setting)
    family, labels = retraction_cover(setting)
    nerve_cover = nerve_of_cover(family, labels)
    checks = [Check(f"{name}: nerve of V equals nerve of the retractions (facets)", nerve_v.facets == nerve_cover.facets, _first_difference(nerve_v.facets, nerve_cover.facets))]
    rule = nerve_skeleton_by_rule(setting, 1).simplices
    inter = nerve_skeleton_by_intersection(family, labels, 1).simplices
    from_facets = nerve_v.skeleton(1).simplices
    agree = rule == inter == from_facets
    checks.append(Check(f"{name}: nerve 1-skeletons agree across three routes", agree, None if agree else _first_difference(rule, inter) or _first_difference(rule, from_facets)))
    skeleton = nerve_v.skeleton(m)
    nerve_betti = padded_betti(betti_numbers(ChainComplex(skeleton.simplices)), m)[:m]
    s_betti = padded_betti(betti_numbers(ChainComplex(model.s_retraction())), m)[:m]
    checks.append(Check(f"{name}: nerve homology equals S homology below degree m", nerve_betti == s_betti, {"nerve": nerve_betti, "S": s_betti}))
    return checks, {"facets": len(nerve_v.facets), "nerve_betti": nerve_betti}


def _first_difference(a: Iterable, b: Iterable) -> object:
    a, b = set(a), set(b)
    extra = sorted(a - b, key=repr)
    missing = sorted(b - a, key=repr)
    if extra:
        return {"only_first": extra[0]}
    if missing:
        return {"only_second": missing[0]}
    return None


def _random_barycentric(rng: random.Random, simplex: Sequence[int]) -> dict[int, Fraction]:
    weights = [rng.randint(1, 97) for _ in simplex]
    total = sum(weights)
    return {v: Fraction(w, total) for v, w in zip(simplex, weights)}


def _random_parameter(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 127), 128)


def check_lattice_and_descriptors(
    model: SemilinearModel, count: int = SAMPLE_COUNT, seed: int = SAMPLE_SEED, region: VRegion | None = None
) -> tuple[list[Check], dict]:
    """K_B union and intersection laws, descriptor uniqueness, and V tagging on sampled points."""
    setting = model.setting
    name = model.fixture.name
    rng = random.Random(seed)
    simplices = sorted(setting.complex.simplices, key=lambda s: (len(s), sorted(s)))
    with_faces = [(K, s_faces(setting, K)) for K in simplices]
    with_faces = [(K, faces) for K, faces in with_faces if faces]
    union_bad = inter_bad = None
    union_count = inter_count = 0
    for _ in range(count):
        K, faces = with_faces[rng.randrange(len(with_faces))]
        B = faces[rng.randrange(len(faces))]
        t = _random_barycentric(rng, sorted(K))
        d1, e1, d2, e2 = (_random_parameter(rng) for _ in range(4))
        core = setting.cores[B]
        a = kb_membership(t, KBRegionSpec(K, B, core, d1, e1))
        b = kb_membership(t, KBRegionSpec(K, B, core, d2, e2))
        union = kb_membership(t, KBRegionSpec(K, B, core, min(d1, d2), max(e1, e2)))
        inter = kb_membership(t, KBRegionSpec(K, B, core, max(d1, d2), min(e1, e2)))
        if (a or b) != union:
            union_count += 1
            if union_bad is None:
                union_bad = {"K": sorted(K), "B": sorted(B), "core": list(core), "t": t, "params": [d1, e1, d2, e2]}
        if (a and b) != inter:
            inter_count += 1
            if inter_bad is None:
                inter_bad = {"K": sorted(K), "B": sorted(B), "core": list(core), "t": t, "params": [d1, e1, d2, e2]}
    checks = [
        Check(f"{name}: K_B union law on {count} samples", union_count == 0, union_bad, {"violations": union_count}),
        Check(f"{name}: K_B intersection law on {count} samples", inter_count == 0, inter_bad, {"violations": inter_count}),
    ]
    params = model.fixture.params
    region = region or v_region_cells(setting, params)
    checks.append(Check(f"{name}: V tagging by pattern agrees with tagging by witness points", not region.mismatches, region.mismatches[0] if region.mismatches else None))
    keys_by_simplex: dict[frozenset[int], dict[tuple, int]] = {}
    for d in region.cells:
        per = keys_by_simplex.setdefault(d.K, {})
        per[d.key] = per.get(d.key, 0) + 1
    unique_bad = v_bad = None
    unique_count = v_count = 0
    for _ in range(count):
        K = simplices[rng.randrange(len(simplices))]
        t = _random_barycentric(rng, sorted(K))
        key = descriptor_key(K, t, region.delta, region.eps)
        if keys_by_simplex.get(K, {}).get(key, 0) != 1:
            unique_count += 1
            if unique_bad is None:
                unique_bad = {"K": sorted(K), "t": t}
        inside = point_in_v(setting, K, t, region.delta, region.eps)
        if inside != (key in region.in_v):
            v_count += 1
            if v_bad is None:
                v_bad = {"K": sorted(K), "t": t}
    checks.append(Check(f"{name}: every sampled point lies in exactly one descriptor cell", unique_count == 0, unique_bad, {"violations": unique_count}))
    checks.append(Check(f"{name}: sampled V membership agrees with descriptor tagging", v_count == 0, v_bad, {"violations": v_count}))
    return checks, {"cells": len(region.cells), "cells_in_v": len(region.in_v)}


def _descriptor_image(key: tuple, perm: Mapping[int, int]) -> tuple:
    K, chain, dsigns, esigns = key
    move = lambda s: frozenset(perm[v] for v in s)  # noqa: E731
    return (move(K), tuple(move(f) for f in chain), frozenset((move(I), s) for I, s in dsigns), frozenset((move(I), s) for I, s in esigns))


def _descriptor_normal(key: tuple) -> tuple:
    K, chain, dsigns, esigns = key
    return (K, chain, frozenset(dsigns), frozenset(esigns))


def check_v_symmetry(model: SemilinearModel, region: VRegion | None = None) -> list[Check]:
    """g(V_B) = V_{g(B)} as descriptor sets, for every generator and every B."""
    setting = model.setting
    region = region or v_region_cells(setting, model.fixture.params)
    ids = {_descriptor_normal(d.key): i for i, d in enumerate(region.cells)}
    per_b = {b: frozenset(ids[_descriptor_normal(k)] for k in keys) for b, keys in region.per_b.items()}
    witness = None
    for g in model.group.generator_elements():
        perm = setting.complex.vertex_permutation(g.apply)
        if perm is None:
            return [Check(f"{model.fixture.name}: g(V_B) = V_g(B) for every generator", False, {"element": g.label()})]
        moved = [ids.get(_descriptor_image(d.key, perm)) for d in region.cells]
        for b, members in per_b.items():
            gb = frozenset(perm[v] for v in b)
            image = frozenset(moved[i] for i in members)
            if image != per_b.get(gb):
                witness = {"element": g.label(), "B": sorted(b)}
                break
        if witness:
            break
    return [Check(f"{model.fixture.name}: g(V_B) = V_g(B) for every generator", witness is None, witness)]


def _act_on_simplex(perms: Mapping[str, Mapping[int, int]]) -> Callable:
    def act(g: str, simplex: frozenset) -> frozenset:
        return frozenset(perms[g][v] for v in simplex)

    return act


def _act_on_labels(perms: Mapping[str, Mapping[int, int]]) -> Callable:
    def act(g: str, labels: frozenset) -> frozenset:
        return frozenset(frozenset(perms[g][v] for v in b) for b in labels)

    return act


def star_cover_map(complex_: SimplicialComplex) -> dict[frozenset[int], frozenset[int]]:
    """phi for the cover by closed vertex stars: simplex -> vertices whose star holds it."""
    simplices = complex_.simplices
    out = {}
    for s in simplices:
        out[s] = frozenset(v for v in range(len(complex_.vertices)) if (s | {v}) in simplices)
    return out


def check_phi_equivariance(name: str, complex_: SimplicialComplex, group: ReflectionGroup) -> list[Check]:
    """Every group image of a simplex is a simplex, and phi commutes with every generator."""
    checks = []
    bad = None
    for g in group.elements:
        for s in complex_.simplices:
            if complex_.image(s, g.apply) is None:
                bad = {"element": g.label(), "simplex": sorted(s)}
                break
        if bad:
            break
    checks.append(Check(f"{name}: g(simplex) is a simplex for all g", bad is None, bad, {"elements": group.order, "simplices": len(complex_.simplices)}))
    perms = {}
    for g in group.generator_elements():
        perm = complex_.vertex_permutation(g.apply)
        if perm is None:
            checks.append(Check(f"{name}: phi commutes with generators", False, {"element": g.label()}))
            return checks
        perms[g.label()] = perm
    phi = star_cover_map(complex_)
    act = _act_on_simplex(perms)
    ok = equivariance_check(phi, list(perms), act, act)
    checks.append(Check(f"{name}: phi commutes with generators (vertex-star cover)", ok, None if ok else {"generators": sorted(perms)}))
    return checks


def check_retraction_phi(model: SemilinearModel) -> list[Check]:
    """phi(sigma) = {B : sigma in br(B~)} commutes with the generators on S-hat."""
    setting = model.setting
    family, labels = retraction_cover(setting)
    members = [frozenset(m) for m in family]
    phi: dict[frozenset[int], frozenset] = {}
    for label, cover in zip(labels, members):
        for s in cover:
            phi.setdefault(s, set()).add(label)
    phi = {s: frozenset(v) for s, v in phi.items()}
    perms = {}
    for g in model.group.generator_elements():
        perm = setting.complex.vertex_permutation(g.apply)
        if perm is None:
            return [Check(f"{model.fixture.name}: phi commutes with generators (retraction cover)", False, {"element": g.label()})]
        perms[g.label()] = perm
    # Simplices of the retraction are chains of faces, so both sides move face by face.
    ok = equivariance_check(phi, list(perms), _act_on_labels(perms), _act_on_labels(perms))
    return [Check(f"{model.fixture.name}: phi commutes with generators (retraction cover)", ok)]


def complex_checks(fixture: ComplexFixture | None = None) -> tuple[list[Check], dict]:
    fixture = fixture or parse_complex(load_fixture("hexagon"))
    group = fixture.group
    cx = fixture.complex
    n = group.dimension
    checks = [Check(f"{fixture.name}: complex is symmetric", check_symmetric_complex(cx, group))]
    character = homology_group_character(cx.vertices, cx.simplices, group)
    table = isotypic_multiplicities(character, n, fixture.degree)
    violations = verify_vanishing_bounds(table, fixture.degree or 2, n)
    checks.append(Check(f"{fixture.name}: vanishing bounds hold", not violations, violations[0] if violations else None))
    defects = [(n_, d) for n_ in range(1, 7) for d in character_orthogonality_defects(n_)]
    checks.append(Check("character tables orthogonal for n <= 6", not defects, defects[0] if defects else None))
    detail = {
        "betti": list(table.betti),
        "multiplicities": {f"{k}:{list(shape)}": m for (k, shape), m in sorted(table.nonzero().items())},
        "character": {str(k): v for k, v in character.traces.items()},
    }
    return checks, detail


def p_prime_checks() -> tuple[list[Check], dict]:
    """The one-function example: emitted versus stated size of P'."""
    formula = parse_formula({"nvars": 1, "polynomials": ["x"], "formula": {"atom": [0, "="]}})
    approx = build_approximation(formula, ApproxParams.tower(1, 1))
    report = p_prime_report(approx)
    checks = [Check("P' size reported with discrepancy flag", approx.count_discrepancy, None, {"emitted": approx.emitted_count, "stated": approx.stated_count})]
    return checks, report


def pairing_checks(fixture: SemilinearFixture | None = None) -> tuple[list[Check], dict]:
    fixture = fixture or load_semilinear_fixture("three_diamonds")
    tri = semilinear_triangulation(fixture)
    approx = build_approximation(fixture.formula, fixture.params, fixture.group)
    pairing = component_pairing(approx, tri.triangulation.result.complex, tri.in_s, fixture.group)
    checks = [
        Check(f"{fixture.name}: component pairing is a bijection", pairing.bijective, None if pairing.bijective else {"pairing": dict(pairing.pairing)}),
        Check(f"{fixture.name}: component pairing commutes with the group", bool(pairing.equivariant)),
    ]
    return checks, {"t_components": len(pairing.t_components), "s_components": len(pairing.s_components), "pairing": dict(pairing.pairing)}


def pieces_nerve_betti(approx: Approximation) -> tuple[int, ...]:
    m = approx.params.m
    return padded_betti(betti_numbers(ChainComplex(pieces_nerve(approx, m).simplices)), m)[:m]


# Full run


@dataclass
class StageReport:
    checks: list[Check] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def add(self, key: str, result: tuple[list[Check], object] | list[Check]) -> None:
        if isinstance(result, tuple):
            checks, detail = result
            self.details[key] = detail
        else:
            checks = result
        self.checks.extend(checks)


def run_semilinear_fixture(name: str, ordering: str | None = None, samples: int = SAMPLE_COUNT) -> StageReport:
    return run_semilinear(load_semilinear_fixture(name, ordering), samples)


def run_semilinear(fixture: SemilinearFixture, samples: int = SAMPLE_COUNT) -> StageReport:
    name = fixture.name
    model = semilinear_model(fixture)
    report = StageReport()
    report.details["triangulation"] = {
        "simplices": len(model.complex.simplices),
        "in_s": len(model.in_s),
        "subdivision": len(model.setting.complex.simplices),
        "s_hat": len(model.setting.s_hat),
    }
    report.add("homology", check_homology_agreement(model))
    report.add("nerve", check_nerves(model))
    region = v_region_cells(model.setting, fixture.params)
    report.add("samples", check_lattice_and_descriptors(model, samples, region=region))
    report.add("v_symmetry", check_v_symmetry(model, region))
    report.add("phi", check_retraction_phi(model))
    report.add("equivariance", check_phi_equivariance(name, model.complex, fixture.group))
    return report


def _count_check(name: str, got: object, expected: object) -> Check:
    return Check(name, got == expected, None if got == expected else {"got": got, "expected": expected}, {"value": got})


def run_disk_checks() -> StageReport:
    from .triangulation import base_coordinates, load_fixture_description, triangulate_respecting

    report = StageReport()
    description = load_fixture_description("disk")
    result = triangulate_respecting(description)
    tau = base_coordinates(description)
    polyhedra, triangles = len(result.polyhedra_of_dimension(2)), len(result.complex.of_dimension(2))
    report.add("disk_counts", [
        _count_check("disk: 1-d tau map", tau, list(DISK_TAU)),
        _count_check("disk: 2-dimensional polyhedra", polyhedra, DISK_POLYHEDRA),
        _count_check("disk: 2-dimensional simplices", triangles, DISK_TRIANGLES),
    ])
    column = [result.vertex_of_cell(c) for c in result.vertex_cells if c[:2] == ("interval", DISK_COLUMN)]
    expected = sorted(DISK_COLUMN_VERTICES)
    report.add("disk_column", [Check("disk: vertices of the column over (0,1)", sorted(column) == expected, _first_difference(sorted(column), expected))])
    group = parse_group(load_fixture("dihedral8"))
    glued = equivariant_triangulation(result, group)
    report.details["disk"] = {
        "polyhedra_2d": len(result.polyhedra_of_dimension(2)),
        "triangles": len(result.complex.of_dimension(2)),
        "glued_triangles": len(glued.result.complex.of_dimension(2)),
    }
    report.add("disk_equivariance", check_phi_equivariance("dihedral disk", glued.result.complex, group))
    return report


def run_all(ordering: str | None = None, jobs: int = 1, samples: int = SAMPLE_COUNT, fixtures: Sequence[str] = SEMILINEAR_FIXTURES) -> dict:
    """Every verification stage on the shipped fixtures; checks in a stable order."""
    stages: list[tuple[str, Callable[[], StageReport]]] = []
    for name in fixtures:
        stages.append((name, _Stage(run_semilinear_fixture, (name, ordering, samples))))
    stages.append(("disk", _Stage(run_disk_checks, ())))
    stages.append(("hexagon", _Stage(_wrap, (complex_checks, "hexagon"))))
    stages.append(("hexagon_equivariance", _Stage(_hexagon_equivariance, ())))
    stages.append(("p_prime", _Stage(_wrap, (p_prime_checks, "p_prime"))))
    stages.append(("three_diamonds", _Stage(_wrap, (pairing_checks, "pairing"))))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_stage, [s for _, s in stages]))
    else:
        results = [s() for _, s in stages]
    checks: list[Check] = []
    details: dict = {}
    for (name, _), stage in zip(stages, results):
        checks.extend(stage.checks)
        details[name] = stage.details
    return {"checks": checks, "details": details, "passed": all(c.passed for c in checks)}


@dataclass(frozen=True)
class _Stage:
    func: Callable
    args: tuple

    def __call__(self) -> StageReport:
        return self.func(*self.args)


def _run_stage(stage: _Stage) -> StageReport:
    return stage()


def _wrap(func: Callable, key: str) -> StageReport:
    report = StageReport()
    report.add(key, func())
    return report


def _hexagon_equivariance() -> StageReport:
    fixture = parse_complex(load_fixture("hexagon"))
    report = StageReport()
    report.add("hexagon_equivariance", check_phi_equivariance("hexagon", fixture.complex, fixture.group))
    return report
