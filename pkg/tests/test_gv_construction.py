from fractions import Fraction as F
from itertools import product

import pytest

from equivapprox.geometry import AffineFunctional, InputError, Polynomial
from equivapprox.gv_construction import (
    ApproxParams,
    Atom,
    KBRegionSpec,
    PFormula,
    SignTuple,
    bound_in_ball,
    build_approximation,
    build_family_formulas,
    conj,
    cw_cells,
    disj,
    kb_membership,
    nerve_of_cover,
    nerve_of_v,
    point_in_v,
    realizable_sign_vectors,
    retraction_cover,
    sign_decomposition,
    simplicial_setting,
    v_region_cells,
    vb_intersection,
    vpp_membership,
)
from equivapprox.simplicial import MarkedComplex, SimplicialComplex, barycentric_subdivision

X = Polynomial.parse("x", 1)


def _one_var(tree) -> PFormula:
    return PFormula((X,), tree)


def test_sign_decomposition_small_cases() -> None:
    assert [t.signs() for t in sign_decomposition(_one_var(Atom(0, ">"))).tuples] == [(1,)]
    either = _one_var(disj(Atom(0, "="), Atom(0, "<")))
    assert sorted(t.signs() for t in sign_decomposition(either).tuples) == [(-1,), (0,)]
    two = PFormula((X, Polynomial.parse("-x", 1)), conj(Atom(0, ">"), Atom(1, ">")))
    assert sign_decomposition(two).tuples == ()


def test_family_formulas() -> None:
    pos = SignTuple.from_signs((1,))
    s_delta, s_delta_eps = build_family_formulas(pos, F(1, 10), F(1, 4))
    assert [(b.relation, b.shift) for b in s_delta] == [(">=", F(-1, 10))]
    zero = SignTuple.from_signs((0,))
    _, band = build_family_formulas(zero, F(1, 10), F(1, 4))
    assert sorted((b.relation, b.shift) for b in band) == [("<=", F(-1, 4)), (">=", F(1, 4))]
    neg = SignTuple.from_signs((-1,))
    s_delta, _ = build_family_formulas(neg, F(1, 10), F(1, 4))
    assert [(b.relation, b.shift) for b in s_delta] == [("<=", F(1, 10))]


def _params(m: int = 1) -> ApproxParams:
    return ApproxParams.tower(m, 2)


def test_positive_set_collapses_to_smallest_delta() -> None:
    # S = {0 < x <= 1}: positive atoms become h >= delta_j, the zero atom a band of width eps_j,
    # and the nested levels collapse to [delta_0, 1 + eps_m]
    params = _params()
    formula = PFormula((X, Polynomial.parse("1 - x", 1)), conj(Atom(0, ">"), Atom(1, ">=")))
    approx = build_approximation(formula, params)
    low, high = params.delta[0], 1 + params.eps[-1]
    points = [F(k, 64) for k in range(-70, 140)] + [low, high, low - F(1, 10**6), high + F(1, 10**6)]
    for x in points:
        assert approx.contains((x,)) == (low <= x <= high)
        assert approx.t_formula((x,)) == approx.contains((x,))


def test_zero_set_band_is_largest_eps() -> None:
    params = _params()
    formula = _one_var(Atom(0, "="))
    approx = build_approximation(formula, params)
    for k in range(-64, 65):
        x = F(k, 64)
        assert approx.contains((x,)) == (abs(x) <= params.eps[-1])
        assert approx.t_formula((x,)) == approx.contains((x,))


def test_p_prime_count() -> None:
    approx = build_approximation(_one_var(Atom(0, "=")), ApproxParams.tower(1, 2))
    assert len(approx.p_prime) == approx.emitted_count == 16
    assert approx.stated_count == 8 and approx.count_discrepancy


def test_bound_in_ball() -> None:
    formula = _one_var(Atom(0, "="))
    bounded = bound_in_ball(formula, 2)
    assert bounded.formula.polynomials[-1] == Polynomial.parse("4 - x^2", 1)
    assert bounded.already_bounded
    unbounded = bound_in_ball(_one_var(Atom(0, ">")), 2)
    assert not unbounded.already_bounded
    with pytest.raises(InputError):
        bound_in_ball(formula, 0)


def test_params_ordering_rejected_with_pair() -> None:
    with pytest.raises(InputError, match="eps\\[0\\].*delta\\[0\\]"):
        ApproxParams(1, (F(1, 4), F(1, 2)), (F(1, 8), F(3, 4)), F(2))
    ApproxParams(1, (F(1, 4), F(1, 2)), (F(1, 8), F(3, 4)), F(2), "maintheorem")


def test_realizable_sign_vectors_two_lines() -> None:
    fs = [AffineFunctional.linear(0, 1), AffineFunctional.linear(1, -1)]
    assert len(realizable_sign_vectors(fs, 2)) == 9
    parallel = [AffineFunctional.linear(1, 0), AffineFunctional(F(-1), (F(1), F(0)))]
    assert realizable_sign_vectors(parallel, 2) == [(-1, -1), (0, -1), (1, -1), (1, 0), (1, 1)]


EDGE = frozenset({0, 1})


def test_kb_membership_on_edge() -> None:
    spec = KBRegionSpec(EDGE, frozenset({0}), (0,), F(1, 10), F(1, 4))
    assert kb_membership({0: F(4, 5), 1: F(1, 5)}, spec)
    assert not kb_membership({0: F(1, 2), 1: F(1, 2)}, spec)
    assert not kb_membership({0: F(1, 20), 1: F(19, 20)}, spec)


def test_vpp_membership() -> None:
    tri = frozenset({0, 1, 2})
    B = frozenset({0, 1})
    assert vpp_membership({0: F(1, 2), 1: F(1, 2), 2: F(0)}, tri, B, F(1, 100))
    assert not vpp_membership({0: F(3, 8), 1: F(3, 8), 2: F(1, 4)}, tri, B, F(1, 4))
    # with a vanishing delta the K_B region reduces to the V'' region
    for t0 in (F(1, 3), F(3, 5), F(4, 5), F(9, 10)):
        t = {0: t0, 1: 1 - t0}
        spec = KBRegionSpec(EDGE, frozenset({0}), (0,), F(1, 10**9), F(1, 4))
        assert kb_membership(t, spec) == vpp_membership(t, EDGE, frozenset({0}), F(1, 4))


def _edge_setting(hard: bool = False):
    base = SimplicialComplex.from_facets([(0,), (1,)], [(0, 1)])
    marking = (MarkedComplex.all_hard if hard else MarkedComplex.all_soft)(base, base.simplices)
    return simplicial_setting(marking, barycentric_subdivision(base))


def _triangle_setting(hard: bool = False):
    base = SimplicialComplex.from_facets([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
    marking = (MarkedComplex.all_hard if hard else MarkedComplex.all_soft)(base, base.simplices)
    return simplicial_setting(marking, barycentric_subdivision(base))


def test_single_vertex_has_one_cell() -> None:
    base = SimplicialComplex.from_facets([(0,)], [(0,)])
    setting = simplicial_setting(MarkedComplex.all_soft(base, base.simplices), barycentric_subdivision(base))
    assert len(cw_cells(setting, F(1, 10), F(1, 4))) == 1


def test_edge_cell_count_against_hand_enumeration() -> None:
    delta, eps = F(1, 10), F(1, 4)
    base = SimplicialComplex.from_facets([(0,), (1,)], [(0, 1)])
    setting = simplicial_setting(MarkedComplex.all_soft(base, base.simplices), barycentric_subdivision(base))
    cells = [d for d in cw_cells(setting, delta, eps) if len(d.K) == 2]
    # open edge t0 in (0,1): breakpoints where t0 or t1 crosses delta or eps, or t0 = t1
    breaks = sorted({delta, eps, 1 - delta, 1 - eps, F(1, 2)})
    samples = breaks + [(a + b) / 2 for a, b in zip([F(0)] + breaks, breaks + [F(1)])]

    def key(t0: F) -> tuple:
        t1 = 1 - t0
        return tuple((v > lvl) - (v < lvl) for v in (t0, t1) for lvl in (delta, eps)) + ((t0 > t1) - (t0 < t1),)

    per_edge = len({key(t) for t in samples})
    assert per_edge == 11
    assert len(cells) == per_edge * len([s for s in setting.complex.simplices if len(s) == 2])


def test_vb_intersection_rules() -> None:
    setting = _edge_setting()
    labels = sorted(setting.s_hat, key=lambda s: (len(s), sorted(s)))
    for b in labels:
        assert vb_intersection(setting, b, b) == b
    edges = [b for b in labels if len(b) == 2]
    shared = edges[0] & edges[1]
    assert vb_intersection(setting, edges[0], edges[1]) == shared


def test_vb_intersection_outside_s_hat() -> None:
    base = SimplicialComplex.from_facets([(0,), (1,), (2,)], [(0, 1), (1, 2)])
    in_s = frozenset(s for s in base.simplices if s != frozenset({1}))
    setting = simplicial_setting(MarkedComplex.all_soft(base, in_s), barycentric_subdivision(base))
    sub = setting.subdivision
    middle = sub.vertex_cells.index(frozenset({1}))
    near = [b for b in setting.s_hat if len(b) == 2 and middle in b]
    left, right = sorted(near, key=sorted)[:2]
    assert vb_intersection(setting, left, right) is None
    # sampling both V_B sets along the shared closed edges confirms the empty intersection
    params = ApproxParams.tower(1, 2)
    for b1, b2 in ((left, right),):
        for K in setting.complex.simplices:
            for t in _grid(K, 24):
                assert not (
                    point_in_v(setting, K, t, params.delta_min, params.eps_max, b1)
                    and point_in_v(setting, K, t, params.delta_min, params.eps_max, b2)
                )


def _grid(K: frozenset[int], n: int) -> list[dict[int, F]]:
    verts = sorted(K)
    out = []
    for combo in product(range(1, n), repeat=len(verts)):
        if sum(combo) == n:
            out.append({v: F(c, n) for v, c in zip(verts, combo)})
    if len(verts) == 1:
        out.append({verts[0]: F(1)})
    return out


def _sampled_nerve(setting, params: ApproxParams, n: int) -> set[frozenset]:
    """Nerve by brute force: label sets realized together at some rational grid point."""
    labels = sorted(setting.s_hat, key=lambda s: (len(s), sorted(s)))
    groups = set()
    for K in setting.complex.simplices:
        for t in _grid(K, n):
            members = frozenset(b for b in labels if point_in_v(setting, K, t, params.delta_min, params.eps_max, b))
            if members:
                groups.add(members)
    return {g for g in groups if not any(g < h for h in groups)}


@pytest.mark.parametrize("hard", [False, True])
def test_nerve_of_v_matches_sampling_on_edge(hard: bool) -> None:
    setting = _edge_setting(hard)
    params = ApproxParams.tower(1, 2)
    assert set(nerve_of_v(setting).facets) == _sampled_nerve(setting, params, 96)


@pytest.mark.parametrize("hard", [False, True])
def test_nerve_of_v_matches_sampling_on_triangle(hard: bool) -> None:
    setting = _triangle_setting(hard)
    params = ApproxParams.tower(1, 2)
    assert set(nerve_of_v(setting).facets) == _sampled_nerve(setting, params, 40)


def test_nerve_of_v_equals_retraction_nerve() -> None:
    for setting in (_edge_setting(), _triangle_setting(), _triangle_setting(True)):
        family, labels = retraction_cover(setting)
        assert nerve_of_v(setting).facets == nerve_of_cover(family, labels).facets


def test_nerve_two_isolated_vertices() -> None:
    base = SimplicialComplex.from_facets([(0,), (1,)], [(0,), (1,)])
    setting = simplicial_setting(MarkedComplex.all_soft(base, base.simplices), barycentric_subdivision(base))
    assert len(nerve_of_v(setting).facets) == 2 and nerve_of_v(setting).dimension == 0


def test_nerve_of_cover_basic() -> None:
    edges = [frozenset({frozenset({a}), frozenset({b}), frozenset({a, b})}) for a, b in ((0, 1), (1, 2), (0, 2))]
    nerve = nerve_of_cover(edges)
    assert sorted(map(sorted, nerve.facets)) == [[0, 1], [0, 2], [1, 2]]
    single = nerve_of_cover([edges[0]])
    assert single.facets == frozenset({frozenset({0})})


def test_v_region_two_routes_agree_and_empty_s() -> None:
    setting = _triangle_setting(True)
    region = v_region_cells(setting, ApproxParams.tower(1, 2))
    assert region.mismatches == ()
    assert region.in_v
    base = SimplicialComplex.from_facets([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
    empty = simplicial_setting(MarkedComplex.all_soft(base, []), barycentric_subdivision(base))
    assert v_region_cells(empty, ApproxParams.tower(1, 2)).in_v == frozenset()
