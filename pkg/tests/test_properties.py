from fractions import Fraction as F
from hypothesis import given, settings
from hypothesis import strategies as st

from equivapprox.geometry import AffineFunctional
from equivapprox.gv_construction import KBRegionSpec, kb_membership, realizable_sign_vectors
from equivapprox.homology_rep import ChainComplex, betti_numbers, hook_length_dimension, partitions
from equivapprox.triangulation import SamplePosition, tau_segment_map

import oracles

facet_lists = st.lists(st.frozensets(st.integers(0, 6), min_size=1, max_size=4), min_size=1, max_size=8)


def _complex(facets: list[frozenset[int]]) -> set[frozenset[int]]:
    return oracles.closure(facets)


@settings(max_examples=60, deadline=None)
@given(facet_lists)
def test_boundary_squares_to_zero(facets: list[frozenset[int]]) -> None:
    chains = ChainComplex(_complex(facets))
    for k in range(2, chains.dimension + 1):
        upper = chains.boundary_matrix(k)
        lower = chains.boundary_matrix(k - 1)
        product = [[sum(lower[i][j] * upper[j][c] for j in range(len(upper))) for c in range(len(upper[0]))] for i in range(len(lower))]
        assert all(x == 0 for row in product for x in row)


@settings(max_examples=60, deadline=None)
@given(facet_lists)
def test_euler_characteristic_and_oracle(facets: list[frozenset[int]]) -> None:
    simplices = _complex(facets)
    chains = ChainComplex(simplices)
    b = betti_numbers(chains)
    assert sum((-1) ** k * x for k, x in enumerate(b)) == sum((-1) ** (len(s) - 1) for s in simplices)
    assert list(b) == oracles.betti(simplices)


unit = st.fractions(min_value=F(1, 128), max_value=F(127, 128), max_denominator=128)


@st.composite
def kb_cases(draw):
    size = draw(st.integers(2, 3))
    K = frozenset(range(size))
    weights = [draw(st.integers(1, 60)) for _ in range(size)]
    total = sum(weights)
    t = {v: F(w, total) for v, w in zip(sorted(K), weights)}
    B = frozenset(draw(st.sets(st.sampled_from(sorted(K)), min_size=1, max_size=size)))
    core = tuple(sorted(draw(st.sets(st.sampled_from(sorted(B)), min_size=1, max_size=len(B)))))
    return K, B, core, t, draw(unit), draw(unit), draw(unit), draw(unit)


@settings(max_examples=400, deadline=None)
@given(kb_cases())
def test_kb_intersection_law(case) -> None:
    K, B, core, t, d1, e1, d2, e2 = case
    first = kb_membership(t, KBRegionSpec(K, B, core, d1, e1))
    second = kb_membership(t, KBRegionSpec(K, B, core, d2, e2))
    both = kb_membership(t, KBRegionSpec(K, B, core, max(d1, d2), min(e1, e2)))
    assert (first and second) == both


@settings(max_examples=400, deadline=None)
@given(kb_cases())
def test_kb_union_is_contained_in_loosest_region(case) -> None:
    K, B, core, t, d1, e1, d2, e2 = case
    either = kb_membership(t, KBRegionSpec(K, B, core, d1, e1)) or kb_membership(t, KBRegionSpec(K, B, core, d2, e2))
    if either:
        assert kb_membership(t, KBRegionSpec(K, B, core, min(d1, d2), max(e1, e2)))


def test_kb_union_equality_counterexample() -> None:
    """The loosest region can hold a point that neither region holds."""
    K, B, core = frozenset({0, 1, 2}), frozenset({0, 1}), (0,)
    t = {0: F(15, 100), 1: F(72, 100), 2: F(13, 100)}
    assert not kb_membership(t, KBRegionSpec(K, B, core, F(1, 10), F(1, 10)))
    assert not kb_membership(t, KBRegionSpec(K, B, core, F(2, 10), F(3, 10)))
    assert kb_membership(t, KBRegionSpec(K, B, core, F(1, 10), F(3, 10)))


small = st.integers(-3, 3)


@st.composite
def line_families(draw):
    lines = []
    for _ in range(draw(st.integers(1, 4))):
        a, b = draw(small), draw(small)
        if a == 0 and b == 0:
            a = 1
        lines.append((F(draw(small)), F(a), F(b)))
    return lines


@settings(max_examples=60, deadline=None)
@given(line_families())
def test_sign_vectors_match_brute_force(lines) -> None:
    functionals = [AffineFunctional(c, (a, b)) for c, a, b in lines]
    assert set(realizable_sign_vectors(functionals, 2)) == oracles.realizable_signs_brute(lines)


@st.composite
def sample_layouts(draw):
    k = draw(st.integers(0, 4))
    points = sorted({F(draw(st.integers(-20, 20)), draw(st.integers(1, 4))) for _ in range(k)})
    positions = []
    for slot in range(len(points) + 1):
        positions += [SamplePosition("between", slot)] * draw(st.integers(0, 3))
        if slot < len(points) and draw(st.booleans()):
            positions.append(SamplePosition("equals", slot))
    return positions, points


@settings(max_examples=200, deadline=None)
@given(sample_layouts())
def test_tau_is_strictly_increasing_and_fixes_points(layout) -> None:
    positions, points = layout
    images = tau_segment_map(positions, points)
    assert all(a < b for a, b in zip(images, images[1:]))
    for p, image in zip(positions, images):
        if p.kind == "equals":
            assert image == points[p.index]
        elif points:
            lower = points[p.index - 1] if p.index > 0 else None
            upper = points[p.index] if p.index < len(points) else None
            assert (lower is None or image > lower) and (upper is None or image < upper)


@settings(max_examples=6, deadline=None)
@given(st.integers(1, 6))
def test_dimension_squares_sum_to_order(n: int) -> None:
    from math import factorial

    assert sum(hook_length_dimension(s) ** 2 for s in partitions(n)) == factorial(n)


def test_sign_oracle_on_crossing_lines() -> None:
    # guard on the brute-force oracle itself: two crossing lines give 9 faces
    assert len(oracles.realizable_signs_brute([(F(0), F(1), F(0)), (F(0), F(0), F(1))])) == 9
