from fractions import Fraction as F

from equivapprox.geometry import AffineFunctional
from equivapprox.reflection_group import generate_group
from equivapprox.simplicial import (
    AbstractComplex,
    CellComplex,
    ComplexCertificate,
    ComplexViolation,
    DeltaAtom,
    FacePoset,
    MarkedComplex,
    SimplicialComplex,
    barycentric_retraction,
    barycentric_subdivision,
    centroidal_realization,
    check_symmetric_complex,
    face_poset_and_flags,
    mark_and_core,
    order_complex,
    retracting_homotopy,
    separability_marking,
    validate_complex,
)

TRIANGLE = SimplicialComplex.from_facets([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])
EDGE = SimplicialComplex.from_facets([(0, 0), (2, 0)], [(0, 1)])


def test_validate_complex() -> None:
    assert isinstance(validate_complex(TRIANGLE), ComplexCertificate)
    empty = SimplicialComplex((), frozenset())
    assert isinstance(validate_complex(empty), ComplexCertificate)
    # second triangle shares only half of the edge from (0,0) to (2,0)
    bad = SimplicialComplex.from_facets([(0, 0), (2, 0), (0, 1), (1, 0), (1, -1)], [(0, 1, 2), (0, 3, 4)])
    result = validate_complex(bad)
    assert isinstance(result, ComplexViolation)


def test_face_poset_counts() -> None:
    poset = face_poset_and_flags(EDGE)
    assert len(poset.elements) == 3
    assert len(list(poset.flags(1))) == 2
    circle = SimplicialComplex.from_facets([(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 2), (0, 2)])
    poset = face_poset_and_flags(circle)
    assert len(poset.elements) == 6
    assert len(list(poset.flags(1))) == 6
    point = SimplicialComplex.from_facets([(0, 0)], [(0,)])
    assert list(face_poset_and_flags(point).flags(1)) == []


def test_order_complex() -> None:
    chain = FacePoset(("a", "b", "c"), {"a": frozenset({"b", "c"}), "b": frozenset({"c"}), "c": frozenset()})
    assert order_complex(chain).facets() == [frozenset("abc")]
    antichain = FacePoset(("a", "b", "c"), {x: frozenset() for x in "abc"})
    assert sorted(map(sorted, order_complex(antichain).facets())) == [["a"], ["b"], ["c"]]
    path = order_complex(face_poset_and_flags(EDGE))
    assert len(path.of_dimension(1)) == 2 and len(path.of_dimension(0)) == 3


def test_barycentric_subdivision_counts() -> None:
    sub = barycentric_subdivision(EDGE)
    assert len(sub.complex.of_dimension(1)) == 2
    assert (F(1), F(0)) in sub.complex.vertices
    once = barycentric_subdivision(TRIANGLE)
    assert len(once.complex.of_dimension(2)) == 6
    twice = barycentric_subdivision(once.complex)
    assert len(twice.complex.of_dimension(2)) == 36


def test_centroidal_realization_of_square() -> None:
    corners = [(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1))]
    edges = [("e", i) for i in range(4)]
    verts = [("v", i) for i in range(4)]
    cells = tuple(verts + edges + ["sq"])
    dims = {**{v: 0 for v in verts}, **{e: 1 for e in edges}, "sq": 2}
    faces = {v: frozenset({v}) for v in verts}
    for i, e in enumerate(edges):
        faces[e] = frozenset({e, verts[i], verts[(i + 1) % 4]})
    faces["sq"] = frozenset(cells)
    corner_map = {v: (corners[v[1]],) for v in verts}
    for i, e in enumerate(edges):
        corner_map[e] = (corners[i], corners[(i + 1) % 4])
    corner_map["sq"] = tuple(corners)
    square = CellComplex(cells, dims, faces, corner_map)
    realized = centroidal_realization(square)
    assert (F(1, 2), F(1, 2)) in realized.complex.vertices
    # flags through the center: each edge contributes two triangles
    assert len(realized.complex.of_dimension(2)) == 8
    fan = centroidal_realization(square, AbstractComplex.from_facets([("sq", e, verts[i]) for i, e in enumerate(edges)]))
    assert len(fan.complex.of_dimension(2)) == 4


def test_edge_realization_matches_subdivision() -> None:
    realized = centroidal_realization(EDGE.cell_complex())
    assert set(realized.complex.vertices) == set(barycentric_subdivision(EDGE).complex.vertices)


def test_check_symmetric_complex() -> None:
    flip = generate_group([AffineFunctional.linear(1, 0)])
    sym = SimplicialComplex.from_facets([(-1, 0), (1, 0)], [(0, 1)])
    assert check_symmetric_complex(sym, flip)
    asym = SimplicialComplex.from_facets([(0, 0), (1, 0)], [(0, 1)])
    assert not check_symmetric_complex(asym, flip)
    assert check_symmetric_complex(SimplicialComplex((), frozenset()), flip)


def test_core_all_soft_and_all_hard() -> None:
    sub = barycentric_subdivision(TRIANGLE)
    top = max(sub.complex.simplices, key=len)
    soft = MarkedComplex.all_soft(TRIANGLE, TRIANGLE.simplices)
    assert mark_and_core(soft, sub, top) == sub.ordered(top)[:1]
    hard = MarkedComplex.all_hard(TRIANGLE, TRIANGLE.simplices)
    assert set(mark_and_core(hard, sub, top)) == set(top)


def test_core_stops_at_first_soft_pair() -> None:
    sub = barycentric_subdivision(TRIANGLE)
    top = max(sub.complex.simplices, key=len)
    b0, b1, b2 = (sub.vertex_cells[v] for v in sub.ordered(top))
    marking = MarkedComplex(TRIANGLE, frozenset(TRIANGLE.simplices), frozenset({(b1, b0)}))
    assert mark_and_core(marking, sub, top) == sub.ordered(top)[:2]


def test_separability_marking() -> None:
    y = AffineFunctional.linear(0, 1)
    in_s = frozenset(TRIANGLE.simplices)
    closed = separability_marking(TRIANGLE, in_s, [[DeltaAtom(y, F(0), ">=")]])
    origin, tri = frozenset({0}), frozenset({0, 1, 2})
    assert closed.is_hard(origin, tri)
    open_ = separability_marking(TRIANGLE, in_s, [[DeltaAtom(y, F(1), ">=")]])
    assert not open_.is_hard(frozenset({0, 1}), tri)
    assert open_.is_hard(frozenset({2}), tri)


def test_barycentric_retraction() -> None:
    cells = EDGE.cell_complex()
    whole = barycentric_retraction(cells, cells.cells)
    assert len(whole.of_dimension(1)) == 2
    open_edge = barycentric_retraction(cells, [frozenset({0, 1})])
    assert open_edge.simplices == frozenset({frozenset({frozenset({0, 1})})})
    assert barycentric_retraction(cells, []).simplices == frozenset()


def test_retracting_homotopy() -> None:
    cells = EDGE.cell_complex()
    edge = frozenset({0, 1})
    quarter = (F(1, 2), F(0))
    assert retracting_homotopy(0, quarter, cells, [edge]) == (F(1), F(0))
    assert retracting_homotopy(1, quarter, cells, [edge]) == quarter
    midpoint = (F(1), F(0))
    for t in (F(0), F(1, 3), F(1)):
        assert retracting_homotopy(t, midpoint, cells, [edge]) == midpoint
