import itertools

import pytest

from cubeset import site
from cubeset.core import (
    CSetMorphism,
    boundary,
    critical_edge_map,
    cubical_subset,
    disjoint_union,
    empty_cset,
    find_isomorphism,
    geometric_product,
    identity_morphism,
    inclusion_morphism,
    inner_cube,
    inner_open_box,
    op_keys_from,
    open_box,
    pullback,
    pushout,
    quotient,
    search_morphisms,
    standard_cube,
    standard_object,
    tensor_canonical,
)
from cubeset.site import (
    compose,
    degeneracy_op,
    enumerate_maps,
    face_op,
    generator,
    identity,
    vertex_map,
)


def binomial(n, k):
    from math import comb

    return comb(n, k)


@pytest.mark.parametrize("n", range(0, 5))
def test_standard_cube_validates(n):
    assert standard_cube(n).validate() == []


def test_validate_detects_swapped_faces():
    X = standard_cube(2)
    top = identity(2)
    a = X.op(top, ("f", 1, 0))
    b = X.op(top, ("f", 2, 0))
    X.set_op(top, ("f", 1, 0), b)
    X.set_op(top, ("f", 2, 0), a)
    report = X.validate()
    assert any(v[0] == "identity" for v in report)


def test_validate_empty_set():
    assert empty_cset(3).validate() == []


def test_apply_map_representable_is_composition():
    X = standard_cube(2)
    top = identity(2)
    d = generator(face_op(2, 1, 0))
    assert X.apply_map(top, d) == d


def test_apply_map_degenerate_identities():
    X = standard_cube(1)
    v = vertex_map(1, (0,))
    s = generator(degeneracy_op(1, 1))
    d = generator(face_op(1, 1, 0))
    assert X.apply_map(X.apply_map(v, s), d) == v


def test_apply_map_connection_face():
    # γ_{1,0} then ∂_{2,0} is the identity on the edge; the (2,1) face of
    # the connection square is the degeneracy of the target vertex
    X = standard_cube(1, D=2)
    e = identity(1)
    got = X.apply_sequence(e, [site.connection_op(2, 1, 0), face_op(2, 2, 0)])
    assert got == e
    degen = X.apply_sequence(e, [site.connection_op(2, 1, 0), face_op(2, 2, 1)])
    target = X.apply_sequence(e, [face_op(1, 1, 1), degeneracy_op(1, 1)])
    assert degen == target


def test_apply_map_word_independence():
    X = standard_cube(2)
    for u in enumerate_maps(2, 2):
        for x in X.cells[2]:
            direct = X.apply_map(x, u)
            assert direct == compose(x, u)


def test_degeneracy_detection():
    X = standard_cube(2)
    v = vertex_map(2, (0, 0))
    sv = X.op(v, ("s", 1))
    w = X.degeneracy_witness(sv)
    assert w is not None and w[0] == v
    assert X.degeneracy_witness(identity(2)) is None


@pytest.mark.parametrize(
    "n,counts",
    [(0, (1,)), (1, (2, 1)), (2, (4, 4, 1)), (3, (8, 12, 6, 1))],
)
def test_cube_nondegenerate_counts(n, counts):
    X = standard_cube(n)
    assert X.nondegenerate_counts() == counts


def test_boundary_counts():
    B = boundary(2)
    assert B.nondegenerate_counts() == (4, 4, 0)
    assert B.validate() == []


def test_open_box_counts():
    V = open_box(2, 1, 0)
    assert V.nondegenerate_counts() == (4, 3, 0)
    assert V.validate() == []


def test_inner_open_box_vertex_count():
    I, proj = inner_open_box(2, 1, 0)
    assert len(I.cells[0]) == 3
    assert I.validate() == []


def test_inner_cube_counts():
    # collapsing one edge of the square: 3 vertices, 3 edges, 1 square
    I, proj = inner_cube(2, 1, 0)
    assert I.nondegenerate_counts() == (3, 3, 1)
    assert I.validate() == []


def test_quotient_critical_edge_endpoints_merge():
    X = standard_cube(2)
    e = critical_edge_map(2, 1, 0)
    v = X.op(e, ("f", 1, 0))
    Q, proj = quotient(X, [(e, X.op(v, ("s", 1)))])
    assert proj(X.op(e, ("f", 1, 0))) == proj(X.op(e, ("f", 1, 1)))
    assert Q.validate() == []


def test_quotient_order_independent():
    X = standard_cube(2)
    e = critical_edge_map(2, 1, 0)
    v = X.op(e, ("f", 1, 0))
    e2 = critical_edge_map(2, 2, 1)
    v2 = X.op(e2, ("f", 1, 0))
    rels = [(e, X.op(v, ("s", 1))), (e2, X.op(v2, ("s", 1)))]
    Q1, _ = quotient(X, rels)
    Q2, _ = quotient(X, list(reversed(rels)))
    assert [len(c) for c in Q1.cells] == [len(c) for c in Q2.cells]
    assert [sorted(map(str, c)) for c in Q1.cells] == [sorted(map(str, c)) for c in Q2.cells]


def test_geometric_product_interval_interval_is_square():
    X = standard_cube(1, D=2)
    P = geometric_product(X, X)
    assert P.validate() == []
    C = standard_cube(2)
    iso = find_isomorphism(P, C)
    assert iso is not None
    iso.check()


def test_geometric_product_with_empty():
    E = empty_cset(2)
    X = standard_cube(1, D=2)
    P = geometric_product(E, X)
    assert P.size() == 0


def test_geometric_product_face_formula():
    X = standard_cube(1, D=2)
    P = geometric_product(X, X)
    e = identity(1)
    cell = tensor_canonical(X, X, e, e)
    assert P.dim(cell) == 2
    # (e,e)∂_{2,0} = (e, e∂_{1,0})
    got = P.op(cell, ("f", 2, 0))
    want = tensor_canonical(X, X, e, X.op(e, ("f", 1, 0)))
    assert got == want


@pytest.mark.parametrize("m,n", [(1, 1), (1, 2), (2, 1)])
def test_product_nondegenerate_counts(m, n):
    D = m + n
    A = standard_cube(m, D=D)
    B = standard_cube(n, D=D)
    P = geometric_product(A, B)
    for k in range(D + 1):
        assert len(P.nondegenerate(k)) == binomial(m + n, k) * 2 ** (m + n - k)


def test_pushout_wedge():
    I1 = standard_cube(1)
    pt = standard_cube(0, D=1)
    v1 = CSetMorphism(pt, I1, _point_to_vertex(pt, I1, (1,))).check()
    v0 = CSetMorphism(pt, I1, _point_to_vertex(pt, I1, (0,))).check()
    W, a, b = pushout(v1, v0)
    assert len(W.cells[0]) == 3
    assert len(W.nondegenerate(1)) == 2
    assert W.validate() == []


def _point_to_vertex(pt, X, v):
    n = X.dim(max(X.cells[X.D], key=X.sort_key)) if False else None
    # map the point into the vertex v of a standard cube X
    target_n = len(v)
    mapping = {}
    for k, c in pt.all_cells():
        mapping[c] = compose(vertex_map(target_n, v), c)
    return mapping


def test_pushout_collapse_edge_of_square():
    # square with the {1}⊗interval edge collapsed: 3 vertices, 3 edges, 1 square
    sq = standard_cube(2)
    edge = cubical_subset(sq, [generator(face_op(2, 1, 1))])
    pt = standard_cube(0, D=2)
    inc = inclusion_morphism(edge, sq)
    collapse = CSetMorphism(
        edge, pt, {c: pt.cells[edge.dim(c)][0] if False else _pt_cell(pt, edge.dim(c)) for _, c in edge.all_cells()}
    )
    # point has a unique cell in every dimension
    collapse.check()
    P, _, _ = pushout(inc, collapse)
    assert P.nondegenerate_counts() == (3, 3, 1)
    assert P.validate() == []


def _pt_cell(pt, k):
    return pt.cells[k][0]


def test_pushout_along_iso_is_other_leg():
    X = standard_cube(1)
    idm = identity_morphism(X)
    P, injX, injY = pushout(idm, idm)
    assert [len(c) for c in P.cells] == [len(c) for c in X.cells]


def test_pullback_fiber_of_projection():
    I = standard_cube(1, D=2)
    P = geometric_product(I, I)
    pt = standard_cube(0, D=2)
    # projection onto the second factor: collapse first coordinate
    proj = CSetMorphism(
        P,
        I,
        {c: _second_component_map(I, I, c) for _, c in P.all_cells()},
    ).check()
    v = CSetMorphism(pt, I, _point_to_vertex(pt, I, (0,))).check()
    F, pP, ppt = pullback(proj, v)
    iso = find_isomorphism(F, standard_cube(1, D=2))
    assert iso is not None


def _second_component_map(X, Y, cell):
    x, y = cell
    # collapse x to the point, keeping y; the image is y degenerated dim(x) times
    out = y
    for _ in range(X.dim(x)):
        out = Y.op(out, ("s", 1))
    return out


def test_pullback_of_nested_subobjects():
    sq = standard_cube(2)
    bd = boundary(2)
    box = open_box(2, 1, 0)
    f = inclusion_morphism(bd, sq)
    g = inclusion_morphism(box, sq)
    P, pX, pY = pullback(f, g)
    iso = find_isomorphism(P, box)
    assert iso is not None


def test_pullback_against_identity():
    X = standard_cube(2)
    idm = identity_morphism(X)
    P, pX, pY = pullback(idm, idm)
    iso = find_isomorphism(P, X)
    assert iso is not None


def test_find_isomorphism_self():
    X = standard_cube(2)
    iso = find_isomorphism(X, X)
    assert iso is not None
    iso.check()


def test_find_isomorphism_distinguishes():
    assert find_isomorphism(standard_cube(2), boundary(2)) is None


def test_mono_preservation():
    sq = standard_cube(2)
    bd = boundary(2)
    inc = inclusion_morphism(bd, sq)
    # pullback of a mono is a mono
    box = open_box(2, 1, 0)
    inc2 = inclusion_morphism(box, sq)
    P, pX, pY = pullback(inc, inc2)
    assert pY.is_mono()
    # pushout of a mono along any map is a mono
    pt = standard_cube(0, D=2)
    points = cubical_subset(sq, [vertex_map(2, (0, 0)), vertex_map(2, (1, 1))])
    inc3 = inclusion_morphism(points, sq)
    collapse = CSetMorphism(points, pt, {c: _pt_cell(pt, points.dim(c)) for _, c in points.all_cells()}).check()
    P2, iX, iPt = pushout(inc3, collapse)
    assert iPt.is_mono()


def test_search_morphisms_counts_maps_to_interval():
    # maps □¹ -> □¹ are the 3 cube-category maps
    X = standard_cube(1)
    maps = search_morphisms(X, X, find_all=True)
    assert len(maps) == 3


def test_search_morphisms_with_partial():
    X = standard_cube(1)
    e = identity(1)
    maps = search_morphisms(X, X, partial={e: e}, find_all=True)
    assert len(maps) == 1


def test_morphism_check_rejects_bad_assignment():
    X = standard_cube(1)
    v0 = vertex_map(1, (0,))
    v1 = vertex_map(1, (1,))
    bad = {c: c for _, c in X.all_cells()}
    bad[v0] = v1
    bad[v1] = v0
    with pytest.raises(ValueError):
        CSetMorphism(X, X, bad).check()


def test_apply_operator_functorial_on_enumerated_maps():
    X = standard_cube(2)
    for u in enumerate_maps(1, 2):
        for v in enumerate_maps(1, 1):
            uv = compose(u, v)
            for x in X.cells[2]:
                pass
    # presheaf law on the square's top cell across all composable pairs
    top = identity(2)
    for u in enumerate_maps(1, 2):
        got = X.apply_map(top, u)
        for v in enumerate_maps(0, 1):
            assert X.apply_map(got, v) == X.apply_map(top, compose(u, v))


def test_fuzz_quotients_validate():
    import random

    rng = random.Random(11)
    X = standard_cube(2)
    cells1 = X.cells[1]
    for _ in range(12):
        a, b = rng.choice(cells1), rng.choice(cells1)
        Q, _ = quotient(X, [(a, b)])
        assert Q.validate() == []
