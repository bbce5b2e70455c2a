import itertools

import pytest

from cubeset import site
from cubeset.site import (
    CubeMap,
    InvalidOperator,
    CompositionError,
    compose,
    connection_op,
    degeneracy_op,
    enumerate_maps,
    face_op,
    factorize,
    generator,
    identity,
    identity_instances,
    recompose,
    surjective_maps,
    vertex_map,
    vertices,
)


def brute_force_maps(m, n):
    """Independent oracle: close the generators under composition by BFS
    over words, comparing tables only."""
    found = {identity(m).table: identity(m)} if m == n else {}
    frontier = [identity(m)]
    seen = {(identity(m).source_dim, identity(m).target_dim, identity(m).table)}
    all_maps = {}
    if m == n:
        all_maps[identity(m).table] = identity(m)
    while frontier:
        nxt = []
        for u in frontier:
            d = u.target_dim
            gens = []
            if d + 1 <= max(m, n):
                gens += [face_op(d + 1, i, e) for i in range(1, d + 2) for e in (0, 1)]
            if d >= 1:
                gens += [degeneracy_op(d, i) for i in range(1, d + 1)]
                gens += [connection_op(d, i, e) for i in range(1, d) for e in (0, 1)]
            for op in gens:
                c = compose(generator(op), u)
                key = (c.source_dim, c.target_dim, c.table)
                if key not in seen:
                    seen.add(key)
                    nxt.append(c)
                    if c.target_dim == n:
                        all_maps[c.table] = c
        frontier = nxt
    return all_maps


def test_face_generator_table():
    g = generator(face_op(2, 1, 0))
    assert g.table == ((0, 0), (0, 1))


def test_neg_connection_is_max():
    g = generator(connection_op(2, 1, 0))
    assert g((1, 0)) == (1,)
    assert g.table == ((0,), (1,), (1,), (1,))


def test_degeneracy_to_point():
    g = generator(degeneracy_op(1, 1))
    assert g.source_dim == 1 and g.target_dim == 0
    assert g.table == ((), ())


def test_operator_bounds():
    with pytest.raises(InvalidOperator):
        face_op(2, 3, 0)
    with pytest.raises(InvalidOperator):
        face_op(2, 0, 1)
    with pytest.raises(InvalidOperator):
        degeneracy_op(1, 2)
    with pytest.raises(InvalidOperator):
        connection_op(1, 1, 0)


def test_connection_after_face_is_identity():
    c = compose(generator(connection_op(2, 1, 0)), generator(face_op(2, 1, 0)))
    assert c == identity(1)


def test_degeneracy_after_face_is_identity():
    c = compose(generator(degeneracy_op(2, 1)), generator(face_op(2, 1, 0)))
    assert c == identity(1)


def test_identity_law():
    f = generator(face_op(3, 2, 1))
    assert compose(identity(3), f) == f
    assert compose(f, identity(2)) == f


def test_composition_dimension_mismatch():
    with pytest.raises(CompositionError):
        compose(generator(face_op(2, 1, 0)), generator(face_op(2, 1, 0)))


@pytest.mark.parametrize("n", range(0, 5))
def test_identity_table_holds_on_maps(n):
    """Every cubical identity instance composes to equal tables (n <= 4)."""
    top = n + 2
    for lhs, rhs in identity_instances(n, top):
        a = identity(n)
        for op in lhs:
            a = compose(a, generator(op))
        b = identity(n)
        for op in rhs:
            b = compose(b, generator(op))
        assert a == b, (lhs, rhs)


def test_monotone():
    for u in enumerate_maps(2, 2):
        assert u.is_monotone()


def test_words_evaluate():
    for u in enumerate_maps(2, 3):
        assert u.word_evaluates()


@pytest.mark.parametrize(
    "m,n,count",
    [(1, 1, 3), (0, 1, 2), (0, 2, 4), (0, 3, 8), (1, 2, 8)],
)
def test_enumerate_counts(m, n, count):
    assert len(enumerate_maps(m, n)) == count


@pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2)])
def test_enumerate_matches_bruteforce(m, n):
    assert set(enumerate_maps(m, n)) == set(brute_force_maps(m, n).values())


def test_enumerate_closed_under_generators():
    maps = set(enumerate_maps(2, 2))
    for u in maps:
        for i in (1, 2):
            for e in (0, 1):
                post = compose(generator(face_op(3, i, e)), u)
                assert post in set(enumerate_maps(2, 3))
        pre = compose(u, generator(degeneracy_op(3, 1)))
        assert pre in set(enumerate_maps(3, 2))


def test_factorize_constant_map():
    u = compose(generator(face_op(1, 1, 0)), generator(degeneracy_op(1, 1)))
    fw, s = factorize(u)
    assert [op.index for op in fw] == [1] and fw[0].sign == 0
    assert s == generator(degeneracy_op(1, 1))
    assert recompose(fw, s) == u


def test_factorize_identity():
    fw, s = factorize(identity(2))
    assert fw == () and s == identity(2)


def test_factorize_connection():
    g = generator(connection_op(2, 1, 0))
    fw, s = factorize(g)
    assert fw == () and s == g


def test_factorize_idempotent_and_recomposes():
    for m, n in [(1, 2), (2, 2), (2, 3), (3, 1)]:
        for u in enumerate_maps(m, n):
            fw, s = factorize(u)
            fw2, s2 = factorize(s)
            assert fw2 == ()
            assert s2 == s
            assert recompose(fw, s) == u


def test_vertex_maps():
    for v in vertices(3):
        u = vertex_map(3, v)
        assert u.table == (v,)
        assert u.word_evaluates()


def test_surjective_maps_have_no_constant_coordinate():
    for j, table_map in surjective_maps(3).items():
        for u in table_map.values():
            assert u.constant_coordinates() == []


def test_surjective_counts_low_dims():
    # dimension counts of surjections out of the n-cube: 1, 2, 6 for n = 0,1,2
    assert sum(len(v) for v in surjective_maps(0).values()) == 1
    assert sum(len(v) for v in surjective_maps(1).values()) == 2
    assert sum(len(v) for v in surjective_maps(2).values()) == 6


def test_associativity_random_words():
    import random

    rng = random.Random(7)
    pool = list(enumerate_maps(2, 2)) + list(enumerate_maps(2, 3))
    for _ in range(50):
        f = rng.choice(list(enumerate_maps(1, 2)))
        g = rng.choice(list(enumerate_maps(2, 2)))
        h = rng.choice(list(enumerate_maps(2, 2)))
        assert compose(h, compose(g, f)) == compose(compose(h, g), f)
