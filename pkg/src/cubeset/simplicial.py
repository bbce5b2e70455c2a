"""Truncated simplicial sets and the bridges to cubical sets.

Four translations live here: triangulation (cubes to products of
intervals), its right adjoint by mapping spaces, the cone monad with its
quotient cubes, and the induced functor from cubical sets to simplicial
sets.  Marked variants transport the edge marking through the canonical
edge identifications.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .core import (
    CSetMorphism,
    ConstructionError,
    OperatorTable,
    TruncatedCubicalSet,
    coproduct_many,
    cubical_subset,
    identity_morphism,
    inclusion_morphism,
    pushout,
    quotient,
    search_morphisms,
    standard_cube,
    geometric_product,
    tensor_canonical,
    point_tensor_unit_iso,
)
from .site import CubeMap, enumerate_maps, identity, vertices


class TruncatedSimplicialSet(OperatorTable):
    """A simplicial set truncated at dimension D.

    Operator keys: ('d', i) faces and ('s', i) degeneracies, 0 <= i <= k,
    degeneracies defined while k+1 <= D.
    """

    def op_keys(self, k: int):
        keys = [("d", i) for i in range(k + 1)] if k >= 1 else []
        if k + 1 <= self.D:
            keys += [("s", i) for i in range(k + 1)]
        return keys

    def face_keys(self, k: int):
        return [("d", i) for i in range(k + 1)] if k >= 1 else []

    def _is_up_key(self, key) -> bool:
        return key[0] == "s"

    def identity_instance_keys(self, k: int):
        out = []
        D = self.D
        # (x d_j) d_i = (x d_i) d_(j-1)   for i < j
        if k >= 2:
            for j in range(k + 1):
                for i in range(j):
                    out.append(
                        ((("d", j), ("d", i)), (("d", i), ("d", j - 1)))
                    )
        # (x s_j) s_i = (x s_i) s_(j+1)   for i <= j
        if k + 2 <= D:
            for j in range(k + 1):
                for i in range(j + 1):
                    out.append(
                        ((("s", j), ("s", i)), (("s", i), ("s", j + 1)))
                    )
        # (x s_j) d_i
        if k + 1 <= D:
            for j in range(k + 1):
                for i in range(k + 2):
                    lhs = (("s", j), ("d", i))
                    if i < j:
                        out.append((lhs, (("d", i), ("s", j - 1))))
                    elif i in (j, j + 1):
                        out.append((lhs, ()))
                    else:
                        out.append((lhs, (("d", i - 1), ("s", j))))
        return out


SSetMorphism = CSetMorphism


def _chain_d(chain, i):
    return chain[:i] + chain[i + 1 :]


def _chain_s(chain, i):
    return chain[: i + 1] + chain[i:]


@lru_cache(maxsize=None)
def interval_power(k: int, D: int) -> TruncatedSimplicialSet:
    """The D-truncated n-fold product of the 1-simplex, n = k.

    Simplices are weakly increasing chains of vertices of {0,1}^k.
    """
    S = TruncatedSimplicialSet(D)
    verts = vertices(k)
    for n in range(D + 1):
        for chain in itertools.combinations_with_replacement(verts, n + 1):
            if all(
                all(a <= b for a, b in zip(chain[i], chain[i + 1]))
                for i in range(n)
            ):
                S.add_cell(n, chain)
    for n in range(D + 1):
        for chain in S.cells[n]:
            for key in S.op_keys(n):
                if key[0] == "d":
                    S.set_op(chain, key, _chain_d(chain, key[1]))
                else:
                    S.set_op(chain, key, _chain_s(chain, key[1]))
    return S


def standard_simplex(n: int, D: int | None = None) -> TruncatedSimplicialSet:
    """The n-simplex as chains in the linear order 0 < 1 < … < n."""
    if D is None:
        D = n
    S = TruncatedSimplicialSet(D)
    for m in range(D + 1):
        for chain in itertools.combinations_with_replacement(range(n + 1), m + 1):
            S.add_cell(m, chain)
    for m in range(D + 1):
        for chain in S.cells[m]:
            for key in S.op_keys(m):
                if key[0] == "d":
                    S.set_op(chain, key, _chain_d(chain, key[1]))
                else:
                    S.set_op(chain, key, _chain_s(chain, key[1]))
    return S


def simplicial_product(
    S: TruncatedSimplicialSet, T: TruncatedSimplicialSet
) -> TruncatedSimplicialSet:
    """Level-wise product with componentwise operators."""
    if S.D != T.D:
        raise ConstructionError("product needs equal truncations")
    P = TruncatedSimplicialSet(S.D)
    for k in range(S.D + 1):
        for a in S.cells[k]:
            for b in T.cells[k]:
                P.add_cell(k, (a, b))
    for k in range(S.D + 1):
        for (a, b) in P.cells[k]:
            for key in P.op_keys(k):
                P.set_op((a, b), key, (S.op(a, key), T.op(b, key)))
    return P


# -- triangulation -----------------------------------------------------------


def _nonconstant_chains(k: int, n: int):
    """Chains of length n+1 in {0,1}^k in which every coordinate switches.

    Each coordinate independently climbs 0 -> 1 at one of the n interior
    positions, so there are n^k of them (and none for n = 0 unless k = 0).
    """
    if k == 0:
        yield ((),) * (n + 1)
        return
    if n == 0:
        return
    for switches in itertools.product(range(1, n + 1), repeat=k):
        yield tuple(
            tuple(1 if pos >= s else 0 for s in switches) for pos in range(n + 1)
        )


def _strip_constant(chain):
    """(coordinate j (1-based), value) of a constant coordinate, or None."""
    if not chain or len(chain[0]) == 0:
        return None
    k = len(chain[0])
    for j in range(k):
        vals = {v[j] for v in chain}
        if len(vals) == 1:
            return j + 1, next(iter(vals))
    return None


def _drop_coord(chain, j):
    return tuple(v[: j - 1] + v[j:] for v in chain)


def triangulate(X: TruncatedCubicalSet, out_dim: int | None = None) -> TruncatedSimplicialSet:
    """Triangulation of a cubical set: the coend of interval powers over
    the category of elements of X.

    Cells are normal-form pairs (nondegenerate cube, chain using every
    coordinate); uniqueness of normal forms needs unambiguous
    degeneracy decompositions, which is checked, with a union-find
    fallback otherwise.
    """
    if out_dim is None:
        out_dim = X.D
    if X.ez_unambiguous():
        return _triangulate_normal_form(X, out_dim)
    return _triangulate_union_find(X, out_dim)


def _triangulate_normal_form(X, out_dim):
    def normalize(x, chain):
        while True:
            kx = X.dim(x)
            if kx > 0:
                root, surj = X.ez_decomposition(x)
                if root != x:
                    chain = tuple(surj(v) for v in chain)
                    x = root
                    continue
            sc = _strip_constant(chain)
            if sc is None:
                return (x, chain)
            j, val = sc
            x = X.op(x, ("f", j, val))
            chain = _drop_coord(chain, j)

    T = TruncatedSimplicialSet(out_dim)
    for n in range(out_dim + 1):
        for k in range(X.D + 1):
            for x in X.nondegenerate(k):
                for chain in _nonconstant_chains(k, n):
                    T.add_cell(n, (x, chain))
    for n in range(out_dim + 1):
        for (x, chain) in T.cells[n]:
            for key in T.op_keys(n):
                if key[0] == "d":
                    T.set_op((x, chain), key, normalize(x, _chain_d(chain, key[1])))
                else:
                    T.set_op((x, chain), key, (x, _chain_s(chain, key[1])))
    return T


def _triangulate_union_find(X, out_dim):
    """Coend computed honestly as a quotient of a disjoint union of
    interval powers, one per cube of X."""
    copies = []
    tags = []
    for k, x in X.all_cells():
        copies.append(interval_power(k, out_dim))
        tags.append((k, x))
    Z, _ = coproduct_many(copies)
    pairs = []
    index_of = {tags[t]: t for t in range(len(tags))}
    for t, (k, x) in enumerate(tags):
        for key in X.op_keys(k):
            y = X.op(x, key)
            t2 = index_of[(X.dim(y), y)]
            u = _key_cube_map(k, key)
            # the copy at x·u maps into the copy at x along u
            for n in range(out_dim + 1):
                for chain in copies[t2].cells[n]:
                    img = tuple(u(v) for v in chain)
                    pairs.append(((t2, chain), (t, img)))
    Q, _ = quotient(Z, pairs)
    return Q


def _key_cube_map(k, key) -> CubeMap:
    """The cube-category map underlying opkey ``key`` at a k-cube:
    faces give maps into dim k, degeneracies/connections maps out of k+1."""
    from .core import _key_operator
    from .site import generator

    return generator(_key_operator(k, key))


def triangulate_edge(X: TruncatedCubicalSet, T: TruncatedSimplicialSet, e):
    """The 1-simplex of the triangulation corresponding to an edge of X."""
    if X.ez_unambiguous():
        root, surj = X.ez_decomposition(e)
        if X.dim(root) == 1:
            return (root, ((0,), (1,)))
        return (root, ((), ()))
    raise ConstructionError("edge transport needs unambiguous decompositions")


def triangulate_marked(X, marked, out_dim=None):
    """Marked triangulation: the marking transports along the edge
    identification unchanged."""
    T = triangulate(X, out_dim)
    return T, frozenset(triangulate_edge(X, T, e) for e in marked)


# -- cubification ------------------------------------------------------------


def _morphism_key(f: CSetMorphism, order):
    return tuple(f.mapping[c] for c in order)


def cubify(S: TruncatedSimplicialSet, out_dim: int | None = None) -> TruncatedCubicalSet:
    """Right adjoint to triangulation: n-cubes are the simplicial maps
    from the n-fold interval power, with structure by precomposition."""
    if out_dim is None:
        out_dim = S.D
    if out_dim > S.D:
        raise ConstructionError(
            "cubification output dimension cannot exceed the input truncation"
        )
    powers = {n: interval_power(n, S.D) for n in range(out_dim + 1)}
    orders = {n: [c for _, c in powers[n].all_cells()] for n in range(out_dim + 1)}
    maps = {n: search_morphisms(powers[n], S, find_all=True) for n in range(out_dim + 1)}
    by_key = {
        n: {_morphism_key(f, orders[n]): f for f in maps[n]} for n in range(out_dim + 1)
    }

    X = TruncatedCubicalSet(out_dim)
    for n in range(out_dim + 1):
        for key in sorted(by_key[n]):
            X.add_cell(n, key)

    def act(n, cell_key, u: CubeMap):
        # precompose the morphism with the simplicial map induced by u
        f = by_key[n][cell_key]
        m = u.source_dim
        out = []
        for chain in orders[m]:
            img_chain = tuple(u(v) for v in chain)
            out.append(f.mapping[img_chain])
        return tuple(out)

    for n in range(out_dim + 1):
        for cell in X.cells[n]:
            for key in X.op_keys(n):
                u = _key_cube_map(n, key)
                X.set_op(cell, key, act(n, cell, u))
    return X


def cubify_morphism_of(S, X, n, f: CSetMorphism):
    """The n-cube of cubify(S) named by a simplicial map f."""
    order = [c for _, c in interval_power(n, S.D).all_cells()]
    return _morphism_key(f, order)


def cubify_marked(S: TruncatedSimplicialSet, marked, out_dim=None):
    """Marked cubification: 1-simplices of S and 1-cubes of the output
    correspond through the interval identification."""
    X = cubify(S, out_dim)
    power1 = interval_power(1, S.D)
    order = [c for _, c in power1.all_cells()]
    chain01 = (((0,), (1,)),)
    edge_of = {}
    for cell in X.cells[1]:
        f = dict(zip(order, cell))
        edge_of[cell] = f[((0,), (1,))]
    marked_cubes = frozenset(c for c in X.cells[1] if edge_of[c] in marked)
    return X, marked_cubes


# -- the cone monad and its quotient cubes -----------------------------------


def _interval_vertices(I: TruncatedCubicalSet):
    v0 = next(v for v in I.cells[0] if v.table == ((0,),))
    v1 = next(v for v in I.cells[0] if v.table == ((1,),))
    return v0, v1


def cone(X: TruncatedCubicalSet):
    """The cone on X: the cylinder with its far end collapsed to a point.

    Returns (CX, zero_end, cylinder_projection): zero_end embeds X at the
    surviving end, cylinder_projection maps interval⊗X onto the cone.
    """
    I = standard_cube(1, X.D)
    cyl = geometric_product(I, X)
    v0, v1 = _interval_vertices(I)
    end = cubical_subset(cyl, [tensor_canonical(I, X, v1, x) for _, x in X.all_cells()])
    pt = standard_cube(0, X.D)
    collapse = CSetMorphism(
        end, pt, {c: pt.cells[end.dim(c)][0] for _, c in end.all_cells()}
    )
    P, injCyl, injPt = pushout(inclusion_morphism(end, cyl), collapse)
    zero_end = CSetMorphism(
        X,
        P,
        {x: injCyl(tensor_canonical(I, X, v0, x)) for _, x in X.all_cells()},
    )
    return P, zero_end, injCyl


def juxtapose(a: CubeMap, b: CubeMap) -> CubeMap:
    """The block-diagonal map realizing the product of two cube cells."""
    k1 = a.source_dim
    k = k1 + b.source_dim
    table = tuple(a(v[:k1]) + b(v[k1:]) for v in vertices(k))
    return CubeMap(k, a.target_dim + b.target_dim, table)


def q_object(n: int, D: int | None = None):
    """The n-th quotient cube: the n-fold cone on the point.

    Returns (Q, projection) with projection the epimorphism from the
    standard n-cube; the cone coordinate of each stage comes first.
    """
    if D is None:
        D = n
    if n < 0:
        raise ConstructionError("q_object needs n >= 0")
    Q = standard_cube(0, D)
    proj = identity_morphism(standard_cube(0, D))
    for step in range(n):
        I = standard_cube(1, D)
        prev_cube = proj.source
        QX, _, injCyl = cone(Q)
        P = geometric_product(I, prev_cube)
        mapping = {}
        for _, (a, b) in P.all_cells():
            mapping[juxtapose(a, b)] = injCyl(tensor_canonical(I, Q, a, proj(b)))
        proj = CSetMorphism(standard_cube(step + 1, D), QX, mapping)
        Q = QX
    return Q, proj


def q_coface(n: int, i: int, D: int):
    """The cosimplicial coface map Q[n-1] -> Q[n] (0 <= i <= n)."""
    from .site import face_op, generator

    if i == 0:
        u = generator(face_op(n, n, 1))
    else:
        u = generator(face_op(n, n - i + 1, 0))
    return _induced_q_map(n - 1, n, u, D)


def q_codegeneracy(n: int, i: int, D: int):
    """The cosimplicial codegeneracy map Q[n+1] -> Q[n] (0 <= i <= n)."""
    from .site import connection_op, degeneracy_op, generator

    if i == 0:
        u = generator(degeneracy_op(n + 1, n + 1))
    else:
        u = generator(connection_op(n + 1, n + 1 - i, 0))
    return _induced_q_map(n + 1, n, u, D)


@lru_cache(maxsize=None)
def _q_with_proj(n: int, D: int):
    return q_object(n, D)


def _induced_q_map(a: int, b: int, u: CubeMap, D: int) -> CSetMorphism:
    """Descend the representable map induced by u: [1]^a -> [1]^b through
    the quotient projections onto the quotient cubes."""
    Qa, pa = _q_with_proj(a, D)
    Qb, pb = _q_with_proj(b, D)
    A = pa.source
    mapping = {}
    for _, c in A.all_cells():
        img = pb(_compose_cube_cell(u, c))
        cls = pa(c)
        if cls in mapping and mapping[cls] != img:
            raise ConstructionError("map does not descend to the quotient cube")
        mapping[cls] = img
    return CSetMorphism(Qa, Qb, mapping)


def _compose_cube_cell(u: CubeMap, cell: CubeMap) -> CubeMap:
    from .site import compose

    return compose(u, cell)


# -- the induced simplicial set of a cubical set ----------------------------


def int_simplicial(X: TruncatedCubicalSet, out_dim: int | None = None) -> TruncatedSimplicialSet:
    """n-simplices are the cubical maps from the n-th quotient cube,
    with simplicial structure by precomposition along the cosimplicial
    maps of the quotient cubes."""
    if out_dim is None:
        out_dim = X.D
    if out_dim > X.D:
        raise ConstructionError("output dimension cannot exceed the truncation")
    D = X.D
    qs = {n: _q_with_proj(n, D) for n in range(out_dim + 1)}
    orders = {n: [c for _, c in qs[n][0].all_cells()] for n in range(out_dim + 1)}
    maps = {n: search_morphisms(qs[n][0], X, find_all=True) for n in range(out_dim + 1)}
    by_key = {
        n: {_morphism_key(f, orders[n]): f for f in maps[n]} for n in range(out_dim + 1)
    }
    S = TruncatedSimplicialSet(out_dim)
    for n in range(out_dim + 1):
        for key in sorted(by_key[n], key=repr):
            S.add_cell(n, key)
    cofaces = {
        (n, i): q_coface(n, i, D) for n in range(1, out_dim + 1) for i in range(n + 1)
    }
    codegens = {
        (n, i): q_codegeneracy(n, i, D)
        for n in range(out_dim)
        for i in range(n + 1)
    }
    for n in range(out_dim + 1):
        for key in S.cells[n]:
            f = by_key[n][key]
            for op in S.op_keys(n):
                if op[0] == "d":
                    g = cofaces[(n, op[1])]
                    target_n = n - 1
                else:
                    g = codegens[(n, op[1])]
                    target_n = n + 1
                composed = g.then(f)
                S.set_op(key, op, _morphism_key(composed, orders[target_n]))
    return S


def int_simplicial_edge(X, e):
    """The 1-simplex of int_simplicial(X) named by an edge of X
    (quotient cube 1 is the interval)."""
    Q1, p1 = _q_with_proj(1, X.D)
    order = [c for _, c in Q1.all_cells()]
    cube1 = p1.source
    mapping = {}
    for _, c in cube1.all_cells():
        mapping[p1(c)] = X.apply_map(e, c)
    return tuple(mapping[c] for c in order)


def int_marked(X, marked, out_dim=None):
    """Marked variant: a 1-simplex is marked when its edge is."""
    S = int_simplicial(X, out_dim)
    marked_simp = frozenset(int_simplicial_edge(X, e) for e in marked)
    return S, marked_simp


def q_of_simplicial(S: TruncatedSimplicialSet, D: int | None = None):
    """Extension by colimits of the quotient cubes: the coend of Q[n]
    over the category of elements of S."""
    if D is None:
        D = S.D
    copies = []
    tags = []
    for n, s in S.all_cells():
        copies.append(_q_with_proj(n, D)[0])
        tags.append((n, s))
    if not copies:
        return TruncatedCubicalSet(D)
    Z, _ = coproduct_many(copies)
    index_of = {tags[t]: t for t in range(len(tags))}
    pairs = []
    for t, (n, s) in enumerate(tags):
        for key in S.op_keys(n):
            s2 = S.op(s, key)
            n2 = S.key_target_dim(n, key)
            t2 = index_of[(n2, s2)]
            if key[0] == "d":
                g = q_coface(n, key[1], D)  # Q[n-1] -> Q[n]
                src_t, dst_t = t2, t
            else:
                g = q_codegeneracy(n, key[1], D)  # Q[n+1] -> Q[n]
                src_t, dst_t = t2, t
            for _, c in g.source.all_cells():
                pairs.append(((src_t, c), (dst_t, g(c))))
    Q, _ = quotient(Z, pairs)
    return Q
