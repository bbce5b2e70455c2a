"""Dimension-truncated finite cubical sets as validated operator tables.

Cells are arbitrary hashable identifiers organized per dimension; the face,
degeneracy, and connection actions are stored as total lookup tables.  All
constructors in the toolkit produce sets on which every cubical identity
instance (within the truncation window) holds; ``validate`` re-checks this
and reports violations as data.

The table/searching machinery is shared with truncated simplicial sets
(see ``simplicial``), which differ only in their operator vocabulary.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import site
from .site import (
    CubeMap,
    connection_op,
    degeneracy_op,
    enumerate_maps,
    face_op,
    factorize,
    generator,
    identity,
    identity_instances,
    compose as compose_maps,
)


class TruncationError(ValueError):
    """An operator application left the truncation window."""


class ConstructionError(ValueError):
    """Invalid parameters for a standard object."""


class SearchCap(RuntimeError):
    """A backtracking search exceeded its node budget (resource error,
    distinct from a certified negative answer)."""


class OperatorTable:
    """Shared storage and cell bookkeeping for truncated presheaves.

    Subclasses fix the operator vocabulary by implementing ``op_keys``,
    ``face_keys`` (the dimension-lowering keys used for candidate
    signatures) and ``_is_up_key`` (the dimension-raising keys whose
    preimages witness degeneracy).
    """

    def __init__(self, D: int):
        if D < 0:
            raise ConstructionError("truncation dimension must be >= 0")
        self.D = D
        self.cells = [[] for _ in range(D + 1)]
        self._dim = {}
        self._index = {}
        self._ops = {}
        self._nondeg_cache = None
        self._face_sig_cache = {}
        self._degen_preimage_cache = None
        self._ez_cache = {}

    # -- vocabulary (subclass responsibility) ---------------------------

    def op_keys(self, k: int):
        raise NotImplementedError

    def face_keys(self, k: int):
        raise NotImplementedError

    def _is_up_key(self, key) -> bool:
        raise NotImplementedError

    def key_target_dim(self, k: int, key) -> int:
        return k + 1 if self._is_up_key(key) else k - 1

    # -- construction ----------------------------------------------------

    def add_cell(self, k: int, cid):
        if cid in self._dim:
            raise ConstructionError(f"duplicate cell id {cid!r}")
        if not (0 <= k <= self.D):
            raise ConstructionError(f"dimension {k} outside [0, {self.D}]")
        self._dim[cid] = k
        self._index[cid] = len(self.cells[k])
        self.cells[k].append(cid)

    def set_op(self, cid, key, value):
        self._ops[(cid, key)] = value

    # -- access ------------------------------------------------------------

    def dim(self, cid) -> int:
        return self._dim[cid]

    def __contains__(self, cid):
        return cid in self._dim

    def index(self, cid) -> int:
        return self._index[cid]

    def sort_key(self, cid):
        return (self._dim[cid], self._index[cid])

    def all_cells(self):
        for k in range(self.D + 1):
            for c in self.cells[k]:
                yield k, c

    def size(self) -> int:
        return sum(len(cs) for cs in self.cells)

    def op(self, cid, key):
        return self._ops[(cid, key)]

    def op_maybe(self, cid, key):
        return self._ops.get((cid, key))

    def apply_key_sequence(self, cid, keys):
        cur = cid
        for key in keys:
            cur = self._ops[(cur, key)]
        return cur

    # -- degeneracy structure ---------------------------------------------

    def degeneracy_witness(self, cid):
        """(root, key) with root·key == cid, or None if cid is nondegenerate."""
        if self._dim[cid] == 0:
            return None
        self._build_degen_preimages()
        hits = self._degen_preimage_cache.get(cid)
        return hits[0] if hits else None

    def degeneracy_witnesses(self, cid):
        self._build_degen_preimages()
        return tuple(self._degen_preimage_cache.get(cid, ()))

    def _build_degen_preimages(self):
        if self._degen_preimage_cache is not None:
            return
        pre = {}
        for (y, key), img in self._ops.items():
            if self._is_up_key(key):
                pre.setdefault(img, []).append((y, key))
        for v in pre.values():
            v.sort(key=lambda t: (self.sort_key(t[0]), t[1]))
        self._degen_preimage_cache = pre

    def is_degenerate(self, cid) -> bool:
        return self.degeneracy_witness(cid) is not None

    def nondegenerate(self, k: int):
        if self._nondeg_cache is None:
            self._nondeg_cache = [
                [c for c in self.cells[j] if self.degeneracy_witness(c) is None]
                for j in range(self.D + 1)
            ]
        return self._nondeg_cache[k]

    def nondegenerate_counts(self):
        return tuple(len(self.nondegenerate(k)) for k in range(self.D + 1))

    def face_signature(self, cid):
        """Tuple of all faces of cid, used to index search candidates."""
        k = self._dim[cid]
        if k == 0:
            return ()
        cache = self._face_sig_cache
        if cid not in cache:
            cache[cid] = tuple(self._ops[(cid, key)] for key in self.face_keys(k))
        return cache[cid]

    # -- validation ----------------------------------------------------------

    def identity_instance_keys(self, k: int):
        """Pairs of operator-key sequences that must agree on k-cells."""
        raise NotImplementedError

    def validate(self):
        """List every violated totality or identity instance (empty = valid)."""
        violations = []
        for k in range(self.D + 1):
            for c in self.cells[k]:
                for key in self.op_keys(k):
                    v = self._ops.get((c, key))
                    if v is None:
                        violations.append(("missing", c, key))
                        continue
                    if self._dim.get(v) != self.key_target_dim(k, key):
                        violations.append(("wrong-dimension", c, key, v))
        if violations:
            return violations
        for k in range(self.D + 1):
            instances = self.identity_instance_keys(k)
            for c in self.cells[k]:
                for lhs, rhs in instances:
                    a = self.apply_key_sequence(c, lhs)
                    b = self.apply_key_sequence(c, rhs)
                    if a != b:
                        violations.append(("identity", c, lhs, rhs, a, b))
        return violations


class TruncatedCubicalSet(OperatorTable):
    """A cubical set with connections, truncated at dimension D.

    Operator keys: ('f', i, eps) faces for 1 <= i <= k; ('s', i)
    degeneracies for 1 <= i <= k+1; ('c', i, eps) connections for
    1 <= i <= k, the latter two defined only while k+1 <= D.
    """

    def op_keys(self, k: int):
        keys = [("f", i, e) for i in range(1, k + 1) for e in (0, 1)]
        if k + 1 <= self.D:
            keys += [("s", i) for i in range(1, k + 2)]
            keys += [("c", i, e) for i in range(1, k + 1) for e in (0, 1)]
        return keys

    def face_keys(self, k: int):
        return [("f", i, e) for i in range(1, k + 1) for e in (0, 1)]

    def _is_up_key(self, key) -> bool:
        return key[0] in ("s", "c")

    def identity_instance_keys(self, k: int):
        return [
            (tuple(map(_op_to_key, lhs)), tuple(map(_op_to_key, rhs)))
            for lhs, rhs in identity_instances(k, self.D)
        ]

    # convenience accessors
    def face(self, cid, i, eps):
        return self._ops[(cid, ("f", i, eps))]

    def degen(self, cid, i):
        return self._ops[(cid, ("s", i))]

    def conn(self, cid, i, eps):
        return self._ops[(cid, ("c", i, eps))]

    def apply_sequence(self, cid, ops):
        """Apply CubeOperators in application order (leftmost first)."""
        cur = cid
        for op in ops:
            k = self._dim[cur]
            if op.kind == site.FACE:
                if op.dim != k:
                    raise TruncationError(f"face {op} does not apply in dim {k}")
            else:
                if op.dim != k + 1:
                    raise TruncationError(f"{op} does not apply in dim {k}")
                if k + 1 > self.D:
                    raise TruncationError(
                        f"operator leaves truncation window (dim {k + 1} > {self.D})"
                    )
            cur = self._ops[(cur, _op_to_key(op))]
        return cur

    def apply_map(self, cid, u: CubeMap):
        """The presheaf action x·u for a cube-category map u.

        u is normalized to faces-after-surjections first, so intermediate
        dimensions never leave [0, max(source, target)].
        """
        if self._dim[cid] != u.target_dim:
            raise TruncationError(
                f"cell of dim {self._dim[cid]} cannot act by map into dim {u.target_dim}"
            )
        if u.source_dim > self.D:
            raise TruncationError(f"map source dim {u.source_dim} exceeds {self.D}")
        face_word, surj = factorize(u)
        cur = cid
        for op in reversed(face_word):
            cur = self._ops[(cur, ("f", op.index, op.sign))]
        for op in reversed(surj.word):
            cur = self._ops[(cur, _op_to_key(op))]
        return cur

    def ez_decomposition(self, cid):
        """(root, s) with root nondegenerate and cid = root·s, s a composite
        of degeneracies/connections recorded as a CubeMap.

        Raises ConstructionError if different degeneracy witnesses yield
        different decompositions (then Eilenberg-Zilber normal forms are
        ambiguous and coend computations must fall back to union-find).
        """
        if cid in self._ez_cache:
            return self._ez_cache[cid]
        k = self._dim[cid]
        ws = self.degeneracy_witnesses(cid)
        if not ws:
            out = (cid, identity(k))
        else:
            results = set()
            for root0, key in ws:
                r, s = self.ez_decomposition(root0)
                gmap = generator(_key_operator(k - 1, key))
                results.add((r, compose_maps(s, gmap)))
            if len(results) > 1:
                raise ConstructionError(
                    f"ambiguous degeneracy decomposition at {cid!r}"
                )
            out = next(iter(results))
        self._ez_cache[cid] = out
        return out

    def ez_unambiguous(self) -> bool:
        try:
            for _, c in self.all_cells():
                self.ez_decomposition(c)
        except ConstructionError:
            return False
        return True


def _op_to_key(op):
    if op.kind == site.FACE:
        return ("f", op.index, op.sign)
    if op.kind == site.DEGENERACY:
        return ("s", op.index)
    return ("c", op.index, op.sign)


def _key_operator(k, key):
    """The CubeOperator realizing opkey ``key`` applied to a k-cube."""
    if key[0] == "f":
        return face_op(k, key[1], key[2])
    if key[0] == "s":
        return degeneracy_op(k + 1, key[1])
    return connection_op(k + 1, key[1], key[2])


def key_operator(k, key):
    return _key_operator(k, key)


def op_keys_from(k: int, D: int):
    keys = [("f", i, e) for i in range(1, k + 1) for e in (0, 1)]
    if k + 1 <= D:
        keys += [("s", i) for i in range(1, k + 2)]
        keys += [("c", i, e) for i in range(1, k + 1) for e in (0, 1)]
    return keys


@dataclass
class CSetMorphism:
    """A level-wise cell assignment commuting with all operator tables.

    Also used for truncated simplicial sets (the machinery is identical).
    """

    source: OperatorTable
    target: OperatorTable
    mapping: dict

    def __call__(self, cid):
        return self.mapping[cid]

    def check(self):
        """Raise if the assignment is not a morphism."""
        for k, c in self.source.all_cells():
            if c not in self.mapping:
                raise ValueError(f"morphism not total: missing {c!r}")
            img = self.mapping[c]
            if self.target.dim(img) != k:
                raise ValueError(f"morphism not dimension-preserving at {c!r}")
            for key in self.source.op_keys(k):
                lhs = self.mapping[self.source.op(c, key)]
                rhs = self.target.op(img, key)
                if lhs != rhs:
                    raise ValueError(f"morphism does not commute with {key} at {c!r}")
        return self

    def is_mono(self) -> bool:
        for k in range(self.source.D + 1):
            imgs = [self.mapping[c] for c in self.source.cells[k]]
            if len(set(imgs)) != len(imgs):
                return False
        return True

    def is_levelwise_bijection(self) -> bool:
        if not self.is_mono():
            return False
        return all(
            len(self.source.cells[k]) == len(self.target.cells[k])
            for k in range(self.source.D + 1)
        )

    def then(self, other: "CSetMorphism") -> "CSetMorphism":
        """self followed by other."""
        return CSetMorphism(
            self.source, other.target, {c: other.mapping[v] for c, v in self.mapping.items()}
        )

    def inverse(self) -> "CSetMorphism":
        if not self.is_levelwise_bijection():
            raise ValueError("not an isomorphism")
        return CSetMorphism(
            self.target, self.source, {v: c for c, v in self.mapping.items()}
        )


def identity_morphism(X: OperatorTable) -> CSetMorphism:
    return CSetMorphism(X, X, {c: c for _, c in X.all_cells()})


def compose_morphisms(g: CSetMorphism, f: CSetMorphism) -> CSetMorphism:
    return f.then(g)


# -- standard objects ---------------------------------------------------


def standard_cube(n: int, D: int | None = None) -> TruncatedCubicalSet:
    """The combinatorial n-cube, cells encoded as cube-category maps."""
    if D is None:
        D = n
    if n < 0:
        raise ConstructionError("cube dimension must be >= 0")
    X = TruncatedCubicalSet(D)
    for k in range(D + 1):
        for u in enumerate_maps(k, n):
            X.add_cell(k, u)
    for k in range(D + 1):
        for u in X.cells[k]:
            for key in X.op_keys(k):
                X.set_op(u, key, compose_maps(u, generator(_key_operator(k, key))))
    return X


def cubical_subset(X: OperatorTable, seeds):
    """The smallest subobject of X containing the seed cells.

    Cell identifiers are reused, so the inclusion into X is the identity
    assignment.
    """
    members = set()
    stack = list(seeds)
    while stack:
        c = stack.pop()
        if c in members:
            continue
        members.add(c)
        for key in X.op_keys(X.dim(c)):
            nbr = X.op(c, key)
            if nbr not in members:
                stack.append(nbr)
    Y = X.__class__(X.D)
    for k in range(X.D + 1):
        for c in X.cells[k]:
            if c in members:
                Y.add_cell(k, c)
    for k in range(X.D + 1):
        for c in Y.cells[k]:
            for key in Y.op_keys(k):
                Y.set_op(c, key, X.op(c, key))
    return Y


def inclusion_morphism(A: OperatorTable, X: OperatorTable) -> CSetMorphism:
    """Inclusion of a subset built by cubical_subset (shared identifiers)."""
    return CSetMorphism(A, X, {c: c for _, c in A.all_cells()})


def boundary(n: int, D: int | None = None) -> TruncatedCubicalSet:
    """∂ of the n-cube: cells whose table pins some output coordinate."""
    cube = standard_cube(n, D)
    seeds = [
        u for k in range(cube.D + 1) for u in cube.cells[k] if u.constant_coordinates()
    ]
    return cubical_subset(cube, seeds)


def open_box(n: int, i: int, eps: int, D: int | None = None) -> TruncatedCubicalSet:
    """The boundary of the n-cube with the (i, eps) face removed."""
    if not (1 <= i <= n) or eps not in (0, 1):
        raise ConstructionError(f"no ({i},{eps}) face in dimension {n}")
    cube = standard_cube(n, D)
    seeds = [
        u
        for k in range(cube.D + 1)
        for u in cube.cells[k]
        if any((j, v) != (i, eps) for j, v in u.constant_coordinates())
    ]
    return cubical_subset(cube, seeds)


def critical_edge_map(n: int, i: int, eps: int) -> CubeMap:
    """The unique edge of the n-cube meeting both the vertex
    (1-eps, …, 1-eps) and the (i, eps) face."""
    other = 1 - eps
    table = tuple(tuple(t if j == i - 1 else other for j in range(n)) for t in (0, 1))
    for u in enumerate_maps(1, n):
        if u.table == table:
            return u
    raise ConstructionError("critical edge not found")


def quotient(X: OperatorTable, pairs, cap: int = 10**6):
    """Quotient of X by the congruence generated by ``pairs``.

    Closure is a canonical union-find pass: whenever two cells merge, all
    their operator images merge.  Returns (Q, projection).  Representatives
    are the stable-order-least members, so the result is independent of the
    order in which relations are listed.
    """
    parent = {}

    def find(a):
        root = a
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(a, a) != a:
            parent[a], a = root, parent[a]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return None
        if X.sort_key(ra) > X.sort_key(rb):
            ra, rb = rb, ra
        parent[rb] = ra
        return ra, rb

    work = list(pairs)
    steps = 0
    while work:
        a, b = work.pop()
        steps += 1
        if steps > cap:
            raise SearchCap("quotient closure exceeded cap")
        merged = union(a, b)
        if merged is None:
            continue
        ra, rb = merged
        if X.dim(ra) != X.dim(rb):
            raise ConstructionError("quotient relates cells of unequal dimension")
        for key in X.op_keys(X.dim(ra)):
            work.append((X.op(ra, key), X.op(rb, key)))

    Q = X.__class__(X.D)
    for k in range(X.D + 1):
        for c in X.cells[k]:
            if find(c) == c:
                Q.add_cell(k, c)
    for k in range(X.D + 1):
        for c in Q.cells[k]:
            for key in Q.op_keys(k):
                Q.set_op(c, key, find(X.op(c, key)))
    proj = CSetMorphism(X, Q, {c: find(c) for _, c in X.all_cells()})
    return Q, proj


def inner_cube(n: int, i: int, eps: int, D: int | None = None):
    """The n-cube with its (i, eps) critical edge collapsed to a point.

    Returns (object, projection from the n-cube).
    """
    if n < 2:
        raise ConstructionError("inner variants need dimension >= 2")
    cube = standard_cube(n, D)
    e = critical_edge_map(n, i, eps)
    v = cube.op(e, ("f", 1, 0))
    return quotient(cube, [(e, cube.op(v, ("s", 1)))])


def inner_open_box(n: int, i: int, eps: int, D: int | None = None):
    """The (i, eps) open box with the critical edge collapsed.

    Returns (object, projection from the open box).
    """
    if n < 2:
        raise ConstructionError("inner variants need dimension >= 2")
    box = open_box(n, i, eps, D)
    e = critical_edge_map(n, i, eps)
    v = box.op(e, ("f", 1, 0))
    return quotient(box, [(e, box.op(v, ("s", 1)))])


def standard_object(kind: str, *params, D: int | None = None):
    if kind == "cube":
        return standard_cube(*params, D=D)
    if kind == "boundary":
        return boundary(*params, D=D)
    if kind == "open_box":
        return open_box(*params, D=D)
    if kind == "inner_cube":
        return inner_cube(*params, D=D)[0]
    if kind == "inner_open_box":
        return inner_open_box(*params, D=D)[0]
    raise ConstructionError(f"unknown standard object kind {kind!r}")


def empty_cset(D: int) -> TruncatedCubicalSet:
    return TruncatedCubicalSet(D)


def disjoint_union(X: OperatorTable, Y: OperatorTable):
    """X ⊔ Y with cells tagged (0, x) and (1, y); returns (Z, inj_X, inj_Y)."""
    if X.D != Y.D:
        raise ConstructionError("disjoint union needs equal truncations")
    Z = X.__class__(X.D)
    for k in range(X.D + 1):
        for c in X.cells[k]:
            Z.add_cell(k, (0, c))
        for c in Y.cells[k]:
            Z.add_cell(k, (1, c))
    for k in range(X.D + 1):
        for c in X.cells[k]:
            for key in X.op_keys(k):
                Z.set_op((0, c), key, (0, X.op(c, key)))
        for c in Y.cells[k]:
            for key in Y.op_keys(k):
                Z.set_op((1, c), key, (1, Y.op(c, key)))
    injX = CSetMorphism(X, Z, {c: (0, c) for _, c in X.all_cells()})
    injY = CSetMorphism(Y, Z, {c: (1, c) for _, c in Y.all_cells()})
    return Z, injX, injY


def coproduct_many(parts):
    """Disjoint union of a list of objects; cells tagged (index, cell)."""
    if not parts:
        raise ConstructionError("coproduct of an empty family needs a class")
    D = parts[0].D
    Z = parts[0].__class__(D)
    for t, X in enumerate(parts):
        if X.D != D:
            raise ConstructionError("coproduct needs equal truncations")
        for k in range(D + 1):
            for c in X.cells[k]:
                Z.add_cell(k, (t, c))
    for t, X in enumerate(parts):
        for k in range(D + 1):
            for c in X.cells[k]:
                for key in X.op_keys(k):
                    Z.set_op((t, c), key, (t, X.op(c, key)))
    injections = [
        CSetMorphism(X, Z, {c: (t, c) for _, c in X.all_cells()})
        for t, X in enumerate(parts)
    ]
    return Z, injections


def pushout(f: CSetMorphism, g: CSetMorphism):
    """Pushout of X <- A -> Y (f: A->X, g: A->Y); returns (P, inj_X, inj_Y)."""
    Z, injX, injY = disjoint_union(f.target, g.target)
    pairs = [((0, f(a)), (1, g(a))) for _, a in f.source.all_cells()]
    P, proj = quotient(Z, pairs)
    return P, injX.then(proj), injY.then(proj)


def pullback(f: CSetMorphism, g: CSetMorphism):
    """Pullback of X -> Z <- Y; cells are pairs, operators act componentwise.

    Returns (P, proj_X, proj_Y).
    """
    X, Y = f.source, g.source
    if X.D != Y.D:
        raise ConstructionError("pullback needs equal truncations")
    P = X.__class__(X.D)
    for k in range(X.D + 1):
        for x in X.cells[k]:
            fx = f(x)
            for y in Y.cells[k]:
                if g(y) == fx:
                    P.add_cell(k, (x, y))
    for k in range(X.D + 1):
        for (x, y) in P.cells[k]:
            for key in P.op_keys(k):
                P.set_op((x, y), key, (X.op(x, key), Y.op(y, key)))
    pX = CSetMorphism(P, X, {c: c[0] for _, c in P.all_cells()})
    pY = CSetMorphism(P, Y, {c: c[1] for _, c in P.all_cells()})
    return P, pX, pY


# -- geometric product ----------------------------------------------------


def _last_degeneracy_root(X: TruncatedCubicalSet, x):
    """y with y·σ_last = x, if any (σ_last drops the final coordinate)."""
    m = X.dim(x)
    if m == 0:
        return None
    for y, key in X.degeneracy_witnesses(x):
        if key == ("s", m):
            return y
    return None


def tensor_canonical(X: TruncatedCubicalSet, Y: TruncatedCubicalSet, x, y):
    """Canonical representative of (x, y) under (xσ_last, y) = (x, yσ_1)."""
    while True:
        root = _last_degeneracy_root(X, x)
        if root is None:
            return (x, y)
        x = root
        y = Y.op(y, ("s", 1))


def geometric_product(
    X: TruncatedCubicalSet, Y: TruncatedCubicalSet
) -> TruncatedCubicalSet:
    """The geometric (Day convolution) product of two cubical sets.

    k-cubes are pairs (x in X_m, y in Y_n), m+n = k, with the final-edge
    degeneracy of x identified with the initial-edge degeneracy of y;
    pairs are stored in the canonical form where x carries no final
    degeneracy.  Operators follow the three-case formulas.
    """
    if X.D != Y.D:
        raise ConstructionError("geometric product needs equal truncations")
    D = X.D
    P = TruncatedCubicalSet(D)
    for k in range(D + 1):
        for m in range(k + 1):
            n = k - m
            for x in X.cells[m]:
                if _last_degeneracy_root(X, x) is not None:
                    continue
                for y in Y.cells[n]:
                    P.add_cell(k, (x, y))
    for k in range(D + 1):
        for (x, y) in P.cells[k]:
            m = X.dim(x)
            for key in P.op_keys(k):
                P.set_op((x, y), key, _tensor_op(X, Y, x, y, m, key))
    return P


def _tensor_op(X, Y, x, y, m, key):
    kind, i = key[0], key[1]
    if kind == "f":
        if i <= m:
            pair = (X.op(x, key), y)
        else:
            pair = (x, Y.op(y, ("f", i - m, key[2])))
    elif kind == "s":
        if i <= m:
            pair = (X.op(x, key), y)
        else:
            pair = (x, Y.op(y, ("s", i - m)))
    else:
        if i <= m:
            pair = (X.op(x, key), y)
        else:
            pair = (x, Y.op(y, ("c", i - m, key[2])))
    return tensor_canonical(X, Y, *pair)


def tensor_morphism(
    f: CSetMorphism, g: CSetMorphism, P: TruncatedCubicalSet, Q: TruncatedCubicalSet
) -> CSetMorphism:
    """f⊗g between already-computed products P = src(f)⊗src(g), Q likewise."""
    mapping = {}
    for _, (x, y) in P.all_cells():
        mapping[(x, y)] = tensor_canonical(f.target, g.target, f(x), g(y))
    return CSetMorphism(P, Q, mapping)


def point_tensor_unit_iso(X: TruncatedCubicalSet, P: TruncatedCubicalSet, side: str):
    """Isomorphism X ≅ □⁰⊗X (side='left') or X⊗□⁰ (side='right')."""
    pt = standard_cube(0, X.D)
    vertex = pt.cells[0][0]
    mapping = {}
    for _, x in X.all_cells():
        if side == "left":
            mapping[x] = tensor_canonical(pt, X, vertex, x)
        else:
            mapping[x] = tensor_canonical(X, pt, x, vertex)
    return CSetMorphism(X, P, mapping)


# -- morphism search --------------------------------------------------------


def search_morphisms(
    B: OperatorTable,
    X: OperatorTable,
    partial=None,
    base=None,
    candidate_filter=None,
    marked_dom=None,
    marked_cod=None,
    find_all=False,
    cap: int = 10**6,
):
    """Backtracking search for presheaf maps B -> X.

    ``partial`` pins cells of B to cells of X (used for lifting problems
    and factorization searches).  ``base`` = (p_mapping, b_mapping)
    restricts candidates z for cell y to those with p(z) = b(y).
    Degenerate cells are forced from their roots; only nondegenerate cells
    branch, in dimension-then-stable order, so results are deterministic.
    Returns a list if find_all, else the first morphism or None.  Raises
    SearchCap when the node budget is exhausted (so a None return is an
    exhaustively certified absence).
    """
    partial = dict(partial or {})
    p_map, b_map = base if base is not None else (None, None)

    order = [(k, c) for k in range(B.D + 1) for c in B.cells[k]]
    sig_index = _candidate_index(X)
    results = []
    assignment = {}
    nodes = 0

    def face_need(k, c):
        return tuple(assignment[B.op(c, key)] for key in B.face_keys(k))

    def candidates(k, c):
        forced = None
        for root, key in B.degeneracy_witnesses(c):
            val = X.op(assignment[root], key)
            if forced is None:
                forced = val
            elif forced != val:
                return []
        if c in partial:
            if forced is not None and forced != partial[c]:
                return []
            forced = partial[c]
        if forced is not None:
            pool = [forced]
            if X.dim(forced) != k:
                return []
            if k > 0 and X.face_signature(forced) != face_need(k, c):
                return []
        elif k == 0:
            pool = X.cells[0]
        else:
            pool = sig_index(k).get(face_need(k, c), ())
        out = []
        for z in pool:
            if p_map is not None and p_map[z] != b_map[c]:
                continue
            if marked_dom is not None and k == 1 and c in marked_dom and z not in marked_cod:
                continue
            if candidate_filter is not None and not candidate_filter(c, z):
                continue
            out.append(z)
        return out

    def backtrack(pos):
        nonlocal nodes
        if pos == len(order):
            results.append(CSetMorphism(B, X, dict(assignment)))
            return not find_all
        k, c = order[pos]
        for z in candidates(k, c):
            nodes += 1
            if nodes > cap:
                raise SearchCap("morphism search exceeded node budget")
            assignment[c] = z
            if backtrack(pos + 1):
                return True
            del assignment[c]
        return False

    backtrack(0)
    if find_all:
        return results
    return results[0] if results else None


def _candidate_index(X: OperatorTable):
    """Lazy per-dimension index from face signatures to cells of X."""
    built = {}

    def get(k):
        if k not in built:
            idx = {}
            for z in X.cells[k]:
                idx.setdefault(X.face_signature(z), []).append(z)
            built[k] = idx
        return built[k]

    return get


def find_isomorphism(X: OperatorTable, Y: OperatorTable, cap: int = 10**6):
    """Search for an isomorphism X ≅ Y, or certify there is none.

    Backtracks over bijections of nondegenerate cells dimension by
    dimension; degenerate cells are forced.  None means exhaustively
    certified absence; SearchCap signals a resource failure.
    """
    if X.D != Y.D:
        return None
    for k in range(X.D + 1):
        if len(X.cells[k]) != len(Y.cells[k]):
            return None
        if len(X.nondegenerate(k)) != len(Y.nondegenerate(k)):
            return None

    assignment = {}
    used = set()
    sig_index = _candidate_index(Y)
    nodes = 0

    order = []
    for k in range(X.D + 1):
        deg = [c for c in X.cells[k] if X.degeneracy_witness(c) is not None]
        order.append((k, X.nondegenerate(k), deg))

    def forced_image(c):
        val = None
        for root, key in X.degeneracy_witnesses(c):
            img = Y.op(assignment[root], key)
            if val is None:
                val = img
            elif val != img:
                return None
        return val

    def assign_degenerates(k, deg):
        newly = []
        for c in deg:
            img = forced_image(c)
            if img is None or Y.degeneracy_witness(img) is None or img in used:
                for d in newly:
                    used.discard(assignment.pop(d))
                return None
            assignment[c] = img
            used.add(img)
            newly.append(c)
        return newly

    def backtrack(level, pos):
        nonlocal nodes
        if level == len(order):
            return True
        k, nd, deg = order[level]
        if pos == len(nd):
            newly = assign_degenerates(k, deg)
            if newly is None:
                return False
            ok = backtrack(level + 1, 0)
            if not ok:
                for d in newly:
                    used.discard(assignment.pop(d))
            return ok
        c = nd[pos]
        if k == 0:
            pool = [z for z in Y.nondegenerate(0) if z not in used]
        else:
            need = tuple(
                assignment[X.op(c, key)] for key in X.face_keys(k)
            )
            pool = [
                z
                for z in sig_index(k).get(need, ())
                if z not in used and Y.degeneracy_witness(z) is None
            ]
        for z in pool:
            nodes += 1
            if nodes > cap:
                raise SearchCap("isomorphism search exceeded node budget")
            assignment[c] = z
            used.add(z)
            if backtrack(level, pos + 1):
                return True
            used.discard(z)
            del assignment[c]
        return False

    if backtrack(0, 0):
        return CSetMorphism(X, Y, dict(assignment))
    return None
