"""The finite cube category with connections, presented by generators.

Objects are the power-of-two posets {0,1}^n.  Morphisms are generated by
faces, degeneracies, and the two kinds of connections; we represent a
morphism by its full vertex table together with a (non-canonical) word of
generators that evaluates to that table.  Equality of morphisms is equality
of tables: the category embeds in posets, so tables decide everything and
no word rewriting is ever needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

FACE = "face"
DEGENERACY = "degeneracy"
NEG_CONNECTION = "neg_connection"
POS_CONNECTION = "pos_connection"

_KINDS = (FACE, DEGENERACY, NEG_CONNECTION, POS_CONNECTION)


class InvalidOperator(ValueError):
    """An operator with out-of-range index or malformed parameters."""


class CompositionError(ValueError):
    """Attempt to compose maps with mismatched dimensions."""


class EnumerationCap(RuntimeError):
    """A hom-set enumeration exceeded the configured dimension cap."""


# Hom-set sizes grow super-exponentially; past this the toolkit refuses.
DIMENSION_CAP = 6


@dataclass(frozen=True)
class CubeOperator:
    """One generating operator of the cube category.

    ``dim`` is the ambient dimension n of the generator: a face goes
    {0,1}^(n-1) -> {0,1}^n, while degeneracies and connections go
    {0,1}^n -> {0,1}^(n-1).  ``sign`` is the ε of faces and connections
    and must be None for degeneracies.
    """

    kind: str
    dim: int
    index: int
    sign: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InvalidOperator(f"unknown operator kind {self.kind!r}")
        n, i = self.dim, self.index
        if self.kind == FACE:
            if not (1 <= i <= n) or self.sign not in (0, 1):
                raise InvalidOperator(f"face index out of range: {self}")
        elif self.kind == DEGENERACY:
            if not (1 <= i <= n) or self.sign is not None:
                raise InvalidOperator(f"degeneracy index out of range: {self}")
        else:
            if not (1 <= i <= n - 1):
                raise InvalidOperator(f"connection index out of range: {self}")
            want = 0 if self.kind == NEG_CONNECTION else 1
            if self.sign != want:
                raise InvalidOperator(f"connection sign mismatch: {self}")

    @property
    def source_dim(self) -> int:
        return self.dim - 1 if self.kind == FACE else self.dim

    @property
    def target_dim(self) -> int:
        return self.dim if self.kind == FACE else self.dim - 1

    def apply(self, v: tuple) -> tuple:
        i = self.index
        if self.kind == FACE:
            return v[: i - 1] + (self.sign,) + v[i - 1 :]
        if self.kind == DEGENERACY:
            return v[: i - 1] + v[i:]
        if self.kind == NEG_CONNECTION:
            return v[: i - 1] + (max(v[i - 1], v[i]),) + v[i + 1 :]
        return v[: i - 1] + (min(v[i - 1], v[i]),) + v[i + 1 :]

    def __repr__(self):
        if self.kind == FACE:
            return f"d[{self.dim},{self.index},{self.sign}]"
        if self.kind == DEGENERACY:
            return f"s[{self.dim},{self.index}]"
        g = "g0" if self.kind == NEG_CONNECTION else "g1"
        return f"{g}[{self.dim},{self.index}]"


def face_op(n, i, eps) -> CubeOperator:
    return CubeOperator(FACE, n, i, eps)


def degeneracy_op(n, i) -> CubeOperator:
    return CubeOperator(DEGENERACY, n, i)


def connection_op(n, i, eps) -> CubeOperator:
    kind = NEG_CONNECTION if eps == 0 else POS_CONNECTION
    return CubeOperator(kind, n, i, eps)


def vertices(n: int):
    """All vertices of {0,1}^n in lexicographic order."""
    return tuple(itertools.product((0, 1), repeat=n))


@lru_cache(maxsize=None)
def _vertex_index(n: int) -> dict:
    return {v: k for k, v in enumerate(vertices(n))}


@dataclass(frozen=True)
class CubeMap:
    """A morphism {0,1}^m -> {0,1}^n of the cube category.

    ``table`` lists the image of every source vertex in lexicographic
    order.  ``word`` is a witness listing generators in application order
    (word[0] is applied first); it plays no role in equality.
    """

    source_dim: int
    target_dim: int
    table: tuple
    word: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, CubeMap):
            return NotImplemented
        return (
            self.source_dim == other.source_dim
            and self.target_dim == other.target_dim
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.source_dim, self.target_dim, self.table))

    def __repr__(self):
        return f"CubeMap({self.source_dim}->{self.target_dim}, {self.table})"

    def __call__(self, v: tuple) -> tuple:
        return self.table[_vertex_index(self.source_dim)[v]]

    def is_monotone(self) -> bool:
        verts = vertices(self.source_dim)
        for a, b in itertools.combinations(verts, 2):
            if all(x <= y for x, y in zip(a, b)):
                fa, fb = self(a), self(b)
                if not all(x <= y for x, y in zip(fa, fb)):
                    return False
        return True

    def constant_coordinates(self):
        """Output coordinates (1-based) on which the map is constant."""
        out = []
        for j in range(self.target_dim):
            vals = {row[j] for row in self.table}
            if len(vals) == 1:
                out.append((j + 1, next(iter(vals))))
        return out

    def word_evaluates(self) -> bool:
        """Check the word really composes to the table."""
        cur = identity(self.source_dim)
        for op in self.word:
            cur = compose(generator(op), cur)
        return (
            cur.source_dim == self.source_dim
            and cur.target_dim == self.target_dim
            and cur.table == self.table
        )


def identity(n: int) -> CubeMap:
    return CubeMap(n, n, vertices(n), ())


def generator(op: CubeOperator) -> CubeMap:
    """The cube-category morphism realizing one generator."""
    table = tuple(op.apply(v) for v in vertices(op.source_dim))
    return CubeMap(op.source_dim, op.target_dim, table, (op,))


def compose(g: CubeMap, f: CubeMap) -> CubeMap:
    """The composite g∘f (f applied first)."""
    if f.target_dim != g.source_dim:
        raise CompositionError(
            f"cannot compose {g.source_dim}->{g.target_dim} after "
            f"{f.source_dim}->{f.target_dim}"
        )
    idx = _vertex_index(g.source_dim)
    table = tuple(g.table[idx[v]] for v in f.table)
    return CubeMap(f.source_dim, g.target_dim, table, f.word + g.word)


def vertex_map(n: int, v: tuple) -> CubeMap:
    """The vertex v of the n-cube as a map from the point."""
    word = []
    cur_dim = 0
    for coord in v:
        cur_dim += 1
        word.append(face_op(cur_dim, cur_dim, coord))
    return CubeMap(0, n, (tuple(v),), tuple(word))


@lru_cache(maxsize=None)
def surjective_maps(m: int) -> dict:
    """All composites of degeneracies/connections out of {0,1}^m.

    Returns a dict keyed by target dimension; each value maps tables to a
    CubeMap carrying a witnessing word.  These are exactly the maps with
    no constant output coordinate.
    """
    if m > DIMENSION_CAP:
        raise EnumerationCap(f"dimension {m} exceeds cap {DIMENSION_CAP}")
    levels = {m: {identity(m).table: identity(m)}}
    for k in range(m, 0, -1):
        nxt = {}
        gens = [degeneracy_op(k, i) for i in range(1, k + 1)]
        gens += [connection_op(k, i, e) for i in range(1, k) for e in (0, 1)]
        for u in levels[k].values():
            for op in gens:
                c = compose(generator(op), u)
                if c.table not in nxt:
                    nxt[c.table] = c
        levels[k - 1] = nxt
    return levels


@lru_cache(maxsize=None)
def face_inclusions(j: int, n: int) -> tuple:
    """All composites of faces {0,1}^j -> {0,1}^n (the faces of the n-cube)."""
    if n > DIMENSION_CAP:
        raise EnumerationCap(f"dimension {n} exceeds cap {DIMENSION_CAP}")
    if j > n:
        return ()
    out = []
    # choose which output coordinates are pinned, and at which value
    for pinned in itertools.combinations(range(1, n + 1), n - j):
        for signs in itertools.product((0, 1), repeat=n - j):
            cur = identity(j)
            d = j
            for pos, eps in zip(pinned, signs):
                d += 1
                cur = compose(generator(face_op(d, pos, eps)), cur)
            out.append(cur)
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_maps(m: int, n: int) -> tuple:
    """Every cube-category map {0,1}^m -> {0,1}^n, deduplicated by table.

    Complete because each map factors as face inclusions after a composite
    of degeneracies and connections.  Output order is deterministic.
    """
    if max(m, n) > DIMENSION_CAP:
        raise EnumerationCap(f"dimensions ({m},{n}) exceed cap {DIMENSION_CAP}")
    seen = {}
    surj = surjective_maps(m)
    for j in range(min(m, n), -1, -1):
        for s in surj.get(j, {}).values():
            for inc in face_inclusions(j, n):
                c = compose(inc, s)
                if c.table not in seen:
                    seen[c.table] = c
    return tuple(sorted(seen.values(), key=lambda u: u.table))


def factorize(u: CubeMap):
    """Split u as (face insertions) ∘ (surjective part).

    The face word pins each constant output coordinate at its constant
    value; the surjective part is the table with those coordinates dropped
    and is always a composite of degeneracies/connections.  The split is
    unique given this rule.
    """
    consts = u.constant_coordinates()
    keep = [j for j in range(u.target_dim) if (j + 1) not in {p for p, _ in consts}]
    ssurj_table = tuple(tuple(row[j] for j in keep) for row in u.table)
    j_dim = len(keep)
    table_map = surjective_maps(u.source_dim).get(j_dim, {})
    if ssurj_table not in table_map:
        raise InvalidOperator(
            "map is not generated by faces, degeneracies, and connections"
        )
    surjective_part = table_map[ssurj_table]
    face_word = []
    d = j_dim
    for pos, eps in consts:  # ascending positions; each insert shifts none before it
        d += 1
        face_word.append(face_op(d, pos, eps))
    return tuple(face_word), surjective_part


def recompose(face_word, surjective_part: CubeMap) -> CubeMap:
    """Inverse of factorize: apply the face insertions after the surjection."""
    cur = surjective_part
    for op in face_word:
        cur = compose(generator(op), cur)
    return cur


def identity_instances(k: int, top: int):
    """Pairs of generator sequences that must act equally on a k-cube.

    Each yielded pair is two lists of operators in application order
    (leftmost applied first, acting on elements of a presheaf on the right).
    Only instances whose intermediate dimensions stay within [0, top] are
    produced.
    """
    out = []

    def add(lhs, rhs):
        dims_ok = True
        for seq in (lhs, rhs):
            d = k
            for op in seq:
                d = d - 1 if op.kind == FACE else d + 1
                if d < 0 or d > top:
                    dims_ok = False
        if dims_ok:
            out.append((lhs, rhs))

    # x∂∂:  x·d(j,e') then d(i,e)  ==  x·d(i+1,e) then d(j,e')   (j <= i)
    if k >= 2:
        for i in range(1, k):
            for j in range(1, i + 1):
                for e in (0, 1):
                    for e2 in (0, 1):
                        add(
                            [face_op(k, j, e2), face_op(k - 1, i, e)],
                            [face_op(k, i + 1, e), face_op(k - 1, j, e2)],
                        )
    # xσ then ∂
    if k + 1 <= top:
        for j in range(1, k + 2):
            for i in range(1, k + 2):
                for e in (0, 1):
                    lhs = [degeneracy_op(k + 1, j), face_op(k + 1, i, e)]
                    if j < i:
                        add(lhs, [face_op(k, i - 1, e), degeneracy_op(k, j)])
                    elif j == i:
                        add(lhs, [])
                    else:
                        add(lhs, [face_op(k, i, e), degeneracy_op(k, j - 1)])
    # xσσ
    if k + 2 <= top:
        for i in range(1, k + 2):
            for j in range(1, i + 1):
                add(
                    [degeneracy_op(k + 1, i), degeneracy_op(k + 2, j)],
                    [degeneracy_op(k + 1, j), degeneracy_op(k + 2, i + 1)],
                )
    # xγγ
    if k + 2 <= top:
        for e in (0, 1):
            for e2 in (0, 1):
                for j in range(1, k + 1):
                    for i in range(1, k + 2):
                        if j > i:
                            add(
                                [connection_op(k + 1, j, e2), connection_op(k + 2, i, e)],
                                [connection_op(k + 1, i, e), connection_op(k + 2, j + 1, e2)],
                            )
                        elif j == i and e == e2:
                            add(
                                [connection_op(k + 1, i, e), connection_op(k + 2, i, e)],
                                [connection_op(k + 1, i, e), connection_op(k + 2, i + 1, e)],
                            )
    # xγ then ∂
    if k + 1 <= top:
        for e2 in (0, 1):
            for j in range(1, k + 1):
                for i in range(1, k + 2):
                    for e in (0, 1):
                        lhs = [connection_op(k + 1, j, e2), face_op(k + 1, i, e)]
                        if j < i - 1:
                            add(lhs, [face_op(k, i - 1, e), connection_op(k, j, e2)])
                        elif j in (i - 1, i) and e == e2:
                            add(lhs, [])
                        elif j in (i - 1, i) and e == 1 - e2:
                            add(lhs, [face_op(k, j, e), degeneracy_op(k, j)])
                        elif j > i:
                            add(lhs, [face_op(k, i, e), connection_op(k, j - 1, e2)])
    # xσ then γ
    if k + 2 <= top:
        for e in (0, 1):
            for j in range(1, k + 2):
                for i in range(1, k + 2):
                    lhs = [degeneracy_op(k + 1, j), connection_op(k + 2, i, e)]
                    if j < i:
                        add(lhs, [connection_op(k + 1, i - 1, e), degeneracy_op(k + 2, j)])
                    elif j == i:
                        add(lhs, [degeneracy_op(k + 1, i), degeneracy_op(k + 2, i)])
                    else:
                        add(lhs, [connection_op(k + 1, i, e), degeneracy_op(k + 2, j + 1)])
    return out


def evaluate_word_on_map(u: CubeMap, seq) -> CubeMap:
    """Act on a Yoneda element (a CubeMap into the n-cube) by a sequence
    of operators in application order: x ↦ x∘gen(op_1)∘gen(op_2)…
    reading each as precomposition."""
    cur = u
    for op in seq:
        cur = compose(cur, generator(op))
    return cur
