"""Exact integer homology via Smith normal form.

The simplicial pipeline (normalized chains on a triangulation) is the
designated oracle; the cubical pipeline quotients degeneracies and
connections and serves as a cross-check.  All arithmetic is exact over
Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd


class InvalidComplex(ValueError):
    """Boundary maps do not square to zero."""


@dataclass
class ChainComplex:
    """Free integer chain complex.

    boundaries[k] is the matrix of C_k -> C_(k-1) as a dict
    {(row, col): value}; ranks[k] is the rank of C_k.  valid_upto bounds
    the degrees in which homology of a truncated input is meaningful.
    """

    ranks: list
    boundaries: list
    valid_upto: int
    basis: list = field(default_factory=list)

    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def check_square_zero(self):
        for k in range(2, len(self.ranks)):
            prod = {}
            for (r, c), v in self.boundaries[k].items():
                for (r2, c2), w in self.boundaries[k - 1].items():
                    if c2 == r:
                        key = (r2, c)
                        prod[key] = prod.get(key, 0) + v * w
            if any(v != 0 for v in prod.values()):
                raise InvalidComplex(f"boundary squared nonzero in degree {k}")
        return self


def _matrix_rows(entries, nrows):
    rows = [dict() for _ in range(nrows)]
    for (r, c), v in entries.items():
        if v:
            rows[r][c] = v
    return rows


def smith_normal_form(entries, nrows, ncols):
    """Nonzero invariant factors of an integer matrix.

    ``entries`` is {(row, col): value}.  Returns positive integers, each
    dividing the next.  Row/column operations are unimodular; pivots of
    absolute value 1 are preferred so the sparse boundary matrices of
    chain complexes reduce without coefficient growth.
    """
    rows = _matrix_rows(entries, nrows)
    col_index = {}
    for r in range(nrows):
        for c in rows[r]:
            col_index.setdefault(c, set()).add(r)

    def set_entry(r, c, v):
        if v:
            if c not in rows[r]:
                col_index.setdefault(c, set()).add(r)
            rows[r][c] = v
        elif c in rows[r]:
            del rows[r][c]
            col_index[c].discard(r)

    def add_row(dst, src, factor):
        for c, v in list(rows[src].items()):
            set_entry(dst, c, rows[dst].get(c, 0) + factor * v)

    def add_col(dst, src, factor):
        for r in list(col_index.get(src, ())):
            v = rows[r].get(src, 0)
            set_entry(r, dst, rows[r].get(dst, 0) + factor * v)

    def swap_rows(r0, r1):
        if r0 == r1:
            return
        cols = set(rows[r0]) | set(rows[r1])
        rows[r0], rows[r1] = rows[r1], rows[r0]
        for c in cols:
            idx = col_index.setdefault(c, set())
            if c in rows[r0]:
                idx.add(r0)
            else:
                idx.discard(r0)
            if c in rows[r1]:
                idx.add(r1)
            else:
                idx.discard(r1)

    diagonal = []
    done_rows = set()
    done_cols = set()

    def pick_pivot():
        best = None
        for r in range(nrows):
            if r in done_rows:
                continue
            for c, v in rows[r].items():
                if c in done_cols:
                    continue
                if abs(v) == 1:
                    return r, c
                if best is None or abs(v) < abs(rows[best[0]][best[1]]):
                    best = (r, c)
        return best

    while True:
        piv = pick_pivot()
        if piv is None:
            break
        r0, c0 = piv
        while True:
            p = rows[r0][c0]
            progressed = False
            for r in list(col_index.get(c0, ())):
                if r == r0 or r in done_rows:
                    continue
                v = rows[r].get(c0, 0)
                if v == 0:
                    continue
                add_row(r, r0, -(v // p))
                if rows[r].get(c0, 0):
                    swap_rows(r0, r)  # strictly smaller remainder becomes pivot
                    progressed = True
                    break
            if progressed:
                continue
            p = rows[r0][c0]
            for c in list(rows[r0]):
                if c == c0 or c in done_cols:
                    continue
                v = rows[r0][c]
                add_col(c, c0, -(v // p))
                if rows[r0].get(c, 0):
                    add_col(c0, c, 1)
                    progressed = True
                    break
            if not progressed:
                break
        diagonal.append(abs(rows[r0][c0]))
        done_rows.add(r0)
        done_cols.add(c0)

    diagonal = [d for d in diagonal if d]
    changed = True
    while changed:
        changed = False
        for i in range(len(diagonal)):
            for j in range(i + 1, len(diagonal)):
                a, b = diagonal[i], diagonal[j]
                if b % a != 0:
                    g = gcd(a, b)
                    diagonal[i], diagonal[j] = g, a * b // g
                    changed = True
    return diagonal


def homology(complex_: ChainComplex, upto: int | None = None):
    """Per-degree (free rank, torsion tuple) of an integer chain complex.

    Degree k is computed for k <= min(upto, top degree); entries beyond
    complex_.valid_upto are not meaningful for truncated inputs and are
    still returned, so callers enforce the bound.
    """
    complex_.check_square_zero()
    top = complex_.top_degree()
    if upto is None:
        upto = top
    upto = min(upto, top)
    snfs = {}
    for k in range(1, min(upto + 1, top) + 1):
        snfs[k] = smith_normal_form(
            complex_.boundaries[k], complex_.ranks[k - 1], complex_.ranks[k]
        )
    out = []
    for k in range(upto + 1):
        rank_in = len(snfs.get(k, [])) if k >= 1 else 0
        rank_out = len(snfs.get(k + 1, [])) if k + 1 <= top else 0
        free = complex_.ranks[k] - rank_in - rank_out
        torsion = tuple(d for d in snfs.get(k + 1, []) if d > 1)
        out.append((free, torsion))
    return out


def chains_simplicial(S, upto: int | None = None) -> ChainComplex:
    """Normalized chains: basis the nondegenerate simplices, boundary the
    alternating face sum with degenerate faces dropped."""
    top = S.D if upto is None else min(upto, S.D)
    basis = [list(S.nondegenerate(k)) for k in range(top + 1)]
    index = [{c: i for i, c in enumerate(bs)} for bs in basis]
    ranks = [len(bs) for bs in basis]
    boundaries = [dict() for _ in range(top + 1)]
    for k in range(1, top + 1):
        mat = boundaries[k]
        for j, c in enumerate(basis[k]):
            for i in range(k + 1):
                f = S.op(c, ("d", i))
                row = index[k - 1].get(f)
                if row is None:
                    continue
                key = (row, j)
                mat[key] = mat.get(key, 0) + (-1) ** i
        boundaries[k] = {k2: v for k2, v in mat.items() if v}
    return ChainComplex(ranks, boundaries, valid_upto=max(top - 1, 0), basis=basis)


def chains_cubical(X, upto: int | None = None) -> ChainComplex:
    """Cubical chains: basis the cubes that are neither degeneracy nor
    connection images; boundary sum_i (-1)^i (d_(i,1) - d_(i,0))."""
    top = X.D if upto is None else min(upto, X.D)
    basis = [list(X.nondegenerate(k)) for k in range(top + 1)]
    index = [{c: i for i, c in enumerate(bs)} for bs in basis]
    ranks = [len(bs) for bs in basis]
    boundaries = [dict() for _ in range(top + 1)]
    for k in range(1, top + 1):
        mat = boundaries[k]
        for j, c in enumerate(basis[k]):
            for i in range(1, k + 1):
                for eps, sign in ((1, (-1) ** i), (0, -((-1) ** i))):
                    f = X.op(c, ("f", i, eps))
                    row = index[k - 1].get(f)
                    if row is None:
                        continue
                    key = (row, j)
                    mat[key] = mat.get(key, 0) + sign
        boundaries[k] = {k2: v for k2, v in mat.items() if v}
    return ChainComplex(ranks, boundaries, valid_upto=max(top - 1, 0), basis=basis)


def homology_groups(pairs):
    """Readable rendering of homology output: 'Z^r x C_d x …' per degree."""
    out = []
    for free, torsion in pairs:
        parts = []
        if free == 1:
            parts.append("Z")
        elif free > 1:
            parts.append(f"Z^{free}")
        parts.extend(f"C{d}" for d in torsion)
        out.append(" x ".join(parts) if parts else "0")
    return out
