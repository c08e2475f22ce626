"""Exact sparse column elimination over a field.

Vectors are dicts {row index: coefficient}; a matrix is a list of column
vectors.  Pivots are chosen as the smallest row index so reductions are
reproducible.  A bit-packed GF(2) variant is used for large complexes.
"""

from __future__ import annotations


class ColumnReducer:
    """Incremental column echelon form with optional coordinate tracking."""

    def __init__(self, field, track=False):
        self.field = field
        self.track = track
        self.pivots = {}   # pivot row -> (column, coords)
        self.count = 0     # columns added (for coordinate indexing)
        self.rank = 0

    def reduce(self, vec):
        """Reduce ``vec`` against the stored columns.

        Returns ``(residual, coords)`` where coords expresses the removed
        part over previously added columns (only if tracking).
        """
        f = self.field
        v = dict(vec)
        coords = {} if self.track else None
        while v:
            piv = min(v)
            hit = self.pivots.get(piv)
            if hit is None:
                break
            col, ccoords = hit
            factor = f.mul(v[piv], f.inv(col[piv]))
            for r, c in col.items():
                nv = f.sub(v.get(r, f.zero), f.mul(factor, c))
                if nv == f.zero:
                    v.pop(r, None)
                else:
                    v[r] = nv
            if self.track:
                for idx, c in ccoords.items():
                    nc = f.add(coords.get(idx, f.zero), f.mul(factor, c))
                    if nc == f.zero:
                        coords.pop(idx, None)
                    else:
                        coords[idx] = nc
        return v, coords

    def add(self, vec):
        """Reduce and, if independent, store.  Returns (residual, coords)."""
        residual, coords = self.reduce(vec)
        idx = self.count
        self.count += 1
        if residual:
            stored_coords = None
            if self.track:
                # invariant: stored column = sum(coords[j] * added_vec_j)
                stored_coords = {j: self.field.neg(c)
                                 for j, c in coords.items()}
                stored_coords[idx] = self.field.one
            self.pivots[min(residual)] = (residual, stored_coords)
            self.rank += 1
        return residual, coords


def rank(columns, field) -> int:
    red = ColumnReducer(field)
    for col in columns:
        red.add(col)
    return red.rank


def kernel_basis(columns, field):
    """Coefficient vectors (over column indices) spanning the kernel."""
    red = ColumnReducer(field, track=True)
    out = []
    for i, col in enumerate(columns):
        residual, coords = red.add(col)
        if not residual:
            vec = {j: field.neg(c) for j, c in coords.items()}
            vec[i] = field.one
            out.append(vec)
    return out


def scale(vec, c, field):
    return {r: field.mul(c, x) for r, x in vec.items()}


def add_into(acc, vec, c, field):
    for r, x in vec.items():
        nv = field.add(acc.get(r, field.zero), field.mul(c, x))
        if nv == field.zero:
            acc.pop(r, None)
        else:
            acc[r] = nv
    return acc


def matvec(columns, vec, field):
    """Apply a matrix given by columns to a coefficient vector."""
    out = {}
    for j, c in vec.items():
        add_into(out, columns[j], c, field)
    return out


def matmul(a_columns, b_columns, field):
    """Compose: result column j = A applied to B's column j."""
    return [matvec(a_columns, col, field) for col in b_columns]


# -- GF(2) bit-packed variant --------------------------------------------


class ColumnReducer2:
    """GF(2) echelon with columns as Python ints (bit i = row i)."""

    __slots__ = ("pivots", "rank")

    def __init__(self):
        self.pivots = {}
        self.rank = 0

    def reduce(self, v):
        while v:
            piv = v & -v
            col = self.pivots.get(piv)
            if col is None:
                return v
            v ^= col
        return v

    def add(self, v):
        v = self.reduce(v)
        if v:
            self.pivots[v & -v] = v
            self.rank += 1
        return v


def pack(vec):
    v = 0
    for r in vec:
        v |= 1 << r
    return v


def unpack(v, field):
    out = {}
    r = 0
    while v:
        if v & 1:
            out[r] = field.one
        v >>= 1
        r += 1
    return out
