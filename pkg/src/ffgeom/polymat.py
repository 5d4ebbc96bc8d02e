"""Linear algebra over F_p and F_p[x].

Column reduction follows the Mulders-Storjohann pattern: while the
leading-coefficient matrix is singular, use a kernel vector of it to cancel
the top coefficients of the highest-degree column involved.  Every column
operation is an addition of a multiple of another column, so the
accumulated transform stays in SL_d(F_p[x]).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import LaurentTail, Poly
from .errors import (
    BadDimensions,
    DimensionMismatch,
    NotSquare,
    SingularMatrix,
)


class PolyMatrix:
    """Dense matrix of Poly entries, row-major."""

    __slots__ = ("entries", "p")

    def __init__(self, entries: Sequence[Sequence[Poly]], p: int):
        self.entries = tuple(tuple(row) for row in entries)
        self.p = p
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise BadDimensions("ragged polynomial matrix")

    @classmethod
    def identity(cls, d: int, p: int) -> "PolyMatrix":
        one, zero = Poly.one(p), Poly.zero(p)
        return cls([[one if i == j else zero for j in range(d)] for i in range(d)], p)

    @classmethod
    def diagonal(cls, polys: Sequence[Poly], p: int) -> "PolyMatrix":
        zero = Poly.zero(p)
        d = len(polys)
        return cls([[polys[i] if i == j else zero for j in range(d)] for i in range(d)], p)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> list[Poly]:
        return [row[j] for row in self.entries]

    def col_degrees(self) -> list:
        return [max(row[j].degree for row in self.entries) for j in range(self.cols)]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        zero = Poly.zero(self.p)
        out = []
        for row in self.entries:
            new = []
            for j in range(other.cols):
                acc = zero
                for k, a in enumerate(row):
                    b = other.entries[k][j]
                    if a and b:
                        acc = acc + a * b
                new.append(acc)
            out.append(new)
        return PolyMatrix(out, self.p)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.p == other.p and self.entries == other.entries

    def __hash__(self):
        return hash((self.p, self.entries))

    def __repr__(self):
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"PolyMatrix([{body}], p={self.p})"


@dataclass(frozen=True)
class FpMatrix:
    """Matrix over F_p backed by an int64 array with entries in [0, p)."""

    entries: np.ndarray
    p: int

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(len(arr), -1) if arr.size else np.zeros((len(arr), 0), np.int64)
        object.__setattr__(self, "entries", arr % self.p)

    @classmethod
    def from_rows(cls, rows, p: int, cols: int | None = None) -> "FpMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(np.zeros((0, cols or 0), dtype=np.int64), p)
        return cls(np.array(rows, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def apply(self, v) -> np.ndarray:
        return (self.entries @ np.asarray(v, dtype=np.int64)) % self.p

    def rank(self) -> int:
        _, pivots = _rref(self.entries, self.p)
        return len(pivots)

    def tolist(self) -> list[list[int]]:
        return self.entries.tolist()


def _rref(a: np.ndarray, p: int):
    """Reduced row echelon form mod p with left-to-right pivots."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def nullspace_fp(M: FpMatrix) -> list[tuple[int, ...]]:
    """Basis of the right kernel, one vector per free column."""
    p = M.p
    red, pivots = _rref(M.entries, p)
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * M.cols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = int(-red[i, f]) % p
        basis.append(tuple(v))
    return basis


def solve_fp(M: FpMatrix, rhs) -> tuple[int, ...] | None:
    """One solution of M v = rhs, free variables set to 0; None if inconsistent."""
    rhs = np.asarray(rhs, dtype=np.int64).reshape(-1)
    if rhs.shape[0] != M.rows:
        raise DimensionMismatch(f"rhs has length {rhs.shape[0]}, matrix has {M.rows} rows")
    p = M.p
    if M.rows == 0:
        return (0,) * M.cols
    aug = np.concatenate([M.entries, (rhs % p).reshape(-1, 1)], axis=1)
    red, pivots = _rref(aug, p)
    if pivots and pivots[-1] == M.cols:
        return None
    v = [0] * M.cols
    for i, c in enumerate(pivots):
        v[c] = int(red[i, M.cols])
    return tuple(v)


def hankel_block(tail: LaurentTail, start: int, rows: int, cols: int) -> FpMatrix:
    """Entry (r, c) is the tail coefficient at index start + r + c."""
    if rows < 0 or cols < 0 or start < 1:
        raise BadDimensions(f"bad Hankel shape start={start} rows={rows} cols={cols}")
    coeffs = tail.padded(start + rows + cols)
    arr = np.zeros((rows, cols), dtype=np.int64)
    for r in range(rows):
        for c in range(cols):
            arr[r, c] = coeffs[start + r + c - 1]
    return FpMatrix(arr, tail.p)


def poly_mat_det(M: PolyMatrix) -> Poly:
    """Determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise NotSquare(f"{M.rows}x{M.cols} matrix has no determinant")
    p = M.p
    n = M.rows
    if n == 0:
        return Poly.one(p)
    a = [list(row) for row in M.entries]
    sign = 1
    prev = Poly.one(p)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return Poly.zero(p)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


@dataclass(frozen=True)
class ColumnReducedForm:
    reduced: PolyMatrix
    transform: PolyMatrix
    col_degrees: tuple[int, ...]

    def leading_matrix(self) -> FpMatrix:
        return leading_coefficient_matrix(self.reduced, self.col_degrees)


def leading_coefficient_matrix(M: PolyMatrix, degs) -> FpMatrix:
    rows = [[M[i, j].coeff(int(degs[j])) for j in range(M.cols)] for i in range(M.rows)]
    return FpMatrix.from_rows(rows, M.p)


def column_reduce(M: PolyMatrix) -> ColumnReducedForm:
    """Column-reduced form M*U with ascending column degrees, det U = 1."""
    if M.rows != M.cols:
        raise NotSquare(f"{M.rows}x{M.cols} matrix")
    d, p = M.rows, M.p
    cols = [M.column(j) for j in range(d)]
    tcols = [PolyMatrix.identity(d, p).column(j) for j in range(d)]
    while True:
        degs = [max(f.degree for f in col) for col in cols]
        if any(isinstance(e, float) for e in degs):
            raise SingularMatrix("zero column during reduction")
        lead = FpMatrix.from_rows(
            [[cols[j][i].coeff(degs[j]) for j in range(d)] for i in range(d)], p
        )
        kernel = nullspace_fp(lead)
        if not kernel:
            break
        c = kernel[0]
        support = [j for j in range(d) if c[j]]
        top = max(degs[j] for j in support)
        j0 = next(j for j in support if degs[j] == top)
        inv = pow(c[j0], -1, p)
        for j in support:
            if j == j0:
                continue
            f = Poly.monomial(c[j] * inv, top - degs[j], p)
            cols[j0] = [a + f * b for a, b in zip(cols[j0], cols[j])]
            tcols[j0] = [a + f * b for a, b in zip(tcols[j0], tcols[j])]
    order = sorted(range(d), key=lambda j: degs[j])
    cols = [cols[j] for j in order]
    tcols = [tcols[j] for j in order]
    degs = [degs[j] for j in order]
    transform = PolyMatrix([[tcols[j][i] for j in range(d)] for i in range(d)], p)
    scalar = poly_mat_det(transform)
    if scalar.degree != 0:
        raise SingularMatrix("transform lost unimodularity")
    if scalar.lc != 1:
        inv = pow(scalar.lc, -1, p)
        cols[-1] = [f.scale(inv) for f in cols[-1]]
        tcols[-1] = [f.scale(inv) for f in tcols[-1]]
        transform = PolyMatrix([[tcols[j][i] for j in range(d)] for i in range(d)], p)
    reduced = PolyMatrix([[cols[j][i] for j in range(d)] for i in range(d)], p)
    return ColumnReducedForm(reduced, transform, tuple(degs))
