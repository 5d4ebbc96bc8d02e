"""Lattices g R^d in K^d: successive minima, reduced bases, covering radii.

A basis is stored as a d x d matrix over F_p(x) whose columns generate the
lattice over R = F_p[x].  After clearing denominators, column reduction of
the polynomial matrix yields an orthogonal basis; its column norms are the
successive minima, and everything else in this module is read off from it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .algebra import (
    AbsValue,
    FieldSpec,
    Poly,
    RatFunc,
    format_ratfunc,
    laurent_coeffs,
    parse_ratfunc,
    poly_gcd,
    vec_norm,
)
from .errors import (
    DependentVectors,
    DimensionMismatch,
    NotUnimodular,
    ParseError,
    PrecisionTooLow,
    SingularMatrix,
)
from .polymat import FpMatrix, PolyMatrix, column_reduce

Matrix = tuple[tuple[RatFunc, ...], ...]


# -- dense linear algebra over K -------------------------------------------


def kmat(rows: Sequence[Sequence[RatFunc]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def kidentity(d: int, p: int) -> Matrix:
    one, zero = RatFunc.one(p), RatFunc.zero(p)
    return tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d))


def kdiag_x(exponents: Sequence[int], p: int) -> Matrix:
    """diag(x^e_1, ..., x^e_d)."""
    zero = RatFunc.zero(p)
    d = len(exponents)
    return tuple(
        tuple(RatFunc.x_power(exponents[i], p) if i == j else zero for j in range(d))
        for i in range(d)
    )


def kmul(a: Matrix, b: Matrix) -> Matrix:
    if len(a[0]) != len(b):
        raise DimensionMismatch("matrix product shape mismatch")
    p = a[0][0].p
    out = []
    for row in a:
        new = []
        for j in range(len(b[0])):
            acc = RatFunc.zero(p)
            for k, x in enumerate(row):
                y = b[k][j]
                if not x.is_zero() and not y.is_zero():
                    acc = acc + x * y
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def kcolumn(a: Matrix, j: int) -> tuple[RatFunc, ...]:
    return tuple(row[j] for row in a)


def kfrom_columns(cols: Sequence[Sequence[RatFunc]]) -> Matrix:
    return tuple(tuple(col[i] for col in cols) for i in range(len(cols[0])))


def kdet(a: Matrix) -> RatFunc:
    m = [list(r) for r in a]
    n = len(m)
    p = m[0][0].p
    det = RatFunc.one(p)
    for k in range(n):
        piv = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
        if piv is None:
            return RatFunc.zero(p)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        det = det * m[k][k]
        inv = m[k][k].inverse()
        for i in range(k + 1, n):
            if m[i][k].is_zero():
                continue
            f = m[i][k] * inv
            m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return det


def kinverse(a: Matrix) -> Matrix:
    n = len(a)
    p = a[0][0].p
    m = [list(r) + list(e) for r, e in zip(a, kidentity(n, p))]
    for k in range(n):
        piv = next((i for i in range(k, n) if not m[i][k].is_zero()), None)
        if piv is None:
            raise SingularMatrix("matrix is not invertible")
        m[k], m[piv] = m[piv], m[k]
        inv = m[k][k].inverse()
        m[k] = [x * inv for x in m[k]]
        for i in range(n):
            if i != k and not m[i][k].is_zero():
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return tuple(tuple(r[n:]) for r in m)


def kapply(a: Matrix, v: Sequence[RatFunc]) -> tuple[RatFunc, ...]:
    p = a[0][0].p
    out = []
    for row in a:
        acc = RatFunc.zero(p)
        for x, y in zip(row, v):
            if not x.is_zero() and not y.is_zero():
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


# -- domain types ------------------------------------------------------------


@dataclass(frozen=True)
class LatticeBasis:
    field: FieldSpec
    basis: Matrix
    det_exponent: int = field(init=False, compare=False)

    def __post_init__(self):
        basis = kmat(self.basis)
        object.__setattr__(self, "basis", basis)
        d = len(basis)
        if d < 2 or any(len(r) != d for r in basis):
            raise DimensionMismatch(f"lattice basis must be square with d >= 2, got {d}")
        det = kdet(basis)
        if det.is_zero():
            raise SingularMatrix("lattice basis is singular")
        object.__setattr__(self, "det_exponent", det.abs().exponent)

    @classmethod
    def from_rows(cls, rows, p: int) -> "LatticeBasis":
        rows = [
            [parse_ratfunc(e, p) if isinstance(e, str) else _as_ratfunc(e, p) for e in r]
            for r in rows
        ]
        return cls(FieldSpec(p), kmat(rows))

    @classmethod
    def standard(cls, d: int, p: int) -> "LatticeBasis":
        return cls(FieldSpec(p), kidentity(d, p))

    @classmethod
    def diagonal(cls, exponents: Sequence[int], p: int) -> "LatticeBasis":
        return cls(FieldSpec(p), kdiag_x(exponents, p))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def d(self) -> int:
        return len(self.basis)

    def column(self, j: int) -> tuple[RatFunc, ...]:
        return kcolumn(self.basis, j)

    def is_unimodular(self) -> bool:
        return self.det_exponent == 0

    def transformed(self, a: Matrix) -> "LatticeBasis":
        """The lattice a * g R^d."""
        return LatticeBasis(self.field, kmul(a, self.basis))

    def scaled(self, weights: Sequence[int]) -> "LatticeBasis":
        """x^a g R^d for integer weights a."""
        return self.transformed(kdiag_x(weights, self.p))


def _as_ratfunc(e, p: int) -> RatFunc:
    if isinstance(e, RatFunc):
        return e
    if isinstance(e, Poly):
        return RatFunc.from_poly(e)
    return RatFunc.from_int(int(e), p)


@dataclass(frozen=True)
class MinimaProfile:
    """Successive minima q^e_i together with the matrices realizing them.

    ``reduced_basis`` = g * ``transform_h`` has orthogonal columns of norms
    q^e_i, and ``transform_u`` * g * ``transform_h`` = diag(x^e_i).
    """

    exponents: tuple[int, ...]
    reduced_basis: Matrix
    transform_u: Matrix
    transform_h: PolyMatrix

    def column(self, j: int) -> tuple[RatFunc, ...]:
        return kcolumn(self.reduced_basis, j)


@dataclass(frozen=True)
class ConvexBody:
    """The body h O^d."""

    shape: Matrix
    volume_exponent: int = field(init=False, compare=False)

    def __post_init__(self):
        shape = kmat(self.shape)
        object.__setattr__(self, "shape", shape)
        det = kdet(shape)
        if det.is_zero():
            raise SingularMatrix("convex body shape is singular")
        object.__setattr__(self, "volume_exponent", det.abs().exponent)

    @classmethod
    def cube(cls, d: int, p: int, exponent: int = 0) -> "ConvexBody":
        """x^exponent O^d, the ball of radius q^exponent."""
        return cls(kdiag_x([exponent] * d, p))

    @property
    def d(self) -> int:
        return len(self.shape)

    def contains(self, v: Sequence[RatFunc]) -> bool:
        return all(c.abs() <= AbsValue(0) for c in kapply(kinverse(self.shape), v))


@dataclass(frozen=True)
class WedgeVector:
    """v_1 ^ ... ^ v_k stored by its Plucker coordinates phi_J."""

    grade: int
    coeffs: dict

    def norm(self) -> AbsValue:
        return max((c.abs() for c in self.coeffs.values()), default=AbsValue.zero())

    def support(self) -> set[tuple[int, ...]]:
        return {J for J, c in self.coeffs.items() if not c.is_zero()}


def wedge(vectors: Sequence[Sequence[RatFunc]]) -> WedgeVector:
    k = len(vectors)
    d = len(vectors[0])
    coeffs = {}
    for J in itertools.combinations(range(d), k):
        sub = tuple(tuple(vectors[c][i] for c in range(k)) for i in J)
        coeffs[J] = kdet(sub)
    return WedgeVector(k, coeffs)


# -- operations ----------------------------------------------------------------


def _common_denominator(g: Matrix) -> Poly:
    p = g[0][0].p
    D = Poly.one(p)
    for row in g:
        for e in row:
            den = e.den
            if den.degree > 0:
                D = (D * den) // poly_gcd(D, den)
    return D


@lru_cache(maxsize=8192)
def reduce_basis(L: LatticeBasis) -> tuple[tuple[int, ...], Matrix, PolyMatrix]:
    """(exponents, reduced basis g*h, h) without forming u."""
    p = L.p
    D = _common_denominator(L.basis)
    Dr = RatFunc.from_poly(D)
    G = PolyMatrix([[(e * Dr).num for e in row] for row in L.basis], p)
    crf = column_reduce(G)
    shift = D.degree
    exps = tuple(e - shift for e in crf.col_degrees)
    Dinv = Dr.inverse()
    reduced = tuple(tuple(RatFunc(f) * Dinv for f in row) for row in crf.reduced.entries)
    return exps, reduced, crf.transform


def minima_exponents(L: LatticeBasis) -> tuple[int, ...]:
    return reduce_basis(L)[0]


@lru_cache(maxsize=4096)
def minima(L: LatticeBasis) -> MinimaProfile:
    """Successive minima exponents (ascending) with reduced basis and u, h."""
    exps, reduced, h = reduce_basis(L)
    u = kmul(kdiag_x(exps, L.p), kinverse(reduced))
    return MinimaProfile(exps, reduced, u, h)


def decompose(L: LatticeBasis):
    """(u, h, exponents) with u g h = diag(x^e_1, ..., x^e_d)."""
    prof = minima(L)
    return prof.transform_u, prof.transform_h, prof.exponents


def shortest_vector(L: LatticeBasis) -> tuple[tuple[RatFunc, ...], AbsValue]:
    prof = minima(L)
    return prof.column(0), AbsValue(prof.exponents[0])


def is_well_rounded(L: LatticeBasis) -> bool:
    if not L.is_unimodular():
        raise NotUnimodular(f"det exponent {L.det_exponent}")
    return all(e == 0 for e in minima_exponents(L))


def covrad_cube(L: LatticeBasis) -> AbsValue:
    """Covering radius with respect to O^d: q^-1 * lambda_d."""
    return AbsValue(minima_exponents(L)[-1] - 1)


def _body_lattice(L: LatticeBasis, C: ConvexBody) -> LatticeBasis:
    if C.d != L.d:
        raise DimensionMismatch(f"body dimension {C.d} vs lattice dimension {L.d}")
    return L.transformed(kinverse(C.shape))


def minima_body(L: LatticeBasis, C: ConvexBody) -> tuple[int, ...]:
    """Minima of L with respect to the gauge of C, as exponents."""
    return minima_exponents(_body_lattice(L, C))


def covrad_body(L: LatticeBasis, C: ConvexBody) -> AbsValue:
    return AbsValue(minima_body(L, C)[-1] - 1)


def _polys_up_to(deg: int, p: int) -> list[Poly]:
    """All polynomials of degree <= deg (zero included)."""
    if deg < 0:
        return [Poly.zero(p)]
    return [Poly(c, p) for c in itertools.product(range(p), repeat=deg + 1)]


def iter_box_points(L: LatticeBasis, radius_exponents: Sequence[int]) -> Iterator[tuple]:
    """Nonzero lattice vectors v with |v_i| <= q^r_i, each exactly once."""
    if len(radius_exponents) != L.d:
        raise DimensionMismatch("box and lattice dimensions differ")
    exps, reduced, _ = reduce_basis(L)
    p = L.p
    rmax = max(radius_exponents)
    bounds = [AbsValue(r) for r in radius_exponents]
    cols = [kcolumn(reduced, j) for j in range(L.d)]
    # orthogonality: |sum a_j c_j| = max |a_j| |c_j|, so deg a_j <= rmax - e_j
    choices = [_polys_up_to(rmax - e, p) for e in exps]
    for coeffs in itertools.product(*choices):
        if all(a.is_zero() for a in coeffs):
            continue
        v = []
        for i in range(L.d):
            acc = RatFunc.zero(p)
            for a, c in zip(coeffs, cols):
                if a:
                    acc = acc + RatFunc(a) * c[i]
            v.append(acc)
        if all(x.abs() <= b for x, b in zip(v, bounds)):
            yield tuple(v)


def enumerate_in_box(L: LatticeBasis, radius_exponents: Sequence[int]) -> list[tuple]:
    return list(iter_box_points(L, radius_exponents))


def covering_oracle(L: LatticeBasis, r_exponent: int, precision: int | None = None) -> bool:
    """Decide L + q^r O^d = K^d by a finite computation.

    Every point is congruent mod L to one of norm <= lambda_d = q^top, and
    a lattice point within q^r of such a point also has norm <= q^top.  So
    coverage holds iff the lattice points of the ball B(0, q^top) realize
    every digit pattern at degrees r+1..top, which is a rank condition
    over F_p on their truncated Laurent digits.
    """
    exps, reduced, _ = reduce_basis(L)
    top = exps[-1]
    needed = abs(r_exponent) + top + 2
    if precision is None:
        precision = max(needed, top - r_exponent, 0)
    if precision < needed or precision < top - r_exponent:
        raise PrecisionTooLow(f"precision {precision} < {max(needed, top - r_exponent)}")
    if r_exponent >= top:
        return True
    p = L.p
    lo = r_exponent + 1
    width = top - r_exponent
    generators = []
    for j, e in enumerate(exps):
        col = kcolumn(reduced, j)
        for k in range(top - e + 1):
            xk = RatFunc.x_power(k, p)
            sig = []
            for c in col:
                sig.extend(laurent_coeffs(xk * c, lo, top))
            generators.append(sig)
    M = FpMatrix.from_rows(generators, p)  # one row per ball generator
    return M.rank() == L.d * width


def wedge_orthogonality(vectors: Sequence[Sequence[RatFunc]]) -> bool:
    """True iff |v_1 ^ ... ^ v_m| equals the product of the |v_i|."""
    w = wedge(vectors).norm()
    if w.is_zero():
        raise DependentVectors("vectors are linearly dependent")
    prod = AbsValue(0)
    for v in vectors:
        prod = prod * vec_norm(v)
    return w == prod


# -- lattice files -------------------------------------------------------------


def parse_lattice(text: str) -> LatticeBasis:
    """Read the line format ``q <p>`` / ``d <dim>`` / ``row <entries>``..."""
    p = d = None
    rows = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        words = body.split()
        here = offset + (len(body) - len(body.lstrip()))
        offset += len(line.encode())
        if not words:
            continue
        key = words[0]
        if key == "q" and p is None and len(words) == 2 and words[1].isdigit():
            p = int(words[1])
            FieldSpec(p)
        elif key == "d" and p is not None and d is None and len(words) == 2 and words[1].isdigit():
            d = int(words[1])
        elif key == "row" and d is not None and len(rows) < d:
            if len(words) != d + 1:
                raise ParseError(text, here, f"{d} entries after 'row'")
            try:
                rows.append([parse_ratfunc(w, p) for w in words[1:]])
            except ParseError as err:
                raise ParseError(text, here, f"rational function ({err.expected})") from err
        else:
            expected = "'q <prime>'" if p is None else "'d <dim>'" if d is None else "'row' line"
            raise ParseError(text, here, expected)
    if p is None or d is None or len(rows) != d:
        raise ParseError(text, offset, f"{d or '?'} 'row' lines")
    return LatticeBasis(FieldSpec(p), kmat(rows))


def format_lattice(L: LatticeBasis) -> str:
    lines = [f"q {L.p}", f"d {L.d}"]
    lines += ["row " + " ".join(format_ratfunc(e) for e in row) for row in L.basis]
    return "\n".join(lines) + "\n"


def read_lattice(path) -> LatticeBasis:
    with open(path, encoding="ascii") as fh:
        return parse_lattice(fh.read())


def write_lattice(L: LatticeBasis, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_lattice(L))
