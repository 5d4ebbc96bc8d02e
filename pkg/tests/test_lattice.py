import itertools
import random

import pytest

from ffgeom.algebra import AbsValue, RatFunc
from ffgeom.errors import (
    DependentVectors,
    DimensionMismatch,
    NotUnimodular,
    ParseError,
    PrecisionTooLow,
    SingularMatrix,
)
from ffgeom.lattice import (
    ConvexBody,
    LatticeBasis,
    covering_oracle,
    covrad_body,
    covrad_cube,
    enumerate_in_box,
    _polys_up_to,
    is_well_rounded,
    kapply,
    kdiag_x,
    kinverse,
    minima,
    minima_body,
    parse_lattice,
    format_lattice,
    read_lattice,
    shortest_vector,
    wedge,
    wedge_orthogonality,
    write_lattice,
)
from ffgeom.randgen import random_body, random_lattice
from ffgeom.selftest import ugh_holds
from conftest import rf

R2 = LatticeBasis.standard(2, 3)
R3 = LatticeBasis.standard(3, 3)
SWAP = LatticeBasis.from_rows([["x", "1"], ["1", "0"]], 3)
D22 = LatticeBasis.diagonal([2, -2], 3)


def test_basis_validation():
    with pytest.raises(SingularMatrix):
        LatticeBasis.from_rows([["x", "x"], ["1", "1"]], 3)
    with pytest.raises(DimensionMismatch):
        LatticeBasis.from_rows([["1"]], 3)
    assert SWAP.det_exponent == 0 and SWAP.is_unimodular()
    assert LatticeBasis.diagonal([1, 2], 3).det_exponent == 3


def test_minima_examples():
    assert minima(R2).exponents == (0, 0)
    assert minima(D22).exponents == (-2, 2)
    assert minima(SWAP).exponents == (0, 0)


def test_minima_against_enumeration():
    # no nonzero vector of norm < 1, two independent of norm 1
    assert enumerate_in_box(SWAP, [-1, -1]) == []
    pts = enumerate_in_box(SWAP, [0, 0])
    assert any(wedge([pts[0], v]).norm() != AbsValue.zero() for v in pts[1:])


def test_shortest_vector_examples():
    assert shortest_vector(R2)[1] == AbsValue(0)
    v, n = shortest_vector(D22)
    assert n == AbsValue(-2) and v == (RatFunc.zero(3), rf("1/x^2"))
    assert shortest_vector(SWAP)[1] == AbsValue(0)


def test_well_rounded_examples():
    assert is_well_rounded(R3)
    assert not is_well_rounded(LatticeBasis.diagonal([1, 0, -1], 3))
    assert is_well_rounded(SWAP)
    with pytest.raises(NotUnimodular):
        is_well_rounded(LatticeBasis.diagonal([1, 0], 3))


def test_well_rounded_cross_invariant():
    rng = random.Random(4)
    for _ in range(60):
        L = random_lattice(rng, rng.choice([2, 3]), rng.randint(2, 3), 2, unimodular=True)
        red = minima(L).reduced_basis
        in_gl_o = all(c.abs() <= AbsValue(0) for row in red for c in row)
        assert is_well_rounded(L) == in_gl_o


def test_covrad_examples():
    assert covrad_cube(R2) == AbsValue(-1)
    assert covrad_cube(D22) == AbsValue(1)
    assert covrad_cube(SWAP) == AbsValue(-1)
    assert covrad_body(D22, ConvexBody.cube(2, 3)) == covrad_cube(D22)
    h = SWAP.basis
    assert covrad_body(LatticeBasis.standard(2, 3).transformed(h), ConvexBody(h)) == AbsValue(-1)
    assert covrad_body(R2, ConvexBody(kdiag_x([1, -1], 3))) == AbsValue(0)
    with pytest.raises(DimensionMismatch):
        covrad_body(R3, ConvexBody.cube(2, 3))


def test_minima_body_examples():
    assert minima_body(R3, ConvexBody.cube(3, 3)) == (0, 0, 0)
    C = ConvexBody.cube(2, 3, -1)
    assert C.volume_exponent == -2
    assert minima_body(R2, C) == (1, 1)
    assert minima_body(LatticeBasis.diagonal([1, -1], 3), ConvexBody.cube(2, 3)) == (-1, 1)


def test_convex_body_membership():
    C = ConvexBody(kdiag_x([1, -1], 3))
    assert C.contains((rf("x"), rf("1/x")))
    assert not C.contains((rf("x^2"), rf("0")))


def test_enumerate_examples():
    assert enumerate_in_box(LatticeBasis.standard(2, 2), [-1, -1]) == []
    assert enumerate_in_box(LatticeBasis.standard(2, 2), [0, -1]) == [(RatFunc.one(2), RatFunc.zero(2))]
    pts = enumerate_in_box(LatticeBasis.diagonal([2, -2], 2), [-1, -1])
    # b * (0, x^-2) with b nonzero of degree <= 1
    assert len(pts) == 3
    assert all(v[0].is_zero() and v[1].abs() <= AbsValue(-1) for v in pts)


def _brute_box(L, r, maxdeg):
    """Enumerate all coefficient vectors of the input basis up to maxdeg."""
    p = L.p
    out = set()
    for coeffs in itertools.product(_polys_up_to(maxdeg, p), repeat=L.d):
        if all(c.is_zero() for c in coeffs):
            continue
        v = kapply(L.basis, [RatFunc(c) for c in coeffs])
        if all(x.abs() <= AbsValue(e) for x, e in zip(v, r)):
            out.add(v)
    return out


def test_enumerate_matches_brute_force():
    rng = random.Random(8)
    for _ in range(25):
        L = random_lattice(rng, 2, 2, 1, unimodular=True)
        r = [rng.randint(-1, 1) for _ in range(2)]
        fast = enumerate_in_box(L, r)
        assert len(fast) == len(set(fast))
        # coefficient degrees in the input basis are bounded well below 5 here
        assert set(fast) == _brute_box(L, r, 5)


def test_covering_oracle_examples():
    assert covering_oracle(R2, -1)
    assert not covering_oracle(R2, -2)
    assert covering_oracle(D22, 1)
    assert not covering_oracle(D22, 0)
    with pytest.raises(PrecisionTooLow):
        covering_oracle(R2, -1, precision=1)


def test_wedge_examples():
    one, zero = rf("1"), rf("0")
    assert wedge_orthogonality([(one, zero), (zero, one)])
    assert wedge_orthogonality([(one, one), (zero, one)])
    assert not wedge_orthogonality([(rf("x"), one), (rf("x"), rf("-1"))])
    with pytest.raises(DependentVectors):
        wedge_orthogonality([(one, one), (one, one)])
    w = wedge([(rf("x"), one, zero)])
    assert w.support() == {(0,), (1,)}


def test_minima_properties():
    rng = random.Random(21)
    for _ in range(80):
        L = random_lattice(rng, rng.choice([2, 3]), rng.randint(2, 4), 3, max_xden=2)
        prof = minima(L)
        assert sum(prof.exponents) == L.det_exponent
        cols = [prof.column(j) for j in range(L.d)]
        assert wedge_orthogonality(cols)
        assert [max(c.abs() for c in col).exponent for col in cols] == list(prof.exponents)
        assert ugh_holds(L)


def test_flag_bound_unimodular():
    rng = random.Random(22)
    for _ in range(60):
        L = random_lattice(rng, rng.choice([2, 3]), rng.randint(2, 4), 3, unimodular=True)
        cols = [minima(L).column(j) for j in range(L.d)]
        for k in range(1, L.d):
            assert wedge(cols[:k]).norm() <= AbsValue(0)


def test_large_bodies_contain_points():
    rng = random.Random(23)
    for _ in range(40):
        p, d = rng.choice([2, 3]), rng.randint(2, 3)
        L = random_lattice(rng, p, d, 2, unimodular=True)
        C = random_body(rng, p, d, 2, volume_exponent=-(d - 1) + rng.randint(0, 1))
        assert enumerate_in_box(L.transformed(kinverse(C.shape)), [0] * d)


LATTICE_TEXT = """# a test lattice
q 3
d 2
row x 1/x+1/x^2   # first row
row 0 (x+1)/(x^2+2)
"""


def test_lattice_file_roundtrip(tmp_path):
    L = parse_lattice(LATTICE_TEXT)
    text = format_lattice(L)
    assert format_lattice(parse_lattice(text)) == text
    path = tmp_path / "lat.txt"
    write_lattice(L, path)
    assert read_lattice(path) == L
    assert path.read_text() == text


def test_lattice_file_roundtrip_random(tmp_path):
    rng = random.Random(30)
    for i in range(30):
        L = random_lattice(rng, rng.choice([2, 3, 5]), rng.randint(2, 4), 3, max_xden=3)
        path = tmp_path / f"l{i}.txt"
        write_lattice(L, path)
        text = path.read_text()
        assert format_lattice(read_lattice(path)) == text


@pytest.mark.parametrize(
    "text",
    ["d 2\nq 3\n", "q 4\nd 2\n", "q 3\nd 2\nrow 1 0\n", "q 3\nd 2\nrow 1\nrow 0 1\n", "q 3\nd 2\nrow 1 x^\nrow 0 1\n"],
)
def test_lattice_file_errors(text):
    with pytest.raises((ParseError, ValueError)):
        parse_lattice(text)
