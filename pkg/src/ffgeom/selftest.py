"""Small seeded invariant suites, run by ``ffgeom selftest``.

Each check returns the number of counterexamples found; the pytest suites
run the same properties at full size.
"""

from __future__ import annotations

import random
from typing import Callable

from .algebra import AbsValue, RatFunc, format_ratfunc, parse_ratfunc
from .dirichlet import DirichletInstance, dirichlet_solve, dirichlet_verify
from .lattice import (
    covering_oracle,
    covrad_body,
    covrad_cube,
    decompose,
    enumerate_in_box,
    is_well_rounded,
    kdiag_x,
    kdet,
    kinverse,
    kmat,
    kmul,
    LatticeBasis,
    minima,
)
from .minkmu import MuInstance, mu_brute_oracle, mu_exact
from .mordell import is_admissible, wr_box_certificate
from .orbit import find_wellrounded_shift
from .randgen import random_body, random_lattice, random_ratfunc, random_tail


def ugh_holds(L: LatticeBasis) -> bool:
    """u g h = diag(x^e), u in GL_d(O) with |det u| = 1, h in SL_d(R)."""
    u, h, e = decompose(L)
    hk = kmat([[RatFunc(f) for f in row] for row in h.entries])
    if kmul(kmul(u, L.basis), hk) != kdiag_x(e, L.p):
        return False
    if any(c.abs() > AbsValue(0) for row in u for c in row):
        return False
    if kdet(u).abs() != AbsValue(0):
        return False
    return kdet(hk) == RatFunc.one(L.p)


def _count(rng, n, body: Callable) -> int:
    return sum(0 if body(rng) else 1 for _ in range(n))


def _parser(rng):
    p = rng.choice([2, 3, 5])
    f = random_ratfunc(rng, p, 4, 4) + RatFunc.from_int(rng.randrange(p), p)
    return parse_ratfunc(format_ratfunc(f), p) == f


def _minima_sum(rng):
    L = random_lattice(rng, rng.choice([2, 3]), rng.randint(2, 4), 3)
    return sum(minima(L).exponents) == L.det_exponent and ugh_holds(L)


def _covrad(rng):
    L = random_lattice(rng, rng.choice([2, 3]), rng.randint(2, 3), 2)
    r = covrad_cube(L).exponent
    return covering_oracle(L, r) and not covering_oracle(L, r - 1)


def _large_body_points(rng):
    p, d = rng.choice([2, 3]), rng.randint(2, 3)
    L = random_lattice(rng, p, d, 2, unimodular=True)
    C = random_body(rng, p, d, 2, volume_exponent=-(d - 1))
    return bool(enumerate_in_box(L.transformed(kinverse(C.shape)), [0] * d))


def _inf_covrad(rng):
    p, d = rng.choice([2, 3]), rng.randint(2, 3)
    C = random_body(rng, p, d, 2, volume_exponent=0)
    hR = LatticeBasis.standard(d, p).transformed(C.shape)
    return covrad_body(hR, C) == AbsValue(-1)


def _wellround(rng):
    p, d = rng.choice([2, 3]), rng.randint(2, 3)
    L = random_lattice(rng, p, d, 2, unimodular=True)
    a = find_wellrounded_shift(L)
    _, box = wr_box_certificate(L)
    return is_well_rounded(L.scaled(a.entries)) and is_admissible(L, box)


def _mu(rng):
    p = 2
    inst = MuInstance.make(p, random_tail(rng, p, 3), random_tail(rng, p, 3), h=3)
    return mu_exact(inst).value == mu_brute_oracle(inst, 4).value


def _dirichlet(rng):
    p, n = rng.choice([2, 3]), rng.randint(1, 3)
    inst = DirichletInstance.make(
        p,
        [random_tail(rng, p, rng.randint(0, 12)) for _ in range(n)],
        [rng.randint(0, 5) for _ in range(n)],
    )
    return dirichlet_verify(inst, dirichlet_solve(inst))


SUITES = [
    ("parser_roundtrip", 50, _parser),
    ("minima_sum_and_diagonal_form", 30, _minima_sum),
    ("covering_radius", 10, _covrad),
    ("large_body_points", 20, _large_body_points),
    ("body_covering_radius", 10, _inf_covrad),
    ("wellround_and_certificate", 10, _wellround),
    ("mu_vs_oracle", 5, _mu),
    ("dirichlet", 30, _dirichlet),
]


def run_selftest(seed: int = 0):
    """Yield (suite name, trials, failures)."""
    for name, n, body in SUITES:
        yield name, n, _count(random.Random(f"{seed}:{name}"), n, body)
