"""Seeded random instances for property suites and the selftest command."""

from __future__ import annotations

import random

from .algebra import FieldSpec, LaurentTail, Poly, RatFunc
from .lattice import ConvexBody, LatticeBasis, kdet, kmat


def random_poly(rng: random.Random, p: int, max_deg: int) -> Poly:
    deg = rng.randint(0, max_deg)
    return Poly([rng.randrange(p) for _ in range(deg + 1)], p)


def random_ratfunc(rng: random.Random, p: int, max_deg: int, max_xden: int = 0) -> RatFunc:
    """Random polynomial over a random power of x (up to x^max_xden)."""
    num = random_poly(rng, p, max_deg)
    return RatFunc(num) * RatFunc.x_power(-rng.randint(0, max_xden), p)


def random_nonzero_ratfunc(rng: random.Random, p: int, max_deg: int, max_den: int = 3) -> RatFunc:
    while True:
        num = random_poly(rng, p, max_deg)
        den = random_poly(rng, p, max_den)
        if num and den:
            return RatFunc(num, den)


def random_tail(rng: random.Random, p: int, h: int) -> LaurentTail:
    return LaurentTail(tuple(rng.randrange(p) for _ in range(h)), p)


def random_matrix(rng, p, d, max_deg, max_xden=0):
    return kmat(
        [[random_ratfunc(rng, p, max_deg, max_xden) for _ in range(d)] for _ in range(d)]
    )


def random_lattice(
    rng: random.Random,
    p: int,
    d: int,
    max_deg: int,
    max_xden: int = 0,
    unimodular: bool = False,
) -> LatticeBasis:
    """Random nonsingular basis; unimodular by rescaling the first column."""
    while True:
        g = random_matrix(rng, p, d, max_deg, max_xden)
        det = kdet(g)
        if det.is_zero():
            continue
        if unimodular:
            e = det.abs().exponent
            s = RatFunc.x_power(-e, p)
            g = kmat([[row[0] * s] + list(row[1:]) for row in g])
        return LatticeBasis(FieldSpec(p), g)


def random_body(
    rng: random.Random, p: int, d: int, max_deg: int, volume_exponent: int | None = None
) -> ConvexBody:
    """Random body h O^d; optionally rescaled to the given volume exponent."""
    while True:
        h = random_matrix(rng, p, d, max_deg, max_xden=max_deg)
        det = kdet(h)
        if det.is_zero():
            continue
        if volume_exponent is not None:
            s = RatFunc.x_power(volume_exponent - det.abs().exponent, p)
            h = kmat([[row[0] * s] + list(row[1:]) for row in h])
        return ConvexBody(h)
