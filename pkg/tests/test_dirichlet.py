import itertools
import random

import pytest

from ffgeom.algebra import AbsValue, FieldSpec, LaurentTail, Poly, RatFunc, laurent_coeffs
from ffgeom.dirichlet import (
    DirichletInstance,
    DirichletSolution,
    dirichlet_solve,
    dirichlet_verify,
    theta_matrix,
)
from ffgeom.errors import BadDimensions, DimensionMismatch
from ffgeom.randgen import random_tail


def test_instance_validation():
    with pytest.raises(DimensionMismatch):
        DirichletInstance.make(2, ["1/x"], [0, 1])
    with pytest.raises(BadDimensions):
        DirichletInstance.make(2, [], [])
    with pytest.raises(BadDimensions):
        DirichletInstance.make(2, ["1/x"], [-1])
    with pytest.raises(ValueError):
        DirichletInstance.make(2, ["x+1/x"], [0])


def test_solve_examples():
    inst = DirichletInstance.make(2, ["1/x"], [0])
    sol = dirichlet_solve(inst)
    assert sol.bs == (Poly.one(2),) and sol.a.is_zero() and sol.achieved_exponent == -1
    assert dirichlet_verify(inst, sol)

    inst = DirichletInstance.make(2, ["1/x+1/x^3"], [1])
    sol = dirichlet_solve(inst)
    assert dirichlet_verify(inst, sol)
    assert dirichlet_verify(inst, DirichletSolution((Poly.x(2),), Poly.one(2), -2))


def test_solve_example_exhaustive():
    p = 3
    inst = DirichletInstance.make(p, ["1/x+1/x^2", "1/x^2"], [1, 0])
    sol = dirichlet_solve(inst)
    assert dirichlet_verify(inst, sol)
    good = []
    for c in itertools.product(range(p), repeat=3):
        if not any(c):
            continue
        b1, b2 = Poly(c[:2], p), Poly(c[2:], p)
        combo = RatFunc(b1) * inst.thetas[0].to_ratfunc() + RatFunc(b2) * inst.thetas[1].to_ratfunc()
        a = combo.num // combo.den
        if (combo - RatFunc(a)).abs() <= AbsValue(-3):
            good.append((b1, b2))
    assert good and tuple(sol.bs) in good


def test_verify_rejects_forgeries():
    inst = DirichletInstance.make(3, ["1/x+2/x^3", "1/x^2"], [2, 1])
    sol = dirichlet_solve(inst)
    assert dirichlet_verify(inst, sol)
    zero = DirichletSolution((Poly.zero(3), Poly.zero(3)), Poly.zero(3), None)
    assert not dirichlet_verify(inst, zero)
    big = DirichletSolution((Poly.monomial(1, 3, 3), Poly.zero(3)), Poly.zero(3), None)
    assert not dirichlet_verify(inst, big)
    with pytest.raises(DimensionMismatch):
        dirichlet_verify(inst, DirichletSolution((Poly.one(3),), Poly.zero(3), None))


def test_theta_shape_and_convolution():
    rng = random.Random(51)
    for _ in range(60):
        p, n = rng.choice([2, 3]), rng.randint(1, 3)
        inst = DirichletInstance(
            FieldSpec(p),
            [random_tail(rng, p, rng.randint(0, 12)) for _ in range(n)],
            [rng.randint(0, 5) for _ in range(n)],
        )
        M = theta_matrix(inst)
        assert (M.rows, M.cols) == (sum(inst.ts) + n - 1, sum(inst.ts) + n)
        v = [rng.randrange(p) for _ in range(M.cols)]
        combo, pos = RatFunc.zero(p), 0
        for th, t in zip(inst.thetas, inst.ts):
            combo = combo + RatFunc(Poly(v[pos : pos + t + 1], p)) * th.to_ratfunc()
            pos += t + 1
        if M.rows:
            digits = laurent_coeffs(combo, -M.rows, -1)[::-1]
            assert M.apply(v).tolist() == digits


def test_random_instances():
    rng = random.Random(52)
    for _ in range(100):
        p, n = rng.choice([2, 3]), rng.randint(1, 3)
        inst = DirichletInstance.make(
            p,
            [LaurentTail(tuple(rng.randrange(p) for _ in range(rng.randint(0, 12))), p) for _ in range(n)],
            [rng.randint(0, 5) for _ in range(n)],
        )
        sol = dirichlet_solve(inst)
        assert dirichlet_verify(inst, sol)
        bound = -(sum(inst.ts) + n)
        assert sol.achieved_exponent is None or sol.achieved_exponent <= bound
