import itertools
import random

import pytest

from ffgeom.algebra import AbsValue, FieldSpec, LaurentTail, Poly, RatFunc, split_integer_fractional
from ffgeom.errors import BadThreshold, DimensionMismatch, PrecisionTooLow
from ffgeom.lattice import LatticeBasis
from ffgeom.minkmu import (
    MuInstance,
    certify_uncovered,
    grid_value,
    make_unipotent_lattice,
    mu_brute_oracle,
    mu_decision,
    mu_exact,
    uncovered_grid,
)
from conftest import rf

EX1 = ("1/x+1/x^2+1/x^4", "+".join(f"1/x^{i}" for i in range(1, 11)))
EX2 = ("2/x^3+2/x^6+1/x^7+2/x^8+1/x^9+2/x^10", "1/x+1/x^2+1/x^3+1/x^5+2/x^6+1/x^9+2/x^10")


def test_instance_validation():
    t = LaurentTail((1,), 3)
    with pytest.raises(DimensionMismatch):
        MuInstance(FieldSpec(3), 3, t, None, 1)
    with pytest.raises(DimensionMismatch):
        MuInstance(FieldSpec(3), 4, t, t, 1)
    inst = MuInstance.make(3, *EX1)
    assert inst.d == 3 and inst.h == 10
    with pytest.raises(ValueError):
        MuInstance.make(3, "1/x^5", "1/x", h=2)


def test_unipotent_lattice_examples():
    assert make_unipotent_lattice(MuInstance.make(2, (), ())) == LatticeBasis.standard(3, 2)
    L = make_unipotent_lattice(MuInstance.make(2, "1/x"))
    assert L == LatticeBasis.from_rows([["1", "1/x"], ["0", "1"]], 2)
    L = make_unipotent_lattice(MuInstance.make(3, *EX1))
    assert L.column(2) == (rf(EX1[0]), rf(EX1[1]), rf("1"))
    assert L.is_unimodular()


def test_decision_examples():
    R3 = MuInstance.make(3, (), ())
    assert mu_decision(R3, 3)
    assert not mu_decision(R3, 4)
    assert not mu_decision(MuInstance.make(3, *EX1), 4)
    assert mu_decision(MuInstance.make(3, *EX1), 2)
    with pytest.raises(BadThreshold):
        mu_decision(R3, 0)
    with pytest.raises(BadThreshold):
        mu_decision(R3, 3.5)


def test_exact_examples():
    assert mu_exact(MuInstance.make(3, *EX1)).value == AbsValue(-3)
    assert mu_exact(MuInstance.make(2, "1/x")).value == AbsValue(-2)
    for q in (2, 3):
        assert mu_exact(MuInstance.make(q, ())).value == AbsValue(-2)
        assert mu_exact(MuInstance.make(q, (), ())).value == AbsValue(-3)


def test_oracle_examples():
    assert mu_brute_oracle(MuInstance.make(2, (), ()), 2).value == AbsValue(-3)
    assert mu_brute_oracle(MuInstance.make(2, "1/x"), 3).value == AbsValue(-2)
    with pytest.raises(PrecisionTooLow):
        mu_brute_oracle(MuInstance.make(2, "1/x+1/x^3"), 3)


def test_witness_is_certified_and_attains_value():
    for th, ph in [EX1, ("1/x", "1/x^2+1/x^3")]:
        inst = MuInstance.make(3, th, ph)
        res = mu_exact(inst)
        assert certify_uncovered(inst, res.depth + 1, res.witness)
        assert grid_value(inst, res.witness) == res.value
        assert uncovered_grid(inst, res.depth) is None


def test_monotone_and_upper_bound():
    rng = random.Random(31)
    for _ in range(30):
        q, h = rng.choice([2, 3]), rng.randint(1, 4)
        tails = [tuple(rng.randrange(q) for _ in range(h)) for _ in range(2)]
        inst = MuInstance.make(q, *tails, h=h)
        answers = [mu_decision(inst, T) for T in range(1, 2 * h + 5)]
        assert answers == sorted(answers, reverse=True)
        assert mu_exact(inst).value <= AbsValue(-3)


def test_oracle_equivalence_small_exhaustive():
    for h in (1, 2):
        for th, ph in itertools.product(itertools.product(range(2), repeat=h), repeat=2):
            inst = MuInstance.make(2, th, ph, h=h)
            assert mu_exact(inst).value == mu_brute_oracle(inst, h + 1).value
            assert mu_exact(inst).value == mu_brute_oracle(inst, h + 2).value


def test_d2_oracle_and_value():
    rng = random.Random(32)
    for _ in range(20):
        q, h = rng.choice([2, 3]), rng.randint(1, 4)
        inst = MuInstance.make(q, tuple(rng.randrange(q) for _ in range(h)), h=h)
        assert mu_exact(inst).value == mu_brute_oracle(inst, h + 1).value == AbsValue(-2)


def test_workers_do_not_change_answer():
    inst = MuInstance.make(3, *EX1)
    a, b = mu_exact(inst, workers=1), mu_exact(inst, workers=2)
    assert a == b


def test_periodicity():
    rng = random.Random(33)
    for _ in range(50):
        p, h = rng.choice([2, 3]), rng.randint(1, 6)
        theta = LaurentTail(tuple(rng.randrange(p) for _ in range(h)), p).to_ratfunc()
        N = Poly([rng.randrange(p) for _ in range(h)], p)
        M = Poly([rng.randrange(p) for _ in range(3)], p)
        shifted = RatFunc(N + M.shift(h))
        assert split_integer_fractional(shifted * theta)[1] == split_integer_fractional(RatFunc(N) * theta)[1]


def test_grid_zero_branch():
    """With alpha = beta = 1/x the N = 0 term is exactly q^-3."""
    inst = MuInstance.make(3, (), ())
    g = (LaurentTail((1,), 3), LaurentTail((1,), 3))
    assert grid_value(inst, g) == AbsValue(-3)
