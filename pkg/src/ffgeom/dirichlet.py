"""Constructive improved Dirichlet approximation for finite-tail targets.

With b_i = sum_k b_ik x^k, deg b_i <= t_i, the coefficient of x^-s in
sum b_i theta_i is sum_i sum_k b_ik theta_i,s+k.  Forcing it to vanish for
s = 1..m, m = sum t_i + n - 1, is m equations in m + 1 unknowns, so a
nonzero solution exists and |sum b_i theta_i - a| <= q^-(m+1) with a the
polynomial part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import AbsValue, FieldSpec, LaurentTail, Poly, RatFunc, parse_ratfunc, tail_of
from .errors import BadDimensions, DimensionMismatch
from .polymat import FpMatrix, hankel_block, nullspace_fp


@dataclass(frozen=True)
class DirichletInstance:
    field: FieldSpec
    thetas: tuple[LaurentTail, ...]
    ts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "thetas", tuple(self.thetas))
        object.__setattr__(self, "ts", tuple(int(t) for t in self.ts))
        if not self.thetas:
            raise BadDimensions("need at least one target")
        if len(self.thetas) != len(self.ts):
            raise DimensionMismatch(f"{len(self.thetas)} targets but {len(self.ts)} budgets")
        if any(t < 0 for t in self.ts):
            raise BadDimensions(f"budgets must be nonnegative: {self.ts}")
        if any(th.p != self.field.p for th in self.thetas):
            raise ValueError("target over the wrong field")

    @classmethod
    def make(cls, p: int, thetas: Sequence, ts: Sequence[int]) -> "DirichletInstance":
        """Targets may be tails, digit tuples or ratfunc strings in x^-1 O."""

        def tail(t):
            if isinstance(t, LaurentTail):
                return t
            if isinstance(t, (str, RatFunc)):
                f = parse_ratfunc(t, p) if isinstance(t, str) else t
                if f and f.abs() >= AbsValue(0):
                    raise ValueError(f"target {t} is not in x^-1 O")
                return tail_of(f)
            return LaurentTail(tuple(t), p)

        return cls(FieldSpec(p), tuple(tail(t) for t in thetas), tuple(ts))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def n(self) -> int:
        return len(self.thetas)

    @property
    def m(self) -> int:
        return sum(self.ts) + self.n - 1


@dataclass(frozen=True)
class DirichletSolution:
    bs: tuple[Poly, ...]
    a: Poly
    achieved_exponent: int | None  # None when the combination is exactly a


def theta_matrix(inst: DirichletInstance) -> FpMatrix:
    m = inst.m
    blocks = [hankel_block(th, 1, m, t + 1).entries for th, t in zip(inst.thetas, inst.ts)]
    return FpMatrix(np.concatenate(blocks, axis=1), inst.p)


def _combination(inst: DirichletInstance, bs: Sequence[Poly]) -> RatFunc:
    acc = RatFunc.zero(inst.p)
    for b, th in zip(bs, inst.thetas):
        acc = acc + RatFunc(b) * th.to_ratfunc()
    return acc


def dirichlet_solve(inst: DirichletInstance) -> DirichletSolution:
    p = inst.p
    v = nullspace_fp(theta_matrix(inst))[0]
    bs, pos = [], 0
    for t in inst.ts:
        bs.append(Poly(v[pos : pos + t + 1], p))
        pos += t + 1
    combo = _combination(inst, bs)
    a = combo.num // combo.den
    err = (combo - RatFunc(a)).abs()
    return DirichletSolution(tuple(bs), a, err.exponent)


def dirichlet_verify(inst: DirichletInstance, sol: DirichletSolution) -> bool:
    if len(sol.bs) != inst.n:
        raise DimensionMismatch(f"{len(sol.bs)} coefficients for {inst.n} targets")
    if all(b.is_zero() for b in sol.bs):
        return False
    if any(b.degree > t for b, t in zip(sol.bs, inst.ts)):
        return False
    err = (_combination(inst, sol.bs) - RatFunc(sol.a)).abs()
    return err <= AbsValue(-(sum(inst.ts) + inst.n))
