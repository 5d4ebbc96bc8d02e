"""Diagonal weights x^a, Minkowski flags and the well-rounded shift search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebra import AbsValue
from .errors import BadWeight, NotFoundAtCap, NotUnimodular
from .lattice import LatticeBasis, MinimaProfile, kcolumn, minima, minima_exponents, reduce_basis, wedge

DEFAULT_CAP = 10


@dataclass(frozen=True)
class WeightVector:
    entries: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(a) for a in self.entries))
        if sum(self.entries) != 0:
            raise BadWeight(f"weights {self.entries} do not sum to zero")

    @classmethod
    def zero(cls, d: int) -> "WeightVector":
        return cls((0,) * d)

    def sup_norm(self) -> int:
        return max(abs(a) for a in self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __str__(self):
        return " ".join(str(a) for a in self.entries)


@dataclass(frozen=True)
class MinkowskiFlag:
    """Flag of the subspaces spanned by the minima blocks.

    ``breaks`` lists the dimensions k < d after which the minima jump;
    ``prefix_norms[k-1]`` is the norm of c_1 ^ ... ^ c_k for the reduced
    basis c of x^a L.
    """

    exponents: tuple[int, ...]
    breaks: tuple[int, ...]
    prefix_norms: tuple[AbsValue, ...]

    @property
    def trivial(self) -> bool:
        return not self.breaks

    def blocks(self) -> list[tuple[int, ...]]:
        cuts = (0,) + self.breaks + (len(self.exponents),)
        return [self.exponents[a:b] for a, b in zip(cuts, cuts[1:])]

    def norm(self) -> AbsValue:
        """Max prefix wedge norm over the proper flag members (1 if trivial)."""
        if not self.breaks:
            return AbsValue(0)
        return max(self.prefix_norms[k - 1] for k in self.breaks)


def _as_weight(a, d: int) -> WeightVector:
    w = a if isinstance(a, WeightVector) else WeightVector(tuple(a))
    if len(w) != d:
        raise BadWeight(f"weight length {len(w)} != dimension {d}")
    return w


def weighted_minima(L: LatticeBasis, a) -> MinimaProfile:
    """Minima of L under |v|_a = max q^(a_i) |v_i|, i.e. minima of x^a L."""
    if not L.is_unimodular():
        raise NotUnimodular(f"det exponent {L.det_exponent}")
    w = _as_weight(a, L.d)
    return minima(L.scaled(w.entries))


def minkowski_flag(L: LatticeBasis, a=None) -> MinkowskiFlag:
    w = WeightVector.zero(L.d) if a is None else _as_weight(a, L.d)
    if not L.is_unimodular():
        raise NotUnimodular(f"det exponent {L.det_exponent}")
    e, reduced, _ = reduce_basis(L.scaled(w.entries))
    breaks = tuple(k for k in range(1, L.d) if e[k - 1] < e[k])
    cols = [kcolumn(reduced, j) for j in range(L.d)]
    prefix = tuple(wedge(cols[:k]).norm() for k in range(1, L.d))
    return MinkowskiFlag(e, breaks, prefix)


def _distinct(L: LatticeBasis, a: Sequence[int]) -> tuple[int, int]:
    e = minima_exponents(L.scaled(a))
    return len(set(e)), sum(x * x for x in e)


def greedy_shift(L: LatticeBasis, cap: int, max_steps: int = 200) -> list[tuple[int, ...]]:
    """Trajectory of the greedy weight search, ending where it stalls.

    From the current flag, the first move tried raises the weights on the
    coordinates carrying the shortest block (support of its wedge) and
    lowers the rest, re-centred to sum zero; after that every unit transfer
    e_i - e_j is tried.  A move is accepted only if it does not increase
    the number of distinct minima and strictly lowers the sum of squared
    minima exponents.
    """
    d = L.d
    a = (0,) * d
    path = [a]
    score = _distinct(L, a)
    for _ in range(max_steps):
        if score[0] == 1:
            break
        flag = minkowski_flag(L, a)
        k = flag.breaks[0]
        reduced = reduce_basis(L.scaled(a))[1]
        cols = [kcolumn(reduced, j) for j in range(k)]
        J = max(wedge(cols).coeffs.items(), key=lambda kv: (kv[1].abs(), [-i for i in kv[0]]))[0]
        # +1 on the block's support, -k/(d-k) elsewhere, scaled to integers
        lift = [(d - k) if i in J else -k for i in range(d)]
        moves = [tuple(x + l for x, l in zip(a, lift))]
        for i, j in itertools.permutations(range(d), 2):
            m = list(a)
            m[i] += 1
            m[j] -= 1
            moves.append(tuple(m))
        best = None
        for m in moves:
            if max(abs(x) for x in m) > cap:
                continue
            s = _distinct(L, m)
            if s[0] <= score[0] and s[1] < score[1]:
                best = (m, s)
                break
        if best is None:
            break
        a, score = best
        path.append(a)
    return path


def weight_ball(d: int, cap: int):
    """Z_0^d ordered by sup-norm, then lexicographically."""
    for r in range(cap + 1):
        for head in itertools.product(range(-r, r + 1), repeat=d - 1):
            a = head + (-sum(head),)
            if max(abs(x) for x in a) == r:
                yield a


def find_wellrounded_shift(L: LatticeBasis, cap: int = DEFAULT_CAP) -> WeightVector:
    """A weight a with |a|_inf <= cap making x^a L well rounded.

    Tries the greedy trajectory first, then the full ball in weight_ball
    order.  Raises NotFoundAtCap carrying the best weight seen.
    """
    if not L.is_unimodular():
        raise NotUnimodular(f"det exponent {L.det_exponent}")
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    best, best_score = (0,) * L.d, _distinct(L, (0,) * L.d)
    for a in greedy_shift(L, cap):
        s = _distinct(L, a)
        if s[0] == 1:
            return WeightVector(a)
        if s < best_score:
            best, best_score = a, s
    for a in weight_ball(L.d, cap):
        s = _distinct(L, a)
        if s[0] == 1:
            return WeightVector(a)
        if s < best_score:
            best, best_score = a, s
    raise NotFoundAtCap(cap, WeightVector(best))
