"""Admissible boxes and a window-bounded search for the Mordell function.

A box with exponents e meets L only at 0 iff the lattice x^-e L has no
nonzero vector of norm <= 1, i.e. iff its first minimum exponent is >= 1.
That reformulation replaces a point enumeration with one column reduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import BadDimensions, DimensionMismatch, NotUnimodular
from .lattice import LatticeBasis, minima_exponents
from .orbit import DEFAULT_CAP, WeightVector, find_wellrounded_shift

DEFAULT_WINDOW = 6


@dataclass(frozen=True)
class Box:
    """{v : |v_i| <= q^(e_i) for all i}."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))

    @property
    def d(self) -> int:
        return len(self.exponents)

    @property
    def volume_exponent(self) -> int:
        return sum(self.exponents)

    @classmethod
    def cube(cls, d: int, e: int = -1) -> "Box":
        return cls((e,) * d)

    @classmethod
    def slab(cls, d: int, n: int) -> "Box":
        """B(0, q^-n) x B(0, 1) x ... x B(0, 1)."""
        return cls((-n,) + (0,) * (d - 1))

    def __str__(self):
        return " ".join(str(e) for e in self.exponents)


def _as_box(box) -> Box:
    return box if isinstance(box, Box) else Box(tuple(box))


def is_admissible(L: LatticeBasis, box) -> bool:
    box = _as_box(box)
    if box.d != L.d:
        raise DimensionMismatch(f"box of dimension {box.d} for lattice of dimension {L.d}")
    return minima_exponents(L.scaled([-e for e in box.exponents]))[0] >= 1


def _level(d: int, window: int, total: int):
    """Exponent vectors in [-window, window]^d summing to total, lexicographic."""
    for head in itertools.product(range(-window, window + 1), repeat=d - 1):
        last = total - sum(head)
        if -window <= last <= window:
            yield head + (last,)


def kappa_search(L: LatticeBasis, window: int = DEFAULT_WINDOW):
    """(best volume exponent, best box, exhausted) within the window.

    Levels are scanned from the largest volume down; the first level with an
    admissible box wins, and within it the lexicographically smallest box.
    ``exhausted`` is True when every box of volume exponent >= -(d-1) in the
    window was checked and found inadmissible.  If no box in the window is
    admissible the best entries are None.
    """
    if not L.is_unimodular():
        raise NotUnimodular(f"det exponent {L.det_exponent}")
    d = L.d
    if window < d:
        raise BadDimensions(f"window {window} is smaller than the dimension {d}")
    for total in range(d * window, -d * window - 1, -1):
        for e in _level(d, window, total):
            if is_admissible(L, e):
                return total, Box(e), total <= -d
    return None, None, True


def wr_box_certificate(L: LatticeBasis, cap: int = DEFAULT_CAP) -> tuple[WeightVector, Box]:
    """Pull back the cube B(0, q^-1)^d from a well-rounded x^a L."""
    a = find_wellrounded_shift(L, cap)
    box = Box(tuple(-1 - ai for ai in a.entries))
    if not is_admissible(L, box):  # cannot happen for a well-rounded shift
        raise AssertionError(f"certificate box {box} is not admissible")
    return a, box


def box_scaling_pair(L: LatticeBasis, a: Sequence[int], box) -> tuple[bool, bool]:
    """(is_admissible(x^a L, e), is_admissible(L, e - a)); these always agree."""
    box = _as_box(box)
    shifted = Box(tuple(e - ai for e, ai in zip(box.exponents, a)))
    return is_admissible(L.scaled(a), box), is_admissible(L, shifted)
