"""The Minkowski function mu for unipotent lattices with finite tails.

For theta (and phi) with x-power denominators of length <= h, the grid
problem reduces to finitely many F_q-linear conditions.  Write A(v, w) for
the length of the common prefix of two digit strings, clamped to h.  A
grid remainder pair (alpha, beta) is covered at threshold T when

  * N = 0 works:  1 + ord(alpha) + ord(beta) >= T, or
  * some N != 0 with deg N = m <= h - 1 has
        A(alpha, <N theta>) + A(beta, <N phi>) >= m + T - 2.

Digits of alpha beyond index h can only enlarge every distance, so the
worst grids have a nonzero digit at h + 1; this is what clamps every
effective exponent at h + 1 and makes the check finite and exact.
mu <= q^-T holds iff every prefix pair in F_q^h x F_q^h is covered.

The vectors (<N theta>_1, ..., <N theta>_h) are the images of the Hankel
matrix of theta, so the covered sets are unions of cylinders over its
column space.  The decision enumerates alpha and marks, for each alpha,
the beta-cylinders it leaves to be covered in a digit trie.
"""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AbsValue,
    FieldSpec,
    LaurentTail,
    Poly,
    RatFunc,
    parse_tail,
    tail_of,
)
from .errors import BadThreshold, DimensionMismatch, PrecisionTooLow
from .lattice import LatticeBasis, kmat
from .polymat import FpMatrix, hankel_block, nullspace_fp, solve_fp

_INF = 1 << 30


@dataclass(frozen=True)
class MuInstance:
    field: FieldSpec
    d: int
    theta: LaurentTail
    phi: LaurentTail | None
    h: int

    def __post_init__(self):
        if self.d not in (2, 3):
            raise DimensionMismatch(f"mu is implemented for d = 2, 3 only, got {self.d}")
        if (self.phi is None) != (self.d == 2):
            raise DimensionMismatch("phi is required exactly when d = 3")
        if self.h < 1:
            raise ValueError("tail length bound h must be at least 1")
        for t in self.tails:
            if t.p != self.field.p:
                raise ValueError("tail over the wrong field")
            if t.h > self.h:
                raise ValueError(f"tail of length {t.h} exceeds h = {self.h}")

    @classmethod
    def make(cls, p: int, theta, phi=None, h: int | None = None) -> "MuInstance":
        """Build from tails or ratfunc strings; h defaults to the longest tail."""

        def tail(t):
            if isinstance(t, LaurentTail):
                return t
            if isinstance(t, str):
                return parse_tail(t, p)
            return LaurentTail(tuple(t), p)

        theta = tail(theta)
        phi = None if phi is None else tail(phi)
        if h is None:
            h = max([1, theta.h] + ([phi.h] if phi is not None else []))
        return cls(FieldSpec(p), 2 if phi is None else 3, theta, phi, h)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def tails(self) -> tuple[LaurentTail, ...]:
        return (self.theta,) if self.phi is None else (self.theta, self.phi)


@dataclass(frozen=True)
class MuResult:
    """mu = ``value``; ``witness`` is an uncovered grid at the next threshold.

    The witness tails carry the clamping digit at index h + 1, so they are
    actual grid translates attaining the value.
    """

    value: AbsValue
    witness: tuple[LaurentTail, ...] | None = None

    @property
    def depth(self) -> int:
        return -self.value.exponent


def make_unipotent_lattice(inst: MuInstance) -> LatticeBasis:
    p = inst.p
    one, zero = RatFunc.one(p), RatFunc.zero(p)
    if inst.d == 2:
        rows = [[one, inst.theta.to_ratfunc()], [zero, one]]
    else:
        rows = [
            [one, zero, inst.theta.to_ratfunc()],
            [zero, one, inst.phi.to_ratfunc()],
            [zero, zero, one],
        ]
    return LatticeBasis(inst.field, kmat(rows))


# -- the finite decision ---------------------------------------------------------


def _digits(n_values: int, q: int, width: int) -> np.ndarray:
    """Row k holds the base-q digits of k, most significant first."""
    k = np.arange(n_values, dtype=np.int64)
    out = np.empty((n_values, width), dtype=np.int64)
    for i in range(width - 1, -1, -1):
        out[:, i] = k % q
        k //= q
    return out


def _first_nonzero(rows: np.ndarray, none: int) -> np.ndarray:
    nz = rows != 0
    return np.where(nz.any(axis=1), nz.argmax(axis=1) + 1, none)


class _Tables:
    """Precomputed images <N t>_1..h for every nonzero N of degree < h."""

    def __init__(self, inst: MuInstance):
        q, h = inst.p, inst.h
        self.q, self.h, self.d = q, h, inst.d
        size = q**h
        # N_0..N_{h-1} as digits of 1..q^h-1, N_0 least significant
        ncoef = _digits(size, q, h)[1:, ::-1]
        nz = ncoef != 0
        self.mdeg = h - 1 - nz[:, ::-1].argmax(axis=1)
        self.prefix = []
        for t in inst.tails:
            H = hankel_block(t, 1, h, h).entries
            img = ncoef @ H.T % q  # row: (<N t>_1, ..., <N t>_h)
            codes = np.zeros((h + 1, len(img)), dtype=np.int64)
            for r in range(1, h + 1):
                codes[r] = codes[r - 1] * q + img[:, r - 1]
            self.prefix.append(codes)
        self.order = _first_nonzero(_digits(size, q, h), h + 1)
        self.powers = [q ** (h - r) for r in range(h + 1)]

    def common_prefix(self, which: int, index: int) -> np.ndarray:
        """A(v, <N t>) for the digit string v with the given code, all N."""
        codes = self.prefix[which]
        acc = np.zeros(codes.shape[1], dtype=np.int64)
        for r in range(1, self.h + 1):
            acc += codes[r] == index // self.powers[r]
        return acc

    def covered(self, which: int, need: np.ndarray) -> np.ndarray:
        """Digit strings v with A(v, <N t>) >= need[N] for some N."""
        q = self.q
        codes = self.prefix[which]
        cov = np.zeros(1, dtype=bool)
        for r in range(1, self.h + 1):
            cov = np.repeat(cov, q)
            cov[codes[r][need == r]] = True
        return cov


def _alpha_candidates(q: int, h: int) -> list[int]:
    """alpha = 0 and the alphas whose leading nonzero digit is 1.

    Scaling (alpha, beta, N) by c in F_q^* preserves coverage, so these
    representatives suffice.
    """
    out = [0]
    for lead in range(h):
        base = q ** (h - 1 - lead)
        out.extend(range(base, 2 * base))
    return sorted(out)


def _scan_block(tables: _Tables, T: int, alphas) -> tuple[int, int] | None:
    if tables.d == 2:
        return _scan_d2(tables, T)
    for a in alphas:
        oa = int(tables.order[a])
        if oa + 2 >= T:  # N = 0 covers every beta
            continue
        need = tables.mdeg + (T - 2) - tables.common_prefix(0, a)
        if (need <= 0).any():
            continue
        cov = tables.covered(1, need)
        cov |= tables.order >= T - 1 - oa
        if not cov.all():
            return a, int(np.argmin(cov))
    return None


def _scan_d2(tables: _Tables, T: int) -> tuple[int, int] | None:
    cov = tables.covered(0, tables.mdeg + (T - 1))
    cov |= tables.order + 1 >= T
    if cov.all():
        return None
    return int(np.argmin(cov)), 0


_WORKER: dict = {}


def _worker_init(inst):
    _WORKER["tables"] = _Tables(inst)


def _worker_scan(args):
    T, alphas = args
    return _scan_block(_WORKER["tables"], T, alphas)


def _digits_to_tail(code: int, q: int, h: int) -> LaurentTail:
    digits = [int(x) for x in _digits(code + 1, q, h)[code]]
    return LaurentTail(tuple(digits) + (1,), q)


def _find_uncovered(inst: MuInstance, T: int, workers: int = 1):
    q, h = inst.p, inst.h
    alphas = _alpha_candidates(q, h)
    if workers <= 1 or inst.d == 2:
        hit = _scan_block(_Tables(inst), T, alphas)
    else:
        chunk = max(1, len(alphas) // (workers * 32))
        blocks = iter((T, alphas[i : i + chunk]) for i in range(0, len(alphas), chunk))
        hit = None
        ex = ProcessPoolExecutor(workers, initializer=_worker_init, initargs=(inst,))
        try:
            # a short in-order window: the first hit in block order is the
            # serial scan's hit, and little work is wasted after it
            window = deque(ex.submit(_worker_scan, b) for b in itertools.islice(blocks, 2 * workers))
            while window:
                hit = window.popleft().result()
                if hit is not None:
                    break
                for b in itertools.islice(blocks, 1):
                    window.append(ex.submit(_worker_scan, b))
        finally:
            ex.shutdown(wait=True, cancel_futures=True)
    if hit is None:
        return None
    a, b = hit
    if inst.d == 2:
        return (_digits_to_tail(a, q, h),)
    return _digits_to_tail(a, q, h), _digits_to_tail(b, q, h)


def _check_threshold(inst: MuInstance, T) -> int:
    if not isinstance(T, (int, np.integer)) or T < 1:
        raise BadThreshold(f"threshold must be a positive integer, got {T!r}")
    return int(T)


def mu_decision(inst: MuInstance, T: int, workers: int = 1) -> bool:
    """True iff mu(Lambda_inst) <= q^-T."""
    T = _check_threshold(inst, T)
    if T <= inst.d:
        return True
    return _find_uncovered(inst, T, workers) is None


def uncovered_grid(inst: MuInstance, T: int, workers: int = 1):
    """A grid witnessing mu > q^-T, or None when mu <= q^-T."""
    T = _check_threshold(inst, T)
    if T <= inst.d:
        return None
    return _find_uncovered(inst, T, workers)


def mu_exact(inst: MuInstance, workers: int = 1) -> MuResult:
    """Scan T = d, d+1, ... up to the first failing threshold."""
    for T in range(inst.d + 1, 2 * inst.h + 4):
        witness = _find_uncovered(inst, T, workers)
        if witness is not None:
            return MuResult(AbsValue(-(T - 1)), witness)
    raise AssertionError("threshold 2h + 3 must fail")  # unreachable by clamping


# -- independent checks ------------------------------------------------------------


def certify_uncovered(inst: MuInstance, T: int, witness) -> bool:
    """Check a witness against the stacked Hankel systems directly.

    For every degree bound m and every split of the m + T - 2 required
    matching digits between the tails, the system
        Theta-block * (N_0..N_m) = alpha-prefix,  Phi-block * (...) = beta-prefix
    must have no solution with N != 0; and the N = 0 grid term must exceed
    q^-T.
    """
    q, h = inst.p, inst.h
    tails = inst.tails
    prefixes = [w.padded(h) for w in witness]
    orders = []
    for w in witness:
        e = w.abs().exponent
        orders.append(_INF if e is None else min(-e, h + 1))
    if 1 + sum(orders) >= T:
        return False
    for m in range(h):
        total = m + T - 2
        splits = (
            [(total,)]
            if inst.d == 2
            else [(k, total - k) for k in range(0, total + 1)]
        )
        for split in splits:
            if any(k < 0 or k > h for k in split):
                continue
            blocks = [hankel_block(t, 1, k, m + 1).entries for t, k in zip(tails, split)]
            M = FpMatrix(np.concatenate(blocks, axis=0), q)
            rhs = [c for pre, k in zip(prefixes, split) for c in pre[:k]]
            if any(rhs):
                if solve_fp(M, rhs) is not None:
                    return False
            elif nullspace_fp(M):
                return False
    return True


def _grid(q: int, P: int) -> np.ndarray:
    return _digits(q**P, q, P)


def _direct_images(inst: MuInstance, P: int):
    """(polys, degrees, per-tail digit arrays of <N t>) for all N != 0, deg N < h.

    Digits come from exact products N * t in F_p(x), not from Hankel blocks.
    """
    q, h = inst.p, inst.h
    polys = [Poly(c, q) for c in itertools.product(range(q), repeat=h) if any(c)]
    mdeg = np.array([f.degree for f in polys], dtype=np.int64)
    images = []
    for t in inst.tails:
        tr = t.to_ratfunc()
        images.append(
            np.array([tail_of(RatFunc(f) * tr).padded(P) for f in polys], dtype=np.int64)
        )
    return polys, mdeg, images


def grid_value(inst: MuInstance, grid, images=None) -> AbsValue:
    """min over lattice points of N(v - u) for the grid remainder ``grid``.

    ``grid`` holds alpha (and beta) as LaurentTails; gamma is taken with
    |gamma| = q^-1, the worst case.
    """
    if len(grid) != inst.d - 1:
        raise DimensionMismatch("grid needs one tail per unipotent column entry")
    P = max([inst.h + 1] + [g.h for g in grid])
    if images is None or images[2][0].shape[1] < P:
        images = _direct_images(inst, P)
    _, mdeg, imgs = images
    P = imgs[0].shape[1]
    depth = 1
    terms = -mdeg
    for g, img in zip(grid, imgs):
        e = g.abs().exponent
        depth = _INF if e is None or depth >= _INF else depth - e
        v = _first_nonzero((img - np.array(g.padded(P))) % inst.p, _INF)
        terms = np.where((v >= _INF) | (terms >= _INF), _INF, terms + v)
    best = max(depth, int(terms.max()))
    return AbsValue.zero() if best >= _INF else AbsValue(-best)


def mu_brute_oracle(inst: MuInstance, precision: int) -> MuResult:
    """Evaluate sup over grids of min over N directly on P-digit remainders.

    Distances |<N theta - alpha>| are read off exact Laurent expansions of
    N * theta; the N = 0 term uses |gamma| = q^-1.  Exact for P >= h + 1.
    """
    h, q = inst.h, inst.p
    if precision < h + 1:
        raise PrecisionTooLow(f"precision {precision} < h + 1 = {h + 1}")
    P = precision
    grid = _grid(q, P)
    order = _first_nonzero(grid, _INF)
    _, mdeg, images = _direct_images(inst, P)
    # per tail: (numN, q^P) array of -log_q |<N t - v>|
    depths = [
        np.array([_first_nonzero((img[None, :] - grid) % q, _INF) for img in imgs])
        for imgs in images
    ]
    if inst.d == 2:
        dt = depths[0]
        nz = np.where(dt >= _INF, _INF, dt - mdeg[:, None])
        value = np.maximum(np.minimum(1 + order, _INF), nz.max(axis=0))
        k = int(np.argmin(value))
        best = int(value[k])
        witness = (LaurentTail(tuple(int(x) for x in grid[k]), q),)
    else:
        best, witness = _INF, None
        dt, dp = depths
        for a in range(len(grid)):
            raw = dt[:, a][:, None] + dp
            terms = np.where(raw >= _INF, _INF, raw - mdeg[:, None])
            value = np.maximum(np.minimum(1 + order[a] + order, _INF), terms.max(axis=0))
            k = int(np.argmin(value))
            if value[k] < best:
                best = int(value[k])
                witness = (
                    LaurentTail(tuple(int(x) for x in grid[a]), q),
                    LaurentTail(tuple(int(x) for x in grid[k]), q),
                )
    if best >= _INF:
        return MuResult(AbsValue.zero(), witness)
    return MuResult(AbsValue(-best), witness)
