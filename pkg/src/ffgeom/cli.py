"""Command-line front end: ``ffgeom <command> [flags]``.

Output is a list of ``key value`` records, printed as-is (``--output
record``) or as an aligned two-column table.  Exit status: 0 success,
1 domain error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
from functools import singledispatch

from .algebra import AbsValue, LaurentTail, format_poly, format_ratfunc
from .dirichlet import DirichletInstance, DirichletSolution, dirichlet_solve, dirichlet_verify
from .errors import FFGeomError, NotFoundAtCap, ParseError
from .lattice import (
    ConvexBody,
    MinimaProfile,
    covrad_body,
    covrad_cube,
    decompose,
    is_well_rounded,
    minima,
    read_lattice,
)
from .minkmu import MuInstance, MuResult, mu_brute_oracle, mu_exact, uncovered_grid
from .mordell import Box, is_admissible, kappa_search, wr_box_certificate
from .orbit import DEFAULT_CAP, WeightVector, find_wellrounded_shift
from .selftest import run_selftest


class UsageError(Exception):
    pass


# -- records -------------------------------------------------------------------


def _abs(v: AbsValue) -> str:
    return str(v)


def _tail(t: LaurentTail) -> str:
    return format_ratfunc(t.to_ratfunc())


def _ints(xs) -> str:
    return " ".join(str(x) for x in xs)


@singledispatch
def emit_record(result) -> list[str]:
    """Stable ``key value`` lines for a library result."""
    raise TypeError(f"no record form for {type(result).__name__}")


@emit_record.register
def _(result: AbsValue):
    return [f"value {_abs(result)}"]


@emit_record.register
def _(result: MuResult):
    lines = [f"mu {_abs(result.value)}"]
    if result.witness is not None:
        lines.append(_witness_line(result.witness))
    return lines


@emit_record.register
def _(result: MinimaProfile):
    lines = [f"lambda {_ints(result.exponents)}"]
    for i, row in enumerate(result.reduced_basis):
        lines.append(f"reduced_row {i + 1} " + " ".join(format_ratfunc(e) for e in row))
    return lines


@emit_record.register
def _(result: NotFoundAtCap):
    return [f"wr_shift not_found cap {result.cap}"]


@emit_record.register
def _(result: WeightVector):
    return [f"wr_shift {result}"]


@emit_record.register
def _(result: Box):
    return [f"box {result}", f"box_volume q^{result.volume_exponent}"]


@emit_record.register
def _(result: DirichletSolution):
    lines = [f"b {i + 1} {format_poly(b)}" for i, b in enumerate(result.bs)]
    lines.append(f"a {format_poly(result.a)}")
    achieved = "0" if result.achieved_exponent is None else f"q^{result.achieved_exponent}"
    lines.append(f"achieved {achieved}")
    return lines


def _witness_line(witness) -> str:
    names = ("alpha", "beta")
    return "uncovered " + " ".join(f"{n}={_tail(t)}" for n, t in zip(names, witness))


def _bool(b: bool) -> str:
    return "true" if b else "false"


# -- commands ------------------------------------------------------------------


def _read(path):
    try:
        return read_lattice(path)
    except ParseError as err:
        raise UsageError(f"{path}: byte {err.offset}: expected {err.expected}") from err


def _lattice(args):
    if not args.file:
        raise UsageError("--file is required")
    return _read(args.file)


def cmd_minima(args):
    return emit_record(minima(_lattice(args))), 0


def cmd_decompose(args):
    L = _lattice(args)
    u, h, e = decompose(L)
    lines = [f"lambda {_ints(e)}"]
    lines += [f"u_row {i + 1} " + " ".join(format_ratfunc(c) for c in row) for i, row in enumerate(u)]
    lines += [
        f"h_row {i + 1} " + " ".join(format_poly(c) for c in row)
        for i, row in enumerate(h.entries)
    ]
    return lines, 0


def cmd_covrad(args):
    L = _lattice(args)
    if args.body:
        C = ConvexBody(_read(args.body).basis)
        return [f"covrad {_abs(covrad_body(L, C))}", f"body_volume q^{C.volume_exponent}"], 0
    return [f"covrad {_abs(covrad_cube(L))}"], 0


def cmd_wellround(args):
    L = _lattice(args)
    lines = [f"well_rounded {_bool(is_well_rounded(L))}"]
    try:
        a = find_wellrounded_shift(L, args.cap)
    except NotFoundAtCap as err:
        return lines + emit_record(err), 1
    return lines + emit_record(a), 0


def _mu_instance(args) -> MuInstance:
    if args.q is None or args.theta is None:
        raise UsageError("mu needs --q and --theta")
    if len(args.theta) != 1:
        raise UsageError("mu takes a single --theta")
    d = args.d if args.d is not None else (2 if args.phi is None else 3)
    if d not in (2, 3) or (d == 3) != (args.phi is not None):
        raise UsageError("--d 2 takes --theta only; --d 3 needs --phi as well")
    return MuInstance.make(args.q, args.theta[0], args.phi)


def cmd_mu(args):
    inst = _mu_instance(args)
    if args.T is not None:
        witness = uncovered_grid(inst, args.T, args.workers)
        lines = [f"mu_at_most q^-{args.T} {_bool(witness is None)}"]
        if witness is not None:
            lines.append(_witness_line(witness))
    else:
        lines = emit_record(mu_exact(inst, args.workers))
    if args.precision is not None:
        lines.append(f"mu_oracle {_abs(mu_brute_oracle(inst, args.precision).value)}")
    return lines, 0


def cmd_mordell(args):
    L = _lattice(args)
    d = L.d
    lines = [f"cube_admissible {_bool(is_admissible(L, Box.cube(d)))}"]
    best, box, exhausted = kappa_search(L, args.window)
    if box is None:
        lines.append(f"kappa none window {args.window}")
    else:
        lines += [f"kappa q^{best}", f"kappa_box {box}"]
    lines.append(f"kappa_upper_bound_confirmed {_bool(exhausted)}")
    try:
        a, cert = wr_box_certificate(L, args.cap)
    except NotFoundAtCap as err:
        return lines + emit_record(err), 1
    lines += [f"certificate_shift {a}", f"certificate_box {cert}"]
    return lines, 0


def cmd_dirichlet(args):
    if args.q is None or not args.theta or not args.t:
        raise UsageError("dirichlet needs --q, --theta and --t")
    if len(args.theta) != len(args.t):
        raise UsageError(f"{len(args.theta)} --theta values but {len(args.t)} --t values")
    inst = DirichletInstance.make(args.q, args.theta, args.t)
    sol = dirichlet_solve(inst)
    lines = emit_record(sol)
    ok = dirichlet_verify(inst, sol)
    lines.append(f"verified {_bool(ok)}")
    return lines, 0 if ok else 1


def cmd_selftest(args):
    lines, status = [], 0
    for name, n, failures in run_selftest():
        lines.append(f"selftest {name} {'pass' if failures == 0 else 'fail'} {n - failures}/{n}")
        status = status or (1 if failures else 0)
    return lines, status


COMMANDS = {
    "minima": cmd_minima,
    "decompose": cmd_decompose,
    "covrad": cmd_covrad,
    "wellround": cmd_wellround,
    "mu": cmd_mu,
    "mordell": cmd_mordell,
    "dirichlet": cmd_dirichlet,
    "selftest": cmd_selftest,
}


def _default_workers() -> int:
    env = os.environ.get("FFGEOM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffgeom", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--file", help="lattice file")
    parser.add_argument("--body", help="convex body file (covrad), same format as a lattice")
    parser.add_argument("--q", type=int, help="prime field size")
    parser.add_argument("--d", type=int, help="dimension for mu (2 or 3)")
    parser.add_argument("--theta", action="append", help="target tail; repeatable for dirichlet")
    parser.add_argument("--phi", help="second tail for d = 3")
    parser.add_argument("--t", type=int, action="append", help="degree budget; repeatable")
    parser.add_argument("--T", type=_positive, help="mu decision threshold")
    parser.add_argument("--cap", type=int, default=DEFAULT_CAP)
    parser.add_argument("--window", type=int, default=6)
    parser.add_argument("--precision", type=int, help="also run the brute-force mu oracle")
    parser.add_argument("--workers", type=_positive, default=None)
    parser.add_argument("--output", choices=("table", "record"), default="record")
    return parser


def render(lines: list[str], mode: str) -> str:
    if mode == "record" or not lines:
        return "\n".join(lines)
    pairs = [line.split(" ", 1) + [""] for line in lines]
    width = max(len(p[0]) for p in pairs)
    return "\n".join(f"{k.ljust(width)} | {v}".rstrip() for k, v, *_ in pairs)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.workers is None:
        args.workers = _default_workers()
    try:
        lines, status = COMMANDS[args.command](args)
    except UsageError as err:
        print(f"ffgeom: {err}", file=sys.stderr)
        return 2
    except ParseError as err:
        print(f"ffgeom: parse error at offset {err.offset}: expected {err.expected}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"ffgeom: {err}", file=sys.stderr)
        return 2
    except (FFGeomError, ValueError) as err:
        print(f"ffgeom: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    out = render(lines, args.output)
    if out:
        print(out)
    return status


def main() -> None:
    sys.exit(run())
