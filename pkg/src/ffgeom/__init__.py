"""Exact geometry of numbers over F_q((1/x)).

Successive minima and orthogonal bases of lattices g F_q[x]^d, covering
radii, the Minkowski function of unipotent lattices in dimensions 2 and 3,
well-rounded diagonal shifts, Mordell boxes and the improved Dirichlet
solver.  Prime fields only.
"""

from .algebra import (
    AbsValue,
    FieldSpec,
    LaurentTail,
    Poly,
    RatFunc,
    abs_value,
    format_ratfunc,
    parse_ratfunc,
    parse_tail,
    product_norm,
    rho_pi,
    split_integer_fractional,
    tail_of,
    vec_norm,
)
from .dirichlet import DirichletInstance, DirichletSolution, dirichlet_solve, dirichlet_verify
from .errors import FFGeomError, NotFoundAtCap
from .lattice import (
    ConvexBody,
    LatticeBasis,
    MinimaProfile,
    covering_oracle,
    covrad_body,
    covrad_cube,
    decompose,
    enumerate_in_box,
    is_well_rounded,
    minima,
    parse_lattice,
    format_lattice,
)
from .minkmu import MuInstance, MuResult, certify_uncovered, mu_brute_oracle, mu_decision, mu_exact
from .mordell import Box, is_admissible, kappa_search, wr_box_certificate
from .orbit import MinkowskiFlag, WeightVector, find_wellrounded_shift, minkowski_flag, weighted_minima

__version__ = "0.1.0"
