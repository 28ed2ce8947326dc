"""Symbolic Hodge-diamond calculus and a construction planner for Hodge numbers mod m."""

from ._backend import BACKEND
from .calculus import AtomSpec, atom, blowup, blowup_shift, chi_section, kuenneth, lefschetz_section, power
from .diamond import (
    HodgeDiamond,
    Increment,
    ResidueTargets,
    check_targets,
    diamond_equals_mod,
    make_diamond,
)
from .plan import Plan, PlanNode, blowup_trace, eval_plan, parse, serialize
from .planner import PlannerContext, solve_full, solve_inner, solve_outer
from .poly import Assignment, SymPoly, const_mod, evaluate, poly_arith
from .verify import verify

__version__ = "0.1.0"
