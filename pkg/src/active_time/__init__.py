"""Active time scheduling: solvers, and the reduction from Balanced SAT."""

from .estimators import ActiveTimeScheduler, BalancedSatReduction, check_formula, check_instance
from .model import Instance, Job, Schedule, StructuralError, VerifyReport, Violation, verify_schedule
from .reduction import ReductionOutput, build_reduction, uniform_processing_check
from .sat import (
    Assignment,
    CnfFormula,
    brute_balanced_sat,
    brute_sat,
    parse_dimacs,
    serialize_dimacs,
    to_balanced,
)
from .solvers import (
    InfeasibleInstanceError,
    Solution,
    feasible_with,
    solve_exact,
    solve_greedy,
    solve_minimal,
)
from .witness import (
    RoundTripReport,
    assignment_to_schedule,
    roundtrip_check,
    schedule_to_assignment,
)

__version__ = "0.1.0"
