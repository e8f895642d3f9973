"""scikit-learn style wrappers around the solvers and the reduction."""

from __future__ import annotations

import json
from typing import Mapping

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .model import Instance, Schedule
from .reduction import ReductionOutput, build_reduction, check_reducible
from .sat import Assignment, CnfFormula, parse_dimacs, to_balanced
from .solvers import (
    InfeasibleInstanceError,
    solve_exact,
    solve_greedy,
    solve_minimal,
)
from .witness import assignment_to_schedule, schedule_to_assignment

ALGORITHMS = ("exact", "greedy", "minimal")


def check_instance(X) -> Instance:
    """Accept an Instance, its dict form or its JSON text."""
    if isinstance(X, Instance):
        return X
    if isinstance(X, str):
        return Instance.from_json(X)
    if isinstance(X, Mapping):
        return Instance.from_dict(X)
    raise TypeError(f"expected an Instance, mapping or JSON string, got {type(X).__name__}")


def check_formula(X) -> CnfFormula:
    """Accept a CnfFormula, its dict form, DIMACS text or JSON text."""
    if isinstance(X, CnfFormula):
        return X
    if isinstance(X, Mapping):
        return CnfFormula.from_dict(X)
    if isinstance(X, str):
        if X.lstrip().startswith("{"):
            return CnfFormula.from_dict(json.loads(X))
        return parse_dimacs(X)
    raise TypeError(f"expected a CnfFormula, mapping or text, got {type(X).__name__}")


class ActiveTimeScheduler(BaseEstimator):
    """Solve an active time instance.

    Parameters
    ----------
    algorithm : {"exact", "greedy", "minimal"}
    budget : int, optional
        Only used by ``exact``; caps the admissible cost.
    order : sequence of int, optional
        Slot visiting order for ``minimal``; identity when omitted.

    After ``fit`` the attributes ``status_`` ("feasible", "infeasible" or
    "over_budget"), ``cost_``, ``active_set_`` and ``schedule_`` are set;
    the last three are None unless a schedule was found.
    """

    def __init__(self, algorithm="exact", budget=None, order=None):
        self.algorithm = algorithm
        self.budget = budget
        self.order = order

    def fit(self, X, y=None):
        instance = check_instance(X)
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        status = "feasible"
        try:
            if self.algorithm == "exact":
                sol = solve_exact(instance, self.budget)
                if sol is None:
                    status = "over_budget"
            elif self.algorithm == "greedy":
                sol = solve_greedy(instance)
            else:
                order = range(instance.horizon) if self.order is None else self.order
                sol = solve_minimal(instance, list(order))
        except InfeasibleInstanceError:
            sol = None
        if sol is None and status == "feasible":
            status = "infeasible"
        self.status_ = status
        self.cost_ = sol.cost if sol else None
        self.active_set_ = sol.active if sol else None
        self.schedule_ = sol.schedule if sol else None
        self.solution_ = sol
        return self

    def fit_predict(self, X, y=None) -> Schedule | None:
        return self.fit(X).schedule_


class BalancedSatReduction(TransformerMixin, BaseEstimator):
    """Formula -> scheduling instance, with assignments and schedules mapped both ways.

    ``transform`` returns the full :class:`ReductionOutput`; ``inverse_transform``
    reads an assignment back from a schedule of the fitted reduction.
    """

    def __init__(self, balance=False):
        self.balance = balance

    def _prepare(self, X) -> CnfFormula:
        f = check_formula(X)
        if self.balance:
            f = to_balanced(f)
        check_reducible(f)
        return f

    def fit(self, X, y=None):
        self.formula_ = self._prepare(X)
        self.reduction_ = build_reduction(self.formula_)
        self.n_vars_ = self.formula_.num_vars
        return self

    def transform(self, X) -> ReductionOutput:
        f = self._prepare(X)
        check_is_fitted(self, "reduction_")
        if f == self.formula_:
            return self.reduction_
        return build_reduction(f)

    def schedule_for(self, assignment: Assignment) -> Schedule:
        check_is_fitted(self, "reduction_")
        return assignment_to_schedule(self.reduction_, assignment)

    def inverse_transform(self, schedule: Schedule) -> Assignment:
        try:
            reduction = self.reduction_
        except AttributeError:
            raise NotFittedError("call fit before inverse_transform") from None
        return schedule_to_assignment(reduction, schedule)
