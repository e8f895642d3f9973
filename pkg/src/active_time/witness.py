"""Witness translation between Balanced SAT assignments and schedules."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .model import Schedule, dumps, verify_schedule
from .reduction import L, R, ReductionOutput, build_reduction, clause_slot, neg_slot, pos_slot
from .sat import Assignment, CnfFormula, brute_balanced_sat, unsatisfied_clauses
from .solvers import InfeasibleInstanceError, solve_exact


class WitnessError(Exception):
    pass


class UnbalancedAssignment(WitnessError):
    pass


class UnsatisfiedClause(WitnessError):
    def __init__(self, clause: int):
        super().__init__(f"unsatisfied clause {clause}")
        self.clause = clause


class InvalidSchedule(WitnessError):
    pass


class CostExceedsTarget(WitnessError):
    pass


class GadgetConflict(WitnessError):
    """A variable gadget with both (or neither) of its slots active."""


class InconsistentInstances(WitnessError):
    pass


class UnbalancedExtraction(WitnessError):
    pass


def assignment_to_schedule(out: ReductionOutput, a: Assignment) -> Schedule:
    """Schedule of cost exactly ``out.target`` built from a balanced satisfying assignment."""
    f = out.formula
    if not a.is_total(f.num_vars):
        raise WitnessError(f"assignment must cover variables 1..{f.num_vars}")
    if not a.is_balanced():
        raise UnbalancedAssignment("unbalanced: need exactly n/2 true variables")
    bad = unsatisfied_clauses(f, a)
    if bad:
        raise UnsatisfiedClause(bad[0])

    at = out.timeline.slot
    jobs = {j.id: j for j in out.instance.jobs}
    placed: dict[str, tuple[int, ...]] = {}

    # unit-window jobs, then one slot per gadget
    for job in jobs.values():
        if job.release == job.deadline:
            placed[job.id] = (job.release,)
    for i, occ in out.occurrences.items():
        for j in range(1, len(occ) + 1):
            slot = pos_slot(i, j) if a[i] else neg_slot(i, j)
            placed[f"var:{i}:{j}"] = (at(slot),)
    active = {s for slots in placed.values() for s in slots}

    def active_in(job_id: str, skip: set[int] = frozenset(), only_interior=False) -> tuple[int, ...]:
        job = jobs[job_id]
        lo, hi = job.release, job.deadline
        if only_interior:
            lo, hi = lo + 1, hi - 1
        return tuple(s for s in range(lo, hi + 1) if s in active and s not in skip)

    def put(job_id: str, slots: tuple[int, ...]) -> None:
        need = jobs[job_id].processing
        if len(slots) != need:
            raise AssertionError(f"{job_id}: {len(slots)} active slots for processing {need}")
        placed[job_id] = slots

    for lay in out.layouts:
        c = at(clause_slot(lay.clause))
        chosen = next(q for q, lit in enumerate(lay.literals, 1) if a[abs(lit)] == (lit > 0))
        for q in range(1, len(lay.literals) + 1):
            job_id = f"clause:{lay.clause}:{q}"
            if q == chosen:
                put(job_id, active_in(job_id, skip={c}))
            else:
                put(job_id, tuple(sorted((c,) + active_in(job_id, only_interior=True))))

    for i, occ in out.occurrences.items():
        avoid = {at(L)} if a[i] else {at(R)}
        for seg in range(len(occ) + 1):
            job_id = f"copy:{i}:{seg}"
            put(job_id, active_in(job_id, skip=avoid))

    return Schedule(placed)


def schedule_to_assignment(out: ReductionOutput, s: Schedule) -> Assignment:
    """Read variable values off the gadgets of a valid schedule of cost <= target."""
    report = verify_schedule(out.instance, s)
    if not report.valid:
        raise InvalidSchedule(f"schedule invalid: {sorted(report.kinds())}")
    if report.cost > out.target:
        raise CostExceedsTarget(f"cost exceeds target: {report.cost} > {out.target}")

    used = set(s.used_slots())
    at = out.timeline.slot
    values: dict[int, bool] = {}
    for i, occ in out.occurrences.items():
        seen = set()
        for j in range(1, len(occ) + 1):
            left, right = at(pos_slot(i, j)) in used, at(neg_slot(i, j)) in used
            if left == right:
                raise GadgetConflict(
                    f"gadget of x{i} instance {j} has {'both' if left else 'neither'} slots active"
                )
            seen.add(left)
        if len(seen) != 1:
            raise InconsistentInstances(f"instances of x{i} disagree")
        values[i] = seen.pop()
    a = Assignment(values)
    if not a.is_balanced():
        raise UnbalancedExtraction(f"{a.num_true()} of {len(values)} variables true")
    return a


def copy_usage(out: ReductionOutput, s: Schedule) -> dict[str, int]:
    """Number of copy-gadget jobs occupying each clause slot, keyed by slot name."""
    counts: Counter = Counter()
    clause_slots = {at: str(out.timeline.name(at)) for at in out.timeline.clause_slots()}
    for job_id, slots in s.assignments.items():
        if out.provenance[job_id].kind != "copy_job":
            continue
        for slot in set(slots):
            if slot in clause_slots:
                counts[clause_slots[slot]] += 1
    return {name: counts[name] for name in clause_slots.values()}


@dataclass(frozen=True)
class RoundTripReport:
    num_vars: int
    num_clauses: int
    target: int
    batch_size: int
    horizon: int
    balanced_sat_feasible: bool
    scheduling_feasible_at_t: bool
    assignment: Assignment | None = None
    schedule: Schedule | None = None
    extracted: Assignment | None = None

    @property
    def agree(self) -> bool:
        return self.balanced_sat_feasible == self.scheduling_feasible_at_t

    def to_dict(self) -> dict:
        data = {
            "formula": {"n": self.num_vars, "m": self.num_clauses},
            "reduction": {"t": self.target, "b": self.batch_size, "horizon": self.horizon},
            "balanced_sat_feasible": self.balanced_sat_feasible,
            "scheduling_feasible_at_t": self.scheduling_feasible_at_t,
            "agree": self.agree,
            "witnesses": None,
        }
        if self.assignment is not None and self.schedule is not None:
            data["witnesses"] = {
                "assignment": self.assignment.to_dict(),
                "schedule": self.schedule.to_dict(),
                "extracted_assignment": self.extracted.to_dict() if self.extracted else None,
            }
        return data

    def to_json(self) -> str:
        return dumps(self.to_dict())


def roundtrip_check(f: CnfFormula) -> RoundTripReport:
    """Decide both sides of the reduction independently and compare.

    When both sides are feasible the SAT witness is pushed forward and the
    solver's schedule is pulled back; either translation failing raises.
    """
    out = build_reduction(f)
    a = brute_balanced_sat(f)
    try:
        sol = solve_exact(out.instance, budget=out.target)
    except InfeasibleInstanceError:
        sol = None
    extracted = forward = None
    if a is not None:
        forward = assignment_to_schedule(out, a)
        rep = verify_schedule(out.instance, forward)
        if not rep.valid or rep.cost != out.target:
            raise WitnessError("forward witness failed verification")
    if sol is not None:
        extracted = schedule_to_assignment(out, sol.schedule)
        if unsatisfied_clauses(f, extracted):
            raise WitnessError("extracted assignment does not satisfy the formula")
    return RoundTripReport(
        num_vars=f.num_vars,
        num_clauses=f.num_clauses,
        target=out.target,
        batch_size=out.instance.batch_size,
        horizon=out.instance.horizon,
        balanced_sat_feasible=a is not None,
        scheduling_feasible_at_t=sol is not None,
        assignment=a if sol is not None else None,
        schedule=sol.schedule if sol is not None and a is not None else None,
        extracted=extracted if a is not None else None,
    )
