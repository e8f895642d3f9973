import dataclasses
import random
from itertools import product

import pytest

from active_time.generate import random_formula
from active_time.model import Schedule, verify_schedule
from active_time.reduction import build_reduction
from active_time.sat import Assignment, CnfFormula
from active_time.solvers import feasible_with, forced_slots, solve_exact, solve_greedy
from active_time.witness import (
    CostExceedsTarget,
    GadgetConflict,
    InconsistentInstances,
    InvalidSchedule,
    UnbalancedAssignment,
    UnbalancedExtraction,
    UnsatisfiedClause,
    assignment_to_schedule,
    copy_usage,
    roundtrip_check,
    schedule_to_assignment,
)
from oracles import satisfies

XOR = CnfFormula(2, ((1, 2), (-1, -2)))


def balanced_solutions(f):
    n = f.num_vars
    for bits in product((True, False), repeat=n):
        values = dict(enumerate(bits, 1))
        if 2 * sum(bits) == n and satisfies(f.clauses, values):
            yield Assignment(values)


def check_forward(out, a):
    s = assignment_to_schedule(out, a)
    report = verify_schedule(out.instance, s)
    assert report.valid, report.violations
    assert report.cost == out.target
    loads = s.loads()
    b, n = out.instance.batch_size, out.num_vars
    for slot, name in enumerate(out.timeline.names):
        if name.kind in ("L", "R", "C"):
            assert loads[slot] == b, name
        else:
            assert loads[slot] <= 1 + 2 * n < b
    return s


def test_forward_xor():
    out = build_reduction(XOR)
    s = check_forward(out, Assignment({1: True, 2: False}))
    assert s.slots_of("var:1:1") == (out.timeline.slot(out.timeline.names[2]),)


def test_forward_rejects_unbalanced():
    with pytest.raises(UnbalancedAssignment):
        assignment_to_schedule(build_reduction(XOR), Assignment({1: True, 2: True}))


def test_forward_rejects_unsatisfied():
    out = build_reduction(CnfFormula(2, ((1,), (-2,))))
    with pytest.raises(UnsatisfiedClause) as err:
        assignment_to_schedule(out, Assignment({1: False, 2: True}))
    assert "unsatisfied clause 1" in str(err.value)
    check_forward(out, Assignment({1: True, 2: False}))


def formulas(count, seed):
    rng = random.Random(seed)
    return [random_formula(rng, rng.choice([2, 4]), 3, 3) for _ in range(count)]


@pytest.mark.parametrize("f", formulas(40, 3), ids=lambda f: f.to_dimacs().replace("\n", "|"))
def test_forward_and_identity_round_trip(f):
    out = build_reduction(f)
    for a in balanced_solutions(f):
        s = check_forward(out, a)
        assert schedule_to_assignment(out, s) == a
        assert set(copy_usage(out, s).values()) <= {f.num_vars}


def assert_backward_sound(out, schedule):
    a = schedule_to_assignment(out, schedule)
    assert 2 * a.num_true() == out.num_vars
    assert satisfies(out.formula.clauses, a.values)
    assert all(v == out.num_vars for v in copy_usage(out, schedule).values())
    return a


@pytest.mark.parametrize("f", formulas(40, 4), ids=lambda f: f.to_dimacs().replace("\n", "|"))
def test_backward_on_solver_schedules(f):
    out = build_reduction(f)
    sol = solve_exact(out.instance, budget=out.target)
    sat = next(balanced_solutions(f), None)
    assert (sol is None) == (sat is None)
    if sol is not None:
        assert sol.cost == out.target
        assert_backward_sound(out, sol.schedule)
    greedy = solve_greedy(out.instance)
    if greedy is not None and greedy.cost <= out.target:
        assert_backward_sound(out, greedy.schedule)


@pytest.mark.parametrize("f", formulas(25, 5), ids=lambda f: f.to_dimacs().replace("\n", "|"))
def test_backward_on_random_active_sets(f):
    """Every cost-t active set feasible under the flow oracle must decode."""
    out = build_reduction(f)
    rng = random.Random(f.to_dimacs())
    base = set(forced_slots(out.instance))
    gadgets = out.timeline.gadgets()
    for _ in range(30):
        active = base | {s + rng.randint(0, 1) for _, _, s in gadgets}
        sched = feasible_with(out.instance, active)
        if sched is not None:
            assert_backward_sound(out, sched)


def test_backward_cost_exceeds_target():
    out = build_reduction(XOR)
    s = assignment_to_schedule(out, Assignment({1: True, 2: False}))
    extra = dict(s.assignments)
    # copy:2:0 spans L..V:2:1:pos; it can pick up the unused left slot of x2's first gadget
    job = out.instance.job("copy:2:0")
    free = [t for t in job.window if t not in s.used_slots()]
    slots = list(extra["copy:2:0"])
    slots[-1] = free[0]
    extra["copy:2:0"] = tuple(slots)
    bumped = Schedule(extra)
    rep = verify_schedule(out.instance, bumped)
    assert rep.valid and rep.cost == out.target + 1
    with pytest.raises(CostExceedsTarget, match="cost exceeds target"):
        schedule_to_assignment(out, bumped)


def test_backward_invalid_schedule():
    out = build_reduction(XOR)
    with pytest.raises(InvalidSchedule):
        schedule_to_assignment(out, Schedule({}))


def test_backward_gadget_conflict():
    out = build_reduction(XOR)
    slot = {str(n): k for k, n in enumerate(out.timeline.names)}
    s = assignment_to_schedule(out, Assignment({1: True, 2: False}))
    # copy:1:1 runs from V:1:1:neg to V:1:2:pos; move its last unit onto the idle V:1:1:neg
    edited = dict(s.assignments)
    assert slot["V:1:2:pos"] in edited["copy:1:1"]
    edited["copy:1:1"] = tuple(
        sorted(set(edited["copy:1:1"]) - {slot["V:1:2:pos"]} | {slot["V:1:1:neg"]})
    )
    conflict = Schedule(edited)
    rep = verify_schedule(out.instance, conflict)
    assert rep.valid and rep.cost == out.target + 1
    relaxed = dataclasses.replace(out, target=rep.cost)
    with pytest.raises(GadgetConflict, match="both"):
        schedule_to_assignment(relaxed, conflict)


def uncapped(out):
    """Same reduction with the batch limit lifted, so only counting constraints bind."""
    inst = dataclasses.replace(out.instance, batch_size=10 * out.instance.batch_size)
    return dataclasses.replace(out, instance=inst)


def choice_schedule(out, choices):
    slot = {str(n): k for k, n in enumerate(out.timeline.names)}
    active = set(forced_slots(out.instance))
    for (i, j), val in choices.items():
        active.add(slot[f"V:{i}:{j}:{'pos' if val else 'neg'}"])
    return feasible_with(out.instance, active)


def test_backward_inconsistent_instances():
    # x1 appears twice; false-then-true passes the copy chain once L/R capacity is lifted
    out = uncapped(build_reduction(CnfFormula(2, ((1, 2), (-1,)))))
    sched = choice_schedule(out, {(1, 1): False, (1, 2): True, (2, 1): True})
    assert sched is not None
    with pytest.raises(InconsistentInstances):
        schedule_to_assignment(out, sched)


def test_backward_unbalanced_extraction():
    out = uncapped(build_reduction(CnfFormula(2, ((1, 2),))))
    sched = choice_schedule(out, {(1, 1): True, (2, 1): True})
    assert sched is not None
    with pytest.raises(UnbalancedExtraction):
        schedule_to_assignment(out, sched)


def test_true_then_false_cannot_be_scheduled():
    # the chain implication is a pure counting fact: no batch size rescues it
    out = uncapped(build_reduction(CnfFormula(2, ((1, 2), (-1,)))))
    assert choice_schedule(out, {(1, 1): True, (1, 2): False, (2, 1): True}) is None


def test_roundtrip_examples():
    rep = roundtrip_check(XOR)
    assert rep.balanced_sat_feasible and rep.scheduling_feasible_at_t and rep.agree
    assert rep.assignment == Assignment({1: True, 2: False})
    assert verify_schedule(build_reduction(XOR).instance, rep.schedule).valid
    both_true = roundtrip_check(CnfFormula(2, ((1,), (2,))))
    assert not both_true.balanced_sat_feasible
    assert not both_true.scheduling_feasible_at_t
    assert both_true.agree
    doc = both_true.to_dict()
    assert doc["witnesses"] is None and doc["reduction"] == {"t": 6, "b": 6, "horizon": 8}
