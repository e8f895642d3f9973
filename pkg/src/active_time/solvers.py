"""Feasibility oracle plus exact, greedy and minimal-feasible solvers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .flow import FlowNetwork
from .model import Instance, Schedule, active_set, dumps


class InfeasibleInstanceError(Exception):
    """No schedule exists even with every slot active."""


@dataclass(frozen=True)
class Solution:
    cost: int
    active: tuple[int, ...]
    schedule: Schedule

    def to_dict(self) -> dict:
        return {
            "status": "feasible",
            "cost": self.cost,
            "active": list(self.active),
            "schedule": self.schedule.to_dict(),
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())


def feasible_with(instance: Instance, active: Iterable[int]) -> Schedule | None:
    """Return a complete schedule using only ``active`` slots, or None.

    Max-flow on source -> job (capacity p) -> slot (capacity 1, for slots in
    window and active) -> sink (capacity b).
    """
    slots = active_set(active)
    for s in slots:
        if not 0 <= s < instance.horizon:
            raise ValueError(f"slot {s} outside horizon {instance.horizon}")
    jobs = instance.jobs
    usable = []
    for job in jobs:
        mine = [s for s in slots if job.release <= s <= job.deadline]
        if len(mine) < job.processing:
            return None
        usable.append(mine)
    if not jobs:
        return Schedule({})

    node_of = {s: len(jobs) + 1 + k for k, s in enumerate(slots)}
    sink = len(jobs) + len(slots) + 1
    net = FlowNetwork(sink + 1)
    job_edges = []
    for k, job in enumerate(jobs):
        net.add_edge(0, k + 1, job.processing)
        job_edges.append([(s, net.add_edge(k + 1, node_of[s], 1)) for s in usable[k]])
    for s in slots:
        net.add_edge(node_of[s], sink, instance.batch_size)

    demand = sum(j.processing for j in jobs)
    if net.max_flow(0, sink, limit=demand) < demand:
        return None
    return Schedule({
        job.id: tuple(s for s, e in job_edges[k] if net.flow_on(e))
        for k, job in enumerate(jobs)
    })


def forced_slots(instance: Instance) -> tuple[int, ...]:
    """Slots that are the only window slot of some job."""
    return active_set(j.release for j in instance.jobs if j.release == j.deadline)


def _solution(instance: Instance, active: Sequence[int]) -> Solution:
    schedule = feasible_with(instance, active)
    assert schedule is not None
    return Solution(len(active), tuple(active), schedule)


def solve_minimal(instance: Instance, order: Sequence[int]) -> Solution | None:
    """Deactivate slots one at a time in ``order`` while feasibility survives.

    The result is a minimal feasible active set: no single slot can be
    dropped from it.
    """
    if sorted(order) != list(range(instance.horizon)):
        raise ValueError("order must be a permutation of the slot indices")
    active = set(range(instance.horizon))
    if feasible_with(instance, active) is None:
        return None
    for s in order:
        active.discard(s)
        if feasible_with(instance, active) is None:
            active.add(s)
    return _solution(instance, active_set(active))


def solve_greedy(instance: Instance) -> Solution | None:
    """Left-to-right slot shutdown."""
    return solve_minimal(instance, range(instance.horizon))


def _lower_bound(instance: Instance, chosen: set[int], open_slots: set[int]) -> int | None:
    """Extra slots still needed on top of ``chosen``; None if unreachable.

    Combines the largest per-job deficit with the number of pairwise
    disjoint windows that contain no chosen slot (each needs its own
    new slot).
    """
    worst = 0
    uncovered = []
    for job in instance.jobs:
        have = sum(1 for s in chosen if job.release <= s <= job.deadline)
        need = job.processing - have
        if need <= 0:
            continue
        avail = sum(1 for s in open_slots if job.release <= s <= job.deadline)
        if avail < need:
            return None
        worst = max(worst, need)
        if have == 0:
            uncovered.append((job.deadline, job.release))
    disjoint = 0
    last_end = -1
    for end, start in sorted(uncovered):
        if start > last_end:
            disjoint += 1
            last_end = end
    return max(worst, disjoint)


def solve_exact(instance: Instance, budget: int | None = None) -> Solution | None:
    """Minimum-cardinality active set with a witness schedule.

    Among optima the lexicographically smallest slot set is returned. With
    ``budget`` the search is cut at that cost and None means no schedule
    of cost <= budget exists. Raises InfeasibleInstanceError when the
    instance cannot be scheduled at all.
    """
    everything = range(instance.horizon)
    if feasible_with(instance, everything) is None:
        raise InfeasibleInstanceError("infeasible even with all slots active")
    if not instance.jobs:
        return Solution(0, (), Schedule({}))

    forced = set(forced_slots(instance))
    free = [s for s in everything if s not in forced]
    greedy = solve_greedy(instance)
    bound = greedy.cost if budget is None else min(greedy.cost, budget)
    best: list[tuple[int, ...]] = []

    def search(pos: int, chosen: set[int], excluded: set[int]) -> None:
        nonlocal bound
        open_slots = {s for s in free[pos:]}
        extra = _lower_bound(instance, chosen, open_slots)
        if extra is None:
            return
        lb = len(chosen) + extra
        if lb > bound or (best and lb >= bound):
            return
        if extra == 0 and feasible_with(instance, chosen) is not None:
            best[:] = [active_set(chosen)]
            bound = len(chosen)
            return
        if pos == len(free):
            return
        s = free[pos]
        chosen.add(s)
        search(pos + 1, chosen, excluded)
        chosen.discard(s)
        excluded.add(s)
        if feasible_with(instance, (t for t in everything if t not in excluded)) is not None:
            search(pos + 1, chosen, excluded)
        excluded.discard(s)

    search(0, set(forced), set())
    if not best:
        return None
    return _solution(instance, best[0])
