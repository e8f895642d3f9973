"""Instances, schedules and the schedule verifier."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class StructuralError(ValueError):
    """Input does not describe a well-formed instance or schedule."""


@dataclass(frozen=True)
class Job:
    id: str
    release: int
    deadline: int
    processing: int

    def __post_init__(self) -> None:
        if self.release < 0:
            raise StructuralError(f"job {self.id!r}: negative release {self.release}")
        if self.release > self.deadline:
            raise StructuralError(
                f"job {self.id!r}: release {self.release} after deadline {self.deadline}"
            )
        if self.processing < 1:
            raise StructuralError(f"job {self.id!r}: processing must be >= 1")

    @property
    def window(self) -> range:
        """Slots the job may occupy; both endpoints included."""
        return range(self.release, self.deadline + 1)

    @property
    def window_size(self) -> int:
        return self.deadline - self.release + 1


@dataclass(frozen=True)
class Instance:
    jobs: tuple[Job, ...]
    batch_size: int
    horizon: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if self.batch_size < 1:
            raise StructuralError("batch_size must be >= 1")
        if self.horizon < 0:
            raise StructuralError("horizon must be >= 0")
        seen: set[str] = set()
        for job in self.jobs:
            if job.id in seen:
                raise StructuralError(f"duplicate job id {job.id!r}")
            seen.add(job.id)
            if job.deadline > self.horizon - 1:
                raise StructuralError(
                    f"job {job.id!r}: window [{job.release}, {job.deadline}] "
                    f"exceeds horizon {self.horizon}"
                )

    @property
    def slots(self) -> range:
        return range(self.horizon)

    def job(self, job_id: str) -> Job:
        for job in self.jobs:
            if job.id == job_id:
                return job
        raise KeyError(job_id)

    def canonical(self) -> "Instance":
        return Instance(
            tuple(sorted(self.jobs, key=lambda j: j.id)), self.batch_size, self.horizon
        )

    def to_dict(self) -> dict:
        return {
            "batch_size": self.batch_size,
            "horizon": self.horizon,
            "jobs": [
                {
                    "id": j.id,
                    "release": j.release,
                    "deadline": j.deadline,
                    "processing": j.processing,
                }
                for j in sorted(self.jobs, key=lambda j: j.id)
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Instance":
        try:
            jobs = tuple(
                Job(
                    str(j["id"]),
                    int(j["release"]),
                    int(j["deadline"]),
                    int(j["processing"]),
                )
                for j in data["jobs"]
            )
            return cls(jobs, int(data["batch_size"]), int(data["horizon"]))
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed instance JSON: {exc}") from exc

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Instance":
        return cls.from_dict(json.loads(text))


def active_set(slots: Iterable[int]) -> tuple[int, ...]:
    """Normalize a collection of slot indices into a sorted duplicate-free tuple."""
    return tuple(sorted(set(slots)))


@dataclass(frozen=True)
class Schedule:
    """Per-job slot lists.

    Slot lists are kept as sorted tuples rather than sets so that a schedule
    read from disk with a repeated slot is still representable and can be
    rejected by :func:`verify_schedule`.
    """

    assignments: Mapping[str, tuple[int, ...]]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "assignments",
            {k: tuple(sorted(v)) for k, v in sorted(self.assignments.items())},
        )

    def slots_of(self, job_id: str) -> tuple[int, ...]:
        return self.assignments.get(job_id, ())

    def loads(self) -> Counter:
        """Number of jobs occupying each slot."""
        counts: Counter = Counter()
        for slots in self.assignments.values():
            counts.update(set(slots))
        return counts

    def used_slots(self) -> tuple[int, ...]:
        return active_set(s for slots in self.assignments.values() for s in slots)

    @property
    def cost(self) -> int:
        return len(self.used_slots())

    def to_dict(self) -> dict:
        return {
            "assignments": [
                {"job": job, "slots": list(slots)}
                for job, slots in self.assignments.items()
            ]
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Schedule":
        try:
            return cls({str(a["job"]): tuple(int(s) for s in a["slots"])
                        for a in data["assignments"]})
        except (KeyError, TypeError) as exc:
            raise StructuralError(f"malformed schedule JSON: {exc}") from exc

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Schedule":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Violation:
    kind: str  # window | shortfall | excess | overflow | duplicate
    job: str | None = None
    slot: int | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "job": self.job, "slot": self.slot, "detail": self.detail}


@dataclass(frozen=True)
class VerifyReport:
    cost: int
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def valid(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "cost": self.cost,
            "violations": [v.to_dict() for v in self.violations],
        }


def verify_schedule(instance: Instance, schedule: Schedule) -> VerifyReport:
    """Check a complete schedule against every constraint of ``instance``.

    Unknown job ids raise :class:`StructuralError`; everything else is
    reported as a violation. A job missing from the schedule counts as
    scheduled nowhere.
    """
    jobs = {j.id: j for j in instance.jobs}
    unknown = sorted(set(schedule.assignments) - set(jobs))
    if unknown:
        raise StructuralError(f"schedule references unknown jobs: {unknown}")

    violations: list[Violation] = []
    for job in sorted(jobs.values(), key=lambda j: j.id):
        slots = schedule.slots_of(job.id)
        counts = Counter(slots)
        for slot, c in sorted(counts.items()):
            if c > 1:
                violations.append(Violation("duplicate", job.id, slot, f"{c} times"))
            if not job.release <= slot <= job.deadline:
                violations.append(
                    Violation("window", job.id, slot,
                              f"outside [{job.release}, {job.deadline}]")
                )
        distinct = len(counts)
        if distinct < job.processing:
            violations.append(
                Violation("shortfall", job.id, None, f"{distinct} of {job.processing}")
            )
        elif distinct > job.processing:
            violations.append(
                Violation("excess", job.id, None, f"{distinct} of {job.processing}")
            )

    loads = schedule.loads()
    for slot in sorted(loads):
        if loads[slot] > instance.batch_size:
            violations.append(
                Violation("overflow", None, slot,
                          f"{loads[slot]} jobs, batch size {instance.batch_size}")
            )
    return VerifyReport(cost=len(loads), violations=tuple(violations))


def dumps(data) -> str:
    """Canonical JSON text used by every writer in the package."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
