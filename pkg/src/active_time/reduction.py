"""Compile a Balanced SAT formula into an active time scheduling instance.

Timeline, left to right: ``L``; for every clause the gadgets of its
negative literals, the clause slot ``C:k``, the gadgets of its positive
literals; finally ``R``. A variable gadget is the adjacent pair
``V:i:j:pos`` / ``V:i:j:neg`` for the j-th occurrence of x_i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .model import Instance, Job, dumps
from .sat import CnfFormula, FormulaError


@dataclass(frozen=True)
class SlotName:
    kind: str  # "L", "R", "C", "pos", "neg"
    clause: int = 0
    var: int = 0
    instance: int = 0

    def __str__(self) -> str:
        if self.kind in ("L", "R"):
            return self.kind
        if self.kind == "C":
            return f"C:{self.clause}"
        return f"V:{self.var}:{self.instance}:{self.kind}"

    @classmethod
    def parse(cls, text: str) -> "SlotName":
        parts = text.split(":")
        if parts == ["L"] or parts == ["R"]:
            return cls(parts[0])
        if len(parts) == 2 and parts[0] == "C":
            return cls("C", clause=int(parts[1]))
        if len(parts) == 4 and parts[0] == "V" and parts[3] in ("pos", "neg"):
            return cls(parts[3], var=int(parts[1]), instance=int(parts[2]))
        raise ValueError(f"bad slot name {text!r}")


L = SlotName("L")
R = SlotName("R")


def clause_slot(k: int) -> SlotName:
    return SlotName("C", clause=k)


def pos_slot(i: int, j: int) -> SlotName:
    return SlotName("pos", var=i, instance=j)


def neg_slot(i: int, j: int) -> SlotName:
    return SlotName("neg", var=i, instance=j)


@dataclass(frozen=True)
class TimelineMap:
    names: tuple[SlotName, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {n: s for s, n in enumerate(self.names)})
        if len(self._index) != len(self.names):
            raise ValueError("slot names must be distinct")

    def __len__(self) -> int:
        return len(self.names)

    def slot(self, name: SlotName) -> int:
        return self._index[name]

    def name(self, slot: int) -> SlotName:
        return self.names[slot]

    def gadgets(self) -> list[tuple[int, int, int]]:
        """(var, instance, left slot) for every variable gadget, in timeline order."""
        return [(n.var, n.instance, s) for s, n in enumerate(self.names) if n.kind == "pos"]

    def clause_slots(self) -> list[int]:
        return [s for s, n in enumerate(self.names) if n.kind == "C"]

    def to_list(self) -> list[dict]:
        return [{"slot": s, "name": str(n)} for s, n in enumerate(self.names)]


@dataclass(frozen=True)
class Provenance:
    kind: str  # unit_filler | variable_choice | clause_job | copy_job
    slot: str | None = None
    var: int | None = None
    instance: int | None = None
    clause: int | None = None
    position: int | None = None
    segment: int | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass(frozen=True)
class ClauseLayout:
    """One clause as laid out: literals negatives-first with their instance numbers."""

    clause: int
    literals: tuple[int, ...]
    instances: tuple[int, ...]

    @property
    def num_negative(self) -> int:
        return sum(1 for lit in self.literals if lit < 0)


@dataclass(frozen=True)
class ReductionOutput:
    formula: CnfFormula
    instance: Instance
    target: int
    timeline: TimelineMap
    provenance: Mapping[str, Provenance]
    occurrences: Mapping[int, tuple[tuple[int, bool], ...]]
    layouts: tuple[ClauseLayout, ...]

    @property
    def num_vars(self) -> int:
        return self.formula.num_vars

    @property
    def batch_size(self) -> int:
        return self.instance.batch_size

    def jobs_of_kind(self, kind: str) -> list[Job]:
        return [j for j in self.instance.jobs if self.provenance[j.id].kind == kind]

    def to_dict(self) -> dict:
        data = self.instance.to_dict()
        data["target"] = self.target
        data["timeline"] = self.timeline.to_list()
        data["provenance"] = {k: v.to_dict() for k, v in sorted(self.provenance.items())}
        data["formula"] = self.formula.to_dict()
        data["occurrences"] = {
            str(i): [{"clause": k, "positive": pol} for k, pol in occ]
            for i, occ in self.occurrences.items()
        }
        return data

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "ReductionOutput":
        """Rebuild from the embedded formula and check the rest matches it."""
        out = build_reduction(CnfFormula.from_dict(data["formula"]))
        if json.loads(out.to_json()) != json.loads(json.dumps(data)):
            raise ValueError("reduction document does not match its embedded formula")
        return out

    @classmethod
    def from_json(cls, text: str) -> "ReductionOutput":
        return cls.from_dict(json.loads(text))


def check_reducible(f: CnfFormula) -> None:
    if f.num_vars % 2:
        raise FormulaError(f"Balanced SAT needs an even variable count, got {f.num_vars}")
    unused = f.unused_vars()
    if unused:
        raise FormulaError(f"variables never occur: {unused}")


def interior_weight(timeline: TimelineMap, release: int, deadline: int) -> int:
    """Full variable gadgets plus clause slots strictly inside (release, deadline)."""
    count = 0
    for s in range(release + 1, deadline):
        name = timeline.name(s)
        if name.kind == "C":
            count += 1
        elif name.kind == "pos" and s + 1 < deadline:
            count += 1
    return count


def build_reduction(f: CnfFormula) -> ReductionOutput:
    check_reducible(f)
    n = f.num_vars
    m = f.num_clauses
    sizes = [len(c) for c in f.clauses]
    b = 2 * n + 2
    target = m + 2 + sum(sizes)

    names: list[SlotName] = [L]
    seen = {i: 0 for i in range(1, n + 1)}
    occurrences: dict[int, list[tuple[int, bool]]] = {i: [] for i in range(1, n + 1)}
    layouts = []
    for k, clause in enumerate(f.clauses, 1):
        ordered = [lit for lit in clause if lit < 0] + [lit for lit in clause if lit > 0]
        instances = []
        for lit in ordered:
            i = abs(lit)
            seen[i] += 1
            instances.append(seen[i])
            occurrences[i].append((k, lit > 0))
        for lit, j in zip(ordered, instances):
            if lit < 0:
                names += [pos_slot(-lit, j), neg_slot(-lit, j)]
        names.append(clause_slot(k))
        for lit, j in zip(ordered, instances):
            if lit > 0:
                names += [pos_slot(lit, j), neg_slot(lit, j)]
        layouts.append(ClauseLayout(k, tuple(ordered), tuple(instances)))
    names.append(R)
    timeline = TimelineMap(tuple(names))
    at = timeline.slot

    jobs: list[Job] = []
    prov: dict[str, Provenance] = {}

    def add(job_id: str, release: int, deadline: int, processing: int, p: Provenance) -> None:
        jobs.append(Job(job_id, release, deadline, processing))
        prov[job_id] = p

    for i in range(1, n + 1):
        for j in range(1, seen[i] + 1):
            add(f"var:{i}:{j}", at(pos_slot(i, j)), at(neg_slot(i, j)), 1,
                Provenance("variable_choice", var=i, instance=j))

    for end in (L, R):
        for idx in range(b - n // 2):
            add(f"fill:{end}:{idx}", at(end), at(end), 1,
                Provenance("unit_filler", slot=str(end)))

    for lay in layouts:
        c = at(clause_slot(lay.clause))
        size = len(lay.literals)
        for idx in range(b - n - size + 1):
            add(f"fill:C:{lay.clause}:{idx}", c, c, 1,
                Provenance("unit_filler", slot=str(clause_slot(lay.clause))))
        p = lay.num_negative
        for q, (lit, j) in enumerate(zip(lay.literals, lay.instances), 1):
            i = abs(lit)
            if q <= p:
                release, deadline, proc = at(neg_slot(i, j)), c, p - q + 1
            else:
                release, deadline, proc = c, at(pos_slot(i, j)), q - p
            add(f"clause:{lay.clause}:{q}", release, deadline, proc,
                Provenance("clause_job", clause=lay.clause, position=q, var=i, instance=j))

    for i in range(1, n + 1):
        r = seen[i]
        bounds = [at(L)]
        for j in range(1, r + 1):
            bounds += [at(pos_slot(i, j)), at(neg_slot(i, j))]
        bounds.append(at(R))
        for seg in range(r + 1):
            release, deadline = bounds[2 * seg], bounds[2 * seg + 1]
            add(f"copy:{i}:{seg}", release, deadline,
                1 + interior_weight(timeline, release, deadline),
                Provenance("copy_job", var=i, segment=seg))

    out = ReductionOutput(
        formula=f,
        instance=Instance(tuple(jobs), b, len(timeline)),
        target=target,
        timeline=timeline,
        provenance=prov,
        occurrences={i: tuple(occ) for i, occ in occurrences.items()},
        layouts=tuple(layouts),
    )
    _check_counts(out)
    return out


def expected_job_counts(f: CnfFormula) -> dict[str, int]:
    n = f.num_vars
    b = 2 * n + 2
    sizes = [len(c) for c in f.clauses]
    return {
        "variable_choice": sum(sizes),
        "unit_filler": sum(b - n - nk + 1 for nk in sizes) + 2 * (b - n // 2),
        "clause_job": sum(sizes),
        "copy_job": sum(sizes) + n,
    }


def _check_counts(out: ReductionOutput) -> None:
    f = out.formula
    sizes = sum(len(c) for c in f.clauses)
    assert out.target == f.num_clauses + 2 + sizes
    assert out.instance.batch_size == 2 * f.num_vars + 2
    assert out.instance.horizon == 2 + f.num_clauses + 2 * sizes
    for kind, count in expected_job_counts(f).items():
        assert len(out.jobs_of_kind(kind)) == count, kind


def uniform_processing_check(out: ReductionOutput) -> bool:
    """Clause and copy jobs must all satisfy processing = 1 + interior weight."""
    for job in out.instance.jobs:
        if out.provenance[job.id].kind not in ("clause_job", "copy_job"):
            continue
        if job.processing != 1 + interior_weight(out.timeline, job.release, job.deadline):
            return False
    return True
