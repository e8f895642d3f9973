"""Seeded random instances and formulas."""

from __future__ import annotations

import random

from .model import Instance, Job
from .sat import CnfFormula


def random_instance(num_jobs: int, horizon: int, batch_size: int, seed: int) -> Instance:
    """Release uniform on the horizon, deadline uniform in [release, horizon-1],
    processing uniform in [1, window size]."""
    if num_jobs and horizon < 1:
        raise ValueError("jobs need a horizon of at least one slot")
    rng = random.Random(seed)
    width = len(str(max(num_jobs - 1, 0)))
    jobs = []
    for k in range(num_jobs):
        release = rng.randint(0, horizon - 1)
        deadline = rng.randint(release, horizon - 1)
        processing = rng.randint(1, deadline - release + 1)
        jobs.append(Job(f"j{k:0{width}d}", release, deadline, processing))
    return Instance(tuple(jobs), batch_size, horizon)


def random_formula(
    rng: random.Random, num_vars: int, max_clauses: int, max_width: int
) -> CnfFormula:
    """Random formula in which every variable occurs at least once.

    Resamples until the occurrence condition holds, so callers must allow
    enough room (max_clauses * max_width >= num_vars).
    """
    if max_clauses * min(max_width, num_vars) < num_vars:
        raise ValueError("not enough literal positions to use every variable")
    while True:
        clauses = []
        for _ in range(rng.randint(1, max_clauses)):
            width = rng.randint(1, min(max_width, num_vars))
            picked = rng.sample(range(1, num_vars + 1), width)
            clauses.append(tuple(v if rng.random() < 0.5 else -v for v in picked))
        f = CnfFormula(num_vars, tuple(clauses))
        if not f.unused_vars():
            return f
