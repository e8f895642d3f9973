import random

import pytest

from active_time.generate import random_instance


def instance_corpus(count=200, max_horizon=12, max_jobs=8, max_batch=4, salt=0):
    """Seeded random instances used by the solver and acceptance tests."""
    out = []
    for seed in range(count):
        rng = random.Random(seed * 7919 + salt)
        out.append(random_instance(rng.randint(1, max_jobs), rng.randint(1, max_horizon),
                                   rng.randint(1, max_batch), seed + salt))
    return out


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
