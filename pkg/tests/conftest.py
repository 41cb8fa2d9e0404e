from __future__ import annotations

import random

import pytest

from skelcodec.model import NUM_JOINTS, Skeleton


def random_skeleton(rng: random.Random, pid: int = 0, lo: int = 0, hi: int = 1000, missing: int = 0) -> Skeleton:
    joints = [(rng.randint(lo, hi), rng.randint(lo, hi)) for _ in range(NUM_JOINTS)]
    for j in rng.sample(range(NUM_JOINTS), missing):
        joints[j] = None
    return Skeleton(pid, tuple(joints))


def translated(s: Skeleton, dx: int, dy: int, pid: int | None = None) -> Skeleton:
    return Skeleton(s.id if pid is None else pid, tuple(None if p is None else (p[0] + dx, p[1] + dy) for p in s.joints))


def only(joints: dict[int, tuple[int, int]], pid: int = 0) -> Skeleton:
    return Skeleton(pid, tuple(joints.get(j) for j in range(1, NUM_JOINTS + 1)))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(1234)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
