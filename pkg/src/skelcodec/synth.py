"""Seeded synthetic skeleton sequences.

A fixed number of person slots is simulated.  Occupants leave with probability
``churn`` per frame (or when they walk out of the picture), and an empty slot
is refilled with probability ``respawn``.  Every newcomer gets a fresh ID, so
IDs follow order of first appearance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .model import NUM_JOINTS, Frame, Joint, Sequence, Skeleton

MOTIONS = ("static", "constant-velocity", "random-walk")

# joint offsets from the neck, in units of body height
_BODY = (
    (0.00, -0.12),
    (0.00, 0.00),
    (-0.10, 0.02),
    (-0.13, 0.17),
    (-0.14, 0.30),
    (0.10, 0.02),
    (0.13, 0.17),
    (0.14, 0.30),
    (-0.06, 0.33),
    (-0.07, 0.58),
    (-0.07, 0.83),
    (0.06, 0.33),
    (0.07, 0.58),
    (0.07, 0.83),
)


@dataclass(frozen=True)
class GenConfig:
    persons: int
    frames: int
    seed: int
    width: int = 1280
    height: int = 720
    motion: str = "constant-velocity"
    noise: int = 0
    churn: float = 0.0
    respawn: float = 0.5
    dropout: float = 0.0
    max_missing: int = 4
    max_speed: int = 3
    walk_step: int = 3

    def check(self) -> None:
        if self.persons < 0 or self.frames < 0:
            raise ValueError("persons and frames must be >= 0")
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be >= 1")
        if self.motion not in MOTIONS:
            raise ValueError(f"motion must be one of {', '.join(MOTIONS)}")
        if self.noise < 0 or self.max_speed < 0 or self.walk_step < 0:
            raise ValueError("noise, max_speed and walk_step must be >= 0")
        for name in ("churn", "respawn", "dropout"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability, got {p}")
        if not 0 <= self.max_missing < NUM_JOINTS:
            raise ValueError(f"max_missing must be in 0..{NUM_JOINTS - 1}")


class _Person:
    __slots__ = ("id", "offsets", "x", "y", "vx", "vy", "mask", "bbox")

    def __init__(self, pid, offsets, x, y, vx, vy, mask):
        self.id = pid
        self.offsets = offsets
        self.x, self.y = x, y
        self.vx, self.vy = vx, vy
        self.mask = mask
        xs = [dx for dx, _ in offsets]
        ys = [dy for _, dy in offsets]
        self.bbox = (min(xs), max(xs), min(ys), max(ys))

    def inside(self, width: int, height: int) -> bool:
        x0, x1, y0, y1 = self.bbox
        return 0 <= self.x + x0 and self.x + x1 < width and 0 <= self.y + y0 and self.y + y1 < height


class _Generator:
    def __init__(self, cfg: GenConfig):
        cfg.check()
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.next_id = 0

    def _offsets(self) -> tuple[Joint, ...]:
        cfg, rng = self.cfg, self.rng
        hi = max(1, min(200, cfg.height // 2))
        size = rng.randint(max(1, hi // 3), hi)
        wobble = [(rng.uniform(-0.03, 0.03), rng.uniform(-0.03, 0.03)) for _ in range(NUM_JOINTS)]
        while True:
            offsets = tuple(
                (round((fx + wx) * size), round((fy + wy) * size)) for (fx, fy), (wx, wy) in zip(_BODY, wobble)
            )
            xs = [dx for dx, _ in offsets]
            ys = [dy for _, dy in offsets]
            if (max(xs) - min(xs) < cfg.width and max(ys) - min(ys) < cfg.height) or size == 0:
                return offsets
            size //= 2

    def _fresh_mask(self) -> Optional[tuple[int, ...]]:
        """Absent joint indices (0-based) for 0..max_missing dropped joints."""
        k = self.rng.randint(0, self.cfg.max_missing)
        return tuple(sorted(self.rng.sample(range(NUM_JOINTS), k))) if k else None

    def _spawn(self) -> _Person:
        cfg, rng = self.cfg, self.rng
        offsets = self._offsets()
        xs = [dx for dx, _ in offsets]
        ys = [dy for _, dy in offsets]
        x = rng.randint(-min(xs), cfg.width - 1 - max(xs))
        y = rng.randint(-min(ys), cfg.height - 1 - max(ys))
        vx = vy = 0
        if cfg.motion == "constant-velocity":
            vx = rng.randint(-cfg.max_speed, cfg.max_speed)
            vy = rng.randint(-cfg.max_speed, cfg.max_speed)
        mask = self._fresh_mask() if cfg.dropout and rng.random() < cfg.dropout else None
        person = _Person(self.next_id, offsets, x, y, vx, vy, mask)
        self.next_id += 1
        return person

    def _move(self, p: _Person) -> None:
        cfg, rng = self.cfg, self.rng
        if cfg.motion == "constant-velocity":
            p.x += p.vx
            p.y += p.vy
        elif cfg.motion == "random-walk":
            x0, x1, y0, y1 = p.bbox
            step = cfg.walk_step
            p.x = min(max(p.x + rng.randint(-step, step), -x0), cfg.width - 1 - x1)
            p.y = min(max(p.y + rng.randint(-step, step), -y0), cfg.height - 1 - y1)

    def _render(self, p: _Person) -> Skeleton:
        cfg, rng = self.cfg, self.rng
        a = cfg.noise
        w1, h1 = cfg.width - 1, cfg.height - 1
        joints: list[Optional[Joint]] = []
        for dx, dy in p.offsets:
            x, y = p.x + dx, p.y + dy
            if a:
                x = min(max(x + rng.randint(-a, a), 0), w1)
                y = min(max(y + rng.randint(-a, a), 0), h1)
            joints.append((x, y))
        if p.mask is not None:
            for j in p.mask:
                joints[j] = None
        return Skeleton(p.id, tuple(joints))

    def run(self) -> Sequence:
        cfg, rng = self.cfg, self.rng
        slots: list[Optional[_Person]] = [None] * cfg.persons
        frames = []
        for t in range(cfg.frames):
            for i, p in enumerate(slots):
                if p is None:
                    if t == 0 or rng.random() < cfg.respawn:
                        slots[i] = self._spawn()
                    continue
                if rng.random() < cfg.churn:
                    slots[i] = None
                    continue
                self._move(p)
                if not p.inside(cfg.width, cfg.height):
                    slots[i] = None
                    continue
                if cfg.dropout and rng.random() < cfg.dropout:
                    p.mask = self._fresh_mask()
            skeletons = tuple(sorted((self._render(p) for p in slots if p is not None), key=lambda s: s.id))
            frames.append(Frame(t, skeletons))
        return Sequence(cfg.width, cfg.height, tuple(frames))


def generate(cfg: GenConfig) -> Sequence:
    """Build a deterministic synthetic sequence; same config, same output."""
    return _Generator(cfg).run()


def _posed(pid: int, x: int, y: int, offsets: tuple[Joint, ...]) -> Skeleton:
    return Skeleton(pid, tuple((x + dx, y + dy) for dx, dy in offsets))


def mode_switch_example() -> Sequence:
    """Three 1280x720 frames that exercise every record type in the last frame.

    Person 1 is present throughout and moves rigidly at a changing speed, so
    both temporal schemes apply and MV is the cheaper one.  Person 2 enters in
    frame 1 (MV only), person 3 stands still in frames 0-1 and then leaves, and
    person 4 first appears in frame 2.
    """
    body = tuple((round(fx * 160), round(fy * 160)) for fx, fy in _BODY)
    bent = body[:4] + ((body[4][0] + 3, body[4][1] - 2),) + body[5:]
    return Sequence(
        1280,
        720,
        (
            Frame(0, (_posed(1, 200, 300, body), _posed(3, 900, 400, body))),
            Frame(1, (_posed(1, 205, 300, body), _posed(2, 600, 350, body), _posed(3, 900, 400, body))),
            Frame(2, (_posed(1, 212, 301, body), _posed(2, 603, 352, bent), _posed(4, 1000, 200, body))),
        ),
    )
