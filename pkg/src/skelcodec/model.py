"""Skeleton, frame and sequence value types plus the skeleton-difference algebra.

A skeleton carries 14 joint slots indexed 1..14.  Absent joints are ``None``.
The presence mask is a 14-bit integer whose most significant bit is joint 1,
which is also the order it takes on the wire.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence as Seq

from .errors import MaskMismatch

NUM_JOINTS = 14
FULL_MASK = (1 << NUM_JOINTS) - 1
INT32_MIN = -(1 << 31)
INT32_MAX = (1 << 31) - 1

JOINT_NAMES = (
    "nose",
    "neck",
    "right_shoulder",
    "right_elbow",
    "right_wrist",
    "left_shoulder",
    "left_elbow",
    "left_wrist",
    "right_hip",
    "right_knee",
    "right_ankle",
    "left_hip",
    "left_knee",
    "left_ankle",
)

Joint = tuple[int, int]
# (joint index, dx, dy) triples in the order they are coded
ResidualSet = tuple[tuple[int, int, int], ...]


def joint_bit(j: int) -> int:
    return 1 << (NUM_JOINTS - j)


@lru_cache(maxsize=None)
def mask_joints(mask: int) -> tuple[int, ...]:
    """Present joint indices of ``mask`` in ascending order."""
    return tuple(j for j in range(1, NUM_JOINTS + 1) if mask & joint_bit(j))


_BITS = tuple(joint_bit(j) for j in range(1, NUM_JOINTS + 1))


def mask_from_joints(joints: Seq[Optional[Joint]]) -> int:
    return sum([b for b, p in zip(_BITS, joints) if p is not None])


@dataclass(frozen=True, slots=True)
class Skeleton:
    """One person in one frame.

    ``joints[j - 1]`` holds joint ``j`` as an ``(x, y)`` tuple or ``None``.
    """

    id: int
    joints: tuple[Optional[Joint], ...]
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.joints) != NUM_JOINTS:
            raise ValueError(f"expected {NUM_JOINTS} joint slots, got {len(self.joints)}")
        object.__setattr__(self, "mask", mask_from_joints(self.joints))

    def joint(self, j: int) -> Optional[Joint]:
        return self.joints[j - 1]

    def present(self) -> tuple[int, ...]:
        return mask_joints(self.mask)

    def with_id(self, new_id: int) -> "Skeleton":
        return Skeleton(new_id, self.joints)


@dataclass(frozen=True, slots=True)
class Frame:
    index: int
    skeletons: tuple[Skeleton, ...] = ()


@dataclass(frozen=True, slots=True)
class Sequence:
    width: int
    height: int
    frames: tuple[Frame, ...] = ()


class Violation(NamedTuple):
    frame: Optional[int]
    skeleton_id: Optional[int]
    rule: str
    detail: str

    def __str__(self) -> str:
        where = []
        if self.frame is not None:
            where.append(f"frame {self.frame}")
        if self.skeleton_id is not None:
            where.append(f"skeleton {self.skeleton_id}")
        prefix = ", ".join(where) or "sequence"
        return f"{prefix}: {self.rule}: {self.detail}"


def skeleton_diff(a: Skeleton, b: Skeleton) -> ResidualSet:
    """Per-joint ``a - b`` over the shared present joints, ascending joint index."""
    if a.mask != b.mask:
        raise MaskMismatch(f"masks differ: {a.mask:014b} vs {b.mask:014b}")
    out = []
    for j in mask_joints(a.mask):
        ax, ay = a.joints[j - 1]
        bx, by = b.joints[j - 1]
        out.append((j, ax - bx, ay - by))
    return tuple(out)


def skeleton_apply(prediction: Skeleton, residuals: ResidualSet) -> Skeleton:
    """Inverse of :func:`skeleton_diff`: add residuals back onto a prediction."""
    if [r[0] for r in residuals] != list(mask_joints(prediction.mask)):
        raise MaskMismatch("residual joints do not match the prediction's present joints")
    joints = list(prediction.joints)
    for j, dx, dy in residuals:
        x, y = joints[j - 1]
        joints[j - 1] = (x + dx, y + dy)
    return Skeleton(prediction.id, tuple(joints))


def _is_int(v: object) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def validate_sequence(seq: Sequence) -> list[Violation]:
    """Check every frame, skeleton and sequence invariant.

    Returns the violations found; an empty list means the sequence is valid.
    """
    out: list[Violation] = []
    if not _is_int(seq.width) or seq.width < 1:
        out.append(Violation(None, None, "dimensions", f"width must be >= 1, got {seq.width!r}"))
    if not _is_int(seq.height) or seq.height < 1:
        out.append(Violation(None, None, "dimensions", f"height must be >= 1, got {seq.height!r}"))
    check_bounds = not out

    for expected, frame in enumerate(seq.frames):
        if frame.index != expected:
            out.append(
                Violation(frame.index, None, "frame-index", f"expected index {expected}, got {frame.index}")
            )
        seen: set[int] = set()
        last_id = -1
        for sk in frame.skeletons:
            sid = sk.id
            if not _is_int(sid) or sid < 0:
                out.append(Violation(frame.index, sid, "id", "ID must be a non-negative integer"))
                continue
            if sid in seen:
                out.append(Violation(frame.index, sid, "duplicate-id", f"ID {sid} appears more than once"))
            elif sid < last_id:
                out.append(Violation(frame.index, sid, "id-order", "skeletons must be sorted by ascending ID"))
            seen.add(sid)
            last_id = max(last_id, sid)
            if sk.mask == 0:
                out.append(Violation(frame.index, sid, "empty-mask", "at least one joint must be present"))
            w, h = seq.width, seq.height
            for j, p in enumerate(sk.joints, 1):
                if p is None:
                    continue
                if type(p) is not tuple or len(p) != 2 or type(p[0]) is not int or type(p[1]) is not int:
                    if not (isinstance(p, (tuple, list)) and len(p) == 2 and _is_int(p[0]) and _is_int(p[1])):
                        out.append(Violation(frame.index, sid, "non-integer", f"joint {j} is {p!r}"))
                        continue
                x, y = p
                if check_bounds:
                    if not (0 <= x < w and 0 <= y < h):
                        out.append(
                            Violation(frame.index, sid, "out-of-frame", f"joint {j} at ({x}, {y}) outside {w}x{h}")
                        )
                elif not (INT32_MIN <= x <= INT32_MAX and INT32_MIN <= y <= INT32_MAX):
                    out.append(Violation(frame.index, sid, "range", f"joint {j} exceeds 32-bit range"))
    return out
