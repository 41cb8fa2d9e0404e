"""Skeleton predictors: spatial tree traversal, motion compensation, and
constant-velocity extrapolation.  Each one has an exact integer inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .errors import AnchorMissing, EmptyMask, MalformedCode, MaskMismatch
from .model import (
    NUM_JOINTS,
    Joint,
    ResidualSet,
    Skeleton,
    joint_bit,
    mask_joints,
    skeleton_apply,
    skeleton_diff,
)

ROOT = 1
MV_ANCHOR = 2

# parent -> child, rooted at the nose
TREE_EDGES: tuple[tuple[int, int], ...] = (
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (2, 6),
    (6, 7),
    (7, 8),
    (2, 9),
    (9, 10),
    (10, 11),
    (2, 12),
    (12, 13),
    (13, 14),
)

PARENT: dict[int, int] = {child: parent for parent, child in TREE_EDGES}


def _bfs_order() -> tuple[int, ...]:
    children: dict[int, list[int]] = {j: [] for j in range(1, NUM_JOINTS + 1)}
    for parent, child in TREE_EDGES:
        children[parent].append(child)
    order, queue = [], [ROOT]
    while queue:
        j = queue.pop(0)
        order.append(j)
        queue.extend(sorted(children[j]))
    return tuple(order)


BFS_ORDER = _bfs_order()


@dataclass(frozen=True, slots=True)
class MotionVector:
    mv_x: int
    mv_y: int

    def __add__(self, other: "MotionVector") -> "MotionVector":
        return MotionVector(self.mv_x + other.mv_x, self.mv_y + other.mv_y)


@dataclass(frozen=True, slots=True)
class SpatialCode:
    root_abs: Joint
    deltas: ResidualSet


@lru_cache(maxsize=None)
def spatial_order(mask: int) -> tuple[tuple[int, Optional[int]], ...]:
    """Coding order for the spatial scheme as ``(joint, reference)`` pairs.

    The anchor is the lowest present joint and comes first with reference
    ``None``.  The rest follow breadth-first from the nose; each refers to its
    nearest present ancestor, or to the anchor when none is present.
    """
    present = mask_joints(mask)
    if not present:
        raise EmptyMask("cannot order an empty mask")
    anchor = present[0]
    order: list[tuple[int, Optional[int]]] = [(anchor, None)]
    for j in BFS_ORDER:
        if j == anchor or not mask & joint_bit(j):
            continue
        ref = PARENT.get(j)
        while ref is not None and not mask & joint_bit(ref):
            ref = PARENT.get(ref)
        order.append((j, anchor if ref is None else ref))
    return tuple(order)


def spatial_residuals(s: Skeleton) -> SpatialCode:
    order = spatial_order(s.mask)
    joints = s.joints
    anchor = order[0][0]
    deltas = []
    for j, r in order[1:]:
        x, y = joints[j - 1]
        rx, ry = joints[r - 1]
        deltas.append((j, x - rx, y - ry))
    return SpatialCode(joints[anchor - 1], tuple(deltas))


def spatial_reconstruct(code: SpatialCode, mask: int, id: int = 0) -> Skeleton:
    order = spatial_order(mask)
    if len(code.deltas) != len(order) - 1:
        raise MalformedCode(f"expected {len(order) - 1} deltas, got {len(code.deltas)}")
    joints: list[Optional[Joint]] = [None] * NUM_JOINTS
    joints[order[0][0] - 1] = code.root_abs
    for (j, r), (dj, dx, dy) in zip(order[1:], code.deltas):
        if dj != j:
            raise MalformedCode(f"delta for joint {dj} where joint {j} was expected")
        rx, ry = joints[r - 1]
        joints[j - 1] = (rx + dx, ry + dy)
    return Skeleton(id, tuple(joints))


def motion_vector(cur: Skeleton, ref: Skeleton) -> MotionVector:
    a = cur.joints[MV_ANCHOR - 1]
    b = ref.joints[MV_ANCHOR - 1]
    if a is None or b is None:
        raise AnchorMissing("joint 2 must be present in both skeletons")
    return MotionVector(a[0] - b[0], a[1] - b[1])


def motion_compensate(ref: Skeleton, mv: MotionVector) -> Skeleton:
    """Shift every present joint of ``ref`` (joint 2 included) by ``mv``."""
    dx, dy = mv.mv_x, mv.mv_y
    return Skeleton(
        ref.id,
        tuple(None if p is None else (p[0] + dx, p[1] + dy) for p in ref.joints),
    )


def mv_residuals(cur: Skeleton, ref: Skeleton) -> tuple[MotionVector, ResidualSet]:
    """Motion vector of joint 2 and the residuals against the shifted reference.

    Same result as ``skeleton_diff(cur, motion_compensate(ref, mv))`` without
    building the intermediate skeleton.  Joint 2's residual is always zero.
    """
    if cur.mask != ref.mask:
        raise MaskMismatch("current and reference masks differ")
    mv = motion_vector(cur, ref)
    mx, my = mv.mv_x, mv.mv_y
    cj, rj = cur.joints, ref.joints
    out = []
    for j in mask_joints(cur.mask):
        c = cj[j - 1]
        r = rj[j - 1]
        out.append((j, c[0] - r[0] - mx, c[1] - r[1] - my))
    return mv, tuple(out)


def mv_reconstruct(ref: Skeleton, mv: MotionVector, residuals: ResidualSet) -> Skeleton:
    """Inverse of :func:`mv_residuals`."""
    if [r[0] for r in residuals] != list(mask_joints(ref.mask)):
        raise MaskMismatch("residual joints do not match the reference's present joints")
    mx, my = mv.mv_x, mv.mv_y
    joints = list(ref.joints)
    for j, dx, dy in residuals:
        r = joints[j - 1]
        joints[j - 1] = (r[0] + mx + dx, r[1] + my + dy)
    return Skeleton(ref.id, tuple(joints))


def linear_extrapolate(ref1: Skeleton, ref2: Skeleton) -> Skeleton:
    """Constant-velocity guess for frame t from frames t-1 (``ref1``) and t-2 (``ref2``)."""
    if ref1.mask != ref2.mask:
        raise MaskMismatch("reference masks differ")
    return Skeleton(
        ref1.id,
        tuple(
            None if p is None else (2 * p[0] - q[0], 2 * p[1] - q[1])
            for p, q in zip(ref1.joints, ref2.joints)
        ),
    )


Predictor = Callable[[Skeleton, Skeleton], Skeleton]


def inter_residuals(
    cur: Skeleton, ref1: Skeleton, ref2: Skeleton, predictor: Predictor = linear_extrapolate
) -> ResidualSet:
    if not cur.mask == ref1.mask == ref2.mask:
        raise MaskMismatch("current and reference masks differ")
    if predictor is not linear_extrapolate:
        return skeleton_diff(cur, predictor(ref1, ref2))
    cj, pj, qj = cur.joints, ref1.joints, ref2.joints
    out = []
    for j in mask_joints(cur.mask):
        c = cj[j - 1]
        p = pj[j - 1]
        q = qj[j - 1]
        out.append((j, c[0] - 2 * p[0] + q[0], c[1] - 2 * p[1] + q[1]))
    return tuple(out)


def inter_reconstruct(
    ref1: Skeleton, ref2: Skeleton, residuals: ResidualSet, predictor: Predictor = linear_extrapolate
) -> Skeleton:
    """Inverse of :func:`inter_residuals`."""
    if predictor is not linear_extrapolate:
        return skeleton_apply(predictor(ref1, ref2), residuals)
    if ref1.mask != ref2.mask:
        raise MaskMismatch("reference masks differ")
    if [r[0] for r in residuals] != list(mask_joints(ref1.mask)):
        raise MaskMismatch("residual joints do not match the references' present joints")
    pj, qj = ref1.joints, ref2.joints
    joints = list(pj)
    for j, dx, dy in residuals:
        p = pj[j - 1]
        q = qj[j - 1]
        joints[j - 1] = (2 * p[0] - q[0] + dx, 2 * p[1] - q[1] + dy)
    return Skeleton(ref1.id, tuple(joints))
