
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skelcodec.errors import MaskMismatch
from skelcodec.model import (
    FULL_MASK,
    NUM_JOINTS,
    Frame,
    Sequence,
    Skeleton,
    mask_joints,
    skeleton_apply,
    skeleton_diff,
    validate_sequence,
)

from .conftest import only, random_skeleton, translated

coord = st.integers(min_value=-(2**20), max_value=2**20)
point = st.tuples(coord, coord)


@st.composite
def skeleton_pairs(draw):
    present = draw(st.lists(st.booleans(), min_size=NUM_JOINTS, max_size=NUM_JOINTS).filter(any))
    a = tuple(draw(point) if p else None for p in present)
    b = tuple(draw(point) if p else None for p in present)
    return Skeleton(draw(st.integers(0, 100)), a), Skeleton(draw(st.integers(0, 100)), b)


def test_mask_bits_follow_joint_order():
    s = only({1: (0, 0), 14: (1, 1)})
    assert s.mask == 0b10000000000001
    assert mask_joints(s.mask) == (1, 14)
    assert mask_joints(FULL_MASK) == tuple(range(1, 15))


def test_skeleton_requires_14_slots():
    with pytest.raises(ValueError):
        Skeleton(0, ((1, 1),) * 13)


def test_diff_identity(rng):
    s = random_skeleton(rng)
    assert skeleton_diff(s, s) == tuple((j, 0, 0) for j in range(1, 15))


def test_diff_uniform_translation(rng):
    b = random_skeleton(rng)
    a = translated(b, 5, -3)
    assert skeleton_diff(a, b) == tuple((j, 5, -3) for j in range(1, 15))


def test_diff_single_joint():
    assert skeleton_diff(only({3: (15, 14)}), only({3: (12, 14)})) == ((3, 3, 0),)


def test_diff_mask_mismatch():
    with pytest.raises(MaskMismatch):
        skeleton_diff(only({1: (0, 0)}), only({2: (0, 0)}))


def test_apply_zero_residuals(rng):
    p = random_skeleton(rng, pid=9, missing=3)
    assert skeleton_apply(p, tuple((j, 0, 0) for j in p.present())) == p


def test_apply_addition():
    out = skeleton_apply(only({1: (10, 10)}, pid=4), ((1, 2, 4),))
    assert out.joint(1) == (12, 14)
    assert out.id == 4


def test_apply_joint_set_mismatch():
    with pytest.raises(MaskMismatch):
        skeleton_apply(only({1: (10, 10)}), ((2, 0, 0),))


@given(skeleton_pairs())
def test_apply_inverts_diff(pair):
    a, b = pair
    assert skeleton_apply(b, skeleton_diff(a, b)).joints == a.joints


@given(skeleton_pairs())
def test_diff_antisymmetric(pair):
    a, b = pair
    assert skeleton_diff(a, b) == tuple((j, -dx, -dy) for j, dx, dy in skeleton_diff(b, a))


def test_validate_empty_sequence():
    assert validate_sequence(Sequence(1280, 720)) == []


def test_validate_duplicate_id():
    s = only({1: (5, 5)}, pid=7)
    frames = tuple(Frame(i, ()) for i in range(3)) + (Frame(3, (s, s)),)
    problems = validate_sequence(Sequence(1280, 720, frames))
    assert len(problems) == 1
    assert (problems[0].frame, problems[0].skeleton_id, problems[0].rule) == (3, 7, "duplicate-id")


def test_validate_out_of_frame():
    s = only({1: (-1, 5)}, pid=2)
    problems = validate_sequence(Sequence(1280, 720, (Frame(0, (s,)),)))
    assert [p.rule for p in problems] == ["out-of-frame"]


@pytest.mark.parametrize(
    "seq, rule",
    [
        (Sequence(0, 720), "dimensions"),
        (Sequence(10, 10, (Frame(1, ()),)), "frame-index"),
        (Sequence(10, 10, (Frame(0, (only({1: (1, 1)}, 5), only({1: (1, 1)}, 2))),)), "id-order"),
        (Sequence(10, 10, (Frame(0, (Skeleton(0, (None,) * 14),)),)), "empty-mask"),
        (Sequence(10, 10, (Frame(0, (only({1: (1.5, 1)}),)),)), "non-integer"),
        (Sequence(10, 10, (Frame(0, (only({1: (1, 1)}, -1),)),)), "id"),
    ],
)
def test_validate_rules(seq, rule):
    assert [p.rule for p in validate_sequence(seq)] == [rule]


def test_validate_is_pure(rng):
    frames = (Frame(0, (random_skeleton(rng, 1, hi=2000),)),)
    seq = Sequence(1000, 1000, frames)
    assert validate_sequence(seq) == validate_sequence(seq)
    assert validate_sequence(seq)
