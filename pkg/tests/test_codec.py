import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skelcodec.codec import (
    HEADER_BYTES,
    Mode,
    ReferenceState,
    Scheme,
    choose_mode,
    coord_bits,
    decode_frame,
    decode_sequence,
    direct_baseline_size,
    encode,
    encode_frame,
    encode_sequence,
)
from skelcodec.entropy import BitSink, BitSource
from skelcodec.errors import InvalidFrame, MalformedRecord, TruncatedStream, UnsupportedFormat
from skelcodec.model import NUM_JOINTS, Frame, Sequence, Skeleton
from skelcodec.synth import GenConfig, generate, mode_switch_example

from .conftest import only, random_skeleton, translated

# canonical tree edges, spelled out independently of the library
EDGES = [(1, 2), (2, 3), (3, 4), (4, 5), (2, 6), (6, 7), (7, 8), (2, 9), (9, 10), (10, 11), (2, 12), (12, 13), (13, 14)]


def se_len(v):
    m = 2 * v - 1 if v > 0 else -2 * v
    return 2 * math.floor(math.log2(m + 1)) + 1


def header_bits(w, h, frames, scheme):
    return "".join(format(b, "08b") for b in b"SKC1") + format(1, "08b") + format(w, "016b") + format(h, "016b") + format(frames, "032b") + format(scheme, "03b") + "00000"


def pack(bits):
    bits += "0" * (-len(bits) % 8)
    return bytes(int(bits[i : i + 8], 2) for i in range(0, len(bits), 8))


def seq_of(width, height, *frames):
    return Sequence(width, height, tuple(Frame(i, tuple(f)) for i, f in enumerate(frames)))


def test_coord_bits():
    assert coord_bits(1280, 720) == (11, 10)
    assert coord_bits(1, 1) == (0, 0)
    assert coord_bits(1024, 1025) == (10, 11)


def test_empty_sequence_is_header_only():
    data = encode_sequence(Sequence(1280, 720), Scheme.CM4)
    assert len(data) == HEADER_BYTES
    assert data == pack(header_bits(1280, 720, 0, 4))
    assert decode_sequence(data) == Sequence(1280, 720)


def test_single_skeleton_bit_exact(rng):
    s = random_skeleton(rng, pid=5, hi=700)
    bits = header_bits(1280, 720, 1, 4) + "010" + "00110"  # ue(1) records, ue(5) id
    bits += "1" * 14 + format(s.joint(1)[0], "011b") + format(s.joint(1)[1], "010b")
    for parent, child in sorted(EDGES, key=lambda e: (depth(e[1]), e[1])):
        for axis in (0, 1):
            d = s.joint(child)[axis] - s.joint(parent)[axis]
            m = 2 * d - 1 if d > 0 else -2 * d
            k = (m + 1).bit_length() - 1
            bits += "0" * k + format(m + 1, "b")
    seq = seq_of(1280, 720, [s])
    assert encode_sequence(seq, Scheme.CM4) == pack(bits)
    assert decode_sequence(pack(bits)) == seq


def depth(j):
    parent = {c: p for p, c in EDGES}
    d = 0
    while j in parent:
        j, d = parent[j], d + 1
    return d


def test_new_full_skeleton_payload_size(rng):
    s = random_skeleton(rng, pid=0, hi=700)
    result = encode(seq_of(1280, 720, [s]), Scheme.CM1)
    (decision,) = result.decisions[0]
    deltas = [(s.joint(c)[0] - s.joint(p)[0], s.joint(c)[1] - s.joint(p)[1]) for p, c in EDGES]
    assert decision.mode is Mode.SPATIAL
    assert decision.flag_bits == ""
    assert decision.payload_bits == 14 + 11 + 10 + sum(se_len(dx) + se_len(dy) for dx, dy in deltas)


@pytest.mark.parametrize("scheme", list(Scheme))
def test_all_skip_frame(rng, scheme):
    people = [random_skeleton(rng, pid=i, hi=700, missing=i % 3) for i in range(6)]
    seq = seq_of(1280, 720, people, people)
    result = encode(seq, scheme)
    assert [d.mode for d in result.decisions[1]] == [Mode.SKIP] * 6
    assert all(d.total_bits == 3 and d.payload_bits == 0 for d in result.decisions[1])
    frame1_bits = sum(d.total_bits for d in result.decisions[1]) + len("00111")  # ue(6)
    frame0_bits = sum(d.total_bits for d in result.decisions[0]) + len("00111")
    assert result.bit_count == 8 * HEADER_BYTES + frame0_bits + frame1_bits
    assert decode_sequence(result.data) == seq


def test_mode_switch_example_records():
    seq = mode_switch_example()
    result = encode(seq, Scheme.CM4)
    last = {d.id: d for d in result.decisions[2]}
    assert last[1].mode is Mode.MV and last[1].flag_bits == "0000" and last[1].dual_eligible
    assert last[1].payload_bits == min(last[1].mv_bits, last[1].inter_bits)
    assert last[2].mode is Mode.MV and last[2].flag_bits == "000" and not last[2].dual_eligible
    assert last[3].mode is Mode.DISAPPEAR and last[3].flag_bits == "1"
    assert last[4].mode is Mode.SPATIAL and last[4].flag_bits == ""
    assert [d.mode for d in result.decisions[1]] == [Mode.MV, Mode.SPATIAL, Mode.SKIP]
    assert decode_sequence(result.data) == seq


def test_cm4_picks_inter_when_cheaper(rng):
    base = random_skeleton(rng, pid=1, lo=200, hi=500)
    wobble = [(rng.randint(-9, 9), rng.randint(-9, 9)) for _ in range(NUM_JOINTS)]
    t1 = Skeleton(1, tuple((x + dx, y + dy) for (x, y), (dx, dy) in zip(base.joints, wobble)))
    t2 = Skeleton(1, tuple((2 * a[0] - b[0], 2 * a[1] - b[1]) for a, b in zip(t1.joints, base.joints)))
    state = ReferenceState({1: t1}, {1: base})
    decision = choose_mode(t2, state, Scheme.CM4, coord_bits(1280, 720))
    mv = (t2.joint(2)[0] - t1.joint(2)[0], t2.joint(2)[1] - t1.joint(2)[1])
    mv_oracle = se_len(mv[0]) + se_len(mv[1]) + sum(
        se_len(c[0] - r[0] - mv[0]) + se_len(c[1] - r[1] - mv[1]) for c, r in zip(t2.joints, t1.joints)
    )
    assert decision.inter_bits == 2 * NUM_JOINTS
    assert decision.mv_bits == mv_oracle
    assert mv_oracle > 2 * NUM_JOINTS
    assert decision.mode is Mode.INTER
    assert decision.flag_bits == "0001"
    assert decision.payload_bits == 28


def test_cm4_payload_comparison():
    ref = Skeleton(1, ((10, 10),) * NUM_JOINTS)
    cur = Skeleton(1, ((11, 10),) + ((10, 10),) * (NUM_JOINTS - 1))
    # MV = (0, 0) -> 2 + 28 bits with one se(1); INTER from a static pair -> 28 bits with one se(1)
    d = choose_mode(cur, ReferenceState({1: ref}, {1: ref}), Scheme.CM4)
    assert d.mv_bits == 2 + 27 + 3 and d.inter_bits == 27 + 3
    assert d.mode is Mode.INTER
    # static references, uniform shift: MV costs less than INTER
    r2 = Skeleton(1, ((10, 10),) * NUM_JOINTS)
    r1 = Skeleton(1, ((10, 10),) * NUM_JOINTS)
    cur = Skeleton(1, ((10, 11),) * NUM_JOINTS)
    d = choose_mode(cur, ReferenceState({1: r1}, {1: r2}), Scheme.CM4)
    # MV (0,1) -> 1 + 3 + 28; INTER -> 14 * (1 + 3)
    assert d.mv_bits == 32 and d.inter_bits == 56 and d.mode is Mode.MV


def test_rule_1_new_id_is_spatial(rng):
    s = random_skeleton(rng, pid=9, hi=700)
    state = ReferenceState({1: random_skeleton(rng, pid=1, hi=700)}, {})
    for scheme in Scheme:
        d = choose_mode(s, state, scheme)
        assert d.mode is Mode.SPATIAL and d.flag_bits == ""


def test_skip_in_every_variant(rng):
    s = random_skeleton(rng, pid=2, hi=700)
    for scheme in Scheme:
        d = choose_mode(s, ReferenceState({2: s}, {}), scheme)
        assert d.mode is Mode.SKIP and d.flag_bits == "01" and d.payload_bits == 0


def test_variant_rules(rng):
    s0 = random_skeleton(rng, pid=1, lo=100, hi=500)
    s1 = translated(s0, 2, 1)
    s2 = translated(s1, 3, -1)
    both = ReferenceState({1: s1}, {1: s0})
    only_mv = ReferenceState({1: s1}, {})
    expect = {
        Scheme.CM1: (Mode.SPATIAL, Mode.SPATIAL),
        Scheme.CM2: (Mode.MV, Mode.MV),
        Scheme.CM3: (Mode.INTER, Mode.MV),
    }
    for scheme, (m_both, m_mv) in expect.items():
        assert choose_mode(s2, both, scheme).mode is m_both
        assert choose_mode(s2, only_mv, scheme).mode is m_mv
    assert choose_mode(s2, only_mv, Scheme.CM4).flag_bits == "000"


def test_mask_drift_falls_back_to_spatial(rng):
    s1 = random_skeleton(rng, pid=1, lo=100, hi=500)
    joints = list(translated(s1, 1, 1).joints)
    joints[6] = None
    cur = Skeleton(1, tuple(joints))
    for scheme in Scheme:
        d = choose_mode(cur, ReferenceState({1: s1}, {1: s1}), scheme)
        assert d.mode is Mode.SPATIAL and d.flag_bits == "001"


def test_missing_neck_uses_inter_or_spatial(rng):
    s0 = random_skeleton(rng, pid=1, lo=200, hi=203)
    s0 = Skeleton(1, s0.joints[:1] + (None,) + s0.joints[2:])
    s1 = translated(s0, 2, 2)
    s2 = translated(s1, 2, 2)
    state = ReferenceState({1: s1}, {1: s0})
    assert choose_mode(s2, state, Scheme.CM2).mode is Mode.SPATIAL
    assert choose_mode(s2, state, Scheme.CM3).mode is Mode.INTER
    d = choose_mode(s2, state, Scheme.CM4)
    assert d.mode is Mode.INTER and d.flag_bits == "000" and d.mv_bits is None
    # a sudden jump: spatial is cheaper than a bad extrapolation
    wild = translated(s2, 300, 0)
    d = choose_mode(wild, state, Scheme.CM4)
    assert d.mode is Mode.SPATIAL and d.flag_bits == "001" and d.payload_bits < d.inter_bits
    seq = seq_of(1280, 720, [s0], [s1], [wild])
    assert decode_sequence(encode_sequence(seq, Scheme.CM4)) == seq


def test_reappearing_id_is_new(rng):
    s = random_skeleton(rng, pid=3, hi=700)
    seq = seq_of(1280, 720, [s], [], [s])
    result = encode(seq, Scheme.CM4)
    assert [d.mode for d in result.decisions[1]] == [Mode.DISAPPEAR]
    assert [(d.mode, d.flag_bits) for d in result.decisions[2]] == [(Mode.SPATIAL, "")]
    assert decode_sequence(result.data) == seq


def test_state_advances_and_matches_decoder():
    seq = generate(GenConfig(8, 30, seed=3, noise=1, churn=0.1, dropout=0.2))
    bits = coord_bits(seq.width, seq.height)
    for scheme in Scheme:
        enc_state, dec_state = ReferenceState(), ReferenceState()
        sink = BitSink()
        for frame in seq.frames:
            encode_frame(frame, enc_state, sink, scheme, bits)
        src = BitSource(sink.bitstring())
        for frame in seq.frames:
            before = dict(dec_state.prev1)
            assert decode_frame(src, dec_state, scheme, bits, frame.index) == frame
            assert dec_state.prev2 == before
            assert dec_state.prev1 == {s.id: s for s in frame.skeletons}
        assert (dec_state.prev1, dec_state.prev2) == (enc_state.prev1, enc_state.prev2)


@st.composite
def sequences(draw):
    width = draw(st.integers(1, 2000))
    height = draw(st.integers(1, 2000))
    n_frames = draw(st.integers(0, 6))
    ids = draw(st.lists(st.integers(0, 300), min_size=0, max_size=6, unique=True))
    frames = []
    for t in range(n_frames):
        present = sorted(i for i in ids if draw(st.booleans()))
        skeletons = []
        for pid in present:
            mask = draw(st.lists(st.booleans(), min_size=NUM_JOINTS, max_size=NUM_JOINTS).filter(any))
            joints = tuple(
                (draw(st.integers(0, width - 1)), draw(st.integers(0, height - 1))) if m else None for m in mask
            )
            skeletons.append(Skeleton(pid, joints))
        frames.append(Frame(t, tuple(skeletons)))
    return Sequence(width, height, tuple(frames))


@settings(max_examples=150, deadline=None)
@given(sequences(), st.sampled_from(list(Scheme)))
def test_round_trip_arbitrary_sequences(seq, scheme):
    assert decode_sequence(encode_sequence(seq, scheme)) == seq


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["static", "constant-velocity", "random-walk"]))
def test_cm4_dominance(seed, motion):
    seq = generate(GenConfig(6, 25, seed=seed, motion=motion, noise=seed % 3, churn=0.1, dropout=0.1))
    r = {s: encode(seq, s) for s in Scheme}
    dual = sum(d.dual_eligible for f in r[Scheme.CM4].decisions for d in f)
    assert r[Scheme.CM4].bit_count <= r[Scheme.CM2].bit_count + dual
    assert r[Scheme.CM4].bit_count <= r[Scheme.CM3].bit_count + dual


def test_invalid_input_rejected():
    bad = seq_of(100, 100, [only({1: (150, 5)})])
    with pytest.raises(InvalidFrame):
        encode_sequence(bad)
    with pytest.raises(InvalidFrame):
        encode_sequence(Sequence(70000, 10))
    with pytest.raises(InvalidFrame):
        encode_frame(Frame(0, (only({1: (1, 1)}, 3), only({1: (1, 1)}, 3))), ReferenceState(), BitSink(), Scheme.CM4, (8, 8))


def test_direct_baseline():
    s = only({j: (1, 1) for j in range(1, 15)}, pid=0)
    assert direct_baseline_size(seq_of(1280, 720, [s])) == 1 + 14 * 21 + 3
    assert direct_baseline_size(seq_of(1280, 720, [], [], [])) == 3
    # absent joints still cost their coordinates
    assert direct_baseline_size(seq_of(1280, 720, [only({1: (1, 1)}, pid=6)])) == 5 + 294 + 3


def test_direct_baseline_magnitude():
    # 35 people per frame for 100 frames at 1920x1080: about 3.7 MB of bits, ~46 KB
    people = [only({1: (1, 1)}, pid=i) for i in range(35)]
    seq = Sequence(1920, 1080, tuple(Frame(t, tuple(people)) for t in range(100)))
    bits = direct_baseline_size(seq)
    per = 14 * (11 + 11)
    assert bits == 100 * (len("00000100100") + sum(2 * (i + 1).bit_length() - 1 + per for i in range(35)))


def test_decode_errors():
    seq = mode_switch_example()
    data = encode_sequence(seq)
    with pytest.raises(UnsupportedFormat):
        decode_sequence(b"XKC1" + data[4:])
    with pytest.raises(UnsupportedFormat):
        decode_sequence(data[:4] + bytes([2]) + data[5:])
    with pytest.raises(UnsupportedFormat):
        decode_sequence(data[:13] + bytes([0]) + data[14:])  # scheme code 0
    with pytest.raises(TruncatedStream):
        decode_sequence(data[:8])
    with pytest.raises(TruncatedStream) as info:
        decode_sequence(data[:-20])
    assert info.value.frame == 2
    assert "frame 2" in str(info.value)
    with pytest.raises(MalformedRecord):
        decode_sequence(data + b"\x00")


def test_decoder_rejects_temporal_record_without_reference():
    # frame 0: id 0 spatial; frame 1: id 0 with disappear=0 skip=0 fallback=0 under CM1
    s = only({1: (3, 3)}, pid=0)
    bits = header_bits(16, 16, 2, 1) + "010" + "1" + format(s.mask, "014b") + "0011" + "0011"
    bits += "010" + "1" + "000"
    with pytest.raises(MalformedRecord) as info:
        decode_sequence(pack(bits))
    assert info.value.frame == 1 and info.value.record == 0


def test_cm4_tie_goes_to_mv():
    r1 = Skeleton(1, tuple((10 + j, 20) for j in range(NUM_JOINTS)))
    r2 = Skeleton(1, tuple((11 + j if j == 2 else 10 + j, 20) for j in range(NUM_JOINTS)))
    cur = Skeleton(1, ((11, 20),) + r1.joints[1:])
    d = choose_mode(cur, ReferenceState({1: r1}, {1: r2}), Scheme.CM4)
    assert d.mv_bits == d.inter_bits == 32
    assert d.mode is Mode.MV and d.flag_bits == "0000"
