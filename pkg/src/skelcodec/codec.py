"""Multimodal skeleton encoder/decoder and the SKC1 container.

Container layout (MSB-first, zero-padded to a byte only at the very end)::

    "SKC1"  version:8  width:16  height:16  frame_count:32  scheme:3  reserved:5
    frame*: ue(record_count) record*

    record:  ue(id delta)
             [ID in t-1]  disappear:1 -> end if 1
                          skip:1      -> end if 1
                          fallback:1  -> spatial payload if 1
                          [CM4, MV and INTER both usable] scheme:1 (0 MV, 1 INTER)
             payload

Payloads: spatial = mask:14, anchor x:bx, anchor y:by, se(dx) se(dy) per tree
delta; MV = se(mv_x) se(mv_y) + se pairs for every present joint; INTER = se
pairs for every present joint.  ``bx``/``by`` are ``ceil(log2(width/height))``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .entropy import (
    UE_LIMIT,
    BitSink,
    BitSource,
    fixed_bits,
    se_bits,
    se_run_bits,
    ue_bits,
    ue_length,
)
from .errors import (
    InvalidFrame,
    MalformedRecord,
    SkeletonCodecError,
    StreamError,
    TruncatedStream,
    UnsupportedFormat,
    ValueOverflow,
)
from .model import (
    NUM_JOINTS,
    Frame,
    Sequence,
    Skeleton,
    joint_bit,
    mask_joints,
    validate_sequence,
)
from .prediction import (
    MV_ANCHOR,
    MotionVector,
    Predictor,
    SpatialCode,
    inter_residuals,
    linear_extrapolate,
    inter_reconstruct,
    mv_reconstruct,
    mv_residuals,
    spatial_order,
    spatial_reconstruct,
    spatial_residuals,
)

MAGIC = b"SKC1"
VERSION = 1
HEADER_BYTES = 14
MAX_DIMENSION = (1 << 16) - 1


class Scheme(enum.IntEnum):
    """Coding-method variants; the value is the 3-bit header code."""

    CM1 = 1  # spatial only
    CM2 = 2  # MV, spatial fallback
    CM3 = 3  # INTER, then MV, then spatial
    CM4 = 4  # multimodal

    @classmethod
    def parse(cls, name: str) -> "Scheme":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown scheme {name!r}; expected one of cm1..cm4") from None


class Mode(enum.Enum):
    SPATIAL = "spatial"
    MV = "mv"
    INTER = "inter"
    SKIP = "skip"
    DISAPPEAR = "disappear"


@dataclass
class ReferenceState:
    """Skeletons of frames t-1 (``prev1``) and t-2 (``prev2``) keyed by ID."""

    prev1: dict[int, Skeleton] = field(default_factory=dict)
    prev2: dict[int, Skeleton] = field(default_factory=dict)

    def advance(self, skeletons: tuple[Skeleton, ...]) -> None:
        self.prev2 = self.prev1
        self.prev1 = {s.id: s for s in skeletons}


@dataclass(frozen=True, slots=True)
class ModeDecision:
    """What was emitted for one record.

    ``mv_bits``/``inter_bits`` are the candidate payload sizes of the temporal
    schemes that were usable for this record (``None`` when not usable or not
    evaluated).
    """

    id: int
    mode: Mode
    flag_bits: str
    payload_bits: int
    id_bits: int = 0
    mv_bits: Optional[int] = None
    inter_bits: Optional[int] = None

    @property
    def dual_eligible(self) -> bool:
        return self.mv_bits is not None and self.inter_bits is not None

    @property
    def total_bits(self) -> int:
        return self.id_bits + len(self.flag_bits) + self.payload_bits


@dataclass(frozen=True)
class StreamHeader:
    width: int
    height: int
    frame_count: int
    scheme: Scheme
    version: int = VERSION

    @property
    def coord_bits(self) -> tuple[int, int]:
        return coord_bits(self.width, self.height)


@dataclass
class EncodeResult:
    data: bytes
    bit_count: int
    decisions: list[list[ModeDecision]]


def coord_bits(width: int, height: int) -> tuple[int, int]:
    """Fixed widths for absolute coordinates: ``ceil(log2(width))``, ``ceil(log2(height))``."""
    return (width - 1).bit_length(), (height - 1).bit_length()


def _fixed(v: int, nbits: int) -> str:
    if nbits == 0:
        if v != 0:
            raise ValueOverflow(f"{v} does not fit in 0 bits")
        return ""
    return fixed_bits(v, nbits)


def _pairs(residuals) -> str:
    return se_run_bits([v for _, dx, dy in residuals for v in (dx, dy)])


def _spatial_payload(s: Skeleton, bx: int, by: int) -> str:
    code = spatial_residuals(s)
    ax, ay = code.root_abs
    return fixed_bits(s.mask, NUM_JOINTS) + _fixed(ax, bx) + _fixed(ay, by) + _pairs(code.deltas)


def _mv_payload(cur: Skeleton, ref1: Skeleton) -> str:
    mv, residuals = mv_residuals(cur, ref1)
    return se_bits(mv.mv_x) + se_bits(mv.mv_y) + _pairs(residuals)


def _inter_payload(cur: Skeleton, ref1: Skeleton, ref2: Skeleton, predictor: Predictor) -> str:
    return _pairs(inter_residuals(cur, ref1, ref2, predictor))


def _plan(
    cur: Skeleton,
    state: ReferenceState,
    cfg: Scheme,
    bx: int,
    by: int,
    predictor: Predictor,
) -> tuple[ModeDecision, str]:
    """Mode decision for a present skeleton, plus its payload bits."""
    ref1 = state.prev1.get(cur.id)
    if ref1 is None:
        payload = _spatial_payload(cur, bx, by)
        return ModeDecision(cur.id, Mode.SPATIAL, "", len(payload)), payload
    if cur.joints == ref1.joints:
        return ModeDecision(cur.id, Mode.SKIP, "01", 0), ""

    same = cur.mask == ref1.mask
    mv_ok = same and bool(cur.mask & joint_bit(MV_ANCHOR))
    ref2 = state.prev2.get(cur.id)
    inter_ok = same and ref2 is not None and ref2.mask == cur.mask

    mv = inter = None
    if cfg is Scheme.CM4:
        if mv_ok:
            mv = _mv_payload(cur, ref1)
        if inter_ok:
            inter = _inter_payload(cur, ref1, ref2, predictor)
        mv_bits = None if mv is None else len(mv)
        inter_bits = None if inter is None else len(inter)
        if mv is not None and inter is not None:
            if len(inter) < len(mv):
                return ModeDecision(cur.id, Mode.INTER, "0001", len(inter), 0, mv_bits, inter_bits), inter
            return ModeDecision(cur.id, Mode.MV, "0000", len(mv), 0, mv_bits, inter_bits), mv
        if mv is not None:
            return ModeDecision(cur.id, Mode.MV, "000", len(mv), 0, mv_bits, None), mv
        if inter is not None:
            # MV unusable (no joint 2): the fallback bit lets spatial win when cheaper
            spatial = _spatial_payload(cur, bx, by)
            if len(spatial) < len(inter):
                return ModeDecision(cur.id, Mode.SPATIAL, "001", len(spatial), 0, None, inter_bits), spatial
            return ModeDecision(cur.id, Mode.INTER, "000", len(inter), 0, None, inter_bits), inter
    elif cfg is Scheme.CM3 and inter_ok:
        inter = _inter_payload(cur, ref1, ref2, predictor)
        return ModeDecision(cur.id, Mode.INTER, "000", len(inter), 0, None, len(inter)), inter
    elif cfg in (Scheme.CM2, Scheme.CM3) and mv_ok:
        mv = _mv_payload(cur, ref1)
        return ModeDecision(cur.id, Mode.MV, "000", len(mv), 0, len(mv), None), mv

    spatial = _spatial_payload(cur, bx, by)
    return ModeDecision(cur.id, Mode.SPATIAL, "001", len(spatial)), spatial


def choose_mode(
    cur: Skeleton,
    state: ReferenceState,
    cfg: Scheme,
    coord_bits: tuple[int, int] = (16, 16),
    predictor: Predictor = linear_extrapolate,
) -> ModeDecision:
    """Pick the coding mode for ``cur`` given the reference frames.

    New IDs are coded spatially; a skeleton identical to its t-1 entry is
    skipped.  Otherwise the temporal schemes are tried according to ``cfg``;
    under CM4 the cheaper of MV and INTER wins (ties go to MV).
    """
    return _plan(cur, state, cfg, coord_bits[0], coord_bits[1], predictor)[0]


def _check_frame(frame: Frame) -> None:
    last = -1
    for s in frame.skeletons:
        if not isinstance(s.id, int) or s.id <= last:
            raise InvalidFrame(f"frame {frame.index}: skeleton IDs must be unique and ascending")
        if s.mask == 0:
            raise InvalidFrame(f"frame {frame.index}: skeleton {s.id} has no joints")
        last = s.id
    if last >= UE_LIMIT:
        raise InvalidFrame(f"frame {frame.index}: skeleton ID {last} exceeds 32 bits")


def encode_frame(
    frame: Frame,
    state: ReferenceState,
    sink: BitSink,
    cfg: Scheme,
    coord_bits: tuple[int, int],
    predictor: Predictor = linear_extrapolate,
) -> list[ModeDecision]:
    """Append one frame's records to ``sink`` and advance ``state``."""
    _check_frame(frame)
    bx, by = coord_bits
    present = {s.id: s for s in frame.skeletons}
    ids = sorted(set(present).union(state.prev1))
    sink.write_ue(len(ids))
    log = []
    prev_id = -1
    for rid in ids:
        id_code = ue_bits(rid - prev_id - 1)
        prev_id = rid
        cur = present.get(rid)
        if cur is None:
            sink.write_bits(id_code + "1")
            log.append(ModeDecision(rid, Mode.DISAPPEAR, "1", 0, len(id_code)))
            continue
        try:
            decision, payload = _plan(cur, state, cfg, bx, by, predictor)
        except ValueOverflow as exc:
            raise InvalidFrame(f"frame {frame.index}, skeleton {rid}: {exc}") from exc
        sink.write_bits(id_code + decision.flag_bits + payload)
        log.append(
            ModeDecision(
                rid,
                decision.mode,
                decision.flag_bits,
                decision.payload_bits,
                len(id_code),
                decision.mv_bits,
                decision.inter_bits,
            )
        )
    state.advance(frame.skeletons)
    return log


def _read_pairs(source: BitSource, joints: tuple[int, ...]):
    v = source.read_se_run(2 * len(joints))
    return tuple([(j, v[2 * i], v[2 * i + 1]) for i, j in enumerate(joints)])


def _read_spatial(source: BitSource, rid: int, bx: int, by: int) -> Skeleton:
    mask = source.read_fixed(NUM_JOINTS)
    if mask == 0:
        raise MalformedRecord("spatial record with an empty joint mask")
    ax = source.read_fixed(bx) if bx else 0
    ay = source.read_fixed(by) if by else 0
    order = spatial_order(mask)
    deltas = _read_pairs(source, tuple(j for j, _ in order[1:]))
    return spatial_reconstruct(SpatialCode((ax, ay), deltas), mask, rid)


def decode_frame(
    source: BitSource,
    state: ReferenceState,
    cfg: Scheme,
    coord_bits: tuple[int, int],
    index: int = 0,
    predictor: Predictor = linear_extrapolate,
) -> Frame:
    """Read one frame written by :func:`encode_frame` and advance ``state``."""
    bx, by = coord_bits
    record = None
    try:
        count = source.read_ue()
        prev1, prev2 = state.prev1, state.prev2
        skeletons = []
        accounted = 0
        prev_id = -1
        for record in range(count):
            rid = prev_id + 1 + source.read_ue()
            if rid >= UE_LIMIT:
                raise MalformedRecord(f"skeleton ID {rid} exceeds 32 bits")
            prev_id = rid
            ref1 = prev1.get(rid)
            if ref1 is None:
                skeletons.append(_read_spatial(source, rid, bx, by))
                continue
            accounted += 1
            if source.read_bit():  # disappear
                continue
            if source.read_bit():  # skip
                skeletons.append(ref1)
                continue
            if source.read_bit():  # fallback
                skeletons.append(_read_spatial(source, rid, bx, by))
                continue

            mv_ok = bool(ref1.mask & joint_bit(MV_ANCHOR))
            ref2 = prev2.get(rid)
            inter_ok = ref2 is not None and ref2.mask == ref1.mask
            if cfg is Scheme.CM4 and mv_ok and inter_ok:
                use_inter = bool(source.read_bit())
            elif cfg is Scheme.CM4 or cfg is Scheme.CM3:
                use_inter = inter_ok
            else:
                use_inter = False
            if not use_inter and not (mv_ok and cfg is not Scheme.CM1):
                raise MalformedRecord(f"temporal record for ID {rid} with no usable reference")

            joints = mask_joints(ref1.mask)
            if use_inter:
                residuals = _read_pairs(source, joints)
                skeletons.append(inter_reconstruct(ref1, ref2, residuals, predictor))
            else:
                mv = MotionVector(source.read_se(), source.read_se())
                skeletons.append(mv_reconstruct(ref1, mv, _read_pairs(source, joints)))
        record = None
        if accounted != len(prev1):
            raise MalformedRecord("previous-frame IDs missing from the record list")
    except StreamError as exc:
        raise exc.located(index, record) from None
    except SkeletonCodecError as exc:
        raise MalformedRecord(str(exc), index, record) from None

    frame = Frame(index, tuple(skeletons))
    state.advance(frame.skeletons)
    return frame


def write_header(sink: BitSink, header: StreamHeader) -> None:
    for b in MAGIC:
        sink.write_fixed(b, 8)
    sink.write_fixed(header.version, 8)
    sink.write_fixed(header.width, 16)
    sink.write_fixed(header.height, 16)
    sink.write_fixed(header.frame_count, 32)
    sink.write_fixed(int(header.scheme), 3)
    sink.write_fixed(0, 5)


def read_header(source: BitSource) -> StreamHeader:
    available = min(4, source.remaining // 8)
    magic = bytes(source.read_fixed(8) for _ in range(available))
    if magic != MAGIC[:available] or available == 0 and source.remaining:
        raise UnsupportedFormat(f"bad magic {magic!r}")
    if source.remaining < 8 * (HEADER_BYTES - 4):
        raise TruncatedStream("stream shorter than the SKC1 header")
    version = source.read_fixed(8)
    if version != VERSION:
        raise UnsupportedFormat(f"unsupported version {version}")
    width = source.read_fixed(16)
    height = source.read_fixed(16)
    frame_count = source.read_fixed(32)
    code = source.read_fixed(3)
    reserved = source.read_fixed(5)
    try:
        scheme = Scheme(code)
    except ValueError:
        raise UnsupportedFormat(f"unknown scheme code {code}") from None
    if reserved:
        raise UnsupportedFormat("reserved header bits are set")
    if width < 1 or height < 1:
        raise UnsupportedFormat(f"invalid dimensions {width}x{height}")
    return StreamHeader(width, height, frame_count, scheme, version)


def encode(seq: Sequence, cfg: Scheme = Scheme.CM4, predictor: Predictor = linear_extrapolate) -> EncodeResult:
    problems = validate_sequence(seq)
    if problems:
        more = f" (+{len(problems) - 1} more)" if len(problems) > 1 else ""
        raise InvalidFrame(f"{problems[0]}{more}")
    if seq.width > MAX_DIMENSION or seq.height > MAX_DIMENSION:
        raise InvalidFrame(f"dimensions {seq.width}x{seq.height} exceed {MAX_DIMENSION}")
    if len(seq.frames) >= UE_LIMIT:
        raise InvalidFrame("too many frames")
    cfg = Scheme(cfg)
    sink = BitSink()
    header = StreamHeader(seq.width, seq.height, len(seq.frames), cfg)
    write_header(sink, header)
    bits = header.coord_bits
    state = ReferenceState()
    decisions = [encode_frame(f, state, sink, cfg, bits, predictor) for f in seq.frames]
    return EncodeResult(sink.to_bytes(), sink.bit_count, decisions)


def encode_sequence(seq: Sequence, cfg: Scheme = Scheme.CM4, predictor: Predictor = linear_extrapolate) -> bytes:
    return encode(seq, cfg, predictor).data


def decode_sequence(data: bytes, predictor: Predictor = linear_extrapolate) -> Sequence:
    source = BitSource(data)
    header = read_header(source)
    bits = header.coord_bits
    state = ReferenceState()
    frames = [
        decode_frame(source, state, header.scheme, bits, t, predictor) for t in range(header.frame_count)
    ]
    rest = source.rest()
    if len(rest) >= 8 or "1" in rest:
        raise MalformedRecord("trailing data after the last frame")
    return Sequence(header.width, header.height, tuple(frames))


def direct_baseline_size(seq: Sequence) -> int:
    """Bits to send every skeleton as ue(ID) plus 14 absolute coordinate pairs.

    Absent joints are counted as if present; each frame also pays ue(skeleton count).
    """
    bx, by = coord_bits(seq.width, seq.height)
    per_skeleton = NUM_JOINTS * (bx + by)
    total = 0
    for f in seq.frames:
        total += ue_length(len(f.skeletons))
        for s in f.skeletons:
            total += ue_length(s.id) + per_skeleton
    return total


def direct_baseline_bytes(seq: Sequence) -> int:
    """Direct-coding size in bytes, charged the same container header as the schemes."""
    return HEADER_BYTES + (direct_baseline_size(seq) + 7) // 8
