"""Lossless multimodal coding of per-frame human skeleton data."""

from .codec import (
    Mode,
    ModeDecision,
    ReferenceState,
    Scheme,
    StreamHeader,
    choose_mode,
    decode_frame,
    decode_sequence,
    direct_baseline_bytes,
    direct_baseline_size,
    encode,
    encode_frame,
    encode_sequence,
)
from .document import load_sequence, save_sequence
from .errors import (
    AnchorMissing,
    EmptyMask,
    InvalidFrame,
    MalformedCode,
    MalformedRecord,
    MaskMismatch,
    SkeletonCodecError,
    TruncatedStream,
    UnsupportedFormat,
    ValueOverflow,
)
from .model import Frame, Sequence, Skeleton, skeleton_apply, skeleton_diff, validate_sequence
from .synth import GenConfig, generate

__version__ = "0.1.0"

__all__ = [
    "Mode",
    "ModeDecision",
    "ReferenceState",
    "Scheme",
    "StreamHeader",
    "choose_mode",
    "decode_frame",
    "decode_sequence",
    "direct_baseline_bytes",
    "direct_baseline_size",
    "encode",
    "encode_frame",
    "encode_sequence",
    "load_sequence",
    "save_sequence",
    "AnchorMissing",
    "EmptyMask",
    "InvalidFrame",
    "MalformedCode",
    "MalformedRecord",
    "MaskMismatch",
    "SkeletonCodecError",
    "TruncatedStream",
    "UnsupportedFormat",
    "ValueOverflow",
    "Frame",
    "Sequence",
    "Skeleton",
    "skeleton_apply",
    "skeleton_diff",
    "validate_sequence",
    "GenConfig",
    "generate",
]
