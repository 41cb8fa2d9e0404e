"""Exception hierarchy for the skeleton codec."""

from __future__ import annotations


class SkeletonCodecError(Exception):
    """Base class for every error raised by this package."""


class MaskMismatch(SkeletonCodecError, ValueError):
    """Two skeletons (or a skeleton and a residual set) cover different joints."""


class EmptyMask(SkeletonCodecError, ValueError):
    pass


class AnchorMissing(SkeletonCodecError, ValueError):
    """Joint 2, the motion-vector anchor, is absent."""


class MalformedCode(SkeletonCodecError, ValueError):
    pass


class ValueOverflow(SkeletonCodecError, ValueError):
    pass


class InvalidFrame(SkeletonCodecError, ValueError):
    pass


class StreamError(SkeletonCodecError):
    """Errors found while reading a bitstream.

    ``frame`` and ``record`` are filled in by the decoder when known.
    """

    def __init__(self, message: str, frame: int | None = None, record: int | None = None):
        super().__init__(message)
        self.message = message
        self.frame = frame
        self.record = record

    def located(self, frame: int, record: int | None) -> "StreamError":
        return type(self)(self.message, frame, record)

    def __str__(self) -> str:
        where = []
        if self.frame is not None:
            where.append(f"frame {self.frame}")
        if self.record is not None:
            where.append(f"record {self.record}")
        name = type(self).__name__
        if where:
            return f"{name}: {self.message} (at {', '.join(where)})"
        return f"{name}: {self.message}"


class TruncatedStream(StreamError):
    pass


class InvalidCode(StreamError):
    """A prefix code longer than any legal value."""


class MalformedRecord(StreamError):
    pass


class UnsupportedFormat(StreamError):
    pass
