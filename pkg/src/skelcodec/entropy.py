"""MSB-first bit I/O and order-0 exponential-Golomb codes.

Bits are held as ``'0'``/``'1'`` text while a stream is built or parsed.  That
keeps every primitive a slice or a lookup, which is the fast path in CPython.
"""

from __future__ import annotations

from .errors import InvalidCode, TruncatedStream, ValueOverflow

UE_LIMIT = 1 << 32
SE_LIMIT = 1 << 31
_MAX_PREFIX = 32  # leading zeros of the largest legal ue value
_TABLE_SIZE = 1 << 12


def _ue_code(v: int) -> str:
    s = bin(v + 1)[2:]
    return "0" * (len(s) - 1) + s


def zigzag(v: int) -> int:
    return 2 * v - 1 if v > 0 else -2 * v


def unzigzag(m: int) -> int:
    return (m + 1) >> 1 if m & 1 else -(m >> 1)


_UE_TABLE = [_ue_code(v) for v in range(_TABLE_SIZE)]
_SE_OFFSET = _TABLE_SIZE // 4


def _peek_table(width: int) -> dict[str, tuple[int, int]]:
    """Map every ``width``-bit window that starts with a complete se code to
    ``(value, code length)``."""
    table = {}
    for n in range(1 << width):
        window = format(n, f"0{width}b")
        zeros = window.find("1")
        if 0 <= zeros and 2 * zeros + 1 <= width:
            table[window] = (unzigzag(int(window[zeros : 2 * zeros + 1], 2) - 1), 2 * zeros + 1)
    return table


_PEEK_BITS = 12
_PEEK = _peek_table(_PEEK_BITS)


def ue_length(v: int) -> int:
    """Length in bits of the ue code for ``v``: ``2*floor(log2(v+1)) + 1``."""
    return 2 * (v + 1).bit_length() - 1


def se_length(v: int) -> int:
    return 2 * (zigzag(v) + 1).bit_length() - 1


def ue_bits(v: int) -> str:
    if not 0 <= v < UE_LIMIT:
        raise ValueOverflow(f"ue value out of range: {v}")
    return _UE_TABLE[v] if v < _TABLE_SIZE else _ue_code(v)


_SE_CODES = {v: _ue_code(zigzag(v)) for v in range(-_SE_OFFSET, _SE_OFFSET)}


def se_bits(v: int) -> str:
    code = _SE_CODES.get(v)
    if code is not None:
        return code
    if not -SE_LIMIT < v < SE_LIMIT:
        raise ValueOverflow(f"se value out of range: {v}")
    return _ue_code(zigzag(v))


def se_run_bits(values) -> str:
    """Concatenated se codes for ``values``."""
    get = _SE_CODES.get
    return "".join([get(v) or se_bits(v) for v in values])


def fixed_bits(v: int, nbits: int) -> str:
    if not 1 <= nbits <= 32:
        raise ValueOverflow(f"fixed width must be in 1..32, got {nbits}")
    if not 0 <= v < (1 << nbits):
        raise ValueOverflow(f"{v} does not fit in {nbits} bits")
    return format(v, f"0{nbits}b")


class BitSink:
    """Append-only bit buffer."""

    __slots__ = ("_parts", "bit_count")

    def __init__(self) -> None:
        self._parts: list[str] = []
        self.bit_count = 0

    def write_bit(self, bit: int) -> None:
        self._parts.append("1" if bit else "0")
        self.bit_count += 1

    def write_bits(self, bits: str) -> None:
        """Append a pre-built run of ``'0'``/``'1'`` characters."""
        self._parts.append(bits)
        self.bit_count += len(bits)

    def write_fixed(self, v: int, nbits: int) -> None:
        self.write_bits(fixed_bits(v, nbits))

    def write_ue(self, v: int) -> None:
        self.write_bits(ue_bits(v))

    def write_se(self, v: int) -> None:
        self.write_bits(se_bits(v))

    def write_se_run(self, values) -> None:
        self.write_bits(se_run_bits(values))

    def bitstring(self) -> str:
        return "".join(self._parts)

    def to_bytes(self) -> bytes:
        """Close the stream: zero-pad to a byte boundary and pack."""
        bits = self.bitstring()
        if not bits:
            return b""
        pad = -len(bits) % 8
        bits += "0" * pad
        return int(bits, 2).to_bytes(len(bits) // 8, "big")


class BitSource:
    """Cursor over a bit buffer; never reads past the end silently."""

    __slots__ = ("_bits", "pos", "size")

    def __init__(self, data: bytes | str) -> None:
        if isinstance(data, (bytes, bytearray)):
            bits = format(int.from_bytes(data, "big"), f"0{8 * len(data)}b") if data else ""
        else:
            bits = data
        self._bits = bits
        self.pos = 0
        self.size = len(bits)

    @property
    def remaining(self) -> int:
        return self.size - self.pos

    def rest(self) -> str:
        return self._bits[self.pos :]

    def read_bit(self) -> int:
        pos = self.pos
        if pos >= self.size:
            raise TruncatedStream("read past end of stream")
        self.pos = pos + 1
        return 1 if self._bits[pos] == "1" else 0

    def read_fixed(self, nbits: int) -> int:
        if not 1 <= nbits <= 32:
            raise ValueOverflow(f"fixed width must be in 1..32, got {nbits}")
        pos = self.pos
        end = pos + nbits
        if end > self.size:
            raise TruncatedStream(f"need {nbits} bits, {self.size - pos} left")
        self.pos = end
        return int(self._bits[pos:end], 2)

    def read_ue(self) -> int:
        bits = self._bits
        pos = self.pos
        one = bits.find("1", pos, pos + _MAX_PREFIX + 1)
        if one < 0:
            if self.size - pos > _MAX_PREFIX:
                raise InvalidCode(f"more than {_MAX_PREFIX} leading zeros")
            raise TruncatedStream("read past end of stream")
        end = 2 * one - pos + 1
        if end > self.size:
            raise TruncatedStream("read past end of stream")
        v = int(bits[one:end], 2) - 1
        if v >= UE_LIMIT:
            raise InvalidCode(f"ue value {v} exceeds 32 bits")
        self.pos = end
        return v

    def read_se(self) -> int:
        m = self.read_ue()
        return (m + 1) >> 1 if m & 1 else -(m >> 1)

    def read_se_run(self, count: int) -> list[int]:
        """Read ``count`` consecutive se codes."""
        bits = self._bits
        pos = self.pos
        peek = _PEEK
        out = []
        for _ in range(count):
            hit = peek.get(bits[pos : pos + _PEEK_BITS])
            if hit is None:
                self.pos = pos
                out.append(self.read_se())
                pos = self.pos
            else:
                out.append(hit[0])
                pos += hit[1]
        self.pos = pos
        return out
