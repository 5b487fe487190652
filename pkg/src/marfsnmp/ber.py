"""BER wire codec for the value variants that may appear in a varbind.

Only the canonical subset SNMPv2c needs is implemented: definite
lengths, primitive encodings, and minimal two's-complement integers.
The decoder rejects every non-canonical form it can detect so that a
successfully decoded buffer always re-encodes to the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .oid import Oid, OidError

TAG_INTEGER = 0x02
TAG_OCTET_STRING = 0x04
TAG_NULL = 0x05
TAG_OID = 0x06
TAG_SEQUENCE = 0x30
TAG_COUNTER32 = 0x41
TAG_TIMETICKS = 0x43
TAG_NO_SUCH_OBJECT = 0x80
TAG_NO_SUCH_INSTANCE = 0x81
TAG_END_OF_MIB_VIEW = 0x82


class DecodeError(Exception):
    """Structured decode failure; the decoder never raises anything else."""


class TruncatedInput(DecodeError):
    pass


class UnknownTag(DecodeError):
    def __init__(self, tag: int):
        super().__init__(f"unknown tag 0x{tag:02X}")
        self.tag = tag


class NonMinimalLength(DecodeError):
    pass


class BerValue:
    """Base class for the tagged values carried in varbinds."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Integer(BerValue):
    value: int

    def __post_init__(self):
        if not -(2**63) <= self.value < 2**63:
            raise ValueError(f"INTEGER {self.value} out of 64-bit range")


@dataclass(frozen=True, slots=True)
class Counter32(BerValue):
    value: int

    def __post_init__(self):
        if not 0 <= self.value < 2**32:
            raise ValueError(f"Counter32 {self.value} out of range")


@dataclass(frozen=True, slots=True)
class TimeTicks(BerValue):
    value: int

    def __post_init__(self):
        if not 0 <= self.value < 2**32:
            raise ValueError(f"TimeTicks {self.value} out of range")


@dataclass(frozen=True, slots=True)
class OctetString(BerValue):
    value: bytes

    def __post_init__(self):
        if not isinstance(self.value, bytes):
            object.__setattr__(self, "value", bytes(self.value))

    @classmethod
    def from_text(cls, text: str) -> "OctetString":
        return cls(text.encode())

    def text(self) -> str:
        return self.value.decode(errors="replace")


@dataclass(frozen=True, slots=True)
class OidValue(BerValue):
    value: Oid

    def __post_init__(self):
        if not isinstance(self.value, Oid):
            object.__setattr__(self, "value", Oid(self.value))
        self.value.validate()


@dataclass(frozen=True, slots=True)
class Null(BerValue):
    pass


@dataclass(frozen=True, slots=True)
class NoSuchObject(BerValue):
    pass


@dataclass(frozen=True, slots=True)
class NoSuchInstance(BerValue):
    pass


@dataclass(frozen=True, slots=True)
class EndOfMibView(BerValue):
    pass


def counter_inc(counter: Counter32, delta: int) -> Counter32:
    """Advance a Counter32, wrapping modulo 2**32."""
    if delta < 0:
        raise ValueError("counter delta must be non-negative")
    return Counter32((counter.value + delta) % 2**32)


# --- primitive encoders -------------------------------------------------

def encode_length(length: int) -> bytes:
    if length < 0x80:
        return bytes((length,))
    body = length.to_bytes((length.bit_length() + 7) // 8, "big")
    return bytes((0x80 | len(body),)) + body


def encode_signed(value: int) -> bytes:
    # Shortest two's-complement representation.
    n = max(1, (value.bit_length() + 8) // 8) if value >= 0 else max(
        1, ((value + 1).bit_length() + 8) // 8
    )
    return value.to_bytes(n, "big", signed=True)


def encode_unsigned(value: int) -> bytes:
    # Counters and ticks keep INTEGER encoding rules: a leading zero
    # octet is required when the top bit would read as a sign.
    body = value.to_bytes(max(1, (value.bit_length() + 7) // 8), "big")
    if body[0] & 0x80:
        body = b"\x00" + body
    return body


def encode_oid_content(oid: Oid) -> bytes:
    oid.validate()
    head = oid[0] * 40 + oid[1]
    out = bytearray()
    for sub in (head,) + tuple(oid[2:]):
        chunk = bytearray((sub & 0x7F,))
        sub >>= 7
        while sub:
            chunk.append(0x80 | (sub & 0x7F))
            sub >>= 7
        out.extend(reversed(chunk))
    return bytes(out)


def encode_tlv(tag: int, content: bytes) -> bytes:
    return bytes((tag,)) + encode_length(len(content)) + content


def encode_value(value: BerValue) -> bytes:
    if isinstance(value, Integer):
        return encode_tlv(TAG_INTEGER, encode_signed(value.value))
    if isinstance(value, Counter32):
        return encode_tlv(TAG_COUNTER32, encode_unsigned(value.value))
    if isinstance(value, TimeTicks):
        return encode_tlv(TAG_TIMETICKS, encode_unsigned(value.value))
    if isinstance(value, OctetString):
        return encode_tlv(TAG_OCTET_STRING, value.value)
    if isinstance(value, OidValue):
        return encode_tlv(TAG_OID, encode_oid_content(value.value))
    if isinstance(value, Null):
        return encode_tlv(TAG_NULL, b"")
    if isinstance(value, NoSuchObject):
        return encode_tlv(TAG_NO_SUCH_OBJECT, b"")
    if isinstance(value, NoSuchInstance):
        return encode_tlv(TAG_NO_SUCH_INSTANCE, b"")
    if isinstance(value, EndOfMibView):
        return encode_tlv(TAG_END_OF_MIB_VIEW, b"")
    raise TypeError(f"not a BerValue: {value!r}")


# --- primitive decoders -------------------------------------------------

def read_header(data: bytes, pos: int) -> tuple[int, int, int]:
    """Read tag and length at pos; return (tag, content_start, content_end)."""
    if pos >= len(data):
        raise TruncatedInput("expected tag")
    tag = data[pos]
    pos += 1
    if pos >= len(data):
        raise TruncatedInput("expected length")
    first = data[pos]
    pos += 1
    if first < 0x80:
        length = first
    else:
        n = first & 0x7F
        if n == 0:
            raise NonMinimalLength("indefinite length not allowed")
        if pos + n > len(data):
            raise TruncatedInput("truncated long-form length")
        raw = data[pos : pos + n]
        if raw[0] == 0:
            raise NonMinimalLength("length has leading zero octet")
        length = int.from_bytes(raw, "big")
        if length < 0x80:
            raise NonMinimalLength("long form used for short length")
        pos += n
    if pos + length > len(data):
        raise TruncatedInput("content truncated")
    return tag, pos, pos + length


def decode_signed(content: bytes) -> int:
    if not content:
        raise DecodeError("empty INTEGER content")
    if len(content) > 1:
        if content[0] == 0x00 and not content[1] & 0x80:
            raise NonMinimalLength("redundant leading 0x00 in integer")
        if content[0] == 0xFF and content[1] & 0x80:
            raise NonMinimalLength("redundant leading 0xFF in integer")
    return int.from_bytes(content, "big", signed=True)


def decode_unsigned(content: bytes) -> int:
    value = decode_signed(content)
    if value < 0:
        raise DecodeError("negative value for unsigned type")
    return value


def decode_oid_content(content: bytes) -> Oid:
    if not content:
        raise DecodeError("empty OID content")
    values = []
    acc = 0
    in_progress = False
    for i, b in enumerate(content):
        if not in_progress and b == 0x80:
            raise NonMinimalLength("OID sub-identifier has redundant leading 0x80")
        acc = (acc << 7) | (b & 0x7F)
        in_progress = bool(b & 0x80)
        if not in_progress:
            values.append(acc)
            acc = 0
    if in_progress:
        raise TruncatedInput("OID sub-identifier continues past content")
    head = values[0]
    if head < 40:
        first = (0, head)
    elif head < 80:
        first = (1, head - 40)
    else:
        first = (2, head - 80)
    try:
        return Oid(first + tuple(values[1:])).validate()
    except OidError as exc:
        raise DecodeError(str(exc)) from None


def _expect_empty(content: bytes, what: str) -> None:
    if content:
        raise DecodeError(f"{what} must have empty content")


def decode_value(data: bytes, pos: int = 0) -> tuple[BerValue, int]:
    """Decode one value at pos, returning it and the number of bytes used."""
    tag, start, end = read_header(data, pos)
    content = data[start:end]
    if tag == TAG_INTEGER:
        value: BerValue = Integer(decode_signed(content))
    elif tag == TAG_COUNTER32:
        v = decode_unsigned(content)
        if v >= 2**32:
            raise DecodeError(f"Counter32 value {v} out of range")
        value = Counter32(v)
    elif tag == TAG_TIMETICKS:
        v = decode_unsigned(content)
        if v >= 2**32:
            raise DecodeError(f"TimeTicks value {v} out of range")
        value = TimeTicks(v)
    elif tag == TAG_OCTET_STRING:
        value = OctetString(content)
    elif tag == TAG_OID:
        value = OidValue(decode_oid_content(content))
    elif tag == TAG_NULL:
        _expect_empty(content, "NULL")
        value = Null()
    elif tag == TAG_NO_SUCH_OBJECT:
        _expect_empty(content, "noSuchObject")
        value = NoSuchObject()
    elif tag == TAG_NO_SUCH_INSTANCE:
        _expect_empty(content, "noSuchInstance")
        value = NoSuchInstance()
    elif tag == TAG_END_OF_MIB_VIEW:
        _expect_empty(content, "endOfMibView")
        value = EndOfMibView()
    else:
        raise UnknownTag(tag)
    return value, end - pos
