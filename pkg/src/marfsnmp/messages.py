"""SNMPv2c message framing: community wrapper and the six PDU kinds."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from . import ber
from .ber import BerValue, DecodeError, Null, UnknownTag
from .oid import Oid

SNMP_V2C_VERSION = 1
MAX_UDP_PAYLOAD = 65507


class PduKind(Enum):
    GET = 0xA0
    GET_NEXT = 0xA1
    RESPONSE = 0xA2
    SET = 0xA3
    GET_BULK = 0xA5
    TRAP_V2 = 0xA7


class ErrorStatus:
    """Error-status codes a response PDU is allowed to carry."""

    NO_ERROR = 0
    NO_SUCH_NAME = 2
    BAD_VALUE = 3
    READ_ONLY = 4
    GEN_ERR = 5
    NO_ACCESS = 6
    WRONG_TYPE = 7
    WRONG_VALUE = 10
    NOT_WRITABLE = 17

    ALLOWED = frozenset({0, 2, 3, 4, 5, 6, 7, 10, 17})

    NAMES = {
        0: "noError",
        2: "noSuchName",
        3: "badValue",
        4: "readOnly",
        5: "genErr",
        6: "noAccess",
        7: "wrongType",
        10: "wrongValue",
        17: "notWritable",
    }

    @classmethod
    def name(cls, status: int) -> str:
        return cls.NAMES.get(status, f"errorStatus({status})")


class VersionMismatch(DecodeError):
    def __init__(self, version: int):
        super().__init__(f"unsupported SNMP version {version}, expected SNMPv2c (1)")
        self.version = version


@dataclass(frozen=True, slots=True)
class Varbind:
    oid: Oid
    value: BerValue = field(default_factory=Null)


@dataclass(frozen=True, slots=True)
class Pdu:
    """One protocol data unit.

    For GET_BULK the error_status / error_index slots carry
    non-repeaters and max-repetitions, as on the wire.
    """

    kind: PduKind
    request_id: int
    error_status: int = 0
    error_index: int = 0
    varbinds: tuple[Varbind, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "varbinds", tuple(self.varbinds))
        if not -(2**31) <= self.request_id < 2**31:
            raise ValueError(f"request-id {self.request_id} out of 32-bit range")
        if self.kind is PduKind.GET_BULK:
            if self.error_status < 0 or self.error_index < 0:
                raise ValueError("non-repeaters and max-repetitions must be >= 0")
        else:
            if self.error_status not in ErrorStatus.ALLOWED:
                raise ValueError(f"error-status {self.error_status} not allowed")
            if not 0 <= self.error_index <= len(self.varbinds):
                raise ValueError(
                    f"error-index {self.error_index} outside 0..{len(self.varbinds)}"
                )

    @property
    def non_repeaters(self) -> int:
        return self.error_status

    @property
    def max_repetitions(self) -> int:
        return self.error_index


@dataclass(frozen=True, slots=True)
class SnmpMessage:
    community: bytes
    pdu: Pdu
    version: int = SNMP_V2C_VERSION

    def __post_init__(self):
        if not isinstance(self.community, bytes):
            object.__setattr__(self, "community", bytes(self.community))
        if self.version != SNMP_V2C_VERSION:
            raise ValueError(f"only SNMPv2c (version 1) supported, got {self.version}")


def encode_varbind(vb: Varbind) -> bytes:
    content = ber.encode_tlv(ber.TAG_OID, ber.encode_oid_content(vb.oid))
    content += ber.encode_value(vb.value)
    return ber.encode_tlv(ber.TAG_SEQUENCE, content)


def encode_pdu(pdu: Pdu) -> bytes:
    body = ber.encode_tlv(ber.TAG_INTEGER, ber.encode_signed(pdu.request_id))
    body += ber.encode_tlv(ber.TAG_INTEGER, ber.encode_signed(pdu.error_status))
    body += ber.encode_tlv(ber.TAG_INTEGER, ber.encode_signed(pdu.error_index))
    vbl = b"".join(encode_varbind(vb) for vb in pdu.varbinds)
    body += ber.encode_tlv(ber.TAG_SEQUENCE, vbl)
    return ber.encode_tlv(pdu.kind.value, body)


def encode_message(msg: SnmpMessage) -> bytes:
    content = ber.encode_tlv(ber.TAG_INTEGER, ber.encode_signed(msg.version))
    content += ber.encode_tlv(ber.TAG_OCTET_STRING, msg.community)
    content += encode_pdu(msg.pdu)
    wire = ber.encode_tlv(ber.TAG_SEQUENCE, content)
    if len(wire) > MAX_UDP_PAYLOAD:
        raise ValueError(f"message of {len(wire)} bytes exceeds one UDP datagram")
    return wire


def _read_expected(data: bytes, pos: int, tag: int, what: str) -> tuple[bytes, int]:
    got, start, end = ber.read_header(data, pos)
    if got != tag:
        raise DecodeError(f"expected {what} (tag 0x{tag:02X}), got 0x{got:02X}")
    return data[start:end], end


def decode_varbind(data: bytes, pos: int) -> tuple[Varbind, int]:
    content, end = _read_expected(data, pos, ber.TAG_SEQUENCE, "varbind sequence")
    oid_content, inner = _read_expected(content, 0, ber.TAG_OID, "varbind name")
    oid = ber.decode_oid_content(oid_content)
    value, used = ber.decode_value(content, inner)
    if inner + used != len(content):
        raise DecodeError("trailing bytes inside varbind")
    return Varbind(oid, value), end


def decode_pdu(data: bytes, pos: int = 0) -> tuple[Pdu, int]:
    tag, start, end = ber.read_header(data, pos)
    try:
        kind = PduKind(tag)
    except ValueError:
        raise UnknownTag(tag) from None
    body = data[start:end]
    req_raw, p = _read_expected(body, 0, ber.TAG_INTEGER, "request-id")
    status_raw, p = _read_expected(body, p, ber.TAG_INTEGER, "error-status")
    index_raw, p = _read_expected(body, p, ber.TAG_INTEGER, "error-index")
    vbl, p = _read_expected(body, p, ber.TAG_SEQUENCE, "varbind list")
    if p != len(body):
        raise DecodeError("trailing bytes inside PDU")
    varbinds = []
    vpos = 0
    while vpos < len(vbl):
        vb, vpos = decode_varbind(vbl, vpos)
        varbinds.append(vb)
    try:
        return (
            Pdu(
                kind=kind,
                request_id=ber.decode_signed(req_raw),
                error_status=ber.decode_signed(status_raw),
                error_index=ber.decode_signed(index_raw),
                varbinds=tuple(varbinds),
            ),
            end,
        )
    except ValueError as exc:
        raise DecodeError(str(exc)) from None


def decode_message(data: bytes) -> SnmpMessage:
    content, end = _read_expected(data, 0, ber.TAG_SEQUENCE, "message sequence")
    if end != len(data):
        raise DecodeError("trailing bytes after message")
    version_raw, p = _read_expected(content, 0, ber.TAG_INTEGER, "version")
    version = ber.decode_signed(version_raw)
    if version != SNMP_V2C_VERSION:
        raise VersionMismatch(version)
    community, p = _read_expected(content, p, ber.TAG_OCTET_STRING, "community")
    pdu, p = decode_pdu(content, p)
    if p != len(content):
        raise DecodeError("trailing bytes after PDU")
    return SnmpMessage(community=community, pdu=pdu)
