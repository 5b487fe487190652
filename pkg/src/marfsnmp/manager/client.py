"""Manager-side SNMP operations: get, getnext, getbulk, set, and walk.

Each operation opens its own socket, so one TargetSpec can be shared
freely across threads (poller, trap listener, interactive commands).
"""

from __future__ import annotations

from dataclasses import dataclass

from marfsnmp.ber import EndOfMibView, Null
from marfsnmp.messages import ErrorStatus, PduKind, Varbind
from marfsnmp.oid import Oid
from marfsnmp.transport import RequestTimeout, SnmpUdpClient

# the transport's timeout error is the manager's too; re-exported under
# the name callers grep for
Timeout = RequestTimeout


class ErrorResponse(Exception):
    """The agent answered, but with a non-zero error-status."""

    def __init__(self, status: int, index: int):
        self.status = status
        self.index = index
        super().__init__(f"{ErrorStatus.name(status)} at index {index}")

    @property
    def status_name(self) -> str:
        return ErrorStatus.name(self.status)


class LoopDetected(Exception):
    """A getnext successor failed to advance, so the walk would never end."""

    def __init__(self, at: Oid, successor: Oid):
        self.at = at
        self.successor = successor
        super().__init__(f"successor {successor} does not advance past {at}")


@dataclass(frozen=True)
class TargetSpec:
    """One agent endpoint plus the credentials and patience to talk to it."""

    host: str
    port: int
    read_community: bytes = b"public"
    write_community: bytes = b"private"
    timeout: float = 2.0
    retries: int = 1

    def __post_init__(self):
        if isinstance(self.read_community, str):
            object.__setattr__(self, "read_community", self.read_community.encode())
        if isinstance(self.write_community, str):
            object.__setattr__(self, "write_community", self.write_community.encode())
        if not 0 < self.port < 65536:
            raise ValueError(f"port {self.port} outside 1..65535")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")

    @property
    def address(self) -> tuple:
        return (self.host, self.port)

    @property
    def label(self) -> str:
        return f"{self.host}:{self.port}"

    @classmethod
    def parse(cls, text: str, **overrides) -> "TargetSpec":
        """Build from "host:port" text."""
        host, sep, port = text.rpartition(":")
        if not sep or not port.isdigit():
            raise ValueError(f"target {text!r} is not host:port")
        return cls(host=host or "127.0.0.1", port=int(port), **overrides)


def _request(target, community, kind, varbinds, status=0, index=0):
    with SnmpUdpClient(timeout=target.timeout, retries=target.retries) as cli:
        pdu = cli.request(target.address, community, kind, tuple(varbinds), status, index)
    if pdu.error_status != ErrorStatus.NO_ERROR:
        raise ErrorResponse(pdu.error_status, pdu.error_index)
    return pdu.varbinds


def _null_binds(oids):
    return tuple(Varbind(oid, Null()) for oid in oids)


def get(target: TargetSpec, oids) -> tuple:
    """GET each OID; exceptions come back in-band as varbind values."""
    return _request(target, target.read_community, PduKind.GET, _null_binds(oids))


def get_next(target: TargetSpec, oids) -> tuple:
    return _request(target, target.read_community, PduKind.GET_NEXT, _null_binds(oids))


def get_bulk(target: TargetSpec, oids, non_repeaters=0, max_repetitions=10) -> tuple:
    return _request(
        target,
        target.read_community,
        PduKind.GET_BULK,
        _null_binds(oids),
        non_repeaters,
        max_repetitions,
    )


def set_values(target: TargetSpec, varbinds) -> tuple:
    """SET the given varbinds in one PDU, using the write community."""
    return _request(target, target.write_community, PduKind.SET, tuple(varbinds))


def walk(target: TargetSpec, root: Oid) -> tuple:
    """Chained getnext under one subtree.

    Stops cleanly on endOfMibView or on leaving the subtree. An agent
    that returns a successor that does not sort strictly after the
    query aborts the walk with LoopDetected rather than spinning.
    """
    out = []
    current = root
    while True:
        vb = get_next(target, (current,))[0]
        if isinstance(vb.value, EndOfMibView):
            return tuple(out)
        if not vb.oid.startswith(root):
            return tuple(out)
        if vb.oid <= current:
            raise LoopDetected(current, vb.oid)
        out.append(vb)
        current = vb.oid
