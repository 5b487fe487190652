"""UDP trap listener with a bounded in-memory ring."""

from __future__ import annotations

import socket
import threading
from collections import deque
from dataclasses import dataclass
from datetime import datetime

from marfsnmp.ber import DecodeError, OidValue, TimeTicks
from marfsnmp.messages import MAX_UDP_PAYLOAD, PduKind, decode_message
from marfsnmp.oid import SNMP_TRAP_OID_INSTANCE, SYS_UPTIME_INSTANCE, Oid


class BindFailure(Exception):
    """The listener could not claim its UDP port."""

    def __init__(self, address, reason):
        self.address = address
        self.reason = reason
        super().__init__(f"cannot bind {address[0]}:{address[1]}: {reason}")


@dataclass(frozen=True)
class TrapRecord:
    """One received notification, headers unpacked, payload kept verbatim."""

    received_at: datetime
    source: tuple
    community: bytes
    uptime_ticks: int
    trap_oid: Oid
    varbinds: tuple  # payload varbinds, after the two standard headers


class TrapListener:
    """Collects SNMPv2c traps; malformed datagrams are counted, never fatal.

    A well-formed trap is a v2c TRAP PDU whose first two varbinds are
    sysUpTime.0 (TimeTicks) and snmpTrapOID.0 (an OID value); anything
    else bumps malformed_count and is dropped. The ring keeps the most
    recent `capacity` records in arrival order.
    """

    def __init__(self, host="127.0.0.1", port=0, capacity=1000):
        # no SO_REUSEADDR: on UDP it would let two listeners share the port
        # and silently split the trap stream between them
        sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        try:
            sock.bind((host, port))
        except OSError as exc:
            sock.close()
            raise BindFailure((host, port), exc) from exc
        self._sock = sock
        self._ring = deque(maxlen=capacity)
        self._malformed = 0
        self._received = 0
        self._cond = threading.Condition()
        self._running = False
        self._thread = None

    @property
    def address(self) -> tuple:
        return self._sock.getsockname()

    @property
    def malformed_count(self) -> int:
        with self._cond:
            return self._malformed

    def records(self) -> tuple:
        """Snapshot of the ring, oldest first."""
        with self._cond:
            return tuple(self._ring)

    def start(self):
        if self._running:
            return
        self._running = True
        self._thread = threading.Thread(target=self._serve, daemon=True)
        self._thread.start()

    def stop(self):
        if not self._running:
            self._sock.close()
            return
        self._running = False
        # closing a UDP socket does not wake a blocked recvfrom on Linux;
        # poke ourselves so the loop notices
        poke = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        try:
            poke.sendto(b"", self.address)
        finally:
            poke.close()
        self._thread.join(timeout=5)
        self._sock.close()

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()

    def wait_for(self, count: int, timeout: float = 5.0) -> bool:
        """Block until `count` well-formed traps have arrived in total."""
        with self._cond:
            return self._cond.wait_for(lambda: self._received >= count, timeout)

    def _serve(self):
        while self._running:
            try:
                data, source = self._sock.recvfrom(MAX_UDP_PAYLOAD)
            except OSError:
                return
            if not self._running:
                return
            record = self._classify(data, source)
            with self._cond:
                if record is None:
                    self._malformed += 1
                else:
                    self._ring.append(record)
                    self._received += 1
                self._cond.notify_all()

    def _classify(self, data, source):
        try:
            msg = decode_message(data)
        except DecodeError:
            return None
        pdu = msg.pdu
        if pdu.kind is not PduKind.TRAP_V2 or len(pdu.varbinds) < 2:
            return None
        uptime, trap = pdu.varbinds[0], pdu.varbinds[1]
        if uptime.oid != SYS_UPTIME_INSTANCE or not isinstance(uptime.value, TimeTicks):
            return None
        if trap.oid != SNMP_TRAP_OID_INSTANCE or not isinstance(trap.value, OidValue):
            return None
        return TrapRecord(
            received_at=datetime.now(),
            source=source,
            community=msg.community,
            uptime_ticks=uptime.value.value,
            trap_oid=trap.value.value,
            varbinds=pdu.varbinds[2:],
        )
