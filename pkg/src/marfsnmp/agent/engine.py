"""PDU evaluation over an ObjectRegistry, plus SNMPv2 trap emission."""

import socket
import threading
import time
from dataclasses import dataclass

from marfsnmp import ber
from marfsnmp.messages import (
    ErrorStatus,
    Pdu,
    PduKind,
    SnmpMessage,
    Varbind,
    encode_message,
)
from marfsnmp.oid import SNMP_TRAP_OID_INSTANCE, SYS_UPTIME_INSTANCE
from marfsnmp.agent.objects import READ_WRITE


@dataclass(frozen=True, slots=True)
class TrapEvent:
    notification_oid: object
    varbinds: tuple = ()
    timestamp: int = 0  # TimeTicks since agent start


def _udp_send(payload, address):
    with socket.socket(socket.AF_INET, socket.SOCK_DGRAM) as sock:
        sock.sendto(payload, address)


@dataclass
class AgentConfig:
    read_community: bytes = b"public"
    write_community: bytes = b"private"
    trap_community: bytes = b"public"
    respond_to_unknown_community: bool = False
    trap_sinks: tuple = ()


class AgentEngine:
    """Serialized PDU evaluation: one lock, classic agent semantics."""

    def __init__(self, registry, config=None, clock=time.monotonic, trap_sender=_udp_send):
        self.registry = registry
        self.config = config or AgentConfig()
        self._clock = clock
        self._trap_sender = trap_sender
        self._started_at = clock()
        self._lock = threading.Lock()
        self.traps_emitted = 0

    # -- helpers --------------------------------------------------------

    def uptime_ticks(self):
        return int((self._clock() - self._started_at) * 100) % (1 << 32)

    def _read_allowed(self, community):
        return community in (self.config.read_community, self.config.write_community)

    def _response(self, msg, varbinds, status=0, index=0):
        return SnmpMessage(
            msg.community,
            Pdu(PduKind.RESPONSE, msg.pdu.request_id, status, index, tuple(varbinds)),
        )

    # -- PDU evaluation --------------------------------------------------

    def handle_pdu(self, msg):
        """Evaluate one decoded message; None means drop (no response)."""
        with self._lock:
            kind = msg.pdu.kind
            if kind in (PduKind.GET, PduKind.GET_NEXT, PduKind.GET_BULK):
                if not self._read_allowed(msg.community):
                    if self.config.respond_to_unknown_community:
                        return self._response(
                            msg, msg.pdu.varbinds, ErrorStatus.NO_ACCESS, 0
                        )
                    return None
                if kind == PduKind.GET:
                    return self._get(msg)
                if kind == PduKind.GET_NEXT:
                    return self._getnext(msg)
                return self._getbulk(msg)
            if kind == PduKind.SET:
                if msg.community != self.config.write_community:
                    return self._response(msg, msg.pdu.varbinds, ErrorStatus.NO_ACCESS, 0)
                return self._set(msg)
            return None  # responses and traps are not served

    def read_instance(self, oid):
        obj = self.registry.lookup(oid)
        if obj is not None:
            return obj.read()
        if self.registry.knows_object(oid):
            return ber.NoSuchInstance()
        return ber.NoSuchObject()

    def _get(self, msg):
        out = []
        for position, vb in enumerate(msg.pdu.varbinds, start=1):
            try:
                out.append(Varbind(vb.oid, self.read_instance(vb.oid)))
            except Exception:
                return self._response(msg, msg.pdu.varbinds, ErrorStatus.GEN_ERR, position)
        return self._response(msg, out)

    def next_instance(self, oid):
        obj = self.registry.successor(oid)
        if obj is None:
            return Varbind(oid, ber.EndOfMibView())
        return Varbind(obj.oid, obj.read())

    def _getnext(self, msg):
        out = []
        for position, vb in enumerate(msg.pdu.varbinds, start=1):
            try:
                out.append(self.next_instance(vb.oid))
            except Exception:
                return self._response(msg, msg.pdu.varbinds, ErrorStatus.GEN_ERR, position)
        return self._response(msg, out)

    def _getbulk(self, msg):
        non_repeaters = msg.pdu.non_repeaters
        max_repetitions = msg.pdu.max_repetitions
        varbinds = msg.pdu.varbinds
        out = []
        try:
            for vb in varbinds[:non_repeaters]:
                out.append(self.next_instance(vb.oid))
            cursors = [vb.oid for vb in varbinds[non_repeaters:]]
            for _round in range(max_repetitions):
                if not cursors:
                    break
                produced = []
                for i, cursor in enumerate(cursors):
                    vb = self.next_instance(cursor)
                    produced.append(vb)
                    cursors[i] = vb.oid
                out.extend(produced)
                if all(isinstance(vb.value, ber.EndOfMibView) for vb in produced):
                    break
        except Exception:
            return self._response(msg, msg.pdu.varbinds, ErrorStatus.GEN_ERR, 1)
        return self._fit(msg, out)

    def _fit(self, msg, varbinds):
        """Drop trailing varbinds until the response encodes under the limit."""
        while True:
            response = self._response(msg, varbinds)
            try:
                encode_message(response)
                return response
            except ValueError:
                if not varbinds:
                    raise
                varbinds = varbinds[:-1]

    def _set(self, msg):
        staged = []
        for position, vb in enumerate(msg.pdu.varbinds, start=1):
            obj = self.registry.lookup(vb.oid)
            if obj is None or obj.access != READ_WRITE:
                return self._response(msg, msg.pdu.varbinds, ErrorStatus.NOT_WRITABLE, position)
            if obj.ber_type is not None and type(vb.value) is not obj.ber_type:
                return self._response(msg, msg.pdu.varbinds, ErrorStatus.WRONG_TYPE, position)
            if obj.check is not None:
                try:
                    status = obj.check(vb.value)
                except ValueError:
                    status = ErrorStatus.WRONG_VALUE
                if status:
                    return self._response(msg, msg.pdu.varbinds, status, position)
            staged.append((obj, vb))
        for position, (obj, vb) in enumerate(staged, start=1):
            try:
                obj.write(vb.value)
            except Exception:
                return self._response(msg, msg.pdu.varbinds, ErrorStatus.GEN_ERR, position)
        return self._response(msg, msg.pdu.varbinds)

    # -- traps ------------------------------------------------------------

    def emit_trap(self, event, sinks=None):
        """One best-effort snmpv2-trap datagram per sink."""
        sinks = tuple(self.config.trap_sinks if sinks is None else sinks)
        if not sinks:
            return
        header = (
            Varbind(SYS_UPTIME_INSTANCE, ber.TimeTicks(event.timestamp)),
            Varbind(SNMP_TRAP_OID_INSTANCE, ber.OidValue(event.notification_oid)),
        )
        pdu = Pdu(
            PduKind.TRAP_V2,
            request_id=self.uptime_ticks() & 0x7FFFFFFF,
            varbinds=header + tuple(event.varbinds),
        )
        payload = encode_message(SnmpMessage(self.config.trap_community, pdu))
        for sink in sinks:
            try:
                self._trap_sender(payload, sink)
            except OSError:
                pass  # fire and forget
            self.traps_emitted += 1

    def make_trap(self, notification_oid, varbinds=()):
        return TrapEvent(notification_oid, tuple(varbinds), self.uptime_ticks())
