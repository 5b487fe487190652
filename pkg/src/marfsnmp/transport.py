"""UDP request/response transport shared by the manager and the master agent."""

import itertools
import random
import socket
import time

from marfsnmp.ber import DecodeError
from marfsnmp.messages import (
    MAX_UDP_PAYLOAD,
    Pdu,
    PduKind,
    SnmpMessage,
    VersionMismatch,
    decode_message,
    encode_message,
)


class RequestTimeout(Exception):
    """No matching response arrived within timeout across all retries."""

    def __init__(self, address, attempts):
        self.address = address
        self.attempts = attempts
        super().__init__(f"no response from {address[0]}:{address[1]} after {attempts} attempts")


class SnmpUdpClient:
    """Synchronous SNMP requester: request-id matching, timeout, retries.

    One socket per client; not thread-safe. timeout is per attempt, in
    seconds; retries counts re-sends after the first attempt.
    """

    def __init__(self, timeout=2.0, retries=1):
        self.timeout = timeout
        self.retries = retries
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._sock.settimeout(timeout)
        self._request_ids = itertools.count(random.randrange(1, 1 << 24))

    def close(self):
        self._sock.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def request(self, address, community, kind, varbinds, error_status=0, error_index=0):
        """Send one request PDU and return the matching response Pdu."""
        request_id = next(self._request_ids) & 0x7FFFFFFF
        pdu = Pdu(kind, request_id, error_status, error_index, tuple(varbinds))
        payload = encode_message(SnmpMessage(community, pdu))
        for attempt in range(1 + self.retries):
            self._sock.sendto(payload, address)
            response = self._await_response(request_id)
            if response is not None:
                return response
        raise RequestTimeout(address, 1 + self.retries)

    def _await_response(self, request_id):
        deadline = time.monotonic() + self.timeout
        while True:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                return None
            self._sock.settimeout(remaining)
            try:
                data, _peer = self._sock.recvfrom(MAX_UDP_PAYLOAD)
            except socket.timeout:
                return None
            try:
                msg = decode_message(data)
            except (DecodeError, VersionMismatch):
                continue  # garbage datagram; keep waiting
            if msg.pdu.kind == PduKind.RESPONSE and msg.pdu.request_id == request_id:
                return msg.pdu
