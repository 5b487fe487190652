"""Threaded UDP listener that feeds datagrams to a PDU handler."""

import socket
import threading

from marfsnmp.ber import DecodeError
from marfsnmp.messages import MAX_UDP_PAYLOAD, VersionMismatch, decode_message, encode_message


class AgentServer:
    """Binds a UDP socket and answers each datagram via handler.handle_pdu.

    handler.handle_pdu(SnmpMessage) returns a response message or None to
    drop. Malformed datagrams are dropped silently, as an agent should.
    Port 0 binds an ephemeral port; read the final one from .address.
    """

    def __init__(self, handler, host="127.0.0.1", port=0):
        self.handler = handler
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._sock.bind((host, port))
        self.address = self._sock.getsockname()
        self._stopped = threading.Event()
        self._thread = threading.Thread(target=self._serve, daemon=True)

    def start(self):
        self._thread.start()
        return self

    def stop(self):
        self._stopped.set()
        try:
            # closing alone does not wake a blocked recvfrom; poke it
            with socket.socket(socket.AF_INET, socket.SOCK_DGRAM) as poke:
                poke.sendto(b"", self.address)
        except OSError:
            pass
        if self._thread.is_alive():
            self._thread.join(timeout=5)
        self._sock.close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    def _serve(self):
        while not self._stopped.is_set():
            try:
                data, peer = self._sock.recvfrom(MAX_UDP_PAYLOAD)
            except OSError:
                break  # socket closed by stop()
            if self._stopped.is_set():
                break
            try:
                msg = decode_message(data)
            except (DecodeError, VersionMismatch):
                continue
            try:
                response = self.handler.handle_pdu(msg)
            except Exception:
                continue  # a broken handler must not kill the listener
            if response is not None:
                try:
                    self._sock.sendto(encode_message(response), peer)
                except OSError:
                    break
