"""SNMPv2c management suite for a simulated distributed audio-recognition pipeline.

The package splits into five layers:

- ``oid`` / ``ber`` / ``messages``: the wire, from sub-identifiers up to
  whole SNMPv2c messages.
- ``smi``: a parser and linker for the SMIv2 subset the bundled MIB
  modules use, including chained-AUGMENTS resolution.
- ``agent``: a generic agent runtime with an OID-ordered object
  registry, PDU evaluation, sub-agent proxying and trap emission.
- ``pipeline``: the simulated audio-recognition services (sample
  loading, preprocessing, feature extraction, classification and the
  speaker-identification front end), each instrumented through an
  embedded agent.
- ``manager``: the management side: request client, walker, trap
  listener, statistics poller, HTTP/JSON gateway and the ``marfman``
  command line tool.
"""

from .oid import Oid
from .ber import (
    BerValue,
    Counter32,
    EndOfMibView,
    Integer,
    NoSuchInstance,
    NoSuchObject,
    Null,
    OctetString,
    OidValue,
    TimeTicks,
    counter_inc,
)
from .messages import ErrorStatus, Pdu, PduKind, SnmpMessage, Varbind

__all__ = [
    "Oid",
    "BerValue",
    "Integer",
    "Counter32",
    "TimeTicks",
    "OctetString",
    "OidValue",
    "Null",
    "NoSuchObject",
    "NoSuchInstance",
    "EndOfMibView",
    "counter_inc",
    "ErrorStatus",
    "Pdu",
    "PduKind",
    "SnmpMessage",
    "Varbind",
]

__version__ = "0.1.0"
