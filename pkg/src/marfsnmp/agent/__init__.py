"""SNMP agent side: managed objects, PDU engine, master routing, UDP server."""

from marfsnmp.agent.engine import AgentConfig, AgentEngine, TrapEvent
from marfsnmp.agent.master import MasterAgent, SubAgentRoute
from marfsnmp.agent.objects import (
    READ_ONLY,
    READ_WRITE,
    DuplicateRegistration,
    ManagedObject,
    ObjectRegistry,
    TableBinding,
    ber_type_for,
    from_ber,
    to_ber,
)
from marfsnmp.agent.server import AgentServer

__all__ = [
    "AgentConfig",
    "AgentEngine",
    "AgentServer",
    "DuplicateRegistration",
    "ManagedObject",
    "MasterAgent",
    "ObjectRegistry",
    "READ_ONLY",
    "READ_WRITE",
    "SubAgentRoute",
    "TableBinding",
    "TrapEvent",
    "ber_type_for",
    "from_ber",
    "to_ber",
]
