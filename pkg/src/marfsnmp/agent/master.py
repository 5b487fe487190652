"""Master agent: serves a local registry and delegates subtrees to sub-agents.

Delegation speaks plain SNMPv2c over UDP, so a sub-agent is just another
agent bound to a loopback port. A sub-agent that stops answering degrades
the affected varbinds to genErr while everything answerable still carries
its value.
"""

import threading

from marfsnmp import ber
from marfsnmp.messages import (
    ErrorStatus,
    Pdu,
    PduKind,
    SnmpMessage,
    Varbind,
    encode_message,
)
from marfsnmp.transport import RequestTimeout, SnmpUdpClient


class SubAgentRoute:
    """One delegated subtree and the sub-agent that owns it."""

    def __init__(self, subtree, address, community=b"public", write_community=b"private"):
        self.subtree = subtree
        self.address = tuple(address)
        self.community = community
        self.write_community = write_community

    def contains(self, oid):
        return oid.startswith(self.subtree)

    def may_follow(self, oid):
        """Could this subtree hold an instance strictly after oid?"""
        upper = self.subtree[:-1] + (self.subtree[-1] + 1,)
        return tuple(oid) < upper


class MasterAgent:
    """Drop-in handle_pdu provider that merges local and routed answers."""

    _READ_KINDS = (PduKind.GET, PduKind.GET_NEXT, PduKind.GET_BULK)

    def __init__(self, engine, routes=(), client=None):
        self.engine = engine
        self.routes = tuple(routes)
        self._client = client or SnmpUdpClient(timeout=2.0, retries=1)
        self._lock = threading.Lock()

    def close(self):
        self._client.close()

    def _route_for(self, oid):
        for route in self.routes:
            if route.contains(oid):
                return route
        return None

    def _response(self, msg, varbinds, status=0, index=0):
        return SnmpMessage(
            msg.community,
            Pdu(PduKind.RESPONSE, msg.pdu.request_id, status, index, tuple(varbinds)),
        )

    def handle_pdu(self, msg):
        with self._lock:
            kind = msg.pdu.kind
            config = self.engine.config
            if kind in self._READ_KINDS:
                if msg.community not in (config.read_community, config.write_community):
                    if config.respond_to_unknown_community:
                        return self._response(msg, msg.pdu.varbinds, ErrorStatus.NO_ACCESS, 0)
                    return None
                if kind == PduKind.GET:
                    return self._get(msg)
                if kind == PduKind.GET_NEXT:
                    return self._getnext(msg)
                return self._getbulk(msg)
            if kind == PduKind.SET:
                if msg.community != config.write_community:
                    return self._response(msg, msg.pdu.varbinds, ErrorStatus.NO_ACCESS, 0)
                return self._set(msg)
            return None

    # -- GET ---------------------------------------------------------------

    def _get(self, msg):
        varbinds = msg.pdu.varbinds
        results = [None] * len(varbinds)
        groups = {}  # route -> [position, ...]
        for i, vb in enumerate(varbinds):
            route = self._route_for(vb.oid)
            if route is None:
                results[i] = Varbind(vb.oid, self.engine.read_instance(vb.oid))
            else:
                groups.setdefault(route, []).append(i)
        first_failed = None
        for route, positions in groups.items():
            query = [Varbind(varbinds[i].oid) for i in positions]
            try:
                pdu = self._client.request(route.address, route.community, PduKind.GET, query)
            except RequestTimeout:
                pdu = None
            if pdu is None or pdu.error_status or len(pdu.varbinds) != len(positions):
                if first_failed is None or positions[0] < first_failed:
                    first_failed = positions[0]
                continue
            for i, vb in zip(positions, pdu.varbinds):
                results[i] = vb
        for i, vb in enumerate(results):
            if vb is None:
                results[i] = varbinds[i]
        if first_failed is not None:
            return self._response(msg, results, ErrorStatus.GEN_ERR, first_failed + 1)
        return self._response(msg, results)

    # -- GETNEXT / GETBULK ---------------------------------------------------

    def _next_merged(self, oid):
        """Min candidate across the local registry and every relevant route.

        Raises RequestTimeout if a route that could hold the successor is
        unreachable; without its answer the minimum is unknowable.
        """
        candidates = []
        cursor = oid
        while True:  # skip any local object shadowed by a route
            local = self.engine.registry.successor(cursor)
            if local is None:
                break
            if self._route_for(local.oid) is None:
                candidates.append(Varbind(local.oid, local.read()))
                break
            cursor = local.oid
        for route in self.routes:
            if not route.may_follow(oid):
                continue
            pdu = self._client.request(
                route.address, route.community, PduKind.GET_NEXT, [Varbind(oid)]
            )
            if pdu.error_status or not pdu.varbinds:
                continue
            vb = pdu.varbinds[0]
            if isinstance(vb.value, ber.EndOfMibView):
                continue
            if route.contains(vb.oid) and vb.oid > oid:
                candidates.append(vb)
        if not candidates:
            return Varbind(oid, ber.EndOfMibView())
        return min(candidates, key=lambda vb: vb.oid)

    def _getnext(self, msg):
        out = []
        for position, vb in enumerate(msg.pdu.varbinds, start=1):
            try:
                out.append(self._next_merged(vb.oid))
            except RequestTimeout:
                return self._response(msg, msg.pdu.varbinds, ErrorStatus.GEN_ERR, position)
        return self._response(msg, out)

    def _getbulk(self, msg):
        non_repeaters = msg.pdu.non_repeaters
        max_repetitions = msg.pdu.max_repetitions
        varbinds = msg.pdu.varbinds
        out = []
        try:
            for vb in varbinds[:non_repeaters]:
                out.append(self._next_merged(vb.oid))
            cursors = [vb.oid for vb in varbinds[non_repeaters:]]
            for _round in range(max_repetitions):
                if not cursors:
                    break
                produced = []
                for i, cursor in enumerate(cursors):
                    vb = self._next_merged(cursor)
                    produced.append(vb)
                    cursors[i] = vb.oid
                out.extend(produced)
                if all(isinstance(vb.value, ber.EndOfMibView) for vb in produced):
                    break
        except RequestTimeout:
            return self._response(msg, msg.pdu.varbinds, ErrorStatus.GEN_ERR, 1)
        while True:
            response = self._response(msg, out)
            try:
                encode_message(response)
                return response
            except ValueError:
                if not out:
                    raise
                out = out[:-1]

    # -- SET -------------------------------------------------------------

    def _set(self, msg):
        """Contiguous per-target groups, applied in varbind order.

        Atomicity holds within each target; a failure in a later group does
        not roll back an earlier one. Same-target batches keep the full
        two-phase guarantee.
        """
        varbinds = msg.pdu.varbinds
        groups = []  # (route-or-None, [positions])
        for i, vb in enumerate(varbinds):
            route = self._route_for(vb.oid)
            if groups and groups[-1][0] is route:
                groups[-1][1].append(i)
            else:
                groups.append((route, [i]))
        for route, positions in groups:
            group_vbs = [varbinds[i] for i in positions]
            if route is None:
                sub = SnmpMessage(msg.community, Pdu(PduKind.SET, msg.pdu.request_id, varbinds=tuple(group_vbs)))
                pdu = self.engine.handle_pdu(sub).pdu
            else:
                try:
                    pdu = self._client.request(
                        route.address, route.write_community, PduKind.SET, group_vbs
                    )
                except RequestTimeout:
                    return self._response(
                        msg, varbinds, ErrorStatus.GEN_ERR, positions[0] + 1
                    )
            if pdu.error_status:
                local_index = pdu.error_index or 1
                original = positions[min(local_index, len(positions)) - 1] + 1
                return self._response(msg, varbinds, pdu.error_status, original)
        return self._response(msg, varbinds)
