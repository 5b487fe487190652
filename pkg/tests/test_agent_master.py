"""Master-agent routing, the UDP server loop, and the request transport."""

import socket

import pytest

from marfsnmp import ber
from marfsnmp.agent import (
    AgentConfig,
    AgentEngine,
    AgentServer,
    MasterAgent,
    ObjectRegistry,
    SubAgentRoute,
)
from marfsnmp.messages import ErrorStatus, Pdu, PduKind, SnmpMessage, Varbind
from marfsnmp.oid import MARF, Oid
from marfsnmp.transport import RequestTimeout, SnmpUdpClient

from agent_support import (
    PRIVATE,
    PUBLIC,
    get_msg,
    getbulk_msg,
    getnext_msg,
    read_only,
    read_write,
    set_msg,
    walk,
)

LPC_SUBTREE = MARF.extend(6, 2)

LOCAL_A = MARF.extend(6, 1, 1, 1, 2)
LOCAL_B = MARF.extend(6, 1, 1, 2, 2)
LOCAL_C = MARF.extend(7, 1, 0)
SUB_POLES = LPC_SUBTREE.extend(1, 1, 1, 2)
SUB_WINDOW = LPC_SUBTREE.extend(1, 1, 2, 2)


@pytest.fixture()
def stack():
    """A master with two local arcs and one routed subtree served over UDP."""
    sub_store = {"poles": 8, "window": 256}
    sub_registry = ObjectRegistry()
    sub_registry.register(read_write(SUB_POLES, sub_store, "poles"))
    sub_registry.register(read_write(SUB_WINDOW, sub_store, "window"))
    sub_engine = AgentEngine(sub_registry)
    sub_server = AgentServer(sub_engine).start()

    local_store = {"feats": 36}
    local_registry = ObjectRegistry()
    local_registry.register(read_only(LOCAL_A, ber.Integer(36)))
    local_registry.register(read_write(LOCAL_B, local_store, "feats"))
    local_registry.register(read_only(LOCAL_C, ber.Counter32(9)))
    engine = AgentEngine(local_registry)

    client = SnmpUdpClient(timeout=0.4, retries=0)
    master = MasterAgent(
        engine, [SubAgentRoute(LPC_SUBTREE, sub_server.address)], client=client
    )
    yield {
        "master": master,
        "sub_server": sub_server,
        "sub_store": sub_store,
        "local_store": local_store,
        "sub_engine": sub_engine,
    }
    master.close()
    sub_server.stop()


def test_get_merges_local_and_routed(stack):
    master = stack["master"]
    response = master.handle_pdu(get_msg([LOCAL_A, SUB_POLES, LOCAL_C]))
    assert response.pdu.error_status == ErrorStatus.NO_ERROR
    values = [vb.value for vb in response.pdu.varbinds]
    assert values == [ber.Integer(36), ber.Integer(8), ber.Counter32(9)]


def test_get_routed_exception_stays_inband(stack):
    master = stack["master"]
    response = master.handle_pdu(get_msg([LPC_SUBTREE.extend(1, 1, 1, 9)]))
    assert response.pdu.error_status == ErrorStatus.NO_ERROR
    assert isinstance(response.pdu.varbinds[0].value, ber.NoSuchInstance)


def test_get_with_dead_subagent_degrades_to_gen_err(stack):
    master = stack["master"]
    stack["sub_server"].stop()
    response = master.handle_pdu(get_msg([LOCAL_A, SUB_POLES, LOCAL_C]))
    pdu = response.pdu
    assert pdu.error_status == ErrorStatus.GEN_ERR
    assert pdu.error_index == 2  # first varbind the dead route owns
    assert pdu.varbinds[0].value == ber.Integer(36)     # local answers survive
    assert pdu.varbinds[2].value == ber.Counter32(9)
    assert pdu.varbinds[1].value == ber.Null()          # unanswered stays null


def test_walk_spans_the_routed_subtree(stack):
    master = stack["master"]
    oids = [vb.oid for vb in walk(master, MARF)]
    assert oids == [LOCAL_A, LOCAL_B, SUB_POLES, SUB_WINDOW, LOCAL_C]


def test_getnext_crosses_boundaries_both_ways(stack):
    master = stack["master"]
    into = master.handle_pdu(getnext_msg([LOCAL_B])).pdu.varbinds[0]
    assert into.oid == SUB_POLES
    out_of = master.handle_pdu(getnext_msg([SUB_WINDOW])).pdu.varbinds[0]
    assert out_of.oid == LOCAL_C


def test_getnext_with_dead_subagent_degrades_to_gen_err(stack):
    master = stack["master"]
    stack["sub_server"].stop()
    response = master.handle_pdu(getnext_msg([LOCAL_B]))
    assert response.pdu.error_status == ErrorStatus.GEN_ERR
    assert response.pdu.error_index == 1


def test_getnext_skips_empty_routed_subtree(stack):
    master = stack["master"]
    for oid in list(stack["sub_engine"].registry._scalars):
        del stack["sub_engine"].registry._scalars[oid]
    response = master.handle_pdu(getnext_msg([LOCAL_B]))
    assert response.pdu.varbinds[0].oid == LOCAL_C


def test_getbulk_through_master_equals_walk_prefix(stack):
    master = stack["master"]
    response = master.handle_pdu(getbulk_msg([MARF], 0, 10))
    walked = walk(master, MARF)
    vbs = list(response.pdu.varbinds)
    assert vbs[: len(walked)] == walked
    assert all(isinstance(vb.value, ber.EndOfMibView) for vb in vbs[len(walked):])


def test_set_routes_to_subagent(stack):
    master = stack["master"]
    response = master.handle_pdu(set_msg([(SUB_POLES, ber.Integer(12))]))
    assert response.pdu.error_status == ErrorStatus.NO_ERROR
    assert stack["sub_store"]["poles"] == 12


def test_set_mixed_targets_apply_in_order(stack):
    master = stack["master"]
    response = master.handle_pdu(
        set_msg([(LOCAL_B, ber.Integer(40)), (SUB_WINDOW, ber.Integer(128))])
    )
    assert response.pdu.error_status == ErrorStatus.NO_ERROR
    assert stack["local_store"]["feats"] == 40
    assert stack["sub_store"]["window"] == 128


def test_set_routed_failure_keeps_original_index(stack):
    master = stack["master"]
    response = master.handle_pdu(
        set_msg([(LOCAL_B, ber.Integer(41)), (SUB_WINDOW, ber.OctetString(b"x"))])
    )
    assert response.pdu.error_status == ErrorStatus.WRONG_TYPE
    assert response.pdu.error_index == 2


def test_set_with_dead_subagent_is_gen_err(stack):
    master = stack["master"]
    stack["sub_server"].stop()
    response = master.handle_pdu(
        set_msg([(LOCAL_B, ber.Integer(42)), (SUB_POLES, ber.Integer(6))])
    )
    assert response.pdu.error_status == ErrorStatus.GEN_ERR
    assert response.pdu.error_index == 2


def test_master_honors_community_policy(stack):
    master = stack["master"]
    assert master.handle_pdu(get_msg([LOCAL_A], community=b"wrong")) is None
    refused = master.handle_pdu(set_msg([(LOCAL_B, ber.Integer(5))], community=PUBLIC))
    assert refused.pdu.error_status == ErrorStatus.NO_ACCESS


# -- server loop and transport ---------------------------------------------------


def test_full_udp_round_trip(stack):
    master_server = AgentServer(stack["master"]).start()
    try:
        with SnmpUdpClient(timeout=1.0, retries=0) as client:
            pdu = client.request(
                master_server.address, PUBLIC, PduKind.GET, [Varbind(SUB_POLES)]
            )
            assert pdu.varbinds[0].value == ber.Integer(8)
            pdu = client.request(
                master_server.address, PRIVATE, PduKind.SET,
                [Varbind(SUB_POLES, ber.Integer(10))],
            )
            assert pdu.error_status == ErrorStatus.NO_ERROR
            assert stack["sub_store"]["poles"] == 10
    finally:
        master_server.stop()


def test_server_survives_garbage_datagrams(stack):
    server = stack["sub_server"]
    with socket.socket(socket.AF_INET, socket.SOCK_DGRAM) as raw:
        raw.sendto(b"\xff\x00garbage", server.address)
        raw.sendto(b"", server.address)
    with SnmpUdpClient(timeout=1.0, retries=0) as client:
        pdu = client.request(server.address, PUBLIC, PduKind.GET, [Varbind(SUB_POLES)])
        assert pdu.varbinds[0].value == ber.Integer(8)


def test_silent_drop_makes_client_time_out(stack):
    server = stack["sub_server"]
    with SnmpUdpClient(timeout=0.2, retries=1) as client:
        with pytest.raises(RequestTimeout) as info:
            client.request(server.address, b"wrong", PduKind.GET, [Varbind(SUB_POLES)])
    assert info.value.attempts == 2


class FlakyHandler:
    """Drops the first datagram of each request id, answers the retry."""

    def __init__(self, engine):
        self.engine = engine
        self.seen = set()

    def handle_pdu(self, msg):
        if msg.pdu.request_id not in self.seen:
            self.seen.add(msg.pdu.request_id)
            return None
        return self.engine.handle_pdu(msg)


def test_transport_retries_once_then_succeeds():
    registry = ObjectRegistry()
    registry.register(read_only(MARF.extend(1, 1, 0), ber.Integer(77)))
    flaky = FlakyHandler(AgentEngine(registry))
    with AgentServer(flaky) as server:
        with SnmpUdpClient(timeout=0.3, retries=1) as client:
            pdu = client.request(
                server.address, PUBLIC, PduKind.GET, [Varbind(MARF.extend(1, 1, 0))]
            )
            assert pdu.varbinds[0].value == ber.Integer(77)
        with SnmpUdpClient(timeout=0.3, retries=0) as client:
            with pytest.raises(RequestTimeout):
                client.request(
                    server.address, PUBLIC, PduKind.GET, [Varbind(MARF.extend(1, 1, 0))]
                )


class WrongIdHandler:
    """Answers every request under a mismatched request id."""

    def __init__(self, engine):
        self.engine = engine

    def handle_pdu(self, msg):
        response = self.engine.handle_pdu(msg)
        pdu = response.pdu
        return SnmpMessage(
            response.community,
            Pdu(pdu.kind, pdu.request_id + 1, pdu.error_status, pdu.error_index, pdu.varbinds),
        )


def test_transport_ignores_mismatched_request_ids():
    registry = ObjectRegistry()
    registry.register(read_only(MARF.extend(1, 1, 0), ber.Integer(3)))
    with AgentServer(WrongIdHandler(AgentEngine(registry))) as server:
        with SnmpUdpClient(timeout=0.3, retries=0) as client:
            with pytest.raises(RequestTimeout):
                client.request(
                    server.address, PUBLIC, PduKind.GET, [Varbind(MARF.extend(1, 1, 0))]
                )
