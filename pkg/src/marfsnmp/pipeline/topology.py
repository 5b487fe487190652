"""Deployment wiring: stage drivers, status probes, and the demo stack.

DemoTopology stands up the whole distributed arrangement inside one
process: five SNMP agents on loopback UDP (one per service), a hidden
sub-agent carrying the LPC knobs behind the feature-extraction master,
and TCP stage channels the application drives audio through. Every
socket binds an ephemeral port, so stacks can coexist.
"""

import numpy as np

from marfsnmp.agent import AgentConfig, AgentServer, AgentEngine, MasterAgent, SubAgentRoute
from marfsnmp.ber import Integer, Null
from marfsnmp.messages import ErrorStatus, Pdu, PduKind, SnmpMessage, Varbind, decode_message, encode_message
from marfsnmp.oid import Oid
from marfsnmp.pipeline.channel import StageServer, TcpStages
from marfsnmp.pipeline.errors import PipelineError, ServiceDown
from marfsnmp.pipeline.sample import wav_bytes
from marfsnmp.pipeline.services import (
    ClassificationService,
    FeatureExtractionService,
    PreprocessingService,
    SampleLoadingService,
    ServiceDirectory,
    SpeakerIdentApp,
    mib_context,
)
from marfsnmp.transport import SnmpUdpClient


class LocalStages:
    """In-process stage driver: plain method calls, no wire."""

    def __init__(self, loading, preprocessing, extraction, classification):
        self.loading = loading
        self.preprocessing = preprocessing
        self.extraction = extraction
        self.classification = classification

    def load(self, data):
        return self.loading.load(data)

    def preprocess(self, sample):
        return self.preprocessing.preprocess(sample)

    def extract(self, sample, algorithm):
        return self.extraction.extract(sample, algorithm)

    def classify(self, fv):
        return self.classification.classify(fv)

    def train(self, subject_id, fv):
        return self.classification.train(subject_id, fv)


def loopback_request(handler, community, kind, varbinds,
                     error_status=0, error_index=0, request_id=1):
    """One request/response exchange through a handler, bytes and all.

    The message runs through the full codec both ways, so a loopback
    deployment exercises exactly what the wire would carry.
    """
    message = SnmpMessage(
        community,
        Pdu(kind, request_id, error_status=error_status,
            error_index=error_index, varbinds=tuple(varbinds)),
    )
    echoed = decode_message(encode_message(message))
    reply = handler.handle_pdu(echoed)
    if reply is None:
        return None
    return decode_message(encode_message(reply)).pdu


class LoopbackProbe:
    """serviceStatus probe over in-process handlers, one per service."""

    def __init__(self, handlers, community=b"public"):
        self.handlers = dict(handlers)
        self.community = community
        self._status_oid = mib_context().service_status_oid

    def __call__(self, index):
        handler = self.handlers.get(index)
        if handler is None:
            raise ServiceDown(index)
        pdu = loopback_request(
            handler,
            self.community,
            PduKind.GET,
            (Varbind(self._status_oid.extend(index), Null()),),
        )
        return _status_from(pdu, index)


class UdpProbe:
    """serviceStatus probe over real SNMP datagrams, one agent per service."""

    def __init__(self, addresses, community=b"public", timeout=1.0, retries=0):
        self.addresses = dict(addresses)
        self.community = community
        self._status_oid = mib_context().service_status_oid
        self._client = SnmpUdpClient(timeout=timeout, retries=retries)

    def __call__(self, index):
        address = self.addresses.get(index)
        if address is None:
            raise ServiceDown(index)
        pdu = self._client.request(
            address,
            self.community,
            PduKind.GET,
            (Varbind(self._status_oid.extend(index), Null()),),
        )
        return _status_from(pdu, index)

    def close(self):
        self._client.close()


def _status_from(pdu, index):
    if pdu is None or pdu.error_status != ErrorStatus.NO_ERROR:
        raise PipelineError(f"status query for service {index} failed")
    value = pdu.varbinds[0].value
    if not isinstance(value, Integer):
        raise PipelineError(f"service {index} has no status instance")
    return value.value


def demo_clip(subject, take=0, n=4096, rate_hz=8000):
    """Synthetic fixture audio: each subject is a distinct resonator.

    Subjects differ in their two-tap recursion coefficients, so their
    spectral envelopes separate cleanly in LPC space; takes differ only
    in the excitation noise. Deterministic for a given (subject, take).
    """
    voices = {
        1: (0.75, -0.50),
        2: (-0.60, -0.30),
        3: (0.20, -0.80),
    }
    if subject not in voices:
        raise ValueError(f"no demo voice for subject {subject}")
    a1, a2 = voices[subject]
    rng = np.random.default_rng(100_000 + 1_000 * subject + take)
    noise = rng.standard_normal(n + 200)
    x = np.zeros(n + 200)
    for t in range(2, n + 200):
        x[t] = a1 * x[t - 1] + a2 * x[t - 2] + noise[t]
    x = x[200:]
    x *= 0.9 / np.max(np.abs(x))
    return wav_bytes(x, rate_hz)


DEMO_SUBJECTS = (1, 2, 3)

LOADING_INDEX = 1
PREPROCESSING_INDEX = 2
EXTRACTION_INDEX = 3
CLASSIFICATION_INDEX = 4
APP_INDEX = 5
STAGE_INDEXES = (LOADING_INDEX, PREPROCESSING_INDEX, EXTRACTION_INDEX, CLASSIFICATION_INDEX)


class DemoTopology:
    """Five agents, four stage channels, one hidden LPC sub-agent."""

    def __init__(self, store_path, trap_sink=None,
                 read_community=b"public", write_community=b"private"):
        sinks = (trap_sink,) if trap_sink is not None else ()
        config = AgentConfig(
            read_community=read_community,
            write_community=write_community,
            trap_sinks=sinks,
        )
        self.directory = ServiceDirectory()
        self.loading = SampleLoadingService(
            LOADING_INDEX, self.directory, agent_config=config
        )
        self.preprocessing = PreprocessingService(
            PREPROCESSING_INDEX, self.directory, agent_config=config
        )
        self.extraction = FeatureExtractionService(
            EXTRACTION_INDEX, self.directory, agent_config=config, embed_lpc=False
        )
        self.classification = ClassificationService(
            CLASSIFICATION_INDEX, self.directory, store_path, agent_config=config
        )

        # the LPC knobs live behind their own sub-agent; the extraction
        # agent delegates that subtree like any master would
        self._lpc_engine = AgentEngine(self.extraction.build_lpc_registry(), config)
        self._lpc_server = AgentServer(self._lpc_engine)
        self._lpc_route = SubAgentRoute(
            Oid(mib_context().tables["lpcServiceTable"].table_oid),
            self._lpc_server.address,
            community=read_community,
            write_community=write_community,
        )
        self._servers = []

        self._stage_servers = {
            LOADING_INDEX: StageServer(self.loading),
            PREPROCESSING_INDEX: StageServer(self.preprocessing),
            EXTRACTION_INDEX: StageServer(self.extraction),
            CLASSIFICATION_INDEX: StageServer(self.classification),
        }
        self.agents = {}
        self.app = None
        self._probe = None
        self._config = config
        self._started = False

    def start(self):
        if self._started:
            return self
        self._started = True
        self._lpc_server.start()
        self._servers.append(self._lpc_server)

        master = MasterAgent(self.extraction.engine, routes=(self._lpc_route,))
        handlers = {
            LOADING_INDEX: self.loading.engine,
            PREPROCESSING_INDEX: self.preprocessing.engine,
            EXTRACTION_INDEX: master,
            CLASSIFICATION_INDEX: self.classification.engine,
        }
        for index, handler in handlers.items():
            server = AgentServer(handler).start()
            self.agents[index] = server
            self._servers.append(server)

        for server in self._stage_servers.values():
            server.start()

        stages = TcpStages(
            self._stage_servers[LOADING_INDEX].address,
            self._stage_servers[PREPROCESSING_INDEX].address,
            self._stage_servers[EXTRACTION_INDEX].address,
            self._stage_servers[CLASSIFICATION_INDEX].address,
        )
        self._probe = UdpProbe(
            {index: server.address for index, server in self.agents.items()}
        )
        self.app = SpeakerIdentApp(
            APP_INDEX,
            self.directory,
            stages,
            self._probe,
            STAGE_INDEXES,
            agent_config=self._config,
        )
        app_server = AgentServer(self.app.engine).start()
        self.agents[APP_INDEX] = app_server
        self._servers.append(app_server)

        for service in self.services():
            service.start()
        return self

    def services(self):
        return (
            self.loading,
            self.preprocessing,
            self.extraction,
            self.classification,
            *((self.app,) if self.app is not None else ()),
        )

    def agent_address(self, index):
        return self.agents[index].address

    def train_demo_voices(self, takes=(0, 1)):
        for subject in DEMO_SUBJECTS:
            for take in takes:
                self.app.train(subject, demo_clip(subject, take))

    def identify(self, data):
        return self.app.identify(data)

    def stop(self):
        for server in self._stage_servers.values():
            try:
                server.stop()
            except Exception:
                pass
        for server in self._servers:
            try:
                server.stop()
            except Exception:
                pass
        if self._probe is not None:
            self._probe.close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc_info):
        self.stop()
