"""Length-prefixed TCP channel between pipeline stages.

Every exchange is one connection, one request frame, one response frame:

    frame    u8 kind + u32 length (little-endian) + payload

Request kinds name the operation: 1 load, 2 preprocess, 3 extract,
4 classify, 5 train. Responses use kind 0 (ok) or 255 (error).

Payload encodings (all integers little-endian, reals 64-bit):

    load request        raw audio container bytes
    sample              u32 formatCode + u32 rateHz + u32 n + n * f64
    extract request     u8 algorithm code + sample
    vector              u8 algorithm code + u8 paramCount + params * u32
                        + u32 n + n * f64
    train request       i32 subjectId + vector
    classify response   u32 count + count * (i32 subjectId + f64 distance)
    error               UTF-8 JSON {"name": ..., "message": ..., ...extras}

Algorithm codes match the training-set container: 1 lpc, 2 fft, 3 minmax.
"""

import json
import socket
import socketserver
import struct
import threading

import numpy as np

from marfsnmp.pipeline import errors
from marfsnmp.pipeline.dsp import FeatureVector
from marfsnmp.pipeline.sample import Sample
from marfsnmp.pipeline.training import ALGORITHM_CODES, RankedMatch, ResultSet

OP_LOAD = 1
OP_PREPROCESS = 2
OP_EXTRACT = 3
OP_CLASSIFY = 4
OP_TRAIN = 5

KIND_OK = 0
KIND_ERROR = 255

_FRAME_HEAD = struct.Struct("<BI")
_CODE_TO_ALGORITHM = {code: name for name, code in ALGORITHM_CODES.items()}

MAX_FRAME_PAYLOAD = 64 * 1024 * 1024  # sanity bound, not a protocol limit


class ChannelError(errors.PipelineError):
    """Stage channel failed below the application layer."""


# -- payload packing --------------------------------------------------------


def pack_sample(sample):
    values = np.asarray(sample.amplitudes, dtype="<f8")
    head = struct.pack("<III", sample.format_code, sample.rate_hz, len(values))
    return head + values.tobytes()


def unpack_sample(payload):
    format_code, rate_hz, count = _unpack_exact("<III", payload, 0)
    values = _read_reals(payload, struct.calcsize("<III"), count, "sample")
    return Sample(format_code, rate_hz, values)


def pack_vector(fv):
    code = ALGORITHM_CODES.get(fv.algorithm)
    if code is None:
        raise ChannelError(f"no wire code for algorithm {fv.algorithm!r}")
    params = tuple(int(p) for p in fv.params)
    head = struct.pack(f"<BB{len(params)}I", code, len(params), *params)
    values = np.asarray(fv.features, dtype="<f8")
    return head + struct.pack("<I", len(values)) + values.tobytes()


def unpack_vector(payload):
    code, param_count = _unpack_exact("<BB", payload, 0)
    algorithm = _CODE_TO_ALGORITHM.get(code)
    if algorithm is None:
        raise ChannelError(f"unknown algorithm code {code}")
    offset = 2
    params = _unpack_exact(f"<{param_count}I", payload, offset)
    offset += 4 * param_count
    (count,) = _unpack_exact("<I", payload, offset)
    values = _read_reals(payload, offset + 4, count, "vector")
    return FeatureVector(algorithm, tuple(params), tuple(float(v) for v in values))


def pack_result(result):
    parts = [struct.pack("<I", len(result.ranked))]
    for match in result.ranked:
        parts.append(struct.pack("<id", match.subject_id, match.distance))
    return b"".join(parts)


def unpack_result(payload):
    (count,) = _unpack_exact("<I", payload, 0)
    offset = 4
    ranked = []
    for _ in range(count):
        subject_id, distance = _unpack_exact("<id", payload, offset)
        offset += struct.calcsize("<id")
        ranked.append(RankedMatch(subject_id, distance))
    return ResultSet(tuple(ranked))


def _unpack_exact(fmt, payload, offset):
    try:
        return struct.unpack_from(fmt, payload, offset)
    except struct.error as exc:
        raise ChannelError(f"short frame: {exc}") from exc


def _read_reals(payload, offset, count, what):
    end = offset + 8 * count
    if len(payload) < end:
        raise ChannelError(f"{what} frame truncated")
    return np.frombuffer(payload[offset:end], dtype="<f8").astype(np.float64)


# -- error payloads ----------------------------------------------------------


def pack_error(exc):
    body = {"name": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, errors.ServiceDown):
        body["service_index"] = exc.service_index
    elif isinstance(exc, errors.UnsupportedFormat):
        body["code"] = exc.code
    elif isinstance(exc, errors.MalformedWav):
        body["reason"] = exc.reason
    elif isinstance(exc, errors.IncompatibleFeatures):
        body["expected"] = _jsonable(exc.expected)
        body["got"] = _jsonable(exc.got)
    return json.dumps(body).encode("utf-8")


def unpack_error(payload):
    try:
        body = json.loads(payload.decode("utf-8"))
        name = body["name"]
        message = body.get("message", "")
    except (ValueError, KeyError, UnicodeDecodeError):
        return ChannelError("undecodable error frame")
    if name == "ServiceDown":
        return errors.ServiceDown(body.get("service_index", 0))
    if name == "UnsupportedFormat":
        return errors.UnsupportedFormat(body.get("code", 0))
    if name == "MalformedWav":
        return errors.MalformedWav(body.get("reason", message))
    if name == "IncompatibleFeatures":
        return errors.IncompatibleFeatures(
            _tupled(body.get("expected")), _tupled(body.get("got"))
        )
    cls = getattr(errors, name, None)
    if cls is not None and isinstance(cls, type) and issubclass(cls, errors.PipelineError):
        return cls(message)
    return ChannelError(f"remote failure {name}: {message}")


def _jsonable(value):
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    return value


def _tupled(value):
    if isinstance(value, list):
        return tuple(_tupled(v) for v in value)
    return value


# -- frame IO ----------------------------------------------------------------


def send_frame(sock, kind, payload):
    sock.sendall(_FRAME_HEAD.pack(kind, len(payload)) + payload)


def recv_frame(sock):
    head = _recv_exact(sock, _FRAME_HEAD.size)
    kind, length = _FRAME_HEAD.unpack(head)
    if length > MAX_FRAME_PAYLOAD:
        raise ChannelError(f"frame of {length} bytes exceeds the sanity bound")
    return kind, _recv_exact(sock, length)


def _recv_exact(sock, n):
    chunks = []
    remaining = n
    while remaining:
        chunk = sock.recv(remaining)
        if not chunk:
            raise ChannelError("connection closed mid-frame")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)


# -- server ------------------------------------------------------------------


class _StageHandler(socketserver.BaseRequestHandler):
    def handle(self):
        try:
            kind, payload = recv_frame(self.request)
        except (ChannelError, OSError):
            return  # malformed or vanished peer: nothing to answer
        try:
            reply = self.server.dispatch(kind, payload)
        except errors.PipelineError as exc:
            self._reply(KIND_ERROR, pack_error(exc))
            return
        except Exception as exc:  # do not leak internals across the wire
            self._reply(KIND_ERROR, pack_error(errors.PipelineError(str(exc))))
            return
        self._reply(KIND_OK, reply)

    def _reply(self, kind, payload):
        try:
            send_frame(self.request, kind, payload)
        except OSError:
            pass


class StageServer(socketserver.ThreadingTCPServer):
    """Serves one pipeline service over the stage channel.

    The operations offered follow from what the service object provides:
    load, preprocess, extract, and classify/train are looked up by name.
    """

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, service, host="127.0.0.1", port=0):
        super().__init__((host, port), _StageHandler)
        self.service = service
        self.address = self.socket.getsockname()
        self._thread = threading.Thread(
            # short poll so stop() does not dawdle half a second per server
            target=lambda: self.serve_forever(poll_interval=0.05),
            name=f"stage-{self.address[1]}",
            daemon=True,
        )

    def start(self):
        self._thread.start()
        return self

    def stop(self):
        self.shutdown()
        self._thread.join(timeout=5)
        self.server_close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc_info):
        self.stop()

    def dispatch(self, kind, payload):
        if kind == OP_LOAD:
            return pack_sample(self._op("load")(bytes(payload)))
        if kind == OP_PREPROCESS:
            return pack_sample(self._op("preprocess")(unpack_sample(payload)))
        if kind == OP_EXTRACT:
            (code,) = _unpack_exact("<B", payload, 0)
            algorithm = _CODE_TO_ALGORITHM.get(code)
            if algorithm is None:
                raise errors.InvalidParams(f"unknown algorithm code {code}")
            sample = unpack_sample(payload[1:])
            return pack_vector(self._op("extract")(sample, algorithm))
        if kind == OP_CLASSIFY:
            return pack_result(self._op("classify")(unpack_vector(payload)))
        if kind == OP_TRAIN:
            (subject_id,) = _unpack_exact("<i", payload, 0)
            self._op("train")(subject_id, unpack_vector(payload[4:]))
            return b""
        raise errors.InvalidParams(f"unsupported operation {kind}")

    def _op(self, name):
        fn = getattr(self.service, name, None)
        if fn is None:
            raise errors.InvalidParams(f"{name} is not offered here")
        return fn


# -- client ------------------------------------------------------------------


class TcpStages:
    """Drives remote stage services; satisfies the app's stages contract."""

    def __init__(self, load_addr, preprocess_addr, extract_addr, classify_addr,
                 timeout=5.0):
        self._addresses = {
            OP_LOAD: load_addr,
            OP_PREPROCESS: preprocess_addr,
            OP_EXTRACT: extract_addr,
            OP_CLASSIFY: classify_addr,
            OP_TRAIN: classify_addr,
        }
        self.timeout = timeout

    def _call(self, op, payload):
        address = self._addresses[op]
        try:
            with socket.create_connection(address, timeout=self.timeout) as sock:
                send_frame(sock, op, payload)
                kind, reply = recv_frame(sock)
        except OSError as exc:
            raise ChannelError(f"stage at {address} unreachable: {exc}") from exc
        if kind == KIND_ERROR:
            raise unpack_error(reply)
        if kind != KIND_OK:
            raise ChannelError(f"unexpected reply kind {kind}")
        return reply

    def load(self, data):
        return unpack_sample(self._call(OP_LOAD, bytes(data)))

    def preprocess(self, sample):
        return unpack_sample(self._call(OP_PREPROCESS, pack_sample(sample)))

    def extract(self, sample, algorithm):
        code = ALGORITHM_CODES.get(algorithm)
        if code is None:
            raise errors.InvalidParams(f"unknown algorithm {algorithm!r}")
        payload = struct.pack("<B", code) + pack_sample(sample)
        return unpack_vector(self._call(OP_EXTRACT, payload))

    def classify(self, fv):
        return unpack_result(self._call(OP_CLASSIFY, pack_vector(fv)))

    def train(self, subject_id, fv):
        self._call(OP_TRAIN, struct.pack("<i", subject_id) + pack_vector(fv))
