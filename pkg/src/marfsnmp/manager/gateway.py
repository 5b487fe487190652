"""HTTP/JSON facade over the SNMP surface, for the console UI.

Every value served here is fetched from the agents on request (or, for
stats, by the background poller); the gateway holds no truth of its
own. The one synthesized field is pipelineStatus, which is "up" only
while every service row reports up.
"""

from __future__ import annotations

import json
import mimetypes
import re
import threading
from collections import deque
from datetime import datetime
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from marfsnmp.agent import to_ber
from marfsnmp.ber import OctetString, OidValue
from marfsnmp.messages import Varbind
from marfsnmp.oid import Oid
from marfsnmp.smi import AmbiguousName, UnknownName
from marfsnmp.transport import RequestTimeout

from . import client
from .names import Namer, default_namer
from .stats import StatSample, _rate
from .tables import render_table
from .traps import TrapListener

SCHEMA_VERSION = 1

_SERVICES_RE = re.compile(r"/api/services/(\d+)/(stats|config)$")

# MIB syntax kind -> the vocabulary the config editor understands
_FIELD_KINDS = {
    "integer": "integer",
    "integer-enum": "enum",
    "counter32": "counter",
    "timeticks": "ticks",
    "display-string": "string",
    "octet-string": "string",
}


def _json_value(value):
    """BER payloads into something json.dumps accepts."""
    if isinstance(value, OctetString):
        return value.value.decode("utf-8", "replace")
    if isinstance(value, OidValue):
        return str(value.value)
    if isinstance(value, Oid):
        return str(value)
    inner = getattr(value, "value", value)
    if isinstance(inner, bytes):
        return inner.decode("utf-8", "replace")
    if isinstance(inner, Oid):
        return str(inner)
    if isinstance(inner, (int, str)) or inner is None:
        return inner
    return str(inner)


class HttpReply(Exception):
    """Short-circuit a handler with a specific HTTP status and body."""

    def __init__(self, status: int, payload: dict):
        self.status = status
        self.payload = dict(payload, schemaVersion=SCHEMA_VERSION)
        super().__init__(f"HTTP {status}")


class Gateway:
    """One HTTP server fronting a set of per-service SNMP targets."""

    def __init__(
        self,
        targets,
        *,
        host="127.0.0.1",
        port=0,
        listener: TrapListener | None = None,
        namer: Namer | None = None,
        poll_interval: float = 1.0,
        history: int = 120,
        ui_dir=None,
    ):
        if not targets:
            raise ValueError("a gateway needs at least one service target")
        self.targets = dict(sorted(targets.items()))
        self.listener = listener
        self.namer = namer or default_namer()
        self.poll_interval = poll_interval
        self.ui_dir = Path(ui_dir).resolve() if ui_dir else None
        reg = self.namer.registry
        self._service_table = self.namer.table_named("serviceTable")
        # enum labels come from the MIB, not from a table baked in here
        self._type_labels = {
            code: label
            for label, code in self._service_table.column_named("serviceType").syntax.labels
        }
        self._status_labels = {
            code: label
            for label, code in self._service_table.column_named("serviceStatus").syntax.labels
        }
        self._poll_columns = tuple(
            (name, reg.oid_of(name)) for name in ("serviceInRequests", "serviceOutErrors")
        )
        self._history: dict = {
            (index, name): deque(maxlen=history)
            for index in self.targets
            for name, _ in self._poll_columns
        }
        self._history_lock = threading.Lock()
        self._stop_polling = threading.Event()
        self._poller = None
        gateway = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass  # tests and demos do not want request logs on stderr

            def do_GET(self):
                gateway._handle(self, "GET")

            def do_POST(self):
                gateway._handle(self, "POST")

        self._server = ThreadingHTTPServer((host, port), Handler)
        self._server.daemon_threads = True
        self._thread = None

    # -- lifecycle ---------------------------------------------------

    @property
    def address(self) -> tuple:
        return self._server.server_address

    def start(self):
        self._thread = threading.Thread(
            target=lambda: self._server.serve_forever(poll_interval=0.05), daemon=True
        )
        self._thread.start()
        self._poller = threading.Thread(target=self._poll_loop, daemon=True)
        self._poller.start()

    def stop(self):
        self._stop_polling.set()
        if self._poller is not None:
            self._poller.join(timeout=5)
        self._server.shutdown()
        if self._thread is not None:
            self._thread.join(timeout=5)
        self._server.server_close()

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, *exc):
        self.stop()

    # -- background poller -------------------------------------------

    def _poll_loop(self):
        while not self._stop_polling.is_set():
            for index, target in self.targets.items():
                if self._stop_polling.is_set():
                    return
                oids = tuple(oid.extend(index) for _, oid in self._poll_columns)
                stamp = datetime.now()
                try:
                    varbinds = client.get(target, oids)
                except (RequestTimeout, client.ErrorResponse):
                    continue  # a gap; the series carries on next tick
                for (name, _), vb in zip(self._poll_columns, varbinds):
                    value = getattr(vb.value, "value", None)
                    if not isinstance(value, int):
                        continue
                    with self._history_lock:
                        series = self._history[(index, name)]
                        if series and stamp <= series[-1].at:
                            continue
                        rate = _rate(series[-1], stamp, value) if series else None
                        series.append(StatSample(stamp, value, rate))
            self._stop_polling.wait(self.poll_interval)

    # -- payload builders ----------------------------------------------

    def services_payload(self) -> dict:
        primary = next(iter(self.targets.values()))
        roster = render_table(
            client.walk(primary, self._service_table.table_oid), self._service_table
        )
        services = []
        all_up = bool(roster)
        for index, cells in roster.items():
            status = cells.get("serviceStatus", 0)
            all_up = all_up and status == 1
            type_code = cells.get("serviceType")
            entry = {
                "index": index,
                "name": _json_value(cells.get("serviceName", b"")),
                "type": self._type_labels.get(type_code, str(type_code)),
                "typeCode": type_code,
                "status": self._status_labels.get(status, str(status)),
                "statusCode": status,
                "uptimeTicks": cells.get("serviceUptime"),
                "inRequests": cells.get("serviceInRequests"),
                "outErrors": cells.get("serviceOutErrors"),
                "extensions": (extensions := self._extensions_for(index)),
                "config": self._config_for(extensions),
            }
            services.append(entry)
        return {
            "schemaVersion": SCHEMA_VERSION,
            "pipelineStatus": "up" if all_up else "down",
            "services": services,
        }

    def _extensions_for(self, index: int) -> dict:
        target = self.targets.get(index)
        if target is None:
            return {}
        extensions = {}
        for table in self.namer.tables:
            if table.table_name == "serviceTable":
                continue
            rows = render_table(client.walk(target, table.table_oid), table)
            if not rows:
                continue
            extensions[table.table_name] = [
                {
                    "index": key,
                    **{k: self._cell_value(table, k, v) for k, v in cells.items()},
                }
                for key, cells in rows.items()
            ]
        return extensions

    def _cell_value(self, table, column_name: str, value):
        # enum cells travel as their MIB labels, like the roster columns
        column = table.column_named(column_name)
        if column is not None and column.syntax.labels:
            for label, code in column.syntax.labels:
                if code == value:
                    return label
        return _json_value(value)

    def _config_for(self, extensions: dict) -> list:
        """Field descriptors for the config editor, straight from the MIB.

        One entry per column of the service's own extension tables, plus
        the roster's serviceStatus; the client renders these 1:1 and never
        has to guess type, writability, or enum vocabulary.
        """
        descriptors = [self._describe(self._service_table, "serviceStatus")]
        for table_name in extensions:
            table = self.namer.table_named(table_name)
            index_names = {c.name for c in table.index_columns}
            for column in table.own_columns:
                if column.name not in index_names:
                    descriptors.append(self._describe(table, column.name))
        return descriptors

    def _describe(self, table, column_name: str) -> dict:
        column = table.column_named(column_name)
        kind = _FIELD_KINDS.get(column.syntax.kind, "string")
        if kind == "integer" and column.name.endswith("Micro"):
            kind = "micro"
        entry = {
            "name": column.name,
            "table": table.table_name,
            "kind": kind,
            "writable": column.max_access == "read-write",
        }
        if column.syntax.labels:
            entry["labels"] = [label for label, _ in column.syntax.labels]
        return entry

    def stats_payload(self, index: int) -> dict:
        self._known_index(index)
        series = []
        with self._history_lock:
            for name, oid in self._poll_columns:
                samples = tuple(self._history[(index, name)])
                series.append(
                    {
                        "name": f"{name}.{index}",
                        "oid": str(oid.extend(index)),
                        "samples": [
                            {
                                "time": s.at.isoformat(),
                                "value": s.value,
                                "rate": s.rate,
                            }
                            for s in samples
                        ],
                    }
                )
        return {"schemaVersion": SCHEMA_VERSION, "serviceIndex": index, "series": series}

    def config_payload(self, index: int, body: dict) -> dict:
        target = self._known_index(index)
        if not isinstance(body, dict) or not body:
            raise HttpReply(400, {"error": "body must be a non-empty JSON object"})
        varbinds = []
        for name, raw in body.items():
            varbinds.append(Varbind(*self._coerce_column(name, index, raw)))
        try:
            result = client.set_values(target, varbinds)
        except client.ErrorResponse as exc:
            raise HttpReply(
                409, {"errorStatus": exc.status_name, "errorIndex": exc.index}
            ) from exc
        applied = {
            self.namer.to_name(vb.oid): _json_value(vb.value) for vb in result
        }
        return {"schemaVersion": SCHEMA_VERSION, "status": "noError", "applied": applied}

    def _coerce_column(self, name: str, index: int, raw):
        try:
            base = self.namer.to_oid(name)
        except (UnknownName, AmbiguousName) as exc:
            raise HttpReply(404, {"error": str(exc)}) from exc
        column = self.namer.column_for(base.extend(index))
        if column is None or column.oid != base:
            raise HttpReply(404, {"error": f"{name!r} is not a table column"})
        value = raw
        if isinstance(raw, str):
            labels = dict(column.syntax.labels)
            if raw in labels:
                value = labels[raw]
        try:
            ber_value = to_ber(column.syntax, value)
        except (TypeError, ValueError) as exc:
            raise HttpReply(400, {"error": f"bad value for {name}: {exc}"}) from exc
        return base.extend(index), ber_value

    def traps_payload(self) -> dict:
        if self.listener is None:
            return {"schemaVersion": SCHEMA_VERSION, "malformed": 0, "traps": []}
        traps = []
        for rec in self.listener.records():
            traps.append(
                {
                    "receivedAt": rec.received_at.isoformat(),
                    "source": f"{rec.source[0]}:{rec.source[1]}",
                    "community": rec.community.decode("utf-8", "replace"),
                    "uptimeTicks": rec.uptime_ticks,
                    "trapOid": str(rec.trap_oid),
                    "trapName": self.namer.to_name(rec.trap_oid),
                    "varbinds": [
                        {
                            "oid": str(vb.oid),
                            "name": self.namer.to_name(vb.oid),
                            "value": _json_value(vb.value),
                        }
                        for vb in rec.varbinds
                    ],
                }
            )
        return {
            "schemaVersion": SCHEMA_VERSION,
            "malformed": self.listener.malformed_count,
            "traps": traps,
        }

    def _known_index(self, index: int):
        try:
            return self.targets[index]
        except KeyError:
            raise HttpReply(404, {"error": f"no service with index {index}"}) from None

    # -- HTTP plumbing -------------------------------------------------

    def _handle(self, request, method):
        try:
            status, payload = self._route(request, method)
        except HttpReply as reply:
            status, payload = reply.status, reply.payload
        except RequestTimeout as exc:
            status, payload = 503, {
                "schemaVersion": SCHEMA_VERSION,
                "error": f"agent timeout: {exc}",
            }
        except Exception as exc:  # keep the server alive; report the wreck
            status, payload = 500, {"schemaVersion": SCHEMA_VERSION, "error": str(exc)}
        if payload is None:
            return  # static file already sent
        body = json.dumps(payload).encode()
        request.send_response(status)
        request.send_header("Content-Type", "application/json")
        request.send_header("Content-Length", str(len(body)))
        request.send_header("Access-Control-Allow-Origin", "*")
        request.end_headers()
        request.wfile.write(body)

    def _route(self, request, method):
        path = request.path.split("?", 1)[0]
        match = _SERVICES_RE.match(path)
        if method == "GET":
            if path == "/api/services":
                return 200, self.services_payload()
            if match and match.group(2) == "stats":
                return 200, self.stats_payload(int(match.group(1)))
            if path == "/api/traps":
                return 200, self.traps_payload()
            if self.ui_dir is not None and not path.startswith("/api/"):
                return self._serve_static(request, path)
            raise HttpReply(404, {"error": f"no route for GET {path}"})
        if method == "POST":
            if match and match.group(2) == "config":
                length = int(request.headers.get("Content-Length") or 0)
                try:
                    body = json.loads(request.rfile.read(length) or b"{}")
                except json.JSONDecodeError as exc:
                    raise HttpReply(400, {"error": f"invalid JSON body: {exc}"}) from exc
                return 200, self.config_payload(int(match.group(1)), body)
            raise HttpReply(404, {"error": f"no route for POST {path}"})
        raise HttpReply(404, {"error": f"unsupported method {method}"})

    def _serve_static(self, request, path):
        name = path.lstrip("/") or "index.html"
        candidate = (self.ui_dir / name).resolve()
        # stay inside the UI directory whatever the path spells
        if not candidate.is_relative_to(self.ui_dir) or not candidate.is_file():
            raise HttpReply(404, {"error": f"no route for GET {path}"})
        data = candidate.read_bytes()
        ctype = mimetypes.guess_type(candidate.name)[0] or "application/octet-stream"
        request.send_response(200)
        request.send_header("Content-Type", ctype)
        request.send_header("Content-Length", str(len(data)))
        request.end_headers()
        request.wfile.write(data)
        return 200, None
