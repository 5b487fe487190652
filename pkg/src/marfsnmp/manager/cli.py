"""marfman: command-line SNMP manager.

get/getnext/getbulk/set/walk for raw requests, table for rendered
dumps, traps for a live listener, poll for CSV statistics, and serve
for the HTTP gateway the console UI talks to.
"""

from __future__ import annotations

import argparse
import sys
import time

from marfsnmp.ber import EndOfMibView, NoSuchInstance, NoSuchObject, OctetString, OidValue
from marfsnmp.messages import Varbind
from marfsnmp.oid import OidError
from marfsnmp.smi import AmbiguousName, SmiError, UnknownName
from marfsnmp.transport import RequestTimeout

from . import client, stats
from .client import ErrorResponse, LoopDetected, TargetSpec
from .gateway import Gateway
from .names import Namer, default_namer
from .tables import render_table
from .traps import BindFailure, TrapListener


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marfman", description="SNMP manager for the recognition pipeline"
    )
    parser.add_argument("--mib-dir", help="MIB directory (default: bundled set)")

    net = argparse.ArgumentParser(add_help=False)
    net.add_argument("--target", required=True, help="agent address as host:port")
    net.add_argument("--community", default="public", help="read community")
    net.add_argument("--write-community", default="private", help="write community")
    net.add_argument("--timeout", type=int, default=2000, help="per-attempt timeout, ms")
    net.add_argument("--retries", type=int, default=1, help="resends after the first try")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("get", parents=[net], help="GET one or more OIDs")
    p.add_argument("oids", nargs="+", metavar="OID")

    p = sub.add_parser("getnext", parents=[net], help="GETNEXT one or more OIDs")
    p.add_argument("oids", nargs="+", metavar="OID")

    p = sub.add_parser("getbulk", parents=[net], help="GETBULK")
    p.add_argument("--non-repeaters", type=int, default=0)
    p.add_argument("--max-repetitions", type=int, default=10)
    p.add_argument("oids", nargs="+", metavar="OID")

    p = sub.add_parser("set", parents=[net], help="SET name=value pairs in one PDU")
    p.add_argument("assignments", nargs="+", metavar="OID=VALUE")

    p = sub.add_parser("walk", parents=[net], help="walk a subtree")
    p.add_argument("root", metavar="ROOT")

    p = sub.add_parser("table", parents=[net], help="walk and render one table")
    p.add_argument("table", metavar="TABLE")

    p = sub.add_parser("traps", help="listen for traps and print them")
    p.add_argument("--listen", default="127.0.0.1:162", help="bind address as host:port")
    p.add_argument("--count", type=int, help="exit after this many traps")
    p.add_argument("--duration", type=float, help="exit after this many seconds")

    p = sub.add_parser("poll", parents=[net], help="sample counters on a schedule")
    p.add_argument("--oid", dest="oids", action="append", required=True, metavar="OID")
    p.add_argument("--interval", type=float, default=1.0, help="seconds between samples")
    p.add_argument("--duration", type=float, default=10.0, help="total seconds to poll")
    p.add_argument("--csv", help="write samples here instead of stdout")

    p = sub.add_parser("serve", help="run the HTTP/JSON gateway")
    p.add_argument("--listen", default="127.0.0.1:8080", help="bind address as host:port")
    p.add_argument(
        "--service",
        dest="services",
        action="append",
        required=True,
        metavar="INDEX=HOST:PORT",
        help="map a service index to its agent (repeatable)",
    )
    p.add_argument("--community", default="public")
    p.add_argument("--write-community", default="private")
    p.add_argument("--timeout", type=int, default=2000)
    p.add_argument("--retries", type=int, default=1)
    p.add_argument("--poll-interval", type=float, default=1.0)
    p.add_argument("--trap-listen", help="also collect traps at host:port")
    p.add_argument("--ui-dir", help="serve these static files at /")

    return parser


def _target_from(args) -> TargetSpec:
    return TargetSpec.parse(
        args.target,
        read_community=args.community,
        write_community=args.write_community,
        timeout=args.timeout / 1000.0,
        retries=args.retries,
    )


def _render_value(namer: Namer, oid, value) -> str:
    if isinstance(value, NoSuchObject):
        return "noSuchObject"
    if isinstance(value, NoSuchInstance):
        return "noSuchInstance"
    if isinstance(value, EndOfMibView):
        return "endOfMibView"
    if isinstance(value, OctetString):
        return value.value.decode("utf-8", "replace")
    if isinstance(value, OidValue):
        return namer.to_name(value.value)
    inner = getattr(value, "value", None)
    column = namer.column_for(oid)
    if column is not None and isinstance(inner, int):
        labels = {code: label for label, code in column.syntax.labels}
        if inner in labels:
            return f"{labels[inner]}({inner})"
    return str(inner)


def _print_varbinds(namer, varbinds, out):
    for vb in varbinds:
        print(f"{namer.to_name(vb.oid)} = {_render_value(namer, vb.oid, vb.value)}", file=out)


def _parse_assignment(namer: Namer, text: str) -> Varbind:
    name, sep, raw = text.partition("=")
    if not sep:
        raise ValueError(f"{text!r} is not OID=VALUE")
    oid = namer.to_oid(name.strip())
    raw = raw.strip()
    column = namer.column_for(oid)
    if column is not None:
        from marfsnmp.agent import to_ber

        labels = dict(column.syntax.labels)
        value = labels.get(raw, raw)
        return Varbind(oid, to_ber(column.syntax, value))
    # no MIB knowledge: integers go as Integer, the rest as text
    from marfsnmp.ber import Integer

    stripped = raw.lstrip("-")
    if stripped.isdigit():
        return Varbind(oid, Integer(int(raw)))
    return Varbind(oid, OctetString.from_text(raw))


def _cmd_table(namer, target, args, out) -> int:
    table = namer.table_named(args.table)
    rows = render_table(client.walk(target, table.table_oid), table)
    columns = [c.name for c in table.effective_columns]
    present = [c for c in columns if any(c in cells for cells in rows.values())]
    widths = {c: len(c) for c in present}
    rendered = {}
    for key, cells in rows.items():
        line = {}
        for c in present:
            if c in cells:
                value = cells[c]
                line[c] = value.decode("utf-8", "replace") if isinstance(value, bytes) else str(value)
            else:
                line[c] = "-"
            widths[c] = max(widths[c], len(line[c]))
        rendered[key] = line
    print("  ".join(c.ljust(widths[c]) for c in present), file=out)
    for key in sorted(rendered):
        print("  ".join(rendered[key][c].ljust(widths[c]) for c in present), file=out)
    return 0


def _cmd_traps(namer, args, out) -> int:
    host, _, port = args.listen.rpartition(":")
    listener = TrapListener(host or "127.0.0.1", int(port))
    listener.start()
    deadline = None if args.duration is None else time.monotonic() + args.duration
    printed = 0
    try:
        while True:
            records = listener.records()
            while printed < len(records):
                rec = records[printed]
                printed += 1
                binds = " ".join(
                    f"{namer.to_name(vb.oid)}={_render_value(namer, vb.oid, vb.value)}"
                    for vb in rec.varbinds
                )
                print(
                    f"{rec.received_at.isoformat()} {rec.source[0]}:{rec.source[1]} "
                    f"{namer.to_name(rec.trap_oid)} {binds}".rstrip(),
                    file=out,
                )
            if args.count is not None and printed >= args.count:
                return 0
            if deadline is not None and time.monotonic() >= deadline:
                return 0
            listener.wait_for(printed + 1, timeout=0.2)
    except KeyboardInterrupt:
        return 0
    finally:
        listener.stop()


def _cmd_poll(namer, target, args, out) -> int:
    oids = tuple(namer.to_oid(text) for text in args.oids)
    series = stats.poll_stats(
        (target,), oids, args.interval, args.duration, namer=namer
    )
    if args.csv:
        stats.write_csv(args.csv, series)
        total = sum(len(s.samples) for s in series)
        print(f"wrote {total} samples across {len(series)} series to {args.csv}", file=out)
        return 0
    import csv as _csv

    writer = _csv.writer(out)
    writer.writerow(stats.CSV_COLUMNS)
    for s in series:
        for sample in s.samples:
            writer.writerow(
                [
                    sample.at.isoformat(),
                    s.target,
                    s.name,
                    sample.value,
                    "" if sample.rate is None else repr(sample.rate),
                ]
            )
    return 0


def _cmd_serve(namer, args, out) -> int:
    targets = {}
    for item in args.services:
        index, sep, address = item.partition("=")
        if not sep or not index.strip().isdigit():
            raise ValueError(f"--service wants INDEX=HOST:PORT, got {item!r}")
        targets[int(index)] = TargetSpec.parse(
            address,
            read_community=args.community,
            write_community=args.write_community,
            timeout=args.timeout / 1000.0,
            retries=args.retries,
        )
    listener = None
    if args.trap_listen:
        host, _, port = args.trap_listen.rpartition(":")
        listener = TrapListener(host or "127.0.0.1", int(port))
        listener.start()
    gateway = Gateway(
        targets,
        host=args.listen.rpartition(":")[0] or "127.0.0.1",
        port=int(args.listen.rpartition(":")[2]),
        listener=listener,
        namer=namer,
        poll_interval=args.poll_interval,
        ui_dir=args.ui_dir,
    )
    gateway.start()
    host, port = gateway.address
    print(f"gateway listening on http://{host}:{port}", file=out)
    if listener is not None:
        lhost, lport = listener.address
        print(f"trap listener on {lhost}:{lport}", file=out)
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        return 0
    finally:
        gateway.stop()
        if listener is not None:
            listener.stop()


def run(args, out=None) -> int:
    # resolved late so output redirection (and test capture) is honored
    out = sys.stdout if out is None else out
    namer = default_namer(args.mib_dir)
    if args.command == "traps":
        return _cmd_traps(namer, args, out)
    if args.command == "serve":
        return _cmd_serve(namer, args, out)
    target = _target_from(args)
    if args.command == "get":
        _print_varbinds(namer, client.get(target, [namer.to_oid(t) for t in args.oids]), out)
    elif args.command == "getnext":
        _print_varbinds(
            namer, client.get_next(target, [namer.to_oid(t) for t in args.oids]), out
        )
    elif args.command == "getbulk":
        _print_varbinds(
            namer,
            client.get_bulk(
                target,
                [namer.to_oid(t) for t in args.oids],
                non_repeaters=args.non_repeaters,
                max_repetitions=args.max_repetitions,
            ),
            out,
        )
    elif args.command == "set":
        binds = [_parse_assignment(namer, text) for text in args.assignments]
        _print_varbinds(namer, client.set_values(target, binds), out)
    elif args.command == "walk":
        _print_varbinds(namer, client.walk(target, namer.to_oid(args.root)), out)
    elif args.command == "table":
        return _cmd_table(namer, target, args, out)
    elif args.command == "poll":
        return _cmd_poll(namer, target, args, out)
    else:  # pragma: no cover - argparse rejects unknown commands first
        raise ValueError(f"unknown command {args.command}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except RequestTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return 1
    except ErrorResponse as exc:
        print(f"error-response: {exc}", file=sys.stderr)
        return 1
    except (LoopDetected, BindFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (
        UnknownName,
        AmbiguousName,
        OidError,
        SmiError,
        ValueError,
        FileNotFoundError,
        NotADirectoryError,
    ) as exc:
        print(f"bad request: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
