"""Counter polling into timestamped series, with CSV out and back in."""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from marfsnmp.oid import Oid
from marfsnmp.transport import RequestTimeout

from . import client
from .names import Namer, default_namer

_WRAP = 1 << 32

MIN_INTERVAL = 0.1  # keep pollers from beating agents to death

CSV_COLUMNS = ("time", "target", "oid", "value", "rate")


@dataclass(frozen=True)
class StatSample:
    at: datetime
    value: int
    rate: float | None  # None on the first sample of a series


@dataclass(frozen=True)
class StatSeries:
    """Samples of one instance OID on one target, oldest first."""

    target: str
    oid: Oid
    name: str
    samples: tuple

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        last = None
        for sample in self.samples:
            if last is not None and sample.at <= last:
                raise ValueError("sample timestamps must strictly increase")
            if sample.rate is not None and sample.rate < 0:
                raise ValueError("rates are never negative")
            last = sample.at


def _rate(prev: StatSample, at: datetime, value: int) -> float:
    # a decrease is read as 32-bit counter wrap, never a negative rate
    return ((value - prev.value) % _WRAP) / (at - prev.at).total_seconds()


def poll_stats(
    targets,
    oids,
    interval: float,
    duration: float,
    *,
    namer: Namer | None = None,
    fetch=client.get,
    now=datetime.now,
    sleep=time.sleep,
) -> tuple:
    """Sample each OID on each target every `interval` seconds.

    One GET per target per tick carries all the OIDs. A timeout leaves
    a gap in that target's series for the tick and polling carries on;
    the next good sample rates against the last good one. Returns one
    StatSeries per (target, oid), in that nesting order.
    """
    if interval < MIN_INTERVAL:
        raise ValueError(f"interval {interval} below the {MIN_INTERVAL}s floor")
    if duration < 0:
        raise ValueError("duration must be >= 0")
    oids = tuple(oids)
    targets = tuple(targets)
    collected = {(t.label, oid): [] for t in targets for oid in oids}
    ticks = int(duration / interval) + 1
    for tick in range(ticks):
        if tick:
            sleep(interval)
        for target in targets:
            stamp = now()
            try:
                varbinds = fetch(target, oids)
            except RequestTimeout:
                continue
            for oid, vb in zip(oids, varbinds):
                value = getattr(vb.value, "value", None)
                if not isinstance(value, int):
                    continue  # exception value or wrong type: another gap
                samples = collected[(target.label, oid)]
                if samples and stamp <= samples[-1].at:
                    continue  # a stuck clock cannot produce a rate
                rate = _rate(samples[-1], stamp, value) if samples else None
                samples.append(StatSample(stamp, value, rate))
    out = []
    for target in targets:
        for oid in oids:
            name = namer.to_name(oid) if namer else str(oid)
            out.append(
                StatSeries(
                    target=target.label,
                    oid=oid,
                    name=name,
                    samples=tuple(collected[(target.label, oid)]),
                )
            )
    return tuple(out)


def write_csv(path, series) -> None:
    """One row per sample; series keep their order, samples theirs.

    A series with no samples writes no rows, so it does not survive a
    round trip; everything else re-imports exactly.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
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


def read_csv(path, namer: Namer | None = None) -> tuple:
    """Rebuild StatSeries from a CSV written by write_csv.

    Rows group by (target, oid name) in first-seen order, so series
    interleaved by hand still come back whole. Named rows resolve
    against the bundled MIB set unless a namer is passed in.
    """
    grouped: dict = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header!r} in {Path(path).name}")
        for row in reader:
            when, target, name, value, rate = row
            sample = StatSample(
                at=datetime.fromisoformat(when),
                value=int(value),
                rate=None if rate == "" else float(rate),
            )
            grouped.setdefault((target, name), []).append(sample)
    resolver = namer or default_namer()
    return tuple(
        StatSeries(
            target=target, oid=resolver.to_oid(name), name=name, samples=tuple(samples)
        )
        for (target, name), samples in grouped.items()
    )
