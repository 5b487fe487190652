"""
Notifications and counter rates
===============================

Two monitoring habits in one script. A trap listener catches the
serviceStatusChange notifications that agents emit on every status
transition, including the burst fired at startup. A short-interval
poller turns the raw serviceInRequests counters into per-second rates
and writes them out as CSV.
"""

import tempfile
import threading
import time
from pathlib import Path

from marfsnmp.ber import Integer
from marfsnmp.manager import (
    TargetSpec,
    TrapListener,
    default_namer,
    poll_stats,
    set_values,
    write_csv,
)
from marfsnmp.messages import Varbind
from marfsnmp.pipeline import DemoTopology, demo_clip
from marfsnmp.pipeline.services import mib_context

ctx = mib_context()

with tempfile.TemporaryDirectory() as scratch:
    listener = TrapListener()
    listener.start()
    print(f"trap listener on {listener.address}")

    with DemoTopology(Path(scratch) / "voices.marfts",
                      trap_sink=listener.address) as topo:
        listener.wait_for(5)
        print(f"{len(listener.records())} startup traps (one per service)")

        topo.train_demo_voices()
        classifier = TargetSpec(*topo.agent_address(4))
        status4 = ctx.service_status_oid.extend(4)

        # stop and restart the classifier; both edges notify
        set_values(classifier, (Varbind(status4, Integer(2)),))
        set_values(classifier, (Varbind(status4, Integer(1)),))
        listener.wait_for(7)
        for record in listener.records()[-2:]:
            index, status = (vb.value.value for vb in record.varbinds)
            print(f"trap from {record.source}: service {index} -> "
                  f"{'up' if status == 1 else 'down'}")

        # keep the pipeline busy in the background while we poll
        stop = threading.Event()

        def chatter():
            while not stop.is_set():
                topo.identify(demo_clip(1))
                time.sleep(0.05)

        worker = threading.Thread(target=chatter, daemon=True)
        worker.start()

        series = poll_stats(
            targets=(TargetSpec(*topo.agent_address(1)),),
            oids=(ctx.registry.oid_of("serviceInRequests").extend(1),),
            interval=0.5,
            duration=2.0,
            namer=default_namer(),  # report serviceInRequests.1, not dotted arcs
        )
        stop.set()
        worker.join()

        for s in series:
            print(f"\n{s.name} on {s.target}:")
            for sample in s.samples:
                rate = "" if sample.rate is None else f"  {sample.rate:6.1f}/s"
                print(f"  {sample.at.time()}  {sample.value}{rate}")

        csv_path = Path(scratch) / "rates.csv"
        write_csv(csv_path, series)
        print(f"\nwrote {csv_path.name}:")
        print(csv_path.read_text())

    listener.stop()
