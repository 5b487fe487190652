"""
Walk the roster, render tables, steer the pipeline with SET
===========================================================

Every service embeds an SNMPv2c agent, and every agent serves the whole
service roster, so one walk against any port tells you the state of the
deployment. Writable objects are live knobs: changing iPoles rewires the
feature extractor while the pipeline keeps running.

The same operations are available from the shell; the last section runs
the installed `marfman` commands against the live agents.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

from marfsnmp.ber import Integer
from marfsnmp.messages import Varbind
from marfsnmp.manager import TargetSpec, get, render_table, set_values, walk
from marfsnmp.pipeline import DemoTopology, IncompatibleFeatures, demo_clip
from marfsnmp.pipeline.services import mib_context

ctx = mib_context()

with tempfile.TemporaryDirectory() as scratch:
    with DemoTopology(Path(scratch) / "voices.marfts") as topo:
        topo.train_demo_voices()
        loader = TargetSpec(*topo.agent_address(1))
        extraction = TargetSpec(*topo.agent_address(3))

        # -- one walk, the whole deployment -------------------------------
        service_table = ctx.tables["serviceTable"]
        varbinds = walk(loader, service_table.table_oid)
        print(f"walk of serviceTable returned {len(varbinds)} varbinds")
        for index, row in render_table(varbinds, service_table).items():
            print(f"  {index}: {row['serviceName'].decode():22s}"
                  f" status={row['serviceStatus']}"
                  f" inRequests={row['serviceInRequests']}")

        # -- a delegated table: the LPC knobs live on a sub-agent ----------
        # Agent 3 is a master agent; the walk crosses transparently into
        # the registered subtree.
        lpc_table = ctx.tables["lpcServiceTable"]
        rows = render_table(walk(extraction, lpc_table.table_oid), lpc_table)
        print(f"lpc knobs: {[(k, v['iPoles'], v['iWindowLen']) for k, v in rows.items()]}")

        # -- steering: fewer poles means shorter feature vectors -----------
        poles_oid = ctx.registry.oid_of("iPoles").extend(3)
        set_values(extraction, (Varbind(poles_oid, Integer(4)),))
        print("set iPoles.3 = 4")
        try:
            topo.identify(demo_clip(1))
        except IncompatibleFeatures as exc:
            # the store was trained with 8 poles, so recognition refuses
            print(f"identify now refuses: {exc}")
        set_values(extraction, (Varbind(poles_oid, Integer(8)),))
        (restored,) = get(extraction, (poles_oid,))
        print(f"restored iPoles.3 = {restored.value.value}")
        print(f"identify works again: subject "
              f"{topo.identify(demo_clip(1)).top.subject_id}")

        # -- the same thing from the shell ---------------------------------
        target = "127.0.0.1:%d" % topo.agent_address(1)[1]
        for argv in (
            ["marfman", "get", "--target", target, "serviceName.2"],
            ["marfman", "table", "--target", target, "serviceTable"],
        ):
            print(f"\n$ {' '.join(argv)}")
            out = subprocess.run(
                [sys.executable, "-m", "marfsnmp.manager.cli"] + argv[1:],
                capture_output=True, text=True, check=True,
            )
            print(out.stdout, end="")
