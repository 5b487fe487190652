"""
The HTTP gateway: SNMP for people who only speak JSON
=====================================================

The gateway owns the manager-side complexity (communities, PDUs, MIB
name resolution, trap listening) and exposes a small JSON surface that
a browser dashboard can poll. This script starts one against a live
deployment and exercises each endpoint with plain urllib.
"""

import json
import tempfile
import urllib.request
from pathlib import Path

from marfsnmp.manager import Gateway, TargetSpec, TrapListener
from marfsnmp.pipeline import DemoTopology


def fetch(url, payload=None):
    request = urllib.request.Request(
        url,
        data=None if payload is None else json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"} if payload else {},
    )
    with urllib.request.urlopen(request) as response:
        return json.loads(response.read())


with tempfile.TemporaryDirectory() as scratch:
    listener = TrapListener()
    listener.start()
    with DemoTopology(Path(scratch) / "voices.marfts",
                      trap_sink=listener.address) as topo:
        topo.train_demo_voices()
        targets = {
            index: TargetSpec(*topo.agent_address(index)) for index in (1, 2, 3, 4, 5)
        }
        gateway = Gateway(targets, listener=listener, poll_interval=0.5)
        gateway.start()
        base = "http://%s:%d" % gateway.address
        print(f"gateway on {base}")

        roster = fetch(f"{base}/api/services")
        print(f"pipeline is {roster['pipelineStatus']}")
        for svc in roster["services"]:
            print(f"  {svc['index']} {svc['name']:22s} {svc['status']:4s}"
                  f" requests={svc['inRequests']}")

        # extension tables ride along with each service
        extraction = next(s for s in roster["services"] if s["index"] == 3)
        print(f"extraction extensions: {json.dumps(extraction['extensions'])}")

        # a config write round-trips through SET and mirrors what applied
        applied = fetch(f"{base}/api/services/3/config", {"iWindowLen": 128})
        print(f"config applied: {applied['applied']}")
        fetch(f"{base}/api/services/3/config", {"iWindowLen": 256})  # restore

        traps = fetch(f"{base}/api/traps")
        print(f"{len(traps['traps'])} traps on record, newest first: "
              f"{traps['traps'][0]['trapName']}")

        gateway.stop()
    listener.stop()
