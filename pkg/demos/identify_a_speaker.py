"""
Train three voices, identify a clip, read the verdict over SNMP
===============================================================

The smallest end-to-end tour: bring up the five-service deployment on
localhost, enroll the built-in demo voices, push one clip through the
pipeline, and then ask the application agent what it just decided.
"""

import tempfile
from pathlib import Path

from marfsnmp.manager import TargetSpec, get
from marfsnmp.pipeline import DemoTopology, demo_clip
from marfsnmp.pipeline.services import mib_context

ctx = mib_context()

with tempfile.TemporaryDirectory() as scratch:
    store = Path(scratch) / "voices.marfts"

    # Five agents come up on ephemeral UDP ports: one per pipeline stage
    # plus the speaker-identification application itself.
    with DemoTopology(store) as topo:
        for service in topo.services():
            print(f"service {service.index}: {service.name} on "
                  f"{topo.agent_address(service.index)}")

        # Each demo subject is a distinct two-pole resonator, so two takes
        # per speaker are plenty for the covariance-free LPC pipeline.
        topo.train_demo_voices(takes=(0, 1))
        print("trained 3 subjects x 2 takes")

        # A take the training never saw.
        result = topo.identify(demo_clip(2, take=9))
        print(f"identified subject {result.top.subject_id} "
              f"at distance {result.top.distance:.4f}")
        for match in result.ranked:
            print(f"  subject {match.subject_id}: {match.distance:.4f}")

        # The application agent publishes the same verdict as a managed
        # object, so any SNMP manager can read it back.
        app = TargetSpec(*topo.agent_address(5))
        (last,) = get(app, (ctx.registry.oid_of("appLastSpeakerId").extend(5),))
        print(f"appLastSpeakerId.5 = {last.value.value}")
