"""
Folds as a travel plan: fold over the wall, point the remapped ray at the
far floor, teleport there, then select the once-hidden target with a plain
straight ray.

Run:  python3 demos/04_teleport_tour.py
"""

import numpy as np

from foldray import load_bundled_scene, load_trace_file, new_session, trace_path
from foldray.scene import scene_digest
from foldray.session import FoldCreated, SelectionMade, Teleported

np.set_printoptions(precision=3, suppress=True)

scene = load_bundled_scene("teleport_room")
print("scene: teleport_room (wall + hidden target + floor)")
digest = scene_digest(scene)

session = new_session(scene)
frames = load_trace_file(trace_path("teleport_room_tour"))
print(f"user origin at start: {session.user_origin.position}")
print()

for frame in frames:
    _, events = session.step(frame)
    for e in events:
        if isinstance(e, FoldCreated):
            print(f"frame {e.seq}: fold committed at {e.position}")
        elif isinstance(e, Teleported):
            print(f"frame {e.seq}: teleported to {e.pose.position} "
                  f"(beyond the wall plane z=-2.5; fold chain cleared)")
        elif isinstance(e, SelectionMade):
            print(f"frame {e.seq}: selected object {e.object_id} with a straight ray")

print()
print(f"user origin at end:   {session.user_origin.position}")
print(f"fold chain length:    {len(session.chain)}")
print(f"scene digest stable:  {scene_digest(scene) == digest}")
