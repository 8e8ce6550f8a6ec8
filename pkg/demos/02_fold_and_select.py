"""
The signature move, frame by frame: a target sphere hides behind a wall;
no straight ray can select it. Cross the rays above the wall, fold, look
down through the window, and take the shot.

Run:  python3 demos/02_fold_and_select.py
"""

import numpy as np

from foldray import load_bundled_scene, load_trace_file, new_session, trace_path
from foldray.scene import raycast_first, scene_digest
from foldray.geom import Ray, vec

np.set_printoptions(precision=3, suppress=True)

scene = load_bundled_scene("wall_room")
print("scene: wall_room")
for o in scene.objects:
    print(f"  [{o.id}] {o.role:8s} {o.label}")
print(f"digest before: {scene_digest(scene)[:16]}...")
print()

hand = vec(0.2, -0.25, -0.3)
target = vec(0.0, 0.5, -4.0)
straight = raycast_first(scene, Ray(hand, target - hand))
print(f"straight ray at the target first hits object {straight.object_id} "
      f"(the wall) at t={straight.t:.2f} -- the target is occluded")
print()

session = new_session(scene)
frames = load_trace_file(trace_path("wall_room_select"))
print(f"replaying the bundled {len(frames)}-frame trace:")
for frame in frames:
    render, events = session.step(frame)
    notes = []
    if render.crossing_indicator is not None:
        notes.append(f"crossing sphere at {render.crossing_indicator}")
    if render.window is not None:
        cam = render.window.camera
        notes.append(f"window shows camera at {cam.pose.position}")
    if render.hovered is not None:
        notes.append(f"hovering object {render.hovered}")
    for e in events:
        notes.append(f"EVENT {e}")
    joined = "; ".join(notes) if notes else "idle"
    print(f"  frame {frame.seq}: {joined}")

print()
print(f"digest after:  {scene_digest(scene)[:16]}... (scene untouched)")
