"""
The reachability oracle: how many folds does each bundled room require?

A target is reachable with k folds when an unobstructed polyline with k
interior vertices runs from the hand to it. BFS over a grid visibility
graph finds the minimum and a witness polyline; the bundled traces then
demonstrate each minimum interactively.

Run:  python3 demos/03_reachability.py
"""

import numpy as np

from foldray import load_bundled_scene, load_trace_file, min_folds, trace_path
from foldray.session import FoldCreated, SelectionMade, replay_events

np.set_printoptions(precision=2, suppress=True)

ROOMS = [
    ("open_room", 0, "open_room_select", "nothing in the way"),
    ("wall_room", 1, "wall_room_select", "one wall between hand and target"),
    ("u_maze", 6, "u_maze_select", "two baffles force an S-shaped path"),
]

print(f"{'scene':<12} {'min_folds':>9}  {'trace folds':>11}  witness")
for name, target_id, trace_name, blurb in ROOMS:
    scene = load_bundled_scene(name)
    entry = min_folds(scene, target_id, max_folds=4, grid_step=0.25)
    events = replay_events(scene, load_trace_file(trace_path(trace_name)))
    trace_folds = sum(isinstance(e, FoldCreated) for e in events)
    selected = any(isinstance(e, SelectionMade) for e in events)
    witness = " -> ".join(str(np.round(p, 2)) for p in entry.witness)
    print(f"{name:<12} {entry.min_folds:>9}  {trace_folds:>11}  {witness}")
    assert selected and trace_folds == entry.min_folds
    print(f"{'':<12} ({blurb})")

print()
print("grid refinement never increases the answer:")
for name, target_id, _, _ in ROOMS:
    scene = load_bundled_scene(name)
    coarse = min_folds(scene, target_id, max_folds=4, grid_step=0.5).min_folds
    fine = min_folds(scene, target_id, max_folds=4, grid_step=0.25).min_folds
    print(f"  {name:<12} grid 0.5 -> {coarse},  grid 0.25 -> {fine}")
