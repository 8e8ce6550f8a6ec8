#!/usr/bin/env python3
"""
Regenerate the bundled input traces.

Each trace is authored against a live session so that teleports rebase the
coordinate conversions exactly the way replay will. The script verifies the
resulting event log before writing anything, then emits one canonical JSON
line per frame. Output is deterministic; rerunning produces identical files.

Usage:  python3 tools/gen_traces.py
"""

from __future__ import annotations

import sys
from pathlib import Path

from foldray.assets import load_bundled_scene
from foldray.canon import canonical_json
from foldray.folding import FoldConfig, camera_project, fold_camera, window_point, window_pose
from foldray.geom import Pose, compose, look_rotation, pose_inverse, quat_identity, vec
from foldray.session import (
    Buttons,
    FoldCreated,
    InputFrame,
    SelectionMade,
    Teleported,
    frame_to_dict,
    new_session,
)

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "foldray" / "data" / "traces"


class TraceAuthor:
    """Builds frames in world coordinates while stepping a live session."""

    def __init__(self, scene_name: str, config: FoldConfig | None = None):
        self.scene = load_bundled_scene(scene_name)
        self.session = new_session(self.scene, config)
        self.frames: list[InputFrame] = []
        self.events = []
        self.seq = 0

    def add(
        self,
        head_local: Pose | None = None,
        right_at=None,
        left_at=None,
        **buttons,
    ):
        origin = self.session.user_origin
        inv = pose_inverse(origin)
        head_local = head_local if head_local is not None else Pose.identity()
        head_world = compose(origin, head_local)

        def hand(name, at):
            base = compose(head_world, self.scene.hand_offset(name))
            q = look_rotation(at - base.position) if at is not None else base.orientation
            return compose(inv, Pose(base.position, q))

        frame = InputFrame(
            seq=self.seq,
            head=head_local,
            left=hand("left", left_at),
            right=hand("right", right_at),
            buttons=Buttons(**buttons),
        )
        self.seq += 1
        _, events = self.session.step(frame)
        self.frames.append(frame)
        self.events.extend(events)
        return events

    def window_aim(self, world_point, head_local: Pose | None = None):
        """
        World point ON the window quad whose remap looks at world_point,
        for the head pose the next frame will carry.
        """
        cfg = self.session.config
        head_local = head_local if head_local is not None else Pose.identity()
        head_world = compose(self.session.user_origin, head_local)
        cam = fold_camera(self.session.chain, head_world, cfg)
        uv = camera_project(cam, world_point)
        assert uv is not None and abs(uv[0]) <= 1 and abs(uv[1]) <= 1, (
            f"{world_point} does not project into the window: {uv}"
        )
        window = window_pose(head_world, cfg.window_half_size, cfg.window_distance)
        return window_point(window, *uv)

    def write(self, name: str):
        OUT_DIR.mkdir(parents=True, exist_ok=True)
        path = OUT_DIR / f"{name}.jsonl"
        lines = [canonical_json(frame_to_dict(f)) for f in self.frames]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"wrote {path.relative_to(Path.cwd())} ({len(self.frames)} frames, "
              f"{len(self.events)} events)")


def expect(events, *kinds):
    got = [type(e).__name__ for e in events]
    want = [k.__name__ for k in kinds]
    assert got == want, f"event log mismatch: expected {want}, got {got}"


def gen_wall_room_select():
    a = TraceAuthor("wall_room")
    fold_at = vec(0.0, 2.5, -2.5)
    target = vec(0.0, 0.5, -4.0)

    a.add(right_at=None, left_at=None)                      # idle, rays apart
    a.add(right_at=fold_at, left_at=fold_at)                # crossing indicator
    a.add(right_at=fold_at, left_at=fold_at, primary=True)  # fold committed
    look = Pose(vec(0, 0, 0), look_rotation(target - fold_at))
    a.add(head_local=look, right_at=a.window_aim(target, look), left_at=vec(-3.0, 1.0, 0.0))
    a.add(head_local=look, right_at=a.window_aim(target, look), left_at=vec(-3.0, 1.0, 0.0),
          trigger=True)                                     # selection through the fold
    a.add(head_local=look)                                  # idle tail

    expect(a.events, FoldCreated, SelectionMade)
    assert a.events[1].object_id == 1
    a.write("wall_room_select")


def gen_open_room_select():
    a = TraceAuthor("open_room")
    target = vec(0.0, 1.0, -3.0)
    a.add()
    a.add(right_at=target, trigger=True)
    a.add()
    expect(a.events, SelectionMade)
    assert a.events[0].object_id == 0
    a.write("open_room_select")


def gen_u_maze_select():
    a = TraceAuthor("u_maze")
    p1 = vec(0.9, 1.0, -2.35)    # through the first gap, seen from the hand
    p2 = vec(-0.85, 1.0, -3.85)  # in front of the second gap
    target = vec(0.0, 1.0, -5.5)

    a.add()
    a.add(right_at=p1, left_at=p1)
    a.add(right_at=p1, left_at=p1, primary=True)            # fold 1
    look_p2 = Pose(vec(0, 0, 0), look_rotation(p2 - p1))
    a.add(head_local=look_p2, right_at=a.window_aim(p2, look_p2), left_at=p2)
    a.add(head_local=look_p2, right_at=a.window_aim(p2, look_p2), left_at=p2, primary=True)  # fold 2
    look_t = Pose(vec(0, 0, 0), look_rotation(target - p2))
    a.add(head_local=look_t, right_at=a.window_aim(target, look_t), left_at=vec(3.0, 1.0, 0.5))
    a.add(head_local=look_t, right_at=a.window_aim(target, look_t), left_at=vec(3.0, 1.0, 0.5),
          trigger=True)

    expect(a.events, FoldCreated, FoldCreated, SelectionMade)
    assert a.events[2].object_id == 6
    import numpy as np

    assert np.allclose(a.events[0].position, p1, atol=1e-6)
    assert np.allclose(a.events[1].position, p2, atol=1e-6)
    a.write("u_maze_select")


def gen_teleport_room_tour():
    a = TraceAuthor("teleport_room")
    fold_at = vec(0.0, 2.5, -2.5)
    floor_point = vec(1.5, -0.55, -5.0)  # far floor, beyond the wall
    target = vec(0.0, 0.5, -4.0)

    a.add()
    a.add(right_at=fold_at, left_at=fold_at)
    a.add(right_at=fold_at, left_at=fold_at, primary=True)       # fold over the wall
    look_floor = Pose(vec(0, 0, 0), look_rotation(floor_point - fold_at))
    a.add(head_local=look_floor, right_at=a.window_aim(floor_point, look_floor), left_at=vec(-3, 1, 0))
    a.add(head_local=look_floor, right_at=a.window_aim(floor_point, look_floor), left_at=vec(-3, 1, 0),
          teleport=True)                                         # land beyond the wall

    standing = Pose(vec(0.0, 0.8, 0.0), quat_identity())         # head above the new anchor
    a.add(head_local=standing, right_at=target)
    a.add(head_local=standing, right_at=target, trigger=True)    # plain 0-fold selection
    a.add(head_local=standing)

    expect(a.events, FoldCreated, Teleported, SelectionMade)
    assert a.events[2].object_id == 1
    dest = a.events[1].pose.position
    assert dest[2] < -2.6, f"teleport destination {dest} is not beyond the wall"
    a.write("teleport_room_tour")


def main():
    gen_wall_room_select()
    gen_open_room_select()
    gen_u_maze_select()
    gen_teleport_room_tour()
    print("all traces verified and written")


if __name__ == "__main__":
    sys.exit(main())
