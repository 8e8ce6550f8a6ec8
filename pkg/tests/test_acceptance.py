"""
Acceptance suite. One test per criterion, each printing a PASS line with
its measured numbers (run with `pytest tests/test_acceptance.py -v -s` to
see them). Tolerances are pinned here, not configurable.
"""

import math
import time

import numpy as np
import pytest

from foldray.assets import load_bundled_scene, trace_path
from foldray.folding import (
    FoldCamera,
    FoldChain,
    FoldConfig,
    create_fold,
    effective_main_ray,
    fold_camera,
    uv_to_camera_ray,
    window_pose,
)
from foldray.geom import (
    UP,
    Pose,
    Ray,
    closest_approach,
    compose,
    intersect,
    look_rotation,
    pose_apply,
    quat_from_axis_angle,
    ray_through,
    vec,
)
from foldray.reach import min_folds
from foldray.scene import raycast_first, scene_digest
from foldray.session import (
    Buttons,
    FoldCreated,
    InputFrame,
    SelectionMade,
    event_json,
    load_trace_file,
    new_session,
    replay_events,
)
from oracles import ray_pair_min_distance

CFG = FoldConfig()


def report(name: str, detail: str):
    print(f"\nACCEPTANCE {name}: PASS ({detail})")


def fibonacci_sphere(n: int) -> np.ndarray:
    """n deterministic, evenly spread unit directions."""
    i = np.arange(n, dtype=np.float64)
    golden = math.pi * (3.0 - math.sqrt(5.0))
    y = 1.0 - 2.0 * (i + 0.5) / n
    r = np.sqrt(1.0 - y * y)
    theta = golden * i
    return np.stack([r * np.cos(theta), y, r * np.sin(theta)], axis=1)


# ---------------------------------------------------------------------------
# demo scene reproduction: occluded without folds, selected with one
# ---------------------------------------------------------------------------

def test_demo_scene_reproduction():
    t0 = time.time()
    scene = load_bundled_scene("wall_room")
    target_id = 1

    # 10^4 uniformly distributed straight rays from the dominant hand, each
    # with the trigger pressed: not one may select the hidden target
    session = new_session(scene)
    right_off = scene.hand_offset("right")
    head = Pose.identity()
    selections = 0
    for seq, d in enumerate(fibonacci_sphere(10_000)):
        right = Pose(right_off.position, look_rotation(d))
        frame = InputFrame(
            seq=seq, head=head, left=scene.hand_offset("left"), right=right,
            buttons=Buttons(trigger=True),
        )
        _, events = session.step(frame)
        selections += sum(isinstance(e, SelectionMade) for e in events)
    assert selections == 0

    # the bundled one-fold trace selects it, with exactly those two events
    events = replay_events(scene, load_trace_file(trace_path("wall_room_select")))
    assert [type(e).__name__ for e in events] == ["FoldCreated", "SelectionMade"]
    assert events[1].object_id == target_id

    elapsed = time.time() - t0
    assert elapsed < 10.0
    report("demo-scene reproduction",
           f"10000 straight rays: 0 selections; 1-fold trace selects target, "
           f"{elapsed:.2f}s")


# ---------------------------------------------------------------------------
# remap round trip
# ---------------------------------------------------------------------------

def test_remap_round_trip():
    rng = np.random.default_rng(101)
    worst = 0.0
    cameras = 10
    for _ in range(cameras):
        fov = rng.uniform(0.5, 2.0)
        cam = FoldCamera(
            Pose(
                rng.uniform(-5, 5, size=3),
                quat_from_axis_angle(rng.normal(size=3), rng.uniform(-math.pi, math.pi)),
            ),
            fov,
            1.0,
        )
        ty = math.tan(fov / 2.0)
        u = rng.uniform(-1, 1, size=1000)
        v = rng.uniform(-1, 1, size=1000)
        depth = rng.uniform(0.02, 50.0, size=1000)
        from foldray.folding import camera_project

        for ui, vi, di in zip(u, v, depth):
            # build the in-frustum point by hand, independent of the ray op
            local = vec(ui * ty * di, vi * ty * di, -di)
            point = pose_apply(cam.pose, local)
            uv = camera_project(cam, point)
            assert uv is not None
            r = uv_to_camera_ray(*uv, cam)
            t = float((point - r.origin) @ r.direction)
            miss = float(np.linalg.norm(point - r.at(t)))
            worst = max(worst, miss)
            assert miss < 1e-9
    report("remap round trip", f"{cameras}x1000 points, worst miss {worst:.2e} m")


# ---------------------------------------------------------------------------
# crossing oracle
# ---------------------------------------------------------------------------

def test_crossing_against_sampling_minimizer():
    rng = np.random.default_rng(103)
    eps = CFG.epsilon
    checked = 0
    worst = 0.0
    while checked < 100:
        anchor = rng.uniform(-2, 2, size=3)
        main = ray_through(rng.uniform(-4, 4, size=3), anchor)
        secondary = ray_through(
            rng.uniform(-4, 4, size=3), anchor + rng.normal(scale=0.06, size=3)
        )
        if abs(float(main.direction @ secondary.direction)) > 1 - 1e-9:
            continue
        _, _, oracle_dist = ray_pair_min_distance(main, secondary, t_max=30.0)
        ca = closest_approach(main, secondary)
        assert ca is not None
        err = abs(ca.distance - oracle_dist)
        worst = max(worst, err)
        assert err < 1e-6
        if abs(oracle_dist - eps) > 1e-6:
            from foldray.folding import crossing_point

            present = crossing_point(main, secondary, eps) is not None
            assert present == (oracle_dist <= eps)
        checked += 1
    report("crossing oracle", f"100 ray pairs, worst distance error {worst:.2e} m")


# ---------------------------------------------------------------------------
# reachability
# ---------------------------------------------------------------------------

def test_reachability_matches_traces():
    t0 = time.time()
    expected = {
        "open_room": (0, 0, "open_room_select"),
        "wall_room": (1, 1, "wall_room_select"),
        "u_maze": (6, 2, "u_maze_select"),
    }
    for name, (target_id, folds, trace_name) in expected.items():
        scene = load_bundled_scene(name)
        entry = min_folds(scene, target_id, max_folds=4, grid_step=0.25)
        assert entry.min_folds == folds, f"{name}: oracle says {entry.min_folds}"
        events = replay_events(scene, load_trace_file(trace_path(trace_name)))
        fold_events = [e for e in events if isinstance(e, FoldCreated)]
        selections = [e for e in events if isinstance(e, SelectionMade)]
        assert len(fold_events) == folds, f"{name}: trace used {len(fold_events)} folds"
        assert len(selections) == 1 and selections[0].object_id == target_id
    elapsed = time.time() - t0
    assert elapsed < 60.0
    report("reachability", f"open=0 wall=1 maze=2 at 0.25 m grid, traces match, "
                           f"{elapsed:.1f}s")


# ---------------------------------------------------------------------------
# raycast brute-force equivalence
# ---------------------------------------------------------------------------

def test_raycast_equals_brute_force():
    rng = np.random.default_rng(107)
    names = ("wall_room", "open_room", "u_maze", "four_markers", "teleport_room")
    for name in names:
        scene = load_bundled_scene(name)
        lo, hi = scene.aabb()
        for _ in range(1000):
            origin = rng.uniform(lo - 1.5, hi + 1.5)
            r = Ray(origin, rng.normal(size=3))
            hit = raycast_first(scene, r)
            best = None
            for o in scene.objects:
                h = intersect(r, o.shape)
                if h is None:
                    continue
                if best is None or h.t < best[0] - 1e-12:
                    best = (h.t, o.id)
            if best is None:
                assert hit is None
            else:
                assert hit is not None
                assert hit.t == best[0] and hit.object_id == best[1]  # exact
    report("raycast equivalence", f"{len(names)} scenes x 1000 rays, exact")


# ---------------------------------------------------------------------------
# determinism
# ---------------------------------------------------------------------------

def test_replays_are_deterministic_and_nonmutating():
    pairs = [
        ("wall_room", "wall_room_select"),
        ("open_room", "open_room_select"),
        ("u_maze", "u_maze_select"),
        ("teleport_room", "teleport_room_tour"),
    ]
    for scene_name, trace_name in pairs:
        scene = load_bundled_scene(scene_name)
        frames = load_trace_file(trace_path(trace_name))
        digest_before = scene_digest(scene)
        log1 = b"\n".join(
            event_json(e).encode() for e in replay_events(scene, frames)
        )
        assert scene_digest(scene) == digest_before
        log2 = b"\n".join(
            event_json(e).encode() for e in replay_events(scene, frames)
        )
        assert log1 == log2  # byte-identical
        assert scene_digest(scene) == digest_before
    report("determinism", f"{len(pairs)} traces replayed twice, logs byte-identical, "
                          f"digests unchanged")


# ---------------------------------------------------------------------------
# full look-around from a fold point
# ---------------------------------------------------------------------------

def test_head_slaving_covers_four_directions():
    scene = load_bundled_scene("four_markers")
    fold_at = vec(0.0, 1.0, 0.0)
    head_base = Pose(vec(0, 1, 3), quat_from_axis_angle(UP, 0.0))
    chain = create_fold(FoldChain(max_folds=CFG.max_folds), fold_at, head_base)

    hit_ids = []
    for k in range(4):
        yaw = k * math.pi / 2.0
        head = Pose(vec(0, 1, 3), quat_from_axis_angle(UP, yaw))
        cam = fold_camera(chain, head, CFG)
        # camera forward equals the yawed head forward
        expected_fwd = pose_apply(Pose(vec(0, 0, 0), quat_from_axis_angle(UP, yaw)),
                                  vec(0, 0, -1), "direction")
        fwd = cam.pose.forward
        assert float(np.abs(fwd - expected_fwd).max()) < 1e-9
        # physical main ray through the window center
        window = window_pose(head, CFG.window_half_size, CFG.window_distance)
        hand = compose(head, scene.hand_offset("right")).position
        eff = effective_main_ray(ray_through(hand, window.center), head, chain, CFG)
        assert eff is not None
        hit = raycast_first(scene, eff)
        assert hit is not None
        hit_ids.append(hit.object_id)
    assert sorted(hit_ids) == [0, 1, 2, 3]  # four distinct markers
    report("360 head slaving", f"4 yaws hit markers {hit_ids}, forward error < 1e-9")
