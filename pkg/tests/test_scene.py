import json
import math

import numpy as np
import pytest

from foldray.assets import load_bundled_scene, scene_path
from foldray.geom import Pose, Ray, Sphere, intersect, quat_identity, ray_through, vec
from foldray.scene import (
    DEFAULT_HAND_OFFSETS,
    Scene,
    SceneObject,
    SceneParseError,
    SceneValidationError,
    load_scene,
    raycast_first,
    raycast_first_ts,
    scene_digest,
    segment_visible,
    segments_visible,
)
from oracles import marching_hit_t

SPAWN_HAND = vec(0.2, -0.25, -0.3)  # right hand at an identity spawn
WALL_ID, TARGET_ID = 0, 1
TARGET_CENTER = vec(0.0, 0.5, -4.0)


@pytest.fixture(scope="module")
def wall_room():
    return load_bundled_scene("wall_room")


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def test_wall_room_document(wall_room):
    assert len(wall_room.objects) == 2
    assert wall_room.spawn.position == pytest.approx([0, 0, 0])
    assert wall_room.spawn.forward == pytest.approx([0, 0, -1])
    wall = wall_room.object_by_id(WALL_ID)
    target = wall_room.object_by_id(TARGET_ID)
    assert wall.role == "occluder"
    assert target.role == "target"
    assert isinstance(target.shape, Sphere)


def test_empty_object_list_is_valid():
    scene = load_scene(json.dumps({"spawn": _pose_doc(), "objects": []}))
    assert scene.objects == ()


def test_duplicate_id_rejected():
    doc = {
        "spawn": _pose_doc(),
        "objects": [_sphere_doc(3), _sphere_doc(3)],
    }
    with pytest.raises(SceneValidationError, match="duplicate object id 3"):
        load_scene(json.dumps(doc))


def test_nonpositive_dimension_rejected():
    obj = _sphere_doc(7)
    obj["shape"]["radius"] = -1.0
    with pytest.raises(SceneValidationError, match="object id 7"):
        load_scene(json.dumps({"spawn": _pose_doc(), "objects": [obj]}))


def test_quaternion_normalized_when_close():
    doc = {"spawn": _pose_doc(orientation=[1.0001, 0, 0, 0]), "objects": []}
    scene = load_scene(json.dumps(doc))
    assert np.linalg.norm(scene.spawn.orientation) == pytest.approx(1.0, abs=1e-12)


def test_quaternion_rejected_when_far_from_unit():
    doc = {"spawn": _pose_doc(orientation=[2.0, 0, 0, 0]), "objects": []}
    with pytest.raises(SceneValidationError, match="unit quaternion"):
        load_scene(json.dumps(doc))


def test_parse_error_reports_line():
    with pytest.raises(SceneParseError, match="line 4"):
        load_scene('{\n"spawn": 1,\n"oops"\n}')


def test_default_hand_offsets(wall_room):
    assert wall_room.hand_offset("right").position == pytest.approx([0.2, -0.25, -0.3])
    assert wall_room.hand_offset("left").position == pytest.approx([-0.2, -0.25, -0.3])


def _pose_doc(position=(0, 0, 0), orientation=(1, 0, 0, 0)):
    return {"position": list(position), "orientation": list(orientation)}


def _sphere_doc(oid, center=(0, 0, -2), radius=0.5):
    return {
        "id": oid,
        "role": "target",
        "label": "t",
        "shape": {"kind": "sphere", "center": list(center), "radius": radius},
    }


# ---------------------------------------------------------------------------
# raycast_first
# ---------------------------------------------------------------------------

def test_wall_blocks_the_target(wall_room):
    r = ray_through(SPAWN_HAND, TARGET_CENTER)
    hit = raycast_first(wall_room, r)
    assert hit is not None
    assert hit.object_id == WALL_ID
    # cross-check the winning t against the marching oracle, per object
    expected = []
    for o in wall_room.objects:
        t, _ = marching_hit_t(o.shape, r, t_max=10.0)
        if t is not None:
            expected.append((t, o.id))
    t_oracle, id_oracle = min(expected)
    assert id_oracle == WALL_ID
    assert hit.t == pytest.approx(t_oracle, abs=1e-3)


def test_empty_scene_misses():
    scene = Scene(objects=(), spawn=Pose.identity())
    assert raycast_first(scene, Ray(vec(0, 0, 0), vec(0, 0, -1))) is None


def test_concentric_spheres_outer_wins():
    scene = Scene(
        objects=(
            SceneObject(0, Sphere(vec(0, 0, -5), 1.0), "neutral"),
            SceneObject(1, Sphere(vec(0, 0, -5), 2.0), "neutral"),
        ),
        spawn=Pose.identity(),
    )
    hit = raycast_first(scene, Ray(vec(0, 0, 0), vec(0, 0, -1)))
    assert hit is not None and hit.object_id == 1
    assert hit.t == pytest.approx(3.0, abs=1e-12)


def test_tie_breaks_to_lower_id():
    # two spheres whose near surfaces coincide exactly
    scene = Scene(
        objects=(
            SceneObject(4, Sphere(vec(0, 0, -5), 1.0), "neutral"),
            SceneObject(2, Sphere(vec(0, 0, -6), 2.0), "neutral"),
        ),
        spawn=Pose.identity(),
    )
    hit = raycast_first(scene, Ray(vec(0, 0, 0), vec(0, 0, -1)))
    assert hit is not None and hit.object_id == 2


def test_t_max_cuts_hits(wall_room):
    r = ray_through(SPAWN_HAND, TARGET_CENTER)
    assert raycast_first(wall_room, r, t_max=1.0) is None


def test_raycast_matches_per_object_minimum(wall_room):
    rng = np.random.default_rng(11)
    for _ in range(300):
        r = Ray(rng.uniform(-3, 3, size=3), rng.normal(size=3))
        hit = raycast_first(wall_room, r)
        best = None
        for o in wall_room.objects:
            h = intersect(r, o.shape)
            if h is not None and (best is None or h.t < best[0]):
                best = (h.t, o.id)
        if best is None:
            assert hit is None
        else:
            assert hit is not None
            assert (hit.t, hit.object_id) == best


def test_batch_raycast_matches_scalar(wall_room):
    rng = np.random.default_rng(17)
    dirs = rng.normal(size=(400, 3))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    ids, ts = raycast_first_ts(wall_room, SPAWN_HAND, dirs)
    for d, i, t in zip(dirs, ids, ts):
        hit = raycast_first(wall_room, Ray(SPAWN_HAND, d))
        if hit is None:
            assert i == -1 and t == np.inf
        else:
            assert i == hit.object_id
            assert t == pytest.approx(hit.t, rel=1e-12)


# ---------------------------------------------------------------------------
# segment_visible
# ---------------------------------------------------------------------------

def test_hand_cannot_see_target(wall_room):
    assert segment_visible(wall_room, SPAWN_HAND, TARGET_CENTER, ignore={TARGET_ID}) is False


def test_point_above_wall_sees_target(wall_room):
    above = vec(0.0, 2.5, -2.5)
    assert segment_visible(wall_room, above, TARGET_CENTER, ignore={TARGET_ID}) is True


def test_tiny_segment_in_empty_scene():
    scene = Scene(objects=(), spawn=Pose.identity())
    assert segment_visible(scene, vec(0, 0, 0), vec(1e-3, 0, 0)) is True


def test_segment_visible_symmetric(wall_room):
    rng = np.random.default_rng(23)
    for _ in range(200):
        p = rng.uniform(-4, 4, size=3)
        q = rng.uniform(-4, 4, size=3)
        if np.linalg.norm(q - p) < 1e-6:
            continue
        assert segment_visible(wall_room, p, q) == segment_visible(wall_room, q, p)


def test_segments_visible_batch_matches_scalar(wall_room):
    rng = np.random.default_rng(31)
    p = vec(0.2, -0.25, -0.3)
    qs = rng.uniform(-4, 4, size=(200, 3))
    batch = segments_visible(wall_room, p, qs, ignore={TARGET_ID})
    for q, v in zip(qs, batch):
        assert v == segment_visible(wall_room, p, q, ignore={TARGET_ID})


# ---------------------------------------------------------------------------
# digest
# ---------------------------------------------------------------------------

def test_digest_stable_across_loads():
    raw = scene_path("wall_room").read_bytes()
    assert scene_digest(load_scene(raw)) == scene_digest(load_scene(raw))


def test_digest_ignores_whitespace():
    raw = scene_path("wall_room").read_text()
    reflowed = json.dumps(json.loads(raw), indent=None)
    assert scene_digest(load_scene(raw)) == scene_digest(load_scene(reflowed))


def test_digest_sensitive_to_tiny_content_change():
    doc = json.loads(scene_path("wall_room").read_text())
    base = scene_digest(load_scene(json.dumps(doc)))
    doc["objects"][1]["shape"]["radius"] += 1e-9
    assert scene_digest(load_scene(json.dumps(doc))) != base


def test_bundled_scenes_all_load():
    for name in ("wall_room", "open_room", "u_maze", "four_markers", "teleport_room"):
        scene = load_bundled_scene(name)
        assert isinstance(scene_digest(scene), str)
        lo, hi = scene.aabb()
        assert np.all(hi >= lo)
