"""
Immutable world model: shaped objects tagged occluder/target/neutral, the
user's spawn pose, and per-hand controller offsets. Queries are pure; a
scene never changes after load, and its content digest is the proof.

Scene files are UTF-8 JSON:

    {
      "spawn": {"position": [x,y,z], "orientation": [w,x,y,z]},
      "hand_offsets": {"left": pose, "right": pose},      # optional
      "objects": [
        {"id": 0, "role": "occluder", "label": "wall",
         "shape": {"kind": "box", "center": [...], "half_extents": [...],
                   "orientation": [w,x,y,z]}},
        {"id": 1, "role": "target", "label": "ball",
         "shape": {"kind": "sphere", "center": [...], "radius": r}},
        {"id": 2, "role": "neutral", "label": "floor",
         "shape": {"kind": "quad", "pose": pose,
                   "half_width": w, "half_height": h}}
      ]
    }

Lengths are meters. Orientations within 1e-3 of unit norm are normalized;
anything further off is rejected.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .canon import canonical_json, pose_json, quat_json, vec3_json
from .geom import (
    Box,
    Pose,
    Quad,
    Ray,
    Shape,
    Sphere,
    intersect,
    intersect_ts,
    quat_identity,
    shape_aabb,
    vec,
)

ROLES = ("occluder", "target", "neutral")

# raycast_first tie window on t; ties go to the lower object id
T_TIE_EPS = 1e-12

# a segment endpoint this close to a surface does not count as blocked
SEGMENT_EPS = 1e-6

DEFAULT_HAND_OFFSETS = {
    "left": Pose(vec(-0.20, -0.25, -0.30), quat_identity()),
    "right": Pose(vec(0.20, -0.25, -0.30), quat_identity()),
}


class SceneError(Exception):
    """Base for scene loading problems."""


class SceneParseError(SceneError):
    """The document is not well-formed JSON or is structurally wrong."""


class SceneValidationError(SceneError):
    """The document parsed but violates a scene invariant."""


@dataclass(frozen=True)
class SceneObject:
    id: int
    shape: Shape
    role: str
    label: str = ""

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class Hit:
    object_id: int
    t: float
    point: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class Scene:
    objects: tuple[SceneObject, ...]
    spawn: Pose
    left_hand_offset: Pose = field(default=DEFAULT_HAND_OFFSETS["left"])
    right_hand_offset: Pose = field(default=DEFAULT_HAND_OFFSETS["right"])

    def __post_init__(self):
        object.__setattr__(
            self, "objects", tuple(sorted(self.objects, key=lambda o: o.id))
        )
        ids = [o.id for o in self.objects]
        for i, o in zip(ids, self.objects):
            if i < 0:
                raise SceneValidationError(f"object id {i} is negative")
        for a, b in zip(ids, ids[1:]):
            if a == b:
                raise SceneValidationError(f"duplicate object id {a}")

    def hand_offset(self, hand: str) -> Pose:
        if hand == "left":
            return self.left_hand_offset
        if hand == "right":
            return self.right_hand_offset
        raise ValueError(f"hand must be 'left' or 'right', got {hand!r}")

    def object_by_id(self, object_id: int) -> SceneObject:
        for o in self.objects:
            if o.id == object_id:
                return o
        raise KeyError(object_id)

    @property
    def target_ids(self) -> tuple[int, ...]:
        return tuple(o.id for o in self.objects if o.role == "target")

    def aabb(self) -> tuple[np.ndarray, np.ndarray]:
        """Bounding box of all objects; the spawn point alone if empty."""
        if not self.objects:
            return self.spawn.position.copy(), self.spawn.position.copy()
        los, his = zip(*(shape_aabb(o.shape) for o in self.objects))
        return np.min(los, axis=0), np.max(his, axis=0)


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def load_scene(data: bytes | str) -> Scene:
    """Parse and validate a scene document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SceneParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise SceneParseError("top level must be a JSON object")

    spawn = _pose_from_json(_require(doc, "spawn", "spawn"), "spawn")
    offsets = dict(DEFAULT_HAND_OFFSETS)
    if "hand_offsets" in doc:
        ho = doc["hand_offsets"]
        if not isinstance(ho, dict):
            raise SceneParseError("hand_offsets must be an object")
        for hand in ("left", "right"):
            if hand in ho:
                offsets[hand] = _pose_from_json(ho[hand], f"hand_offsets.{hand}")

    raw_objects = _require(doc, "objects", "objects")
    if not isinstance(raw_objects, list):
        raise SceneParseError("objects must be an array")
    objects = [_object_from_json(o, i) for i, o in enumerate(raw_objects)]

    return Scene(
        objects=tuple(objects),
        spawn=spawn,
        left_hand_offset=offsets["left"],
        right_hand_offset=offsets["right"],
    )


def load_scene_file(path) -> Scene:
    with open(path, "rb") as fh:
        return load_scene(fh.read())


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise SceneParseError(f"missing field {path!r}")
    return doc[key]


def _floats(value, n: int, path: str) -> np.ndarray:
    if not isinstance(value, list) or len(value) != n:
        raise SceneParseError(f"{path} must be an array of {n} numbers")
    out = []
    for i, x in enumerate(value):
        if not isinstance(x, (int, float)) or isinstance(x, bool):
            raise SceneParseError(f"{path}[{i}] must be a number")
        x = float(x)
        if not math.isfinite(x):
            raise SceneParseError(f"{path}[{i}] must be finite")
        out.append(x)
    return np.array(out)


def _unit_quat(value, path: str) -> np.ndarray:
    q = _floats(value, 4, path)
    n = float(np.linalg.norm(q))
    if abs(n - 1.0) > 1e-3:
        raise SceneValidationError(f"{path} is not a unit quaternion (norm {n:.6f})")
    return q / n


def _pose_from_json(value, path: str) -> Pose:
    if not isinstance(value, dict):
        raise SceneParseError(f"{path} must be an object")
    position = _floats(_require(value, "position", f"{path}.position"), 3, f"{path}.position")
    orientation = _unit_quat(
        _require(value, "orientation", f"{path}.orientation"), f"{path}.orientation"
    )
    return Pose(position, orientation)


def _object_from_json(value, index: int) -> SceneObject:
    path = f"objects[{index}]"
    if not isinstance(value, dict):
        raise SceneParseError(f"{path} must be an object")
    oid = _require(value, "id", f"{path}.id")
    if not isinstance(oid, int) or isinstance(oid, bool):
        raise SceneParseError(f"{path}.id must be an integer")
    role = _require(value, "role", f"{path}.role")
    if role not in ROLES:
        raise SceneValidationError(f"object id {oid}: unknown role {role!r}")
    label = value.get("label", "")
    if not isinstance(label, str):
        raise SceneParseError(f"{path}.label must be a string")
    shape = _shape_from_json(_require(value, "shape", f"{path}.shape"), oid, f"{path}.shape")
    return SceneObject(id=oid, shape=shape, role=role, label=label)


def _shape_from_json(value, oid: int, path: str) -> Shape:
    if not isinstance(value, dict):
        raise SceneParseError(f"{path} must be an object")
    kind = _require(value, "kind", f"{path}.kind")
    try:
        if kind == "sphere":
            return Sphere(
                _floats(_require(value, "center", f"{path}.center"), 3, f"{path}.center"),
                _positive(value, "radius", oid, path),
            )
        if kind == "box":
            half = _floats(
                _require(value, "half_extents", f"{path}.half_extents"),
                3,
                f"{path}.half_extents",
            )
            if not np.all(half > 0.0):
                raise SceneValidationError(
                    f"object id {oid}: half_extents must be positive"
                )
            orientation = (
                _unit_quat(value["orientation"], f"{path}.orientation")
                if "orientation" in value
                else quat_identity()
            )
            return Box(
                _floats(_require(value, "center", f"{path}.center"), 3, f"{path}.center"),
                half,
                orientation,
            )
        if kind == "quad":
            return Quad(
                _pose_from_json(_require(value, "pose", f"{path}.pose"), f"{path}.pose"),
                _positive(value, "half_width", oid, path),
                _positive(value, "half_height", oid, path),
            )
    except ValueError as exc:
        raise SceneValidationError(f"object id {oid}: {exc}") from exc
    raise SceneParseError(f"{path}.kind must be 'sphere', 'box' or 'quad', got {kind!r}")


def _positive(value: dict, key: str, oid: int, path: str) -> float:
    raw = _require(value, key, f"{path}.{key}")
    if not isinstance(raw, (int, float)) or isinstance(raw, bool):
        raise SceneParseError(f"{path}.{key} must be a number")
    x = float(raw)
    if not math.isfinite(x) or x <= 0.0:
        raise SceneValidationError(f"object id {oid}: {key} must be positive, got {x}")
    return x


# ---------------------------------------------------------------------------
# digest
# ---------------------------------------------------------------------------

def canonical_scene_dict(scene: Scene) -> dict:
    return {
        "spawn": pose_json(scene.spawn),
        "hand_offsets": {
            "left": pose_json(scene.left_hand_offset),
            "right": pose_json(scene.right_hand_offset),
        },
        "objects": [
            {
                "id": o.id,
                "role": o.role,
                "label": o.label,
                "shape": _shape_json(o.shape),
            }
            for o in scene.objects
        ],
    }


def _shape_json(s: Shape) -> dict:
    if isinstance(s, Sphere):
        return {"kind": "sphere", "center": vec3_json(s.center), "radius": s.radius}
    if isinstance(s, Box):
        return {
            "kind": "box",
            "center": vec3_json(s.center),
            "half_extents": vec3_json(s.half_extents),
            "orientation": quat_json(s.orientation),
        }
    if isinstance(s, Quad):
        return {
            "kind": "quad",
            "pose": pose_json(s.pose),
            "half_width": s.half_width,
            "half_height": s.half_height,
        }
    raise TypeError(f"not a shape: {s!r}")


def scene_digest(scene: Scene) -> str:
    """Stable hex digest of the canonical serialization."""
    payload = canonical_json(canonical_scene_dict(scene)).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


# ---------------------------------------------------------------------------
# queries
# ---------------------------------------------------------------------------

def raycast_first(
    scene: Scene,
    r: Ray,
    t_max: float = math.inf,
    ignore: Iterable[int] = (),
) -> Optional[Hit]:
    """
    First hit along the ray among all objects with t < t_max. Ties on t
    (within T_TIE_EPS) go to the lower object id; objects are stored sorted
    by id so keeping the incumbent on a tie implements that.
    """
    skip = frozenset(ignore)
    best: Optional[Hit] = None
    for o in scene.objects:
        if o.id in skip:
            continue
        h = intersect(r, o.shape)
        if h is None or h.t >= t_max:
            continue
        if best is None or h.t < best.t - T_TIE_EPS:
            best = Hit(o.id, h.t, h.point, h.normal)
    return best


def segment_visible(scene: Scene, p, q, ignore: Iterable[int] = ()) -> bool:
    """True when nothing blocks the open segment from p to q."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    length = float(np.linalg.norm(q - p))
    if length == 0.0:
        raise ValueError("segment endpoints coincide")
    hit = raycast_first(scene, Ray(p, q - p), t_max=length - SEGMENT_EPS, ignore=ignore)
    return hit is None


def raycast_first_ts(
    scene: Scene,
    origin: np.ndarray,
    dirs: np.ndarray,
    ignore: Iterable[int] = (),
) -> tuple[np.ndarray, np.ndarray]:
    """
    Batched first-hit query from one origin along many unit directions.
    Returns (object ids, ts); id -1 and t +inf where everything is missed.
    Tie handling matches raycast_first.
    """
    skip = frozenset(ignore)
    objs = [o for o in scene.objects if o.id not in skip]
    n = len(dirs)
    if not objs:
        return np.full(n, -1, dtype=np.int64), np.full(n, np.inf)
    ts = np.stack([intersect_ts(o.shape, origin, dirs) for o in objs])
    tmin = ts.min(axis=0)
    winner = np.argmax(ts <= tmin + T_TIE_EPS, axis=0)
    ids = np.array([o.id for o in objs], dtype=np.int64)[winner]
    ids = np.where(np.isfinite(tmin), ids, -1)
    return ids, tmin


def segments_visible(
    scene: Scene,
    p: np.ndarray,
    qs: np.ndarray,
    ignore: Iterable[int] = (),
) -> np.ndarray:
    """Vectorized segment_visible from one point to many endpoints."""
    p = np.asarray(p, dtype=np.float64)
    qs = np.asarray(qs, dtype=np.float64)
    deltas = qs - p
    lengths = np.linalg.norm(deltas, axis=1)
    if np.any(lengths == 0.0):
        raise ValueError("segment endpoints coincide")
    dirs = deltas / lengths[:, None]
    skip = frozenset(ignore)
    visible = np.ones(len(qs), dtype=bool)
    for o in scene.objects:
        if o.id in skip:
            continue
        ts = intersect_ts(o.shape, p, dirs)
        visible &= ~(ts < lengths - SEGMENT_EPS)
    return visible
