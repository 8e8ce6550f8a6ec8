"""
The fold-point ray technique: detecting where the two controller rays
cross, committing fold points, the head-locked viewport window, pinhole
remapping of rays through that window, selection, and teleport targeting.

How a frame fits together:

  - With no folds, the dominant hand's ray interacts with the scene
    directly, and a crossing of the two physical rays (closer than the
    epsilon threshold, both parameters positive) marks a candidate fold
    point ON the main ray.
  - Committing a fold places a camera at the fold point. The camera's
    orientation is re-slaved to the live head orientation every frame, so
    turning the head pans a full 360 degrees of view from the fold point.
  - A square window hangs 1.5 m in front of the head, facing it, and shows
    that camera's view. The main ray now interacts only through the window:
    where it pierces the window at (u, v), it is reborn as the camera ray
    through (u, v) — pointing at a spot on the window is pointing at the
    thing that spot shows.
  - While folded, a new crossing is detected between the remapped main ray
    and the secondary hand's ray line, so folds can be stacked; each new
    fold rebases the camera.

Everything here is pure: functions of immutable inputs, no scene writes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .geom import (
    FORWARD,
    Pose,
    Quad,
    Ray,
    closest_approach,
    intersect,
    pose_apply_inverse,
    quat_rotate,
    vec,
    yaw_orientation,
)
from .scene import Scene, raycast_first

# teleport destinations sit this far off the hit surface
TELEPORT_SURFACE_OFFSET = 1e-3


class ConfigError(ValueError):
    """A technique parameter is out of range."""


class ChainFullError(Exception):
    """The fold chain is at its configured maximum length."""


@dataclass(frozen=True)
class FoldConfig:
    """Tunable parameters; defaults match the reference setup."""

    epsilon: float = 0.05              # crossing distance threshold, meters
    max_folds: int = 8
    vertical_fov: float = math.pi / 3  # fold camera, radians
    aspect: float = 1.0                # square window, square image
    window_half_size: float = 0.5      # meters
    window_distance: float = 1.5       # meters from the head
    camera_offset: float = 0.0         # forward nudge of the camera off the fold point
    near_plane: float = 0.01
    dominant_hand: str = "right"
    ray_render_cap: float = 100.0      # polyline length for unobstructed rays

    def validate(self) -> "FoldConfig":
        positive = {
            "epsilon": self.epsilon,
            "vertical_fov": self.vertical_fov,
            "aspect": self.aspect,
            "window_half_size": self.window_half_size,
            "window_distance": self.window_distance,
            "near_plane": self.near_plane,
            "ray_render_cap": self.ray_render_cap,
        }
        for name, value in positive.items():
            if not (value > 0.0) or not math.isfinite(value):
                raise ConfigError(f"{name} must be positive, got {value}")
        if self.vertical_fov >= math.pi:
            raise ConfigError("vertical_fov must be below pi")
        if self.max_folds < 1:
            raise ConfigError("max_folds must be at least 1")
        if self.camera_offset < 0.0:
            raise ConfigError("camera_offset must not be negative")
        if self.dominant_hand not in ("left", "right"):
            raise ConfigError(f"dominant_hand must be 'left' or 'right', got {self.dominant_hand!r}")
        return self


# ---------------------------------------------------------------------------
# fold chain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoldPoint:
    position: np.ndarray
    created_head_orientation: np.ndarray


@dataclass(frozen=True)
class FoldChain:
    folds: tuple[FoldPoint, ...] = ()
    max_folds: int = 8

    def __len__(self) -> int:
        return len(self.folds)

    @property
    def last(self) -> Optional[FoldPoint]:
        return self.folds[-1] if self.folds else None


def create_fold(chain: FoldChain, point, head: Pose) -> FoldChain:
    """Append a fold at `point`, recording the head orientation at creation."""
    if len(chain) >= chain.max_folds:
        raise ChainFullError(f"fold chain is at its maximum of {chain.max_folds}")
    fp = FoldPoint(np.asarray(point, dtype=np.float64), head.orientation)
    return replace(chain, folds=chain.folds + (fp,))


def pop_fold(chain: FoldChain) -> FoldChain:
    """Drop the newest fold; a no-op on an empty chain."""
    if not chain.folds:
        return chain
    return replace(chain, folds=chain.folds[:-1])


# ---------------------------------------------------------------------------
# crossing detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Crossing:
    point: np.ndarray  # on the main ray
    t_main: float


def crossing_point(main: Ray, secondary: Ray, epsilon: float) -> Optional[Crossing]:
    """
    Candidate fold point: present when the rays approach within epsilon at
    strictly positive parameters on both. The point is the closest point on
    the MAIN ray (the indicator sphere rides the main ray, not the midpoint
    of the common perpendicular).
    """
    if epsilon <= 0.0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    ca = closest_approach(main, secondary)
    if ca is None or ca.distance > epsilon:
        return None
    if ca.t_a <= 0.0 or ca.t_b <= 0.0:
        return None
    return Crossing(main.at(ca.t_a), ca.t_a)


# ---------------------------------------------------------------------------
# viewport window and fold camera
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ViewportWindow:
    center: np.ndarray
    orientation: np.ndarray  # quad normal (local +Z) points back at the head
    half_size: float
    distance: float


@dataclass(frozen=True)
class FoldCamera:
    pose: Pose
    vertical_fov: float
    aspect: float


def window_pose(head: Pose, half_size: float = 0.5, distance: float = 1.5) -> ViewportWindow:
    """
    Head-locked billboard: centered `distance` along the head's forward,
    sharing the head's orientation so the quad's +Z normal faces the head
    and its up matches the head's up. Recomputed every frame.
    """
    center = head.position + distance * head.forward
    return ViewportWindow(center, head.orientation, half_size, distance)


def window_quad(window: ViewportWindow) -> Quad:
    return Quad(
        Pose(window.center, window.orientation), window.half_size, window.half_size
    )


def window_point(window: ViewportWindow, u: float, v: float) -> np.ndarray:
    """World position of window-local coordinates (u, v) in [-1, 1]^2."""
    local = vec(u * window.half_size, v * window.half_size, 0.0)
    return window.center + quat_rotate(window.orientation, local)


def fold_camera(chain: FoldChain, head: Pose, config: FoldConfig) -> Optional[FoldCamera]:
    """
    Camera for the newest fold. Its position is the fold point (plus the
    configured forward offset, zero by default); its orientation is the
    CURRENT head orientation, re-derived every call — that slaving is what
    turns head rotation into a full look-around from the fold point.
    """
    last = chain.last
    if last is None:
        return None
    position = last.position
    if config.camera_offset != 0.0:
        position = position + config.camera_offset * head.forward
    return FoldCamera(
        Pose(position, head.orientation), config.vertical_fov, config.aspect
    )


def uv_to_camera_ray(u: float, v: float, cam: FoldCamera) -> Ray:
    """Pinhole ray through image coordinates (u, v) in [-1, 1]^2."""
    ty = math.tan(cam.vertical_fov / 2.0)
    local = vec(u * ty * cam.aspect, v * ty, -1.0)
    direction = quat_rotate(cam.pose.orientation, local)
    return Ray(cam.pose.position, direction)


def camera_project(cam: FoldCamera, point, near_plane: float = 0.01) -> Optional[tuple[float, float]]:
    """
    Inverse of uv_to_camera_ray: image coordinates of a world point, or None
    when the point is not in front of the near plane. Points inside the
    frustum land in [-1, 1]^2.
    """
    local = pose_apply_inverse(cam.pose, point)
    depth = -float(local[2])
    if depth <= near_plane:
        return None
    ty = math.tan(cam.vertical_fov / 2.0)
    u = float(local[0]) / depth / (ty * cam.aspect)
    v = float(local[1]) / depth / ty
    return (u, v)


# ---------------------------------------------------------------------------
# remapping and the effective ray
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowRemap:
    effective: Ray
    window_uv: tuple[float, float]


def remap_through_window(
    physical: Ray, head: Pose, chain: FoldChain, config: FoldConfig
) -> Optional[WindowRemap]:
    """
    Convert a physical ray into its beyond-the-fold form: intersect it with
    the current window quad and, if it lands inside, re-emit it as the fold
    camera's pinhole ray through the struck (u, v). A ray that misses the
    window is inert beyond the fold.
    """
    if not chain.folds:
        raise ValueError("remap_through_window requires a non-empty fold chain")
    window = window_pose(head, config.window_half_size, config.window_distance)
    hit = intersect(physical, window_quad(window))
    if hit is None:
        return None
    u, v = hit.uv
    cam = fold_camera(chain, head, config)
    return WindowRemap(uv_to_camera_ray(u, v, cam), (u, v))


def effective_main_ray(
    dominant: Ray, head: Pose, chain: FoldChain, config: FoldConfig
) -> Optional[Ray]:
    """
    The ray that actually talks to the scene: the physical dominant-hand ray
    when unfolded, otherwise its window remap (None if it misses the window).
    """
    if not chain.folds:
        return dominant
    remap = remap_through_window(dominant, head, chain, config)
    return remap.effective if remap is not None else None


def detect_crossing(
    main_physical: Ray,
    secondary_physical: Ray,
    head: Pose,
    chain: FoldChain,
    config: FoldConfig,
) -> Optional[Crossing]:
    """
    Per-frame crossing test. Unfolded, the two physical rays cross in the
    user's space. Folded, every remapped ray shares the fold camera's origin,
    so remapped-vs-remapped proximity is degenerate there; instead the
    remapped MAIN ray is crossed with the secondary hand's ray line — the
    user threads the main ray through the window and lays the secondary
    across it at the depth they want the next fold.
    """
    if not chain.folds:
        return crossing_point(main_physical, secondary_physical, config.epsilon)
    remap = remap_through_window(main_physical, head, chain, config)
    if remap is None:
        return None
    return crossing_point(remap.effective, secondary_physical, config.epsilon)


# ---------------------------------------------------------------------------
# selection and teleport
# ---------------------------------------------------------------------------

def select_target(
    scene: Scene, dominant: Ray, head: Pose, chain: FoldChain, config: FoldConfig
) -> Optional[int]:
    """
    Object id when the effective main ray's FIRST hit is a selectable
    target; occluder or neutral first hits, misses, and a window miss all
    yield None. Occlusion is respected by construction: nothing behind a
    nearer surface can be selected.
    """
    eff = effective_main_ray(dominant, head, chain, config)
    if eff is None:
        return None
    hit = raycast_first(scene, eff)
    if hit is None:
        return None
    if scene.object_by_id(hit.object_id).role != "target":
        return None
    return hit.object_id


def teleport_destination(
    scene: Scene, dominant: Ray, head: Pose, chain: FoldChain, config: FoldConfig
) -> Optional[Pose]:
    """
    Destination pose for a teleport press: the effective ray's first hit on
    ANY object, nudged off the surface along the hit normal, oriented to the
    head's yaw only. None when nothing is hit. The caller clears the fold
    chain on an actual teleport.
    """
    eff = effective_main_ray(dominant, head, chain, config)
    if eff is None:
        return None
    hit = raycast_first(scene, eff)
    if hit is None:
        return None
    position = hit.point + TELEPORT_SURFACE_OFFSET * hit.normal
    return Pose(position, yaw_orientation(head.orientation))


def controller_ray(pose: Pose) -> Ray:
    """A controller's pointing ray: from its position along its forward."""
    return Ray(pose.position, quat_rotate(pose.orientation, FORWARD))
