"""
3D primitives shared by every other module: vectors, unit quaternions,
poses, rays, and the three analytic shapes (sphere, box, quad).

Conventions (used everywhere, including the wire protocol):
  - right-handed coordinates, +Y up
  - canonical forward is the local -Z axis, up is local +Y
  - vectors are numpy float64 arrays of shape (3,)
  - quaternions are numpy float64 arrays of shape (4,) in (w, x, y, z) order
  - lengths in meters, angles in radians, all arithmetic in float64
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

# Ray self-intersection cutoff: a hit must have t strictly above this so a
# ray that starts on a surface does not immediately re-hit it.
RAY_EPS = 1e-9

# |dot(dir_a, dir_b)| above this counts as parallel for the two-ray solve;
# beyond it the denominator 1 - dot^2 cancels catastrophically.
PARALLEL_DOT_CUTOFF = 1.0 - 1e-12

FORWARD = np.array([0.0, 0.0, -1.0])
UP = np.array([0.0, 1.0, 0.0])
RIGHT = np.array([1.0, 0.0, 0.0])
FORWARD.flags.writeable = False
UP.flags.writeable = False
RIGHT.flags.writeable = False


def vec(x: float, y: float, z: float) -> np.ndarray:
    """Build a float64 3-vector."""
    return np.array([x, y, z], dtype=np.float64)


def _as_vec(v) -> np.ndarray:
    a = np.asarray(v, dtype=np.float64)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.float64)
    out.flags.writeable = False
    return out


def norm(v) -> float:
    v = np.asarray(v, dtype=np.float64)
    return float(math.sqrt(float(v @ v)))


def normalize(v) -> np.ndarray:
    """Unit vector along v. Raises on (near-)zero input rather than guessing."""
    v = _as_vec(v)
    n = norm(v)
    if n < 1e-12:
        raise ValueError("cannot normalize a zero-length vector")
    return v / n


def cross(a, b) -> np.ndarray:
    a = _as_vec(a)
    b = _as_vec(b)
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )


# ---------------------------------------------------------------------------
# quaternions (w, x, y, z)
# ---------------------------------------------------------------------------

def quat(w: float, x: float, y: float, z: float) -> np.ndarray:
    return np.array([w, x, y, z], dtype=np.float64)


def quat_identity() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])


def quat_normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    n = math.sqrt(float(q @ q))
    if n < 1e-12:
        raise ValueError("cannot normalize a zero quaternion")
    return q / n


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = normalize(axis)
    h = 0.5 * angle
    s = math.sin(h)
    return np.array([math.cos(h), axis[0] * s, axis[1] * s, axis[2] * s])


def quat_multiply(a, b) -> np.ndarray:
    """Hamilton product a*b: rotation b followed by rotation a."""
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_conjugate(q) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_rotate(q, v) -> np.ndarray:
    """Rotate vector v by unit quaternion q."""
    qv = np.array([q[1], q[2], q[3]])
    uv = cross(qv, v)
    uuv = cross(qv, uv)
    return np.asarray(v, dtype=np.float64) + 2.0 * (q[0] * uv + uuv)


def quat_to_matrix(q) -> np.ndarray:
    """3x3 rotation matrix whose columns are the rotated basis vectors."""
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quat_from_matrix(m: np.ndarray) -> np.ndarray:
    """Unit quaternion for a proper rotation matrix (Shepperd's method)."""
    t = m[0, 0] + m[1, 1] + m[2, 2]
    if t > 0.0:
        s = math.sqrt(t + 1.0) * 2.0
        q = np.array(
            [0.25 * s, (m[2, 1] - m[1, 2]) / s, (m[0, 2] - m[2, 0]) / s, (m[1, 0] - m[0, 1]) / s]
        )
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = math.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        q = np.array(
            [(m[2, 1] - m[1, 2]) / s, 0.25 * s, (m[0, 1] + m[1, 0]) / s, (m[0, 2] + m[2, 0]) / s]
        )
    elif m[1, 1] > m[2, 2]:
        s = math.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        q = np.array(
            [(m[0, 2] - m[2, 0]) / s, (m[0, 1] + m[1, 0]) / s, 0.25 * s, (m[1, 2] + m[2, 1]) / s]
        )
    else:
        s = math.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        q = np.array(
            [(m[1, 0] - m[0, 1]) / s, (m[0, 2] + m[2, 0]) / s, (m[1, 2] + m[2, 1]) / s, 0.25 * s]
        )
    return quat_normalize(q)


def look_rotation(forward, up=UP) -> np.ndarray:
    """
    Orientation whose local -Z points along `forward` and whose local +Y is
    as close to `up` as the forward constraint allows.
    """
    f = normalize(forward)
    z = -f
    up = _as_vec(up)
    x = cross(up, z)
    if norm(x) < 1e-9:
        # forward is (anti)parallel to up; fall back to a fixed secondary up
        alt = FORWARD if abs(z[1]) > 0.9 else UP
        x = cross(alt, z)
    x = normalize(x)
    y = cross(z, x)
    m = np.column_stack([x, y, z])
    return quat_from_matrix(m)


def yaw_orientation(q) -> np.ndarray:
    """
    The yaw-only part of an orientation: rotation about +Y that faces the
    same horizontal direction, with pitch and roll zeroed. When looking
    straight up/down the facing comes from the head's up vector.
    """
    f = quat_rotate(q, FORWARD)
    fx, fz = float(f[0]), float(f[2])
    if math.hypot(fx, fz) < 1e-9:
        u = quat_rotate(q, UP)
        sign = 1.0 if f[1] < 0.0 else -1.0
        fx, fz = sign * float(u[0]), sign * float(u[2])
    yaw = math.atan2(-fx, -fz)
    return quat_from_axis_angle(UP, yaw)


# ---------------------------------------------------------------------------
# poses and rays
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pose:
    """Rigid placement: position plus unit-quaternion orientation."""

    position: np.ndarray
    orientation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "position", _frozen(_as_vec(self.position)))
        object.__setattr__(self, "orientation", _frozen(quat_normalize(self.orientation)))

    @staticmethod
    def identity() -> "Pose":
        return Pose(np.zeros(3), quat_identity())

    @property
    def forward(self) -> np.ndarray:
        return quat_rotate(self.orientation, FORWARD)

    @property
    def up(self) -> np.ndarray:
        return quat_rotate(self.orientation, UP)

    @property
    def right(self) -> np.ndarray:
        return quat_rotate(self.orientation, RIGHT)


def pose_apply(p: Pose, v, kind: str = "point") -> np.ndarray:
    """Map v from the pose's local frame to world. Directions skip translation."""
    rotated = quat_rotate(p.orientation, _as_vec(v))
    if kind == "point":
        return rotated + p.position
    if kind == "direction":
        return rotated
    raise ValueError(f"kind must be 'point' or 'direction', got {kind!r}")


def pose_apply_inverse(p: Pose, v, kind: str = "point") -> np.ndarray:
    """Map v from world into the pose's local frame."""
    qc = quat_conjugate(p.orientation)
    if kind == "point":
        return quat_rotate(qc, _as_vec(v) - p.position)
    if kind == "direction":
        return quat_rotate(qc, _as_vec(v))
    raise ValueError(f"kind must be 'point' or 'direction', got {kind!r}")


def compose(outer: Pose, inner: Pose) -> Pose:
    """Pose of `inner` expressed in `outer`'s parent frame (outer ∘ inner)."""
    return Pose(
        pose_apply(outer, inner.position, "point"),
        quat_multiply(outer.orientation, inner.orientation),
    )


def pose_inverse(p: Pose) -> Pose:
    qc = quat_conjugate(p.orientation)
    return Pose(-quat_rotate(qc, p.position), qc)


@dataclass(frozen=True)
class Ray:
    """Half-line from origin along a unit direction."""

    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", _frozen(_as_vec(self.origin)))
        object.__setattr__(self, "direction", _frozen(normalize(self.direction)))

    def at(self, t: float) -> np.ndarray:
        return self.origin + t * self.direction


def ray_through(origin, point) -> Ray:
    """Ray from origin passing through a second point."""
    origin = _as_vec(origin)
    return Ray(origin, _as_vec(point) - origin)


# ---------------------------------------------------------------------------
# shapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(_as_vec(self.center)))
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0.0:
            raise ValueError("sphere radius must be positive")


@dataclass(frozen=True)
class Box:
    """Oriented box: center, positive half extents, local-frame orientation."""

    center: np.ndarray
    half_extents: np.ndarray
    orientation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(_as_vec(self.center)))
        object.__setattr__(self, "half_extents", _frozen(_as_vec(self.half_extents)))
        object.__setattr__(self, "orientation", _frozen(quat_normalize(self.orientation)))
        if not np.all(self.half_extents > 0.0):
            raise ValueError("box half extents must be positive")


@dataclass(frozen=True)
class Quad:
    """
    Rectangle spanning local X (half_width) and local Y (half_height) of its
    pose; the geometric normal is the pose's local +Z.
    """

    pose: Pose
    half_width: float
    half_height: float

    def __post_init__(self):
        object.__setattr__(self, "half_width", float(self.half_width))
        object.__setattr__(self, "half_height", float(self.half_height))
        if self.half_width <= 0.0 or self.half_height <= 0.0:
            raise ValueError("quad half sizes must be positive")


Shape = Sphere | Box | Quad


# ---------------------------------------------------------------------------
# closest approach of two rays
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosestApproach:
    t_a: float
    t_b: float
    distance: float


def closest_approach(a: Ray, b: Ray) -> Optional[ClosestApproach]:
    """
    Parameters of the mutually closest points of two rays, restricted to the
    forward half-lines (t >= 0). Returns None for (anti)parallel rays.

    The unconstrained two-line solve can put either parameter negative; the
    constrained optimum then lies on a boundary, so each parameter is clamped
    to 0 in turn with the other re-solved, and the closer candidate wins.
    """
    d = float(a.direction @ b.direction)
    if abs(d) > PARALLEL_DOT_CUTOFF:
        return None
    w0 = a.origin - b.origin
    c = float(a.direction @ w0)
    e = float(b.direction @ w0)
    denom = 1.0 - d * d
    t_a = (d * e - c) / denom
    t_b = (e - d * c) / denom
    if t_a < 0.0 or t_b < 0.0:
        candidates = [
            (0.0, max(0.0, e)),          # a clamped; b re-solved toward a.origin
            (max(0.0, -c), 0.0),         # b clamped; a re-solved toward b.origin
        ]
        best = None
        for ta, tb in candidates:
            dist = norm(a.at(ta) - b.at(tb))
            if best is None or dist < best[2]:
                best = (ta, tb, dist)
        t_a, t_b, distance = best
        return ClosestApproach(t_a, t_b, distance)
    return ClosestApproach(t_a, t_b, norm(a.at(t_a) - b.at(t_b)))


# ---------------------------------------------------------------------------
# ray/shape intersection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RayHit:
    """First surface crossing: parameter, world point, and the surface normal
    oriented to face the incoming ray (dot(normal, direction) <= 0)."""

    t: float
    point: np.ndarray
    normal: np.ndarray
    uv: Optional[tuple[float, float]] = None  # quad-local coords in [-1,1]^2


def _front_facing(n: np.ndarray, direction: np.ndarray) -> np.ndarray:
    return -n if float(n @ direction) > 0.0 else n


def intersect(r: Ray, s: Shape) -> Optional[RayHit]:
    """Smallest t > RAY_EPS where the ray meets the shape surface, or None."""
    if isinstance(s, Sphere):
        return _intersect_sphere(r, s)
    if isinstance(s, Box):
        return _intersect_box(r, s)
    if isinstance(s, Quad):
        return _intersect_quad(r, s)
    raise TypeError(f"not a shape: {s!r}")


def _intersect_sphere(r: Ray, s: Sphere) -> Optional[RayHit]:
    oc = r.origin - s.center
    b = float(r.direction @ oc)
    c = float(oc @ oc) - s.radius * s.radius
    disc = b * b - c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    t = -b - sq
    if t <= RAY_EPS:
        t = -b + sq
        if t <= RAY_EPS:
            return None
    point = r.at(t)
    normal = (point - s.center) / s.radius
    return RayHit(t, point, _front_facing(normal, r.direction))


def _intersect_box(r: Ray, s: Box) -> Optional[RayHit]:
    # Slab method in the box's local frame.
    m = quat_to_matrix(s.orientation)
    ol = m.T @ (r.origin - s.center)
    dl = m.T @ r.direction
    t_near, t_far = -math.inf, math.inf
    for i in range(3):
        if abs(dl[i]) < 1e-15:
            if abs(ol[i]) > s.half_extents[i]:
                return None
            continue
        t1 = (-s.half_extents[i] - ol[i]) / dl[i]
        t2 = (s.half_extents[i] - ol[i]) / dl[i]
        if t1 > t2:
            t1, t2 = t2, t1
        t_near = max(t_near, t1)
        t_far = min(t_far, t2)
    if t_near > t_far:
        return None
    t = t_near if t_near > RAY_EPS else t_far
    if t <= RAY_EPS or not math.isfinite(t):
        return None
    pl = ol + t * dl
    axis = int(np.argmax(np.abs(pl) / s.half_extents))
    nl = np.zeros(3)
    nl[axis] = math.copysign(1.0, pl[axis])
    normal = m @ nl
    return RayHit(t, r.at(t), _front_facing(normal, r.direction))


def _intersect_quad(r: Ray, s: Quad) -> Optional[RayHit]:
    ol = pose_apply_inverse(s.pose, r.origin, "point")
    dl = pose_apply_inverse(s.pose, r.direction, "direction")
    if abs(dl[2]) < 1e-12:
        return None
    t = -ol[2] / dl[2]
    if t <= RAY_EPS:
        return None
    px = ol[0] + t * dl[0]
    py = ol[1] + t * dl[1]
    if abs(px) > s.half_width or abs(py) > s.half_height:
        return None
    normal = quat_rotate(s.pose.orientation, np.array([0.0, 0.0, 1.0]))
    uv = (float(px / s.half_width), float(py / s.half_height))
    return RayHit(float(t), r.at(t), _front_facing(normal, r.direction), uv=uv)


# ---------------------------------------------------------------------------
# batched intersection parameters (used by scene queries and the oracle)
# ---------------------------------------------------------------------------

def intersect_ts(s: Shape, origin: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """
    Hit parameter for many unit directions from one origin against one shape.
    Returns an (N,) array with +inf where the shape is missed. Matches
    `intersect` on the hit parameter.
    """
    origin = _as_vec(origin)
    dirs = np.asarray(dirs, dtype=np.float64)
    if isinstance(s, Sphere):
        oc = origin - s.center
        b = dirs @ oc
        c = float(oc @ oc) - s.radius * s.radius
        disc = b * b - c
        sq = np.sqrt(np.maximum(disc, 0.0))
        t1 = -b - sq
        t2 = -b + sq
        t = np.where(t1 > RAY_EPS, t1, np.where(t2 > RAY_EPS, t2, np.inf))
        return np.where(disc >= 0.0, t, np.inf)
    if isinstance(s, Box):
        m = quat_to_matrix(s.orientation)
        ol = m.T @ (origin - s.center)
        dl = dirs @ m  # rows: m.T @ dir
        # copysign keeps the sign of IEEE zeros so the 1/dl infinities land
        # on the correct side of each slab
        dl_safe = np.where(np.abs(dl) < 1e-300, np.copysign(1e-300, dl), dl)
        t1 = (-s.half_extents - ol) / dl_safe
        t2 = (s.half_extents - ol) / dl_safe
        lo = np.minimum(t1, t2)
        hi = np.maximum(t1, t2)
        t_near = lo.max(axis=1)
        t_far = hi.min(axis=1)
        t = np.where(t_near > RAY_EPS, t_near, t_far)
        ok = (t_near <= t_far) & (t > RAY_EPS) & np.isfinite(t)
        return np.where(ok, t, np.inf)
    if isinstance(s, Quad):
        ol = pose_apply_inverse(s.pose, origin, "point")
        m = quat_to_matrix(s.pose.orientation)
        dl = dirs @ m
        dz = dl[:, 2]
        dz_safe = np.where(np.abs(dz) < 1e-300, np.copysign(1e-300, dz), dz)
        t = -ol[2] / dz_safe
        px = ol[0] + t * dl[:, 0]
        py = ol[1] + t * dl[:, 1]
        ok = (
            (np.abs(dz) >= 1e-12)
            & (t > RAY_EPS)
            & (np.abs(px) <= s.half_width)
            & (np.abs(py) <= s.half_height)
        )
        return np.where(ok, t, np.inf)
    raise TypeError(f"not a shape: {s!r}")


# ---------------------------------------------------------------------------
# shape helpers
# ---------------------------------------------------------------------------

def shape_aabb(s: Shape) -> tuple[np.ndarray, np.ndarray]:
    """World-axis-aligned bounding box (min corner, max corner)."""
    if isinstance(s, Sphere):
        r = np.full(3, s.radius)
        return s.center - r, s.center + r
    if isinstance(s, Box):
        m = quat_to_matrix(s.orientation)
        ext = np.abs(m) @ s.half_extents
        return s.center - ext, s.center + ext
    if isinstance(s, Quad):
        corners = np.array(
            [
                pose_apply(s.pose, vec(sx * s.half_width, sy * s.half_height, 0.0))
                for sx in (-1.0, 1.0)
                for sy in (-1.0, 1.0)
            ]
        )
        return corners.min(axis=0), corners.max(axis=0)
    raise TypeError(f"not a shape: {s!r}")


def point_inside(p, s: Shape) -> bool:
    """Strict interior test (a quad has no interior)."""
    p = _as_vec(p)
    if isinstance(s, Sphere):
        return norm(p - s.center) < s.radius
    if isinstance(s, Box):
        pl = quat_to_matrix(s.orientation).T @ (p - s.center)
        return bool(np.all(np.abs(pl) < s.half_extents))
    if isinstance(s, Quad):
        return False
    raise TypeError(f"not a shape: {s!r}")


def points_inside(pts: np.ndarray, s: Shape) -> np.ndarray:
    """Vectorized strict interior test for an (N, 3) array of points."""
    pts = np.asarray(pts, dtype=np.float64)
    if isinstance(s, Sphere):
        d = pts - s.center
        return np.einsum("ij,ij->i", d, d) < s.radius * s.radius
    if isinstance(s, Box):
        pl = (pts - s.center) @ quat_to_matrix(s.orientation)
        return np.all(np.abs(pl) < s.half_extents, axis=1)
    if isinstance(s, Quad):
        return np.zeros(len(pts), dtype=bool)
    raise TypeError(f"not a shape: {s!r}")
