"""
Canonical JSON serialization. One encoding used everywhere bytes must be
reproducible: scene digests, event logs, and the wire protocol. Keys are
sorted, separators are minimal, floats use Python's shortest round-trip
repr, and NaN/inf are rejected.
"""

from __future__ import annotations

import json

import numpy as np

from .geom import Pose


def _plain(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def canonical_json(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


def vec3_json(v) -> list[float]:
    return [float(v[0]), float(v[1]), float(v[2])]


def quat_json(q) -> list[float]:
    return [float(q[0]), float(q[1]), float(q[2]), float(q[3])]


def pose_json(p: Pose) -> dict:
    return {"position": vec3_json(p.position), "orientation": quat_json(p.orientation)}
