"""
Frame-by-frame state machine. A session consumes InputFrames (tracking-space
head and controller poses plus edge-triggered buttons), maintains the fold
chain and the user's world anchor, and emits a RenderState plus zero or more
discrete events per frame. Identical inputs always produce identical
outputs, byte for byte once serialized.

Trace files are JSON lines, one InputFrame per line:

    {"seq": 0, "head": pose, "left": pose, "right": pose,
     "buttons": {"trigger": false, "primary": false,
                 "pop": false, "teleport": false}}

Event logs are JSON lines of ``{"seq": int, "event": str, ...payload}``.

Frame evaluation order:
  1. compose tracking poses with the user origin into world poses and
     derive the two controller rays
  2. detect the current crossing (physical rays when unfolded, remapped
     main vs. secondary line when folded)
  3. apply at most one structural button action, priority
     pop > primary (fold) > trigger (select) > teleport; the first pressed
     button in that order consumes the frame even if its action no-ops
  4. build the RenderState from the post-action chain
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

import numpy as np

from .canon import canonical_json, pose_json, vec3_json
from .folding import (
    ChainFullError,
    Crossing,
    FoldCamera,
    FoldChain,
    FoldConfig,
    ViewportWindow,
    controller_ray,
    detect_crossing,
    effective_main_ray,
    fold_camera,
    pop_fold,
    select_target,
    teleport_destination,
    window_pose,
)
from .folding import create_fold as _create_fold
from .geom import Pose, Ray, compose, quat_normalize, vec
from .scene import Scene, raycast_first


class TraceError(Exception):
    """Base for trace replay problems."""


class TraceOrderError(TraceError):
    """Frame sequence numbers went backwards or repeated."""


class TraceParseError(TraceError):
    """A trace line is not a well-formed InputFrame."""


@dataclass(frozen=True)
class Buttons:
    trigger: bool = False
    primary: bool = False
    pop: bool = False
    teleport: bool = False


@dataclass(frozen=True)
class InputFrame:
    seq: int
    head: Pose
    left: Pose
    right: Pose
    buttons: Buttons = field(default_factory=Buttons)


# ---------------------------------------------------------------------------
# events
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FoldCreated:
    seq: int
    position: np.ndarray


@dataclass(frozen=True)
class FoldPopped:
    seq: int


@dataclass(frozen=True)
class SelectionMade:
    seq: int
    object_id: int


@dataclass(frozen=True)
class SelectionAttemptFailed:
    seq: int


@dataclass(frozen=True)
class Teleported:
    seq: int
    pose: Pose


InteractionEvent = Union[
    FoldCreated, FoldPopped, SelectionMade, SelectionAttemptFailed, Teleported
]


def event_to_dict(event: InteractionEvent) -> dict:
    if isinstance(event, FoldCreated):
        return {"seq": event.seq, "event": "fold_created", "position": vec3_json(event.position)}
    if isinstance(event, FoldPopped):
        return {"seq": event.seq, "event": "fold_popped"}
    if isinstance(event, SelectionMade):
        return {"seq": event.seq, "event": "selection_made", "object_id": event.object_id}
    if isinstance(event, SelectionAttemptFailed):
        return {"seq": event.seq, "event": "selection_attempt_failed"}
    if isinstance(event, Teleported):
        return {"seq": event.seq, "event": "teleported", "pose": pose_json(event.pose)}
    raise TypeError(f"not an event: {event!r}")


def event_json(event: InteractionEvent) -> str:
    return canonical_json(event_to_dict(event))


# ---------------------------------------------------------------------------
# render state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowState:
    window: ViewportWindow
    camera: FoldCamera


@dataclass(frozen=True)
class RenderState:
    seq: int
    main_polyline: tuple[np.ndarray, ...]
    secondary_polyline: tuple[np.ndarray, ...]
    crossing_indicator: Optional[np.ndarray]
    window: Optional[WindowState]
    hovered: Optional[int]


def render_to_dict(rs: RenderState) -> dict:
    window = None
    if rs.window is not None:
        w, cam = rs.window.window, rs.window.camera
        window = {
            "center": vec3_json(w.center),
            "orientation": [float(x) for x in w.orientation],
            "half_size": w.half_size,
            "distance": w.distance,
            "camera": {
                "position": vec3_json(cam.pose.position),
                "orientation": [float(x) for x in cam.pose.orientation],
                "vertical_fov": cam.vertical_fov,
                "aspect": cam.aspect,
            },
        }
    return {
        "seq": rs.seq,
        "main_polyline": [vec3_json(p) for p in rs.main_polyline],
        "secondary_polyline": [vec3_json(p) for p in rs.secondary_polyline],
        "crossing_indicator": (
            vec3_json(rs.crossing_indicator) if rs.crossing_indicator is not None else None
        ),
        "window": window,
        "hovered": rs.hovered,
    }


# ---------------------------------------------------------------------------
# session
# ---------------------------------------------------------------------------

class Session:
    """
    One user's technique state over a scene. Step calls must be serialized;
    independent sessions are fully isolated. The scene is never written —
    its digest is identical before and after any step sequence.
    """

    def __init__(self, scene: Scene, config: Optional[FoldConfig] = None):
        self.scene = scene
        self.config = (config or FoldConfig()).validate()
        self.user_origin: Pose = scene.spawn
        self.chain = FoldChain(max_folds=self.config.max_folds)
        self.last_seq: Optional[int] = None

    def step(self, frame: InputFrame) -> tuple[RenderState, list[InteractionEvent]]:
        if self.last_seq is not None and frame.seq <= self.last_seq:
            raise TraceOrderError(
                f"frame seq {frame.seq} is not after the previous seq {self.last_seq}"
            )
        self.last_seq = frame.seq
        cfg = self.config

        head = compose(self.user_origin, frame.head)
        left = compose(self.user_origin, frame.left)
        right = compose(self.user_origin, frame.right)
        if cfg.dominant_hand == "right":
            main_hand, secondary_hand = right, left
        else:
            main_hand, secondary_hand = left, right
        main_ray = controller_ray(main_hand)
        secondary_ray = controller_ray(secondary_hand)

        crossing = detect_crossing(main_ray, secondary_ray, head, self.chain, cfg)

        events: list[InteractionEvent] = []
        pressed = next(
            (
                name
                for name in ("pop", "primary", "trigger", "teleport")
                if getattr(frame.buttons, name)
            ),
            None,
        )
        if pressed == "pop":
            if len(self.chain) > 0:
                self.chain = pop_fold(self.chain)
                events.append(FoldPopped(frame.seq))
        elif pressed == "primary":
            if crossing is not None:
                try:
                    self.chain = _create_fold(self.chain, crossing.point, head)
                    events.append(FoldCreated(frame.seq, crossing.point))
                except ChainFullError:
                    pass  # configuration limit, not a crash; the press is spent
        elif pressed == "trigger":
            selected = select_target(self.scene, main_ray, head, self.chain, cfg)
            if selected is not None:
                events.append(SelectionMade(frame.seq, selected))
            else:
                events.append(SelectionAttemptFailed(frame.seq))
        elif pressed == "teleport":
            dest = teleport_destination(self.scene, main_ray, head, self.chain, cfg)
            if dest is not None:
                self.user_origin = dest
                self.chain = FoldChain(max_folds=cfg.max_folds)
                events.append(Teleported(frame.seq, dest))

        render = self._render(frame.seq, head, main_hand, secondary_hand, main_ray,
                              secondary_ray, crossing)
        return render, events

    def _render(
        self,
        seq: int,
        head: Pose,
        main_hand: Pose,
        secondary_hand: Pose,
        main_ray: Ray,
        secondary_ray: Ray,
        crossing: Optional[Crossing],
    ) -> RenderState:
        cfg = self.config
        window_state = None
        if len(self.chain) > 0:
            window_state = WindowState(
                window_pose(head, cfg.window_half_size, cfg.window_distance),
                fold_camera(self.chain, head, cfg),
            )

        effective = effective_main_ray(main_ray, head, self.chain, cfg)
        hovered = None
        main_points = [main_hand.position] + [f.position for f in self.chain.folds]
        if effective is not None:
            hit = raycast_first(self.scene, effective)
            if hit is not None:
                hovered = hit.object_id
                main_points.append(hit.point)
            else:
                main_points.append(effective.at(cfg.ray_render_cap))

        sec_hit = raycast_first(self.scene, secondary_ray)
        sec_end = sec_hit.point if sec_hit is not None else secondary_ray.at(cfg.ray_render_cap)

        return RenderState(
            seq=seq,
            main_polyline=tuple(main_points),
            secondary_polyline=(secondary_hand.position, sec_end),
            crossing_indicator=crossing.point if crossing is not None else None,
            window=window_state,
            hovered=hovered,
        )


def new_session(scene: Scene, config: Optional[FoldConfig] = None) -> Session:
    return Session(scene, config)


# ---------------------------------------------------------------------------
# trace files
# ---------------------------------------------------------------------------

def frame_to_dict(frame: InputFrame) -> dict:
    return {
        "seq": frame.seq,
        "head": pose_json(frame.head),
        "left": pose_json(frame.left),
        "right": pose_json(frame.right),
        "buttons": {
            "trigger": frame.buttons.trigger,
            "primary": frame.buttons.primary,
            "pop": frame.buttons.pop,
            "teleport": frame.buttons.teleport,
        },
    }


def frame_from_dict(doc: dict) -> InputFrame:
    try:
        buttons = doc.get("buttons", {})
        return InputFrame(
            seq=int(doc["seq"]),
            head=_pose(doc["head"]),
            left=_pose(doc["left"]),
            right=_pose(doc["right"]),
            buttons=Buttons(
                trigger=bool(buttons.get("trigger", False)),
                primary=bool(buttons.get("primary", False)),
                pop=bool(buttons.get("pop", False)),
                teleport=bool(buttons.get("teleport", False)),
            ),
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise TraceParseError(f"bad input frame: {exc}") from exc


def _pose(doc: dict) -> Pose:
    p = doc["position"]
    q = doc["orientation"]
    return Pose(
        vec(float(p[0]), float(p[1]), float(p[2])),
        quat_normalize([float(q[0]), float(q[1]), float(q[2]), float(q[3])]),
    )


def load_trace(text: str) -> list[InputFrame]:
    """Parse a JSON-lines trace; errors name the offending line."""
    frames = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            frames.append(frame_from_dict(doc))
        except (json.JSONDecodeError, TraceParseError) as exc:
            raise TraceParseError(f"trace line {lineno}: {exc}") from exc
    return frames


def load_trace_file(path) -> list[InputFrame]:
    with open(path, "r", encoding="utf-8") as fh:
        return load_trace(fh.read())


def replay(
    scene: Scene, frames: Iterable[InputFrame], config: Optional[FoldConfig] = None
) -> Iterator[tuple[RenderState, list[InteractionEvent]]]:
    """Run a fresh session over the frames, yielding per-frame results."""
    session = new_session(scene, config)
    for frame in frames:
        yield session.step(frame)


def replay_events(
    scene: Scene, frames: Iterable[InputFrame], config: Optional[FoldConfig] = None
) -> list[InteractionEvent]:
    events: list[InteractionEvent] = []
    for _, frame_events in replay(scene, frames, config):
        events.extend(frame_events)
    return events
