"""
foldray: a deterministic engine for fold-point ray selection.

Cross two controller rays to mark a fold point, look through a head-locked
window showing that point's camera, fold again from inside the view, and
select or teleport to things no straight ray could reach — plus a headless
trace replayer and a brute-force reachability oracle that check the
technique's claims.
"""

from .assets import (
    bundled_scene_names,
    bundled_trace_names,
    load_bundled_scene,
    scene_path,
    trace_path,
)
from .folding import (
    ChainFullError,
    ConfigError,
    Crossing,
    FoldCamera,
    FoldChain,
    FoldConfig,
    FoldPoint,
    ViewportWindow,
    camera_project,
    controller_ray,
    create_fold,
    crossing_point,
    detect_crossing,
    effective_main_ray,
    fold_camera,
    pop_fold,
    remap_through_window,
    select_target,
    teleport_destination,
    uv_to_camera_ray,
    window_point,
    window_pose,
)
from .geom import (
    Box,
    ClosestApproach,
    Pose,
    Quad,
    Ray,
    RayHit,
    Sphere,
    closest_approach,
    compose,
    intersect,
    look_rotation,
    pose_apply,
    pose_apply_inverse,
    pose_inverse,
    ray_through,
    vec,
)
from .reach import ReachabilityEntry, min_folds, reachability_report
from .scene import (
    Hit,
    Scene,
    SceneError,
    SceneObject,
    SceneParseError,
    SceneValidationError,
    load_scene,
    load_scene_file,
    raycast_first,
    scene_digest,
    segment_visible,
)
from .session import (
    Buttons,
    FoldCreated,
    FoldPopped,
    InputFrame,
    InteractionEvent,
    RenderState,
    SelectionAttemptFailed,
    SelectionMade,
    Session,
    Teleported,
    TraceError,
    TraceOrderError,
    TraceParseError,
    event_json,
    load_trace,
    load_trace_file,
    new_session,
    replay,
    replay_events,
)

__version__ = "0.1.0"
