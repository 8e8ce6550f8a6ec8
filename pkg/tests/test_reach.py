import numpy as np
import pytest

from foldray.assets import load_bundled_scene
from foldray.geom import Box, Pose, Quad, Sphere, quat_identity, vec
from foldray.reach import (
    ReachabilityEntry,
    grid_points,
    hand_position,
    min_folds,
    reachability_report,
    target_center,
)
from foldray.scene import segment_visible


@pytest.fixture(scope="module")
def rooms():
    return {
        name: load_bundled_scene(name) for name in ("open_room", "wall_room", "u_maze")
    }


def test_open_room_is_directly_reachable(rooms):
    e = min_folds(rooms["open_room"], 0, max_folds=2, grid_step=0.25)
    assert e.min_folds == 0
    assert len(e.witness) == 2  # hand, target


def test_wall_room_needs_one_fold(rooms):
    e = min_folds(rooms["wall_room"], 1, max_folds=2, grid_step=0.25)
    assert e.min_folds == 1
    _check_witness(rooms["wall_room"], e)


def test_wall_room_over_the_wall_is_a_valid_witness(rooms):
    # the canonical fold point above the wall forms a clear 1-fold polyline
    scene = rooms["wall_room"]
    hand = hand_position(scene)
    above = vec(0.0, 2.5, -2.5)
    goal = target_center(scene.object_by_id(1).shape)
    assert segment_visible(scene, hand, above)
    assert segment_visible(scene, above, goal, ignore={1})


def test_u_maze_needs_two_folds(rooms):
    e = min_folds(rooms["u_maze"], 6, max_folds=3, grid_step=0.25)
    assert e.min_folds == 2
    _check_witness(rooms["u_maze"], e)


def test_u_maze_unreachable_with_one_fold(rooms):
    e = min_folds(rooms["u_maze"], 6, max_folds=1, grid_step=0.25)
    assert e.min_folds is None
    assert e.witness == ()


def test_min_folds_monotone_under_grid_refinement(rooms):
    for name, tid in (("open_room", 0), ("wall_room", 1), ("u_maze", 6)):
        coarse = min_folds(rooms[name], tid, max_folds=4, grid_step=0.5)
        fine = min_folds(rooms[name], tid, max_folds=4, grid_step=0.25)
        c = np.inf if coarse.min_folds is None else coarse.min_folds
        f = np.inf if fine.min_folds is None else fine.min_folds
        assert f <= c


def _check_witness(scene, e: ReachabilityEntry):
    # segment count is min_folds + 1; every segment is unobstructed, with
    # the target ignored only on the segment that ends at it
    assert len(e.witness) == e.min_folds + 2
    segments = list(zip(e.witness, e.witness[1:]))
    assert len(segments) == e.min_folds + 1
    for i, (p, q) in enumerate(segments):
        ignore = {e.target_id} if i == len(segments) - 1 else set()
        assert segment_visible(scene, p, q, ignore=ignore)


def test_grid_excludes_object_interiors(rooms):
    scene = rooms["wall_room"]
    pts = grid_points(scene, 0.25)
    from foldray.geom import points_inside

    for o in scene.objects:
        assert not points_inside(pts, o.shape).any()


def test_grid_rejects_bad_step(rooms):
    with pytest.raises(ValueError):
        grid_points(rooms["open_room"], 0.0)


def test_target_center_by_shape():
    assert target_center(Sphere(vec(1, 2, 3), 0.5)) == pytest.approx([1, 2, 3])
    assert target_center(Box(vec(4, 5, 6), vec(1, 1, 1), quat_identity())) == pytest.approx(
        [4, 5, 6]
    )
    assert target_center(Quad(Pose(vec(7, 8, 9), quat_identity()), 1, 1)) == pytest.approx(
        [7, 8, 9]
    )


def test_report_covers_all_targets(rooms):
    report = reachability_report(rooms["wall_room"], max_folds=2, grid_step=0.5)
    assert [e.target_id for e in report] == [1]
    assert report[0].min_folds == 1


def test_hand_position_uses_spawn_offset(rooms):
    assert hand_position(rooms["wall_room"], "right") == pytest.approx([0.2, -0.25, -0.3])
    assert hand_position(rooms["u_maze"], "right") == pytest.approx([0.2, 0.95, 0.2])
