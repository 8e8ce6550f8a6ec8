"""
Brute-force reachability oracle: the minimum number of folds needed to
select a target, found by breadth-first search over a visibility graph.

A target is selectable with k folds exactly when there is a polyline from
the dominant hand to the target with k interior vertices whose every
segment is unobstructed (the target itself does not count as an obstruction
on segments that end at it). Nodes are the hand, a uniform grid over the
scene's inflated bounding box (minus points inside objects), and the target
center; BFS over unobstructed segments returns the fewest interior
vertices, which is the fewest folds.

The oracle deliberately knows nothing about windows, cameras, or remapping;
it is the independent yardstick the interactive technique is measured
against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .folding import FoldConfig
from .geom import Box, Quad, Shape, Sphere, compose, points_inside
from .scene import Scene, segments_visible

# default inflation of the scene bounding box for the fold-point grid
BOUNDS_MARGIN = 1.0


@dataclass(frozen=True)
class ReachabilityEntry:
    target_id: int
    label: str
    min_folds: Optional[int]            # None: not reachable within max_folds
    witness: tuple[np.ndarray, ...]     # hand, folds..., target; () if unreachable
    grid_step: float
    node_count: int


def target_center(shape: Shape) -> np.ndarray:
    if isinstance(shape, Sphere):
        return shape.center.copy()
    if isinstance(shape, Box):
        return shape.center.copy()
    if isinstance(shape, Quad):
        return shape.pose.position.copy()
    raise TypeError(f"not a shape: {shape!r}")


def hand_position(scene: Scene, hand: str = "right") -> np.ndarray:
    """World position of a controller at spawn."""
    return compose(scene.spawn, scene.hand_offset(hand)).position.copy()


def grid_points(
    scene: Scene,
    grid_step: float,
    bounds: Optional[tuple[np.ndarray, np.ndarray]] = None,
) -> np.ndarray:
    """Uniform grid over the bounds, excluding points inside any object."""
    if grid_step <= 0.0:
        raise ValueError(f"grid_step must be positive, got {grid_step}")
    if bounds is None:
        lo, hi = scene.aabb()
        lo = lo - BOUNDS_MARGIN
        hi = hi + BOUNDS_MARGIN
    else:
        lo, hi = (np.asarray(b, dtype=np.float64) for b in bounds)
    axes = [np.arange(lo[i], hi[i] + grid_step * 0.5, grid_step) for i in range(3)]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    keep = np.ones(len(pts), dtype=bool)
    for o in scene.objects:
        keep &= ~points_inside(pts, o.shape)
    return pts[keep]


def min_folds(
    scene: Scene,
    target_id: int,
    max_folds: int = 8,
    grid_step: float = 0.25,
    bounds: Optional[tuple[np.ndarray, np.ndarray]] = None,
    hand: str = "right",
) -> ReachabilityEntry:
    """
    BFS for the fewest folds that reach the target. Layer d of the search
    holds points reachable with d-1 interior vertices from the hand; the
    search stops as soon as any layer sees the target, or after the layer
    corresponding to max_folds interior vertices.
    """
    target_obj = scene.object_by_id(target_id)
    goal = target_center(target_obj.shape)
    start = hand_position(scene, hand)

    pts = grid_points(scene, grid_step, bounds)
    # drop grid points that coincide with an endpoint (zero-length segments)
    for anchor in (start, goal):
        d = pts - anchor
        pts = pts[np.einsum("ij,ij->i", d, d) > 0.0]

    n = len(pts)
    visited = np.zeros(n, dtype=bool)
    parent = np.full(n, -1, dtype=np.int64)  # grid index -> predecessor (-2 = hand)
    ignore_goal = frozenset({target_id})

    # frontier holds grid indices; -2 stands for the hand itself
    frontier: list[int] = [-2]
    frontier_pos = start[None, :]
    goal_parent: Optional[int] = None

    for depth in range(0, max_folds + 1):
        # does any frontier node see the target? (own surface ignored)
        sees_goal = segments_visible(scene, goal, frontier_pos, ignore=ignore_goal)
        hits = np.nonzero(sees_goal)[0]
        if len(hits) > 0:
            goal_parent = frontier[int(hits[0])]
            folds = depth
            witness = _witness(start, goal, pts, parent, goal_parent)
            return ReachabilityEntry(
                target_id, target_obj.label, folds, witness, grid_step, n + 2
            )
        if depth == max_folds:
            break
        # expand to unvisited grid points
        new_frontier: list[int] = []
        for u in frontier:
            upos = start if u == -2 else pts[u]
            open_idx = np.nonzero(~visited)[0]
            if len(open_idx) == 0:
                break
            vis = segments_visible(scene, upos, pts[open_idx])
            reached = open_idx[vis]
            visited[reached] = True
            parent[reached] = u
            new_frontier.extend(int(i) for i in reached)
        if not new_frontier:
            break
        frontier = new_frontier
        frontier_pos = pts[np.array(frontier, dtype=np.int64)]

    return ReachabilityEntry(target_id, target_obj.label, None, (), grid_step, n + 2)


def _witness(start, goal, pts, parent, goal_parent: int) -> tuple[np.ndarray, ...]:
    chain = []
    u = goal_parent
    while u != -2:
        chain.append(pts[u])
        u = int(parent[u])
    chain.reverse()
    return (start.copy(), *chain, goal.copy())


def reachability_report(
    scene: Scene,
    max_folds: int = 8,
    grid_step: float = 0.25,
    bounds: Optional[tuple[np.ndarray, np.ndarray]] = None,
    hand: Optional[str] = None,
) -> list[ReachabilityEntry]:
    """min_folds for every target in the scene, in id order."""
    hand = hand or FoldConfig().dominant_hand
    return [
        min_folds(scene, tid, max_folds=max_folds, grid_step=grid_step,
                  bounds=bounds, hand=hand)
        for tid in scene.target_ids
    ]
