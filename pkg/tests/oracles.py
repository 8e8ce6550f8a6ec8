"""
Independent brute-force oracles the unit and acceptance tests check the
analytic code against. Everything here is deliberately dumb: dense sampling,
marching plus bisection, projection onto one ray at a time. None of it calls
the closed-form solvers it is used to verify.
"""

from __future__ import annotations

import numpy as np

from foldray.geom import Ray, Shape, point_inside


def _point_to_ray_t(points: np.ndarray, r: Ray) -> np.ndarray:
    """Clamped parameter of the closest point on r to each query point."""
    return np.maximum(0.0, (points - r.origin) @ r.direction)


def ray_pair_min_distance(a: Ray, b: Ray, t_max: float = 100.0, step: float = 1e-3):
    """
    Dense-sampling minimizer for the distance between two rays: sweep t_a
    over a grid, project each swept point onto ray b (clamped to t_b >= 0),
    then refine around the best sample with two finer sweeps.

    Returns (t_a, t_b, distance).
    """
    lo, hi = 0.0, t_max
    best_t = 0.0
    for st in (step, step * 1e-3, step * 1e-6):
        ts = np.arange(lo, hi + st, st)
        pa = a.origin + ts[:, None] * a.direction
        tb = _point_to_ray_t(pa, b)
        pb = b.origin + tb[:, None] * b.direction
        d2 = np.einsum("ij,ij->i", pa - pb, pa - pb)
        i = int(np.argmin(d2))
        best_t = float(ts[i])
        lo, hi = max(0.0, best_t - st), best_t + st
    pa = a.origin + best_t * a.direction
    tb = float(max(0.0, (pa - b.origin) @ b.direction))
    dist = float(np.linalg.norm(pa - (b.origin + tb * b.direction)))
    return best_t, tb, dist


def marching_hit_t(s: Shape, r: Ray, t_max: float = 20.0, step: float = 1e-4):
    """
    March along the ray in fixed steps, inside-testing each sample, and
    bisect the first bracket where the inside state flips. Returns the
    boundary t or None if the state never changes. Also returns the number
    of samples spent in the minority state so callers can reject grazing
    hits below the marcher's resolution: (t, minority_samples).
    """
    ts = np.arange(0.0, t_max, step)
    pts = r.origin + ts[:, None] * r.direction
    inside = _inside_batch(pts, s)
    first = inside[0]
    flips = np.nonzero(inside != first)[0]
    if len(flips) == 0:
        return None, 0
    k = int(flips[0])
    minority = int(np.count_nonzero(inside != first))
    lo, hi = float(ts[k - 1]), float(ts[k])
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if point_inside(r.at(mid), s) == first:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), minority


def _inside_batch(pts: np.ndarray, s: Shape) -> np.ndarray:
    from foldray.geom import points_inside

    return points_inside(pts, s)
