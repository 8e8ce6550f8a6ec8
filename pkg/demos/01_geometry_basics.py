"""
Geometry warm-up: rays, the three shapes, and the two-ray closest approach.

Run:  python3 demos/01_geometry_basics.py
"""

import numpy as np

from foldray import (
    Box,
    Pose,
    Quad,
    Ray,
    Sphere,
    closest_approach,
    intersect,
    vec,
)
from foldray.geom import quat_from_axis_angle, quat_identity

np.set_printoptions(precision=4, suppress=True)

print("== ray / shape intersections ==")
ray = Ray(vec(-5, 0, 0), vec(1, 0, 0))
sphere = Sphere(vec(0, 0, 0), 1.0)
hit = intersect(ray, sphere)
print(f"ray {ray.origin} -> {ray.direction} vs unit sphere:")
print(f"  t={hit.t:.4f}  point={hit.point}  normal={hit.normal}")

box = Box(vec(0, 0, -4), vec(1, 0.5, 0.25), quat_from_axis_angle(vec(0, 1, 0), 0.4))
hit = intersect(Ray(vec(0, 0, 0), vec(0, 0, -1)), box)
print(f"forward ray vs a yawed box: t={hit.t:.4f}  point={hit.point}")

floor = Quad(
    Pose(vec(0, -1, -3), quat_from_axis_angle(vec(1, 0, 0), -np.pi / 2)), 4.0, 4.0
)
hit = intersect(Ray(vec(0, 0, 0), vec(0.2, -1, -1)), floor)
print(f"downward ray vs a floor quad: point={hit.point}  quad-local uv={hit.uv}")

print()
print("== closest approach of two rays ==")
a = Ray(vec(0, 0, 0), vec(1, 0, 0))
b = Ray(vec(2, -1, 1), vec(0, 1, 0))
res = closest_approach(a, b)
print(f"skew pair: t_a={res.t_a:.3f} t_b={res.t_b:.3f} distance={res.distance:.3f}")
print(f"  closest point on ray a: {a.at(res.t_a)}")

parallel = closest_approach(a, Ray(vec(0, 1, 0), vec(1, 0, 0)))
print(f"parallel pair: {parallel}   (no unique closest pair)")

crossing = closest_approach(a, Ray(vec(3, -2, 0), vec(0, 1, 0)))
print(
    f"crossing pair: distance={crossing.distance:.2e} at t_a={crossing.t_a:.3f} "
    f"-> a true intersection"
)
print()
print("the crossing threshold in the interaction layer is 0.05 m: any two")
print("rays brought this close (at positive parameters) mark a fold point")
