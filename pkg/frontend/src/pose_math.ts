/**
 * The little bit of pose algebra the client needs, on plain arrays so the
 * input rig stays testable without three.js. Conventions match the server:
 * right-handed, +Y up, forward is local -Z, quaternions are [w, x, y, z].
 */

import type { PoseMsg, QuatWXYZ, Vec3 } from "./protocol.js";

export function quatMultiply(a: QuatWXYZ, b: QuatWXYZ): QuatWXYZ {
  const [aw, ax, ay, az] = a;
  const [bw, bx, by, bz] = b;
  return [
    aw * bw - ax * bx - ay * by - az * bz,
    aw * bx + ax * bw + ay * bz - az * by,
    aw * by - ax * bz + ay * bw + az * bx,
    aw * bz + ax * by - ay * bx + az * bw,
  ];
}

export function quatRotate(q: QuatWXYZ, v: Vec3): Vec3 {
  const [w, x, y, z] = q;
  const [vx, vy, vz] = v;
  // uv = q_vec x v, uuv = q_vec x uv, out = v + 2(w*uv + uuv)
  const uvx = y * vz - z * vy;
  const uvy = z * vx - x * vz;
  const uvz = x * vy - y * vx;
  const uuvx = y * uvz - z * uvy;
  const uuvy = z * uvx - x * uvz;
  const uuvz = x * uvy - y * uvx;
  return [
    vx + 2 * (w * uvx + uuvx),
    vy + 2 * (w * uvy + uuvy),
    vz + 2 * (w * uvz + uuvz),
  ];
}

export function quatFromAxisAngle(axis: Vec3, angle: number): QuatWXYZ {
  const n = Math.hypot(axis[0], axis[1], axis[2]);
  const s = Math.sin(angle / 2) / n;
  return [Math.cos(angle / 2), axis[0] * s, axis[1] * s, axis[2] * s];
}

export function composePose(outer: PoseMsg, inner: PoseMsg): PoseMsg {
  const rotated = quatRotate(outer.orientation, inner.position);
  return {
    position: [
      outer.position[0] + rotated[0],
      outer.position[1] + rotated[1],
      outer.position[2] + rotated[2],
    ],
    orientation: quatMultiply(outer.orientation, inner.orientation),
  };
}

export function addVec(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

export function subVec(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function scaleVec(v: Vec3, s: number): Vec3 {
  return [v[0] * s, v[1] * s, v[2] * s];
}

export function normalizeVec(v: Vec3): Vec3 {
  const n = Math.hypot(v[0], v[1], v[2]);
  if (n < 1e-12) throw new Error("cannot normalize a zero vector");
  return [v[0] / n, v[1] / n, v[2] / n];
}

export function crossVec(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

/** Orientation whose -Z points along `forward`, up kept near +Y. */
export function lookRotation(forward: Vec3, up: Vec3 = [0, 1, 0]): QuatWXYZ {
  const f = normalizeVec(forward);
  const z: Vec3 = [-f[0], -f[1], -f[2]];
  let x = crossVec(up, z);
  const xn = Math.hypot(x[0], x[1], x[2]);
  if (xn < 1e-9) {
    x = crossVec(Math.abs(z[1]) > 0.9 ? [0, 0, -1] : [0, 1, 0], z);
  }
  const xu = normalizeVec(x);
  const y = crossVec(z, xu);
  // column-major basis [x y z] -> quaternion (Shepperd)
  const m00 = xu[0], m01 = y[0], m02 = z[0];
  const m10 = xu[1], m11 = y[1], m12 = z[1];
  const m20 = xu[2], m21 = y[2], m22 = z[2];
  const t = m00 + m11 + m22;
  let q: QuatWXYZ;
  if (t > 0) {
    const s = Math.sqrt(t + 1) * 2;
    q = [0.25 * s, (m21 - m12) / s, (m02 - m20) / s, (m10 - m01) / s];
  } else if (m00 > m11 && m00 > m22) {
    const s = Math.sqrt(1 + m00 - m11 - m22) * 2;
    q = [(m21 - m12) / s, 0.25 * s, (m01 + m10) / s, (m02 + m20) / s];
  } else if (m11 > m22) {
    const s = Math.sqrt(1 + m11 - m00 - m22) * 2;
    q = [(m02 - m20) / s, (m01 + m10) / s, 0.25 * s, (m12 + m21) / s];
  } else {
    const s = Math.sqrt(1 + m22 - m00 - m11) * 2;
    q = [(m10 - m01) / s, (m02 + m20) / s, (m12 + m21) / s, 0.25 * s];
  }
  const n = Math.hypot(q[0], q[1], q[2], q[3]);
  return [q[0] / n, q[1] / n, q[2] / n, q[3] / n];
}
