/**
 * Desktop stand-in for a two-controller rig. The mouse aims the ACTIVE
 * controller at a world point (the surface under the cursor, or a point at
 * an adjustable depth along the cursor ray when it hits nothing); TAB
 * swaps which hand is active while the other keeps its last aim, so
 * crossing two rays is: aim, TAB, aim. WASD moves the head, mouse-look
 * (while the look modifier is held) turns it.
 *
 * The rig performs no interaction logic: it only turns a per-frame input
 * snapshot into an InputFrame for the server. Frames are in tracking
 * space; the server composes them with the user origin.
 */

import {
  composePose,
  lookRotation,
  quatFromAxisAngle,
  quatMultiply,
  quatRotate,
} from "./pose_math.js";
import type {
  ButtonsMsg,
  InputFrameMsg,
  PoseMsg,
  QuatWXYZ,
  Vec3,
} from "./protocol.js";
import { identityPose } from "./protocol.js";

export type RigButton = "trigger" | "primary" | "pop" | "teleport" | "toggle_hand";

export interface RigConfig {
  fovY: number; // vertical field of view of the desktop camera, radians
  aspect: number;
  moveSpeed: number; // m/s
  handOffsets: { left: PoseMsg; right: PoseMsg };
}

export const DEFAULT_RIG_CONFIG: RigConfig = {
  fovY: Math.PI / 3,
  aspect: 16 / 9,
  moveSpeed: 2.0,
  handOffsets: {
    left: { position: [-0.2, -0.25, -0.3], orientation: [1, 0, 0, 0] },
    right: { position: [0.2, -0.25, -0.3], orientation: [1, 0, 0, 0] },
  },
};

export interface InputSnapshot {
  dt: number;
  cursorNdc: [number, number]; // x right, y up, both in [-1, 1]
  aimDepth: number; // meters along the cursor ray when nothing is hit
  aimHit?: Vec3 | null; // world point under the cursor, if the UI raycast hit
  look?: [number, number]; // yaw delta, pitch delta (radians)
  move?: [number, number]; // strafe right, walk forward in [-1, 1]
  pressed?: RigButton[]; // edge presses since the previous frame
}

export function idleSnapshot(dt = 1 / 60): InputSnapshot {
  return { dt, cursorNdc: [0, 0], aimDepth: 8 };
}

/** Direction of the camera ray through a cursor position. */
export function cursorDirection(
  headOrientation: QuatWXYZ,
  ndc: [number, number],
  fovY: number,
  aspect: number,
): Vec3 {
  const ty = Math.tan(fovY / 2);
  const local: Vec3 = [ndc[0] * ty * aspect, ndc[1] * ty, -1];
  const n = Math.hypot(local[0], local[1], local[2]);
  return quatRotate(headOrientation, [local[0] / n, local[1] / n, local[2] / n]);
}

/** Cursor position that puts the camera ray through a world point. */
export function ndcForWorldPoint(
  headPose: PoseMsg,
  point: Vec3,
  fovY: number,
  aspect: number,
): [number, number] | null {
  const q = headPose.orientation;
  const conj: QuatWXYZ = [q[0], -q[1], -q[2], -q[3]];
  const rel: Vec3 = [
    point[0] - headPose.position[0],
    point[1] - headPose.position[1],
    point[2] - headPose.position[2],
  ];
  const local = quatRotate(conj, rel);
  if (local[2] >= -1e-9) return null; // behind the camera
  const ty = Math.tan(fovY / 2);
  return [local[0] / -local[2] / (ty * aspect), local[1] / -local[2] / ty];
}

export class ControllerRig {
  readonly config: RigConfig;
  seq = 0;
  headPosition: Vec3 = [0, 0, 0];
  headYaw = 0;
  headPitch = 0;
  activeHand: "left" | "right" = "right";
  private lastAim: { left: Vec3; right: Vec3 };

  constructor(config?: Partial<RigConfig>) {
    this.config = { ...DEFAULT_RIG_CONFIG, ...config };
    // both hands start aimed 10 m straight ahead
    this.lastAim = { left: [0, -0.25, -10], right: [0, -0.25, -10] };
  }

  headPose(): PoseMsg {
    const yawQ = quatFromAxisAngle([0, 1, 0], this.headYaw);
    const pitchQ = quatFromAxisAngle([1, 0, 0], this.headPitch);
    return {
      position: [...this.headPosition] as Vec3,
      orientation: quatMultiply(yawQ, pitchQ),
    };
  }

  /** One deterministic step: snapshot in, InputFrame out. */
  update(snap: InputSnapshot): InputFrameMsg {
    const pressed = new Set(snap.pressed ?? []);
    if (pressed.has("toggle_hand")) {
      this.activeHand = this.activeHand === "right" ? "left" : "right";
    }

    if (snap.look) {
      this.headYaw -= snap.look[0];
      this.headPitch = clamp(
        this.headPitch - snap.look[1],
        -Math.PI / 2 + 0.05,
        Math.PI / 2 - 0.05,
      );
    }
    if (snap.move) {
      const yawQ = quatFromAxisAngle([0, 1, 0], this.headYaw);
      const fwd = quatRotate(yawQ, [0, 0, -1]);
      const right = quatRotate(yawQ, [1, 0, 0]);
      const step = this.config.moveSpeed * snap.dt;
      this.headPosition = [
        this.headPosition[0] + (right[0] * snap.move[0] + fwd[0] * snap.move[1]) * step,
        this.headPosition[1],
        this.headPosition[2] + (right[2] * snap.move[0] + fwd[2] * snap.move[1]) * step,
      ];
    }

    const head = this.headPose();
    const aim = this.aimPoint(head, snap);
    this.lastAim[this.activeHand] = aim;

    const buttons: ButtonsMsg = {
      trigger: pressed.has("trigger"),
      primary: pressed.has("primary"),
      pop: pressed.has("pop"),
      teleport: pressed.has("teleport"),
    };

    const frame: InputFrameMsg = {
      seq: this.seq,
      head,
      left: this.handPose("left", head),
      right: this.handPose("right", head),
      buttons,
    };
    this.seq += 1;
    return frame;
  }

  private aimPoint(head: PoseMsg, snap: InputSnapshot): Vec3 {
    if (snap.aimHit) return snap.aimHit;
    const dir = cursorDirection(
      head.orientation, snap.cursorNdc, this.config.fovY, this.config.aspect,
    );
    return [
      head.position[0] + dir[0] * snap.aimDepth,
      head.position[1] + dir[1] * snap.aimDepth,
      head.position[2] + dir[2] * snap.aimDepth,
    ];
  }

  private handPose(hand: "left" | "right", head: PoseMsg): PoseMsg {
    const base = composePose(head, this.config.handOffsets[hand]);
    const aim = this.lastAim[hand];
    const toAim: Vec3 = [
      aim[0] - base.position[0],
      aim[1] - base.position[1],
      aim[2] - base.position[2],
    ];
    const dist = Math.hypot(toAim[0], toAim[1], toAim[2]);
    if (dist < 1e-6) return base;
    return { position: base.position, orientation: lookRotation(toAim) };
  }

  reset(): void {
    this.headPosition = [0, 0, 0];
    this.headYaw = 0;
    this.headPitch = 0;
    this.activeHand = "right";
    this.lastAim = { left: [0, -0.25, -10], right: [0, -0.25, -10] };
    // seq keeps counting: the server session is fresh after a reset message,
    // but monotonic seq is harmless and simpler
  }
}

function clamp(x: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, x));
}

export function frameIsIdle(frame: InputFrameMsg): boolean {
  const b = frame.buttons;
  return !b.trigger && !b.primary && !b.pop && !b.teleport;
}

export { identityPose };
