/**
 * Wire protocol types and parsing. Everything the server sends or accepts
 * is one JSON object per WebSocket text frame; this module is the single
 * place that knows the shapes.
 *
 * Quaternions travel as [w, x, y, z]; positions as [x, y, z] in meters.
 */

export type Vec3 = [number, number, number];
export type QuatWXYZ = [number, number, number, number];

export interface PoseMsg {
  position: Vec3;
  orientation: QuatWXYZ;
}

export type ShapeMsg =
  | { kind: "sphere"; center: Vec3; radius: number }
  | { kind: "box"; center: Vec3; half_extents: Vec3; orientation: QuatWXYZ }
  | { kind: "quad"; pose: PoseMsg; half_width: number; half_height: number };

export interface SceneObjectMsg {
  id: number;
  role: "occluder" | "target" | "neutral";
  label: string;
  shape: ShapeMsg;
}

export interface SceneMsg {
  type: "scene";
  digest: string;
  spawn: PoseMsg;
  hand_offsets: { left: PoseMsg; right: PoseMsg };
  objects: SceneObjectMsg[];
}

export interface WindowMsg {
  center: Vec3;
  orientation: QuatWXYZ;
  half_size: number;
  distance: number;
  camera: {
    position: Vec3;
    orientation: QuatWXYZ;
    vertical_fov: number;
    aspect: number;
  };
}

export interface RenderMsg {
  type: "render";
  seq: number;
  main_polyline: Vec3[];
  secondary_polyline: Vec3[];
  crossing_indicator: Vec3 | null;
  window: WindowMsg | null;
  hovered: number | null;
}

export interface EventMsg {
  type: "event";
  seq: number;
  event:
    | "fold_created"
    | "fold_popped"
    | "selection_made"
    | "selection_attempt_failed"
    | "teleported";
  position?: Vec3;
  object_id?: number;
  pose?: PoseMsg;
}

export interface ErrorMsg {
  type: "error";
  message: string;
}

export type ServerMsg = SceneMsg | RenderMsg | EventMsg | ErrorMsg;

export interface ButtonsMsg {
  trigger: boolean;
  primary: boolean;
  pop: boolean;
  teleport: boolean;
}

export interface InputFrameMsg {
  seq: number;
  head: PoseMsg;
  left: PoseMsg;
  right: PoseMsg;
  buttons: ButtonsMsg;
}

export type ClientMsg =
  | { type: "input"; frame: InputFrameMsg }
  | { type: "reset" };

const SERVER_TYPES = new Set(["scene", "render", "event", "error"]);

/** Parse one server frame; throws with a readable message on junk. */
export function parseServerMsg(raw: string): ServerMsg {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    throw new Error(`server sent non-JSON frame: ${raw.slice(0, 80)}`);
  }
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error("server frame is not an object");
  }
  const type = (doc as { type?: unknown }).type;
  if (typeof type !== "string" || !SERVER_TYPES.has(type)) {
    throw new Error(`unknown server message type: ${String(type)}`);
  }
  const msg = doc as ServerMsg;
  if (msg.type === "scene" && !Array.isArray(msg.objects)) {
    throw new Error("scene message lacks objects");
  }
  if (msg.type === "render" && !Array.isArray(msg.main_polyline)) {
    throw new Error("render message lacks polylines");
  }
  return msg;
}

export function identityPose(): PoseMsg {
  return { position: [0, 0, 0], orientation: [1, 0, 0, 0] };
}

export function inputMessage(frame: InputFrameMsg): string {
  return JSON.stringify({ type: "input", frame });
}

export function resetMessage(): string {
  return JSON.stringify({ type: "reset" });
}
