import type { InputFrameMsg } from "../src/protocol.js";

export {
  ControllerRig,
  cursorDirection,
  idleSnapshot,
  ndcForWorldPoint,
} from "../src/rig.js";

export function framEq(a: InputFrameMsg, b: InputFrameMsg): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}
