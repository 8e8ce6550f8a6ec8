/**
 * Browser entry point. Connects to the session service (same host, ws://),
 * builds the world from the scene message, then runs a fixed loop:
 * collect input -> rig -> send frame -> drain messages -> draw.
 *
 * Controls: mouse aims the active controller, TAB swaps hands, left click
 * selects, F (or right click) folds, Z pops a fold, T teleports, WASD
 * walks, hold Shift to mouse-look.
 */

import * as THREE from "three";
import { SessionSocket } from "./net.js";
import { composePose } from "./pose_math.js";
import type { PoseMsg, SceneMsg, Vec3 } from "./protocol.js";
import { ControllerRig, idleSnapshot, type InputSnapshot, type RigButton } from "./rig.js";
import { buildScene, type BuiltScene } from "./scene_builder.js";
import { TechniqueView, UI_LAYER } from "./viewport.js";

const canvas = document.getElementById("view") as HTMLCanvasElement;
const banner = document.getElementById("banner") as HTMLDivElement;
const toast = document.getElementById("toast") as HTMLDivElement;
const handLabel = document.getElementById("hand") as HTMLSpanElement;

const renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
const scene = new THREE.Scene();
scene.background = new THREE.Color(0x10131a);
const camera = new THREE.PerspectiveCamera(60, 16 / 9, 0.01, 500);
camera.layers.enable(UI_LAYER);

scene.add(new THREE.AmbientLight(0xffffff, 0.45));
const sun = new THREE.DirectionalLight(0xffffff, 1.4);
sun.position.set(3, 8, 4);
scene.add(sun);
scene.add(new THREE.GridHelper(20, 20, 0x334, 0x223));

const view = new TechniqueView();
scene.add(view.group);

const socket = new SessionSocket();
let rig: ControllerRig | null = null;
let built: BuiltScene | null = null;
let userOrigin: PoseMsg = { position: [0, 0, 0], orientation: [1, 0, 0, 0] };

// ---------------------------------------------------------------------------
// input collection
// ---------------------------------------------------------------------------

const held = new Set<string>();
const pressedQueue: RigButton[] = [];
let cursorNdc: [number, number] = [0, 0];
let lookDelta: [number, number] = [0, 0];
let aimDepth = 8;

window.addEventListener("keydown", (e) => {
  if (e.repeat) return;
  held.add(e.key.toLowerCase());
  if (e.key === "Tab") {
    pressedQueue.push("toggle_hand");
    e.preventDefault();
  } else if (e.key.toLowerCase() === "f") pressedQueue.push("primary");
  else if (e.key.toLowerCase() === "z") pressedQueue.push("pop");
  else if (e.key.toLowerCase() === "t") pressedQueue.push("teleport");
  else if (e.key.toLowerCase() === "r") socket.sendReset();
});
window.addEventListener("keyup", (e) => held.delete(e.key.toLowerCase()));

canvas.addEventListener("mousedown", (e) => {
  if (e.button === 0) pressedQueue.push("trigger");
  if (e.button === 2) pressedQueue.push("primary");
});
canvas.addEventListener("contextmenu", (e) => e.preventDefault());
canvas.addEventListener("mousemove", (e) => {
  const rect = canvas.getBoundingClientRect();
  cursorNdc = [
    ((e.clientX - rect.left) / rect.width) * 2 - 1,
    -(((e.clientY - rect.top) / rect.height) * 2 - 1),
  ];
  if (held.has("shift")) {
    lookDelta[0] += e.movementX * 0.003;
    lookDelta[1] += e.movementY * 0.003;
  }
});
canvas.addEventListener("wheel", (e) => {
  aimDepth = Math.min(40, Math.max(0.5, aimDepth * (e.deltaY > 0 ? 0.9 : 1.1)));
  e.preventDefault();
});

function takeSnapshot(dt: number): InputSnapshot {
  const snap = idleSnapshot(dt);
  snap.cursorNdc = cursorNdc;
  snap.aimDepth = aimDepth;
  snap.pressed = pressedQueue.splice(0);
  snap.look = [lookDelta[0], lookDelta[1]];
  lookDelta = [0, 0];
  const strafe = (held.has("d") ? 1 : 0) - (held.has("a") ? 1 : 0);
  const walk = (held.has("w") ? 1 : 0) - (held.has("s") ? 1 : 0);
  if (strafe || walk) snap.move = [strafe, walk];
  snap.aimHit = raycastCursor();
  return snap;
}

const picker = new THREE.Raycaster();
picker.layers.enableAll(); // candidates are passed explicitly below

function raycastCursor(): Vec3 | null {
  if (!built || !rig) return null;
  const head = worldHead();
  const ndcVec = new THREE.Vector2(cursorNdc[0], cursorNdc[1]);
  syncCamera(head);
  picker.setFromCamera(ndcVec, camera);
  // the window quad participates so that pointing at a spot on the window
  // threads the hand ray exactly through it; rays and indicator never do
  const candidates = [...built.group.children, ...view.pickables()];
  const hits = picker.intersectObjects(candidates, false);
  if (hits.length === 0) return null;
  const p = hits[0].point;
  return [p.x, p.y, p.z];
}

// ---------------------------------------------------------------------------
// world state
// ---------------------------------------------------------------------------

function worldHead(): PoseMsg {
  return rig ? composePose(userOrigin, rig.headPose()) : userOrigin;
}

function syncCamera(head: PoseMsg): void {
  camera.position.set(...head.position);
  const [w, x, y, z] = head.orientation;
  camera.quaternion.set(x, y, z, w);
}

function showToast(text: string): void {
  toast.textContent = text;
  toast.style.opacity = "1";
  setTimeout(() => (toast.style.opacity = "0"), 1500);
}

function flashObject(id: number): void {
  const mesh = built?.byId.get(id);
  if (!mesh) return;
  const material = mesh.material as THREE.MeshLambertMaterial;
  const original = material.color.getHex();
  material.emissive.setHex(0xffffff);
  setTimeout(() => material.emissive.setHex(0x000000), 400);
  material.color.setHex(original);
}

function onScene(msg: SceneMsg): void {
  built = buildScene(msg);
  scene.add(built.group);
  userOrigin = msg.spawn;
  rig = new ControllerRig({
    aspect: canvas.clientWidth / Math.max(1, canvas.clientHeight),
    handOffsets: msg.hand_offsets,
  });
  banner.style.display = "none";
}

// ---------------------------------------------------------------------------
// main loop
// ---------------------------------------------------------------------------

let lastTime = performance.now();

function tick(now: number): void {
  const dt = Math.min(0.1, (now - lastTime) / 1000);
  lastTime = now;

  if (rig && socket.connected) {
    socket.sendInput(rig.update(takeSnapshot(dt)));
  }

  for (const msg of socket.drain()) {
    if (msg.type === "scene") onScene(msg);
    else if (msg.type === "render") view.apply(msg);
    else if (msg.type === "event") {
      if (msg.event === "selection_made" && msg.object_id !== undefined) {
        showToast(`selected object ${msg.object_id}`);
        flashObject(msg.object_id);
      } else if (msg.event === "fold_created") {
        showToast("fold committed");
      } else if (msg.event === "fold_popped") {
        showToast("fold removed");
      } else if (msg.event === "teleported" && msg.pose) {
        userOrigin = msg.pose;
        rig?.reset();
        showToast("teleported");
      } else if (msg.event === "selection_attempt_failed") {
        showToast("nothing selectable there");
      }
    } else if (msg.type === "error") {
      banner.textContent = `server error: ${msg.message}`;
      banner.style.display = "block";
    }
  }

  if (handLabel && rig) handLabel.textContent = rig.activeHand;

  const width = canvas.clientWidth, height = canvas.clientHeight;
  if (canvas.width !== width || canvas.height !== height) {
    renderer.setSize(width, height, false);
    camera.aspect = width / Math.max(1, height);
    camera.updateProjectionMatrix();
    if (rig) rig.config.aspect = camera.aspect;
  }

  syncCamera(worldHead());
  view.renderWindowTexture(renderer, scene);
  renderer.render(scene, camera);
  requestAnimationFrame(tick);
}

async function start(): Promise<void> {
  const url = `ws://${location.host}/`;
  banner.textContent = `connecting to ${url} ...`;
  banner.style.display = "block";
  socket.onclose = (reason) => {
    banner.textContent = `disconnected: ${reason}`;
    banner.style.display = "block";
  };
  try {
    await socket.connect(url);
  } catch (err) {
    banner.textContent = String(err);
    return;
  }
  requestAnimationFrame(tick);
}

start();
