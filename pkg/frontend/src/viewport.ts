/**
 * Drawing the technique's visuals from RenderState messages: the two ray
 * polylines, the crossing indicator sphere, and the head-locked window
 * quad textured with the fold camera's live render-to-texture view.
 *
 * Every geometric decision here comes from the server message; the client
 * adds nothing but pixels.
 */

import * as THREE from "three";
import type { RenderMsg, Vec3 } from "./protocol.js";

const WINDOW_TEXTURE_SIZE = 512;
const UI_LAYER = 1; // rays, sphere, window: excluded from the fold camera's view

export class TechniqueView {
  readonly group = new THREE.Group();
  private mainLine: THREE.Line;
  private secondaryLine: THREE.Line;
  private crossing: THREE.Mesh;
  private windowMesh: THREE.Mesh;
  private windowFrame: THREE.LineSegments;
  private renderTarget: THREE.WebGLRenderTarget;
  private foldCamera: THREE.PerspectiveCamera;
  private windowVisible = false;

  constructor() {
    // rays and the crossing sphere draw x-ray style so the beyond-the-fold
    // segments stay visible through occluders
    this.mainLine = new THREE.Line(
      new THREE.BufferGeometry(),
      new THREE.LineBasicMaterial({ color: 0xff5533, depthTest: false }),
    );
    this.secondaryLine = new THREE.Line(
      new THREE.BufferGeometry(),
      new THREE.LineBasicMaterial({ color: 0x33aaff, depthTest: false }),
    );
    this.mainLine.renderOrder = 90;
    this.secondaryLine.renderOrder = 90;
    this.crossing = new THREE.Mesh(
      new THREE.SphereGeometry(0.03, 16, 8),
      new THREE.MeshBasicMaterial({ color: 0xffdd22, depthTest: false }),
    );
    this.crossing.renderOrder = 91;
    this.crossing.visible = false;

    this.renderTarget = new THREE.WebGLRenderTarget(
      WINDOW_TEXTURE_SIZE, WINDOW_TEXTURE_SIZE,
    );
    this.foldCamera = new THREE.PerspectiveCamera(60, 1, 0.01, 1000);
    this.windowMesh = new THREE.Mesh(
      new THREE.PlaneGeometry(1, 1),
      new THREE.MeshBasicMaterial({ map: this.renderTarget.texture }),
    );
    this.windowMesh.visible = false;
    this.windowFrame = new THREE.LineSegments(
      new THREE.EdgesGeometry(new THREE.PlaneGeometry(1, 1)),
      new THREE.LineBasicMaterial({ color: 0xffffff }),
    );
    this.windowFrame.visible = false;

    for (const obj of [
      this.mainLine, this.secondaryLine, this.crossing,
      this.windowMesh, this.windowFrame,
    ]) {
      obj.layers.set(UI_LAYER);
      this.group.add(obj);
    }
  }

  /** Apply one render message. */
  apply(msg: RenderMsg): void {
    setPolyline(this.mainLine, msg.main_polyline);
    setPolyline(this.secondaryLine, msg.secondary_polyline);

    if (msg.crossing_indicator) {
      this.crossing.position.set(...msg.crossing_indicator);
      this.crossing.visible = true;
    } else {
      this.crossing.visible = false;
    }

    const w = msg.window;
    this.windowVisible = w !== null;
    this.windowMesh.visible = this.windowVisible;
    this.windowFrame.visible = this.windowVisible;
    if (w) {
      for (const mesh of [this.windowMesh, this.windowFrame]) {
        mesh.position.set(...w.center);
        const [qw, qx, qy, qz] = w.orientation;
        mesh.quaternion.set(qx, qy, qz, qw);
        mesh.scale.set(w.half_size * 2, w.half_size * 2, 1);
      }
      this.foldCamera.position.set(...w.camera.position);
      const [cw, cx, cy, cz] = w.camera.orientation;
      this.foldCamera.quaternion.set(cx, cy, cz, cw);
      this.foldCamera.fov = (w.camera.vertical_fov * 180) / Math.PI;
      this.foldCamera.aspect = w.camera.aspect;
      this.foldCamera.updateProjectionMatrix();
    }
  }

  /**
   * Objects the cursor may aim at besides the world: the window quad, so
   * pointing at a spot on the window aims the hand ray exactly through it
   * (and the remap resolves to the thing that spot shows).
   */
  pickables(): THREE.Object3D[] {
    return this.windowVisible ? [this.windowMesh] : [];
  }

  /**
   * Render the fold camera's view into the window texture. Call before the
   * main render pass. The fold camera sees only layer 0 (the world), never
   * the rays, the indicator, or the window itself.
   */
  renderWindowTexture(renderer: THREE.WebGLRenderer, scene: THREE.Scene): void {
    if (!this.windowVisible) return;
    this.foldCamera.layers.set(0);
    const prev = renderer.getRenderTarget();
    renderer.setRenderTarget(this.renderTarget);
    renderer.render(scene, this.foldCamera);
    renderer.setRenderTarget(prev);
  }
}

function setPolyline(line: THREE.Line, points: Vec3[]): void {
  const flat = new Float32Array(points.length * 3);
  points.forEach((p, i) => flat.set(p, i * 3));
  line.geometry.dispose();
  const geo = new THREE.BufferGeometry();
  geo.setAttribute("position", new THREE.BufferAttribute(flat, 3));
  line.geometry = geo;
  line.visible = points.length >= 2;
}

export { UI_LAYER };
