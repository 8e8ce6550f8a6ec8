/**
 * Scene message -> three.js meshes. Plain lambert materials, color by
 * role; quads are double-sided planes (the server's quad convention — XY
 * extent, +Z normal — matches THREE.PlaneGeometry).
 */

import * as THREE from "three";
import type { PoseMsg, SceneMsg, SceneObjectMsg } from "./protocol.js";

export const ROLE_COLORS: Record<string, number> = {
  occluder: 0x8a8a8a,
  target: 0x2ecc71,
  neutral: 0x5d7fb3,
};

export function applyPose(obj: THREE.Object3D, pose: PoseMsg): void {
  obj.position.set(...pose.position);
  const [w, x, y, z] = pose.orientation;
  obj.quaternion.set(x, y, z, w); // wire is wxyz, three is xyzw
}

export function buildObject(msg: SceneObjectMsg): THREE.Mesh {
  const material = new THREE.MeshLambertMaterial({
    color: ROLE_COLORS[msg.role] ?? 0xffffff,
    side: THREE.DoubleSide,
  });
  let mesh: THREE.Mesh;
  const s = msg.shape;
  if (s.kind === "sphere") {
    mesh = new THREE.Mesh(new THREE.SphereGeometry(s.radius, 32, 16), material);
    mesh.position.set(...s.center);
  } else if (s.kind === "box") {
    mesh = new THREE.Mesh(
      new THREE.BoxGeometry(
        s.half_extents[0] * 2, s.half_extents[1] * 2, s.half_extents[2] * 2,
      ),
      material,
    );
    mesh.position.set(...s.center);
    const [w, x, y, z] = s.orientation;
    mesh.quaternion.set(x, y, z, w);
  } else {
    mesh = new THREE.Mesh(
      new THREE.PlaneGeometry(s.half_width * 2, s.half_height * 2), material,
    );
    applyPose(mesh, s.pose);
  }
  mesh.name = `object-${msg.id}`;
  mesh.userData.objectId = msg.id;
  mesh.userData.role = msg.role;
  mesh.userData.label = msg.label;
  return mesh;
}

export interface BuiltScene {
  group: THREE.Group;
  byId: Map<number, THREE.Mesh>;
}

export function buildScene(msg: SceneMsg): BuiltScene {
  const group = new THREE.Group();
  group.name = "scene-objects";
  const byId = new Map<number, THREE.Mesh>();
  for (const obj of msg.objects) {
    const mesh = buildObject(obj);
    byId.set(obj.id, mesh);
    group.add(mesh);
  }
  return { group, byId };
}
