// Mouse/keyboard to 6-DOF device proxy.  2-DOF input can't drive six axes at
// once, so movement is modal: a plane-translate mode (drag = screen x/y), a
// depth mode (vertical drag = z, wheel does z in any mode), and an arcball
// rotate mode.  Screen y grows downward, world y grows upward.

import { Quat, Vec3, qAxisAngle, qMul, qNormalize, qRotate, vCross, vDot } from './math.js';

export type InputMode = 'plane' | 'depth' | 'rotate';

export function dragDelta(dx: number, dy: number, mode: InputMode, sensitivity: number): Vec3 {
  if (mode === 'plane') return [dx * sensitivity, 0 - dy * sensitivity, 0];
  if (mode === 'depth') return [0, 0, 0 - dy * sensitivity];
  return [0, 0, 0];
}

export function wheelDelta(deltaY: number, sensitivity: number): Vec3 {
  // wheel away from you pushes the proxy away from the camera
  return [0, 0, 0 - deltaY * sensitivity];
}

// Project a screen point onto the arcball sphere (radius in px, centered on
// the drag origin).  Inside the ball the point lifts onto the sphere;
// outside it clamps to the rim.
export function spherePoint(x: number, y: number, cx: number, cy: number, radius: number): Vec3 {
  const px = (x - cx) / radius;
  const py = -(y - cy) / radius;
  const rr = px * px + py * py;
  if (rr <= 1) return [px, py, Math.sqrt(1 - rr)];
  const n = Math.sqrt(rr);
  return [px / n, py / n, 0];
}

export function arcballQuat(from: Vec3, to: Vec3): Quat {
  const axis = vCross(from, to);
  const d = Math.min(1, Math.max(-1, vDot(from, to)));
  return qAxisAngle(axis, Math.acos(d));
}

export interface ProxyPose {
  p: Vec3;
  q: Quat;
}

// The simulated device.  Integrates input events into a pose and raises a
// dirty flag; whoever drives the message cadence consumes the flag so idle
// frames send nothing.
export class DeviceRig {
  pose: ProxyPose = { p: [0, 0, 0], q: [1, 0, 0, 0] };
  mode: InputMode = 'plane';
  sensitivity = 0.001; // m per px
  wheelSensitivity = 0.0004;
  arcRadius = 180; // px

  private dragging = false;
  private last: [number, number] = [0, 0];
  private arcAnchor: [number, number] = [0, 0];
  private dirty = false;

  pointerDown(x: number, y: number): void {
    this.dragging = true;
    this.last = [x, y];
    this.arcAnchor = [x, y];
  }

  pointerUp(): void {
    this.dragging = false;
  }

  pointerMove(x: number, y: number, forceRotate = false): void {
    if (!this.dragging) return;
    const [lx, ly] = this.last;
    if (x === lx && y === ly) return;
    const mode = forceRotate ? 'rotate' : this.mode;
    if (mode === 'rotate') {
      const [ax, ay] = this.arcAnchor;
      const a = spherePoint(lx, ly, ax, ay, this.arcRadius);
      const b = spherePoint(x, y, ax, ay, this.arcRadius);
      const dq = arcballQuat(a, b);
      this.pose.q = qNormalize(qMul(dq, this.pose.q));
    } else {
      const d = dragDelta(x - lx, y - ly, mode, this.sensitivity);
      this.pose.p = [this.pose.p[0] + d[0], this.pose.p[1] + d[1], this.pose.p[2] + d[2]];
    }
    this.last = [x, y];
    this.dirty = true;
  }

  wheel(deltaY: number): void {
    const d = wheelDelta(deltaY, this.wheelSensitivity);
    this.pose.p = [this.pose.p[0] + d[0], this.pose.p[1] + d[1], this.pose.p[2] + d[2]];
    this.dirty = true;
  }

  reset(): void {
    this.pose = { p: [0, 0, 0], q: [1, 0, 0, 0] };
    this.dirty = true;
  }

  // one-shot: true if any input arrived since the last call
  consumeDirty(): boolean {
    const was = this.dirty;
    this.dirty = false;
    return was;
  }

  // where the proxy's face normal points, for drawing
  facing(): Vec3 {
    return qRotate(this.pose.q, [0, 0, 1]);
  }
}
