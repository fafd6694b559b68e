import { describe, expect, it } from 'vitest';

import { DeviceRig, arcballQuat, dragDelta, spherePoint, wheelDelta } from '../src/input.js';
import { PlaygroundSession, Wire } from '../src/session.js';
import { Vec3, qRotate, vCross, vDot, vLen } from '../src/math.js';

describe('dragDelta', () => {
  it('maps a 100 px right-drag at 0.001 m/px to +0.1 m in x', () => {
    expect(dragDelta(100, 0, 'plane', 0.001)).toEqual([0.1, 0, 0]);
  });

  it('maps an upward drag to +y (screen y is flipped)', () => {
    expect(dragDelta(0, -50, 'plane', 0.001)).toEqual([0, 0.05, 0]);
  });

  it('moves only in z in depth mode', () => {
    const d = dragDelta(30, -40, 'depth', 0.001);
    expect(d[0]).toBe(0);
    expect(d[1]).toBe(0);
    expect(d[2]).toBeCloseTo(0.04, 12);
  });

  it('contributes no translation in rotate mode', () => {
    expect(dragDelta(80, 80, 'rotate', 0.001)).toEqual([0, 0, 0]);
  });

  it('wheel drives depth', () => {
    expect(wheelDelta(-120, 0.0004)).toEqual([0, 0, 0.048]);
  });
});

describe('arcball', () => {
  it('turns a vertical drag into a rotation about the screen-x axis', () => {
    const from = spherePoint(200, 200, 200, 200, 180);
    const to = spherePoint(200, 260, 200, 200, 180);
    const q = arcballQuat(from, to);

    // independent construction: both points on the unit sphere, rotation by
    // the angle between them about their (normalized) cross product
    const dot = vDot(from, to);
    const axis = vCross(from, to);
    const n = vLen(axis);
    const angle = Math.acos(dot);
    const expected = [
      Math.cos(angle / 2),
      (axis[0] / n) * Math.sin(angle / 2),
      (axis[1] / n) * Math.sin(angle / 2),
      (axis[2] / n) * Math.sin(angle / 2),
    ];
    for (let i = 0; i < 4; i++) expect(q[i]).toBeCloseTo(expected[i], 12);

    // dragging down tilts the top toward the viewer: +x axis, and nothing else
    expect(q[1]).toBeGreaterThan(0);
    expect(Math.abs(q[2])).toBeLessThan(1e-15);
    expect(Math.abs(q[3])).toBeLessThan(1e-15);
  });

  it('turns a horizontal drag into a rotation about the screen-y axis', () => {
    const q = arcballQuat(spherePoint(200, 200, 200, 200, 180), spherePoint(150, 200, 200, 200, 180));
    expect(Math.abs(q[1])).toBeLessThan(1e-15);
    expect(Math.abs(q[2])).toBeGreaterThan(0);
    expect(Math.abs(q[3])).toBeLessThan(1e-15);
  });

  it('rotates the sphere point onto its target', () => {
    const from = spherePoint(240, 180, 200, 200, 180);
    const to = spherePoint(170, 260, 200, 200, 180);
    const moved = qRotate(arcballQuat(from, to), from);
    for (let i = 0; i < 3; i++) expect(moved[i]).toBeCloseTo(to[i], 12);
  });

  it('clamps points outside the ball to the rim', () => {
    const p = spherePoint(600, 200, 200, 200, 180);
    expect(p[2]).toBe(0);
    expect(vLen(p)).toBeCloseTo(1, 12);
  });
});

class FakeWire implements Wire {
  log: string[] = [];
  send(data: string): void {
    this.log.push(data);
  }
}

function poses(wire: FakeWire): string[] {
  return wire.log.filter((m) => JSON.parse(m).kind === 'pose');
}

describe('idle suppression', () => {
  it('sends no pose messages without input', () => {
    const wire = new FakeWire();
    const session = new PlaygroundSession(wire);
    const rig = new DeviceRig();
    session.engage(rig.pose.p, rig.pose.q);
    for (let i = 0; i < 10; i++) session.pump(rig, i * 16.7);
    expect(poses(wire)).toHaveLength(0);
  });

  it('sends one pose per pump while input flows, then goes quiet', () => {
    const wire = new FakeWire();
    const session = new PlaygroundSession(wire);
    const rig = new DeviceRig();
    session.engage(rig.pose.p, rig.pose.q);

    rig.pointerDown(100, 100);
    rig.pointerMove(110, 100);
    session.pump(rig, 0);
    rig.pointerMove(120, 100);
    session.pump(rig, 16.7);
    expect(poses(wire)).toHaveLength(2);

    // several moves between two pumps coalesce into one message
    rig.pointerMove(130, 100);
    rig.pointerMove(140, 100);
    session.pump(rig, 33.4);
    expect(poses(wire)).toHaveLength(3);

    session.pump(rig, 50.1);
    session.pump(rig, 66.8);
    expect(poses(wire)).toHaveLength(3);

    const last = JSON.parse(wire.log[wire.log.length - 1]);
    expect(last.p[0]).toBeCloseTo(0.04, 12);
    expect(last.dt).toBeCloseTo(0.0167, 4);
  });

  it('stamps strictly increasing ticks', () => {
    const wire = new FakeWire();
    const session = new PlaygroundSession(wire);
    const rig = new DeviceRig();
    session.engage(rig.pose.p, rig.pose.q);
    rig.pointerDown(0, 0);
    for (let i = 1; i <= 5; i++) {
      rig.pointerMove(i * 10, 0);
      session.pump(rig, i * 16.7);
    }
    const ticks = poses(wire).map((m) => JSON.parse(m).tick);
    expect(ticks).toEqual([1, 2, 3, 4, 5]);
  });
});

describe('rig', () => {
  it('ignores moves while the pointer is up', () => {
    const rig = new DeviceRig();
    rig.pointerMove(50, 50);
    expect(rig.pose.p).toEqual([0, 0, 0]);
    expect(rig.consumeDirty()).toBe(false);
  });

  it('right-drag rotates regardless of mode', () => {
    const rig = new DeviceRig();
    rig.mode = 'plane';
    rig.pointerDown(200, 200);
    rig.pointerMove(200, 240, true);
    expect(rig.pose.p).toEqual([0, 0, 0]);
    expect(rig.pose.q[0]).toBeLessThan(1);
    expect(rig.pose.q[1]).not.toBe(0);
  });
});
