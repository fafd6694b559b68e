// End-to-end fidelity: drive the playground session against the real
// service, then replay its outbound log raw and require identical frames.
// Needs python + the motionmap package installed (the repo this lives in).

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { ChildProcess, spawn } from 'node:child_process';
import { fileURLToPath } from 'node:url';
import path from 'node:path';
import WebSocket from 'ws';

import { DeviceRig } from '../src/input.js';
import { PlaygroundSession } from '../src/session.js';

const ROOT = path.resolve(path.dirname(fileURLToPath(import.meta.url)), '..', '..');
const PORT_A = 8941;
const PORT_B = 8942;

const procs: ChildProcess[] = [];

async function startService(port: number): Promise<void> {
  const proc = spawn('python3', ['-m', 'motionmap.cli', 'serve', '--port', String(port)], {
    cwd: ROOT,
    stdio: 'ignore',
  });
  procs.push(proc);
  const deadline = Date.now() + 20000;
  while (Date.now() < deadline) {
    try {
      const res = await fetch(`http://127.0.0.1:${port}/health`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error(`service on :${port} never became healthy`);
}

class Conn {
  private queue: string[] = [];
  private waiter: ((s: string) => void) | null = null;

  private constructor(private ws: WebSocket) {
    ws.on('message', (data) => {
      const text = data.toString();
      if (this.waiter) {
        const w = this.waiter;
        this.waiter = null;
        w(text);
      } else {
        this.queue.push(text);
      }
    });
  }

  static open(url: string): Promise<Conn> {
    return new Promise((resolve, reject) => {
      const ws = new WebSocket(url);
      ws.on('open', () => resolve(new Conn(ws)));
      ws.on('error', reject);
    });
  }

  send(data: string): void {
    this.ws.send(data);
  }

  next(): Promise<string> {
    if (this.queue.length > 0) return Promise.resolve(this.queue.shift()!);
    return new Promise((resolve) => {
      this.waiter = resolve;
    });
  }

  close(): void {
    this.ws.close();
  }
}

type Frame = { p: number[]; q: number[] };

// Drive one session method, then pump exactly one reply back into the
// session.  Every inbound protocol message gets exactly one reply, which is
// what makes this lockstep possible.
async function roundtrip(session: PlaygroundSession, conn: Conn): Promise<string> {
  const reply = await conn.next();
  session.onMessage(reply);
  return reply;
}

function displayedFrame(session: PlaygroundSession): Frame {
  const obj = session.state.object!;
  return { p: [...obj.p], q: [...obj.q] };
}

beforeAll(async () => {
  await Promise.all([startService(PORT_A), startService(PORT_B)]);
}, 40000);

afterAll(() => {
  for (const proc of procs) proc.kill();
});

describe('playground fidelity', () => {
  it('scripted input shows exactly the frames the service logged', async () => {
    const conn = await Conn.open(`ws://127.0.0.1:${PORT_A}/session`);
    const session = new PlaygroundSession(conn);
    const rig = new DeviceRig();
    const shown: Frame[] = [];

    const pumpStep = async (now: number) => {
      if (session.pump(rig, now)) {
        const reply = JSON.parse(await roundtrip(session, conn));
        if (reply.kind === 'object') shown.push(displayedFrame(session));
      }
    };

    session.configure({
      mapping: 'relative', gain_t: 'constant:1.5', gain_r: 'constant:2',
      ego_t: false, ego_r: false,
    });
    await roundtrip(session, conn);

    let now = 0;
    session.engage(rig.pose.p, rig.pose.q);
    await roundtrip(session, conn);
    shown.push(displayedFrame(session));

    // plane drag right and up
    rig.pointerDown(300, 300);
    for (let i = 1; i <= 8; i++) {
      rig.pointerMove(300 + i * 7, 300 - i * 3);
      await pumpStep((now += 16.7));
    }
    rig.pointerUp();

    // depth via wheel
    rig.wheel(-120);
    await pumpStep((now += 16.7));
    rig.wheel(240);
    await pumpStep((now += 16.7));

    // arcball rotation (right-drag)
    rig.pointerDown(300, 300);
    for (let i = 1; i <= 6; i++) {
      rig.pointerMove(300 + i * 5, 300 + i * 4, true);
      await pumpStep((now += 16.7));
    }
    rig.pointerUp();

    // clutch out, move while released (tracked but no object motion), clutch in
    session.disengage();
    await roundtrip(session, conn);
    rig.pointerDown(100, 100);
    rig.pointerMove(160, 90);
    await pumpStep((now += 16.7));
    rig.pointerUp();
    session.engage(rig.pose.p, rig.pose.q);
    await roundtrip(session, conn);
    shown.push(displayedFrame(session));

    rig.pointerDown(160, 90);
    for (let i = 1; i <= 5; i++) {
      rig.pointerMove(160 - i * 6, 90 + i * 2);
      await pumpStep((now += 16.7));
    }
    rig.pointerUp();
    session.disengage();
    await roundtrip(session, conn);
    conn.close();

    expect(shown.length).toBeGreaterThanOrEqual(20);

    // replay the exact outbound log against a fresh service instance and
    // collect its outbound frames: the service log
    const raw = await Conn.open(`ws://127.0.0.1:${PORT_B}/session`);
    const logged: Frame[] = [];
    for (const line of session.sent) {
      raw.send(line);
      const reply = JSON.parse(await raw.next());
      expect(reply.kind).not.toBe('error');
      if (reply.kind === 'object' || reply.ack === 'engage') {
        logged.push({ p: reply.p, q: reply.q });
      }
    }
    raw.close();

    expect(shown).toEqual(logged);
  }, 30000);

  it('switching the mapping mid-drag never jumps the object', async () => {
    const conn = await Conn.open(`ws://127.0.0.1:${PORT_A}/session`);
    const session = new PlaygroundSession(conn);
    const rig = new DeviceRig();
    const frames: Frame[] = [];

    session.configure({
      mapping: 'relative', gain_t: 'constant:1', gain_r: 'constant:1',
      ego_t: false, ego_r: false,
    });
    await roundtrip(session, conn);
    session.engage(rig.pose.p, rig.pose.q);
    await roundtrip(session, conn);
    frames.push(displayedFrame(session));

    let now = 0;
    const moveStep = async (dx: number, dy: number, rotate: boolean) => {
      rig.pointerMove(300 + dx, 300 + dy, rotate);
      if (session.pump(rig, (now += 16.7))) {
        const reply = JSON.parse(await roundtrip(session, conn));
        expect(reply.kind).toBe('object');
        frames.push(displayedFrame(session));
      }
    };

    rig.pointerDown(300, 300);
    let x = 0;
    let y = 0;
    for (let i = 0; i < 10; i++) await moveStep((x += 3), y, false);

    // the switch, mid-drag, with a gain change thrown in
    session.configure({ mapping: 'absolute', gain_t: 'constant:2', gain_r: 'constant:1' });
    await roundtrip(session, conn);

    for (let i = 0; i < 10; i++) await moveStep((x += 3), y, false);
    for (let i = 0; i < 8; i++) await moveStep(x, (y += 3), true);
    rig.pointerUp();
    session.disengage();
    await roundtrip(session, conn);
    conn.close();

    // one input step: 3 px plane drag at 0.001 m/px, max gain 2; rotation
    // steps are 3-4 px of arc on a 180 px ball at gain 1
    const maxStepT = 3 * 0.001 * 2 + 1e-9;
    const maxStepR = (5 / 180) * 1.5;
    for (let i = 1; i < frames.length; i++) {
      const [a, b] = [frames[i - 1], frames[i]];
      const jump = Math.hypot(b.p[0] - a.p[0], b.p[1] - a.p[1], b.p[2] - a.p[2]);
      expect(jump).toBeLessThanOrEqual(maxStepT);
      const dot = Math.abs(
        a.q[0] * b.q[0] + a.q[1] * b.q[1] + a.q[2] * b.q[2] + a.q[3] * b.q[3],
      );
      const angle = 2 * Math.acos(Math.min(1, dot));
      expect(angle).toBeLessThanOrEqual(maxStepR);
    }
  }, 30000);
});
