// Client side of the /session protocol.  All object math happens on the
// service; this class only sends input poses and mirrors what comes back.

import { DeviceRig } from './input.js';
import {
  ConfigAck,
  ConfigMsg,
  ErrorReply,
  ObjectReply,
  Outbound,
  Reply,
  parseReply,
} from './protocol.js';
import { Quat, Vec3 } from './math.js';

export interface Wire {
  send(data: string): void;
}

export interface ServerConfig {
  mapping: string;
  gain_t: string;
  gain_r: string;
  ego_t: boolean;
  ego_r: boolean;
  tol: number;
}

export interface UiState {
  connected: boolean;
  engaged: boolean;
  device: { p: Vec3; q: Quat };
  object: { p: Vec3; q: Quat } | null;
  ghost: { p: Vec3; q: Quat } | null; // object pose at engage, for nulling awareness
  engageDevice: Vec3 | null; // device position at engage, anchors the deadband ring
  config: ServerConfig | null;
  gains: { t: number; r: number } | null;
  compliant: { t: boolean; r: boolean } | null;
  lastError: string | null;
}

function freshState(): UiState {
  return {
    connected: false,
    engaged: false,
    device: { p: [0, 0, 0], q: [1, 0, 0, 0] },
    object: null,
    ghost: null,
    engageDevice: null,
    config: null,
    gains: null,
    compliant: null,
    lastError: null,
  };
}

const DEFAULT_DT = 1 / 60;

export class PlaygroundSession {
  state: UiState = freshState();
  sent: string[] = []; // every frame that went out, for replay checks
  private wire: Wire;
  private tick = 0;
  private lastSendMs: number | null = null;

  constructor(wire: Wire) {
    this.wire = wire;
  }

  // -- outbound

  private send(msg: Outbound): void {
    const data = JSON.stringify(msg);
    this.sent.push(data);
    if (this.sent.length > 20000) this.sent.splice(0, 10000);
    this.wire.send(data);
  }

  configure(partial: Omit<ConfigMsg, 'kind'>): void {
    this.send({ kind: 'config', ...partial });
  }

  engage(p: Vec3, q: Quat): void {
    this.send({ kind: 'engage', p: [...p], q: [...q] });
    this.state.engaged = true;
    this.state.engageDevice = [...p];
  }

  disengage(): void {
    this.send({ kind: 'disengage' });
    this.state.engaged = false;
  }

  sendPose(p: Vec3, q: Quat, dt: number): void {
    this.tick += 1;
    this.send({ kind: 'pose', tick: this.tick, p: [...p], q: [...q], dt });
  }

  // Cadence driver: call at a fixed rate.  Sends the proxy pose only when
  // input actually arrived since the last call, with the measured dt.
  pump(rig: DeviceRig, nowMs: number): boolean {
    this.state.device = { p: [...rig.pose.p], q: [...rig.pose.q] };
    if (!rig.consumeDirty()) return false;
    let dt = DEFAULT_DT;
    if (this.lastSendMs !== null) {
      dt = Math.min(0.25, Math.max(1 / 240, (nowMs - this.lastSendMs) / 1000));
    }
    this.lastSendMs = nowMs;
    this.sendPose(rig.pose.p, rig.pose.q, dt);
    return true;
  }

  // -- inbound

  onOpen(): void {
    this.state.connected = true;
    // empty partial update: the ack echoes the service's effective config
    this.configure({});
  }

  onClose(): void {
    this.state = { ...freshState(), config: this.state.config };
  }

  onMessage(data: string): void {
    const reply = parseReply(data);
    if (reply === null) return;
    switch (reply.kind) {
      case 'object':
        this.applyObject(reply);
        break;
      case 'ack':
        if (reply.ack === 'engage') {
          const pose = { p: reply.p as Vec3, q: reply.q as Quat };
          this.state.object = pose;
          this.state.ghost = { p: [...pose.p], q: [...pose.q] };
          this.state.compliant = null;
          this.state.gains = null;
        } else if (reply.ack === 'config') {
          this.applyConfig(reply);
        }
        this.state.lastError = null;
        break;
      case 'error':
        this.applyError(reply);
        break;
    }
  }

  private applyObject(reply: ObjectReply): void {
    this.state.object = { p: reply.p as Vec3, q: reply.q as Quat };
    this.state.gains = { t: reply.k_t, r: reply.k_r };
    this.state.compliant = { t: reply.compliant_t, r: reply.compliant_r };
    this.state.lastError = null;
  }

  private applyConfig(ack: ConfigAck): void {
    this.state.config = {
      mapping: ack.mapping,
      gain_t: ack.gain_t,
      gain_r: ack.gain_r,
      ego_t: ack.ego_t,
      ego_r: ack.ego_r,
      tol: ack.tol,
    };
  }

  private applyError(reply: ErrorReply): void {
    // errors are answered in-band and never close the socket; surface the
    // message and keep going
    this.state.lastError = `${reply.error}: ${reply.message}`;
  }
}
