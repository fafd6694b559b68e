// Canvas renderer.  Simple perspective projection, wireframe shapes.
// World axes: +x right, +y up, +z toward the viewer.

import { Quat, Vec3, qRotate, vAdd } from './math.js';
import { InputMode } from './input.js';
import { UiState } from './session.js';

const CAM_Z = 3.2;
const FOCAL = 620;

interface Screen {
  x: number;
  y: number;
  depth: number;
}

function project(p: Vec3, w: number, h: number): Screen {
  const d = CAM_Z - p[2];
  const s = FOCAL / Math.max(0.2, d);
  return { x: w / 2 + p[0] * s, y: h / 2 - p[1] * s, depth: d };
}

function boxCorners(half: Vec3): Vec3[] {
  const [hx, hy, hz] = half;
  const out: Vec3[] = [];
  for (const sx of [-1, 1]) for (const sy of [-1, 1]) for (const sz of [-1, 1]) {
    out.push([sx * hx, sy * hy, sz * hz]);
  }
  return out;
}

const BOX_EDGES: [number, number][] = [
  [0, 1], [2, 3], [4, 5], [6, 7],
  [0, 2], [1, 3], [4, 6], [5, 7],
  [0, 4], [1, 5], [2, 6], [3, 7],
];

function strokeBox(
  ctx: CanvasRenderingContext2D,
  p: Vec3, q: Quat, half: Vec3,
  w: number, h: number,
  style: string, width: number, dash: number[],
): void {
  const pts = boxCorners(half).map((c) => project(vAdd(p, qRotate(q, c)), w, h));
  ctx.strokeStyle = style;
  ctx.lineWidth = width;
  ctx.setLineDash(dash);
  ctx.beginPath();
  for (const [a, b] of BOX_EDGES) {
    ctx.moveTo(pts[a].x, pts[a].y);
    ctx.lineTo(pts[b].x, pts[b].y);
  }
  ctx.stroke();
  ctx.setLineDash([]);
}

function axisTriad(
  ctx: CanvasRenderingContext2D, p: Vec3, q: Quat, len: number, w: number, h: number,
): void {
  const o = project(p, w, h);
  const axes: [Vec3, string][] = [
    [[len, 0, 0], '#e05555'],
    [[0, len, 0], '#55c060'],
    [[0, 0, len], '#5580e0'],
  ];
  ctx.lineWidth = 2;
  for (const [a, color] of axes) {
    const tip = project(vAdd(p, qRotate(q, a)), w, h);
    ctx.strokeStyle = color;
    ctx.beginPath();
    ctx.moveTo(o.x, o.y);
    ctx.lineTo(tip.x, tip.y);
    ctx.stroke();
  }
}

function deadbandThreshold(spec: string | undefined): number | null {
  if (!spec || !spec.startsWith('deadband:')) return null;
  const t = Number(spec.slice('deadband:'.length));
  return Number.isFinite(t) && t > 0 ? t : null;
}

export function renderScene(
  ctx: CanvasRenderingContext2D,
  state: UiState,
  mode: InputMode,
  w: number,
  h: number,
): void {
  ctx.fillStyle = '#14171c';
  ctx.fillRect(0, 0, w, h);

  // faint ground grid for depth reference
  ctx.strokeStyle = '#242a33';
  ctx.lineWidth = 1;
  ctx.beginPath();
  for (let i = -4; i <= 4; i++) {
    const a = project([i * 0.25, -0.55, -1], w, h);
    const b = project([i * 0.25, -0.55, 1], w, h);
    ctx.moveTo(a.x, a.y);
    ctx.lineTo(b.x, b.y);
    const c = project([-1, -0.55, i * 0.25], w, h);
    const d = project([1, -0.55, i * 0.25], w, h);
    ctx.moveTo(c.x, c.y);
    ctx.lineTo(d.x, d.y);
  }
  ctx.stroke();

  // start-pose ghost first, so the live object draws over it
  if (state.ghost) {
    strokeBox(ctx, state.ghost.p, state.ghost.q, [0.22, 0.22, 0.22], w, h, '#4a5262', 1, [5, 5]);
  }

  if (state.object) {
    strokeBox(ctx, state.object.p, state.object.q, [0.22, 0.22, 0.22], w, h, '#e8b84f', 2.5, []);
    axisTriad(ctx, state.object.p, state.object.q, 0.3, w, h);
  }

  // deadband ring around the engage point of the device proxy
  const threshold = deadbandThreshold(state.config?.gain_t);
  if (threshold !== null && state.engaged && state.engageDevice) {
    const anchor = state.engageDevice;
    const c = project(anchor, w, h);
    const rim = project([anchor[0] + threshold, anchor[1], anchor[2]], w, h);
    const r = Math.abs(rim.x - c.x);
    const dx = state.device.p[0] - anchor[0];
    const dy = state.device.p[1] - anchor[1];
    const dz = state.device.p[2] - anchor[2];
    const inside = Math.hypot(dx, dy, dz) <= threshold;
    ctx.strokeStyle = inside ? '#d8684f' : '#3d4654';
    ctx.lineWidth = inside ? 2 : 1;
    ctx.setLineDash([3, 4]);
    ctx.beginPath();
    ctx.arc(c.x, c.y, r, 0, Math.PI * 2);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  // device proxy: a phone-shaped slab
  const dev = state.device;
  strokeBox(ctx, dev.p, dev.q, [0.085, 0.15, 0.012], w, h,
    state.engaged ? '#6fd3e0' : '#44707a', state.engaged ? 2 : 1.5, []);

  // HUD
  ctx.font = '13px ui-monospace, monospace';
  ctx.fillStyle = '#9aa5b5';
  const cfg = state.config;
  const lines = [
    cfg
      ? `${cfg.mapping}  t:${cfg.gain_t}${cfg.ego_t ? ' (ego)' : ''}  r:${cfg.gain_r}${cfg.ego_r ? ' (ego)' : ''}`
      : 'waiting for config…',
    `mode: ${mode}   ${state.engaged ? 'ENGAGED' : 'released (hold Space)'}`,
  ];
  if (state.gains) {
    lines.push(`k_t=${state.gains.t.toFixed(3)}  k_r=${state.gains.r.toFixed(3)}`);
  }
  lines.forEach((line, i) => ctx.fillText(line, 12, 22 + i * 18));

  // compliance lamp: neutral until the service has graded a step
  const lamp = state.compliant;
  const color = lamp === null ? '#5a6372' : lamp.t && lamp.r ? '#5dc06c' : '#d8684f';
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(w - 24, 24, 8, 0, Math.PI * 2);
  ctx.fill();
  if (lamp !== null && !(lamp.t && lamp.r)) {
    ctx.fillStyle = '#d8684f';
    ctx.fillText(`step not 1:1 (${lamp.t ? '' : 't'}${lamp.r ? '' : 'r'})`, w - 150, 46);
  }

  if (state.lastError) {
    ctx.fillStyle = '#d8684f';
    ctx.fillText(state.lastError.slice(0, 90), 12, h - 14);
  }
  if (!state.connected) {
    ctx.fillStyle = '#d8684f';
    ctx.font = '16px ui-monospace, monospace';
    ctx.fillText('disconnected', w / 2 - 50, h / 2);
  }
}
