import { DeviceRig, InputMode } from './input.js';
import { PlaygroundSession } from './session.js';
import { renderScene } from './render.js';

const canvas = document.getElementById('scene') as HTMLCanvasElement;
const ctx = canvas.getContext('2d')!;

const rig = new DeviceRig();

const proto = location.protocol === 'https:' ? 'wss' : 'ws';
const ws = new WebSocket(`${proto}://${location.host}/session`);
const session = new PlaygroundSession(ws);

ws.onopen = () => {
  session.onOpen();
  syncControls();
};
ws.onclose = () => {
  session.onClose();
  syncControls();
};
ws.onmessage = (ev) => {
  session.onMessage(String(ev.data));
  syncControls();
};

// -- pointer input

let rotateButton = false;

canvas.addEventListener('pointerdown', (e) => {
  canvas.setPointerCapture(e.pointerId);
  rotateButton = e.button === 2;
  rig.pointerDown(e.offsetX, e.offsetY);
});
canvas.addEventListener('pointermove', (e) => {
  rig.pointerMove(e.offsetX, e.offsetY, rotateButton);
});
canvas.addEventListener('pointerup', () => rig.pointerUp());
canvas.addEventListener('contextmenu', (e) => e.preventDefault());
canvas.addEventListener('wheel', (e) => {
  e.preventDefault();
  rig.wheel(e.deltaY);
}, { passive: false });

// -- clutch on held Space, input modes on keys

const modeKeys: Record<string, InputMode> = { Digit1: 'plane', Digit2: 'depth', Digit3: 'rotate' };

window.addEventListener('keydown', (e) => {
  if (e.code === 'Space' && !e.repeat && session.state.connected) {
    e.preventDefault();
    session.engage(rig.pose.p, rig.pose.q);
  } else if (e.code in modeKeys) {
    rig.mode = modeKeys[e.code];
  } else if (e.code === 'KeyR') {
    rig.reset();
  }
});
window.addEventListener('keyup', (e) => {
  if (e.code === 'Space' && session.state.connected) {
    e.preventDefault();
    session.disengage();
  }
});

// -- config panel

const mappingSel = document.getElementById('mapping') as HTMLSelectElement;
const gainT = document.getElementById('gain-t') as HTMLInputElement;
const gainR = document.getElementById('gain-r') as HTMLInputElement;
const egoT = document.getElementById('ego-t') as HTMLInputElement;
const egoR = document.getElementById('ego-r') as HTMLInputElement;
const applyBtn = document.getElementById('apply') as HTMLButtonElement;
const controls = [mappingSel, gainT, gainR, egoT, egoR, applyBtn];

let panelDirty = false;
for (const el of [mappingSel, gainT, gainR, egoT, egoR]) {
  el.addEventListener('input', () => { panelDirty = true; });
}

// config switches are allowed mid-drag: the service re-engages in place so
// the object never jumps
applyBtn.addEventListener('click', () => {
  session.configure({
    mapping: mappingSel.value as 'absolute' | 'relative' | 'rate',
    gain_t: gainT.value.trim(),
    gain_r: gainR.value.trim(),
    ego_t: egoT.checked,
    ego_r: egoR.checked,
  });
  panelDirty = false;
});

function syncControls(): void {
  const connected = session.state.connected;
  for (const el of controls) el.disabled = !connected;
  const cfg = session.state.config;
  if (cfg && !panelDirty) {
    mappingSel.value = cfg.mapping;
    gainT.value = cfg.gain_t;
    gainR.value = cfg.gain_r;
    egoT.checked = cfg.ego_t;
    egoR.checked = cfg.ego_r;
  }
}
syncControls();

// -- loops: message cadence on a timer, drawing on rAF from the latest state

setInterval(() => {
  if (session.state.connected) session.pump(rig, performance.now());
}, 1000 / 60);

function frame(): void {
  renderScene(ctx, session.state, rig.mode, canvas.width, canvas.height);
  requestAnimationFrame(frame);
}
frame();
