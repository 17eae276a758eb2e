// Console entry point. URL parameters:
//   ?bikers=2            local bikers (1-4)
//   &mode=tap|slider     input mode for all local bikers
//   &keys=a,l,q,p        tap keys per biker
//   &ws=ws://host/ws     bridge endpoint (default: same host, /ws)

import { TapInput, SliderPedaler } from "./input.js";
import { SnapshotBuffer } from "./interpolate.js";
import { ConsoleSession, webSocketTransport, MAX_LOCAL_BIKERS } from "./session.js";
import { drawFrame, type ViewModel } from "./render.js";

const params = new URLSearchParams(location.search);
const bikerCount = Math.min(
  Math.max(parseInt(params.get("bikers") ?? "2", 10) || 2, 1),
  MAX_LOCAL_BIKERS,
);
const mode = params.get("mode") === "slider" ? "slider" : "tap";
const keys = (params.get("keys") ?? "a,l,q,p").split(",");
const wsUrl = params.get("ws") ?? `ws://${location.host}/ws`;

const bikerIds = Array.from({ length: bikerCount }, (_, i) => i + 1);
const canvas = document.getElementById("stage") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const controls = document.getElementById("controls")!;
const buffer = new SnapshotBuffer();

const session = new ConsoleSession(webSocketTransport(wsUrl), bikerIds, {
  onState: (state) => buffer.push(state, performance.now()),
  onError: (message) => console.warn("engine:", message),
});

const taps = new Map<number, TapInput>();
const sliders = new Map<number, SliderPedaler>();

bikerIds.forEach((biker, i) => {
  const row = document.createElement("div");
  row.className = "biker-row";
  if (mode === "tap") {
    const key = keys[i] ?? String(i + 1);
    taps.set(biker, new TapInput(key));
    row.textContent = `biker ${biker}: tap "${key}" (one tap = one crank revolution)`;
  } else {
    const pedaler = new SliderPedaler();
    sliders.set(biker, pedaler);
    const label = document.createElement("label");
    label.textContent = `biker ${biker} cadence `;
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "150";
    slider.value = "0";
    const readout = document.createElement("span");
    readout.textContent = "0 rpm";
    slider.addEventListener("input", () => {
      pedaler.setRpm(Number(slider.value), performance.now());
      readout.textContent = `${slider.value} rpm`;
    });
    label.append(slider, readout);
    row.append(label);
  }
  controls.append(row);
});

if (mode === "tap") {
  window.addEventListener("keydown", (event) => {
    for (const [biker, tap] of taps) {
      if (tap.keydown(event.key, event.repeat)) session.pedal(biker);
    }
  });
  window.addEventListener("keyup", (event) => {
    for (const tap of taps.values()) tap.keyup(event.key);
  });
}

function frame(): void {
  const now = performance.now();
  for (const [biker, pedaler] of sliders) {
    if (pedaler.poll(now) > 0) session.pedal(biker);
  }
  const view: ViewModel = {
    connection: session.state,
    stale: buffer.isStale(now),
    snapshot: buffer.latest(),
    interpolatedLeaves: buffer.leavesAt(now),
    localBikers: bikerIds,
  };
  drawFrame(ctx, view, canvas.width, canvas.height);
  requestAnimationFrame(frame);
}

session.start();
requestAnimationFrame(frame);
window.addEventListener("beforeunload", () => {
  for (const biker of bikerIds) session.leave(biker);
  session.stop();
});
