// Canvas drawing: three leaf arcs whose sweep follows deflection, a mode
// banner, rpm dials, the sync meter, and the power gauge with reservoir.

import type { StateMessage, SyncStatusName } from "./protocol.js";
import type { ConnectionState } from "./session.js";

export const MAX_SWEEP_RAD = (Math.PI / 3) * 1.6; // full-deflection arc sweep

export function leafSweepRad(deflection: number): number {
  return Math.min(Math.max(deflection, 0), 1.1) * MAX_SWEEP_RAD;
}

export function syncColor(status: SyncStatusName): string {
  switch (status) {
    case "InSync":
      return "#3fb950";
    case "OutOfSync":
      return "#f85149";
    default:
      return "#8b949e";
  }
}

export function gaugeFraction(watts: number, fullScaleW = 60): number {
  return Math.min(Math.max(watts / fullScaleW, 0), 1);
}

export interface ViewModel {
  connection: ConnectionState;
  stale: boolean;
  snapshot: StateMessage | null;
  interpolatedLeaves: number[];
  localBikers: number[];
}

export function bannerText(view: ViewModel): string {
  if (view.connection !== "live") {
    return view.connection === "retrying"
      ? "connection lost - retrying..."
      : "connecting...";
  }
  if (view.snapshot === null) return "waiting for state...";
  const overlay = view.snapshot.overlay;
  const label = overlay !== null ? `${view.snapshot.mode} / ${overlay}` : view.snapshot.mode;
  return view.stale ? `${label} (stale)` : label;
}

function drawLeaf(
  ctx: CanvasRenderingContext2D,
  cx: number,
  cy: number,
  radius: number,
  baseAngle: number,
  deflection: number,
  caption: string,
  pulsing: boolean,
): void {
  const sweep = leafSweepRad(deflection);
  ctx.beginPath();
  ctx.moveTo(cx, cy);
  ctx.arc(cx, cy, radius, baseAngle - sweep / 2, baseAngle + sweep / 2);
  ctx.closePath();
  ctx.fillStyle = pulsing ? "#d2a8ff" : "#7ee787";
  ctx.globalAlpha = 0.35 + 0.65 * Math.min(deflection, 1);
  ctx.fill();
  ctx.globalAlpha = 1;
  ctx.strokeStyle = "#30363d";
  ctx.stroke();
  ctx.fillStyle = "#c9d1d9";
  ctx.font = "12px sans-serif";
  ctx.textAlign = "center";
  const lx = cx + Math.cos(baseAngle) * (radius + 16);
  const ly = cy + Math.sin(baseAngle) * (radius + 16);
  ctx.fillText(caption, lx, ly);
}

function drawBar(
  ctx: CanvasRenderingContext2D,
  x: number,
  y: number,
  w: number,
  h: number,
  fraction: number,
  color: string,
  label: string,
): void {
  ctx.fillStyle = "#21262d";
  ctx.fillRect(x, y, w, h);
  ctx.fillStyle = color;
  ctx.fillRect(x, y, w * Math.min(Math.max(fraction, 0), 1), h);
  ctx.strokeStyle = "#30363d";
  ctx.strokeRect(x, y, w, h);
  ctx.fillStyle = "#c9d1d9";
  ctx.font = "11px sans-serif";
  ctx.textAlign = "left";
  ctx.fillText(label, x + w + 8, y + h - 2);
}

export function drawFrame(
  ctx: CanvasRenderingContext2D,
  view: ViewModel,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#0d1117";
  ctx.fillRect(0, 0, width, height);

  ctx.fillStyle = "#e6edf3";
  ctx.font = "bold 18px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(bannerText(view), width / 2, 28);

  const snap = view.snapshot;
  if (snap === null) return;

  const cx = width / 2;
  const cy = height * 0.52;
  const radius = Math.min(width, height) * 0.27;
  const angles = [-Math.PI / 2 - 0.9, -Math.PI / 2, -Math.PI / 2 + 0.9];
  const pulsing = snap.overlay === "Interrupt";
  view.interpolatedLeaves.forEach((deflection, i) => {
    drawLeaf(ctx, cx, cy, radius, angles[i], deflection, snap.kinds[i] ?? "", pulsing);
  });

  // sync meter
  ctx.fillStyle = syncColor(snap.sync.status);
  ctx.font = "13px sans-serif";
  ctx.textAlign = "left";
  ctx.fillText(
    `sync ${snap.sync.status} (spread ${(snap.sync.spread * 100).toFixed(1)}%)`,
    12,
    height - 64,
  );
  if (snap.overlay === "Reward") {
    ctx.fillStyle = "#d2a8ff";
    ctx.fillText("reward!", 12, height - 80);
  }

  // power gauge and reservoir
  drawBar(ctx, 12, height - 52, 160, 10, gaugeFraction(snap.power.supply),
    "#3fb950", `supply ${snap.power.supply.toFixed(1)} W`);
  drawBar(ctx, 12, height - 36, 160, 10, gaugeFraction(snap.power.demand),
    "#d29922", `demand ${snap.power.demand.toFixed(1)} W`);
  drawBar(ctx, 12, height - 20, 160, 10, snap.power.reservoir / 5.0,
    "#58a6ff", `reservoir ${snap.power.reservoir.toFixed(2)} Wh`);
  if (snap.power.scale < 1) {
    ctx.fillStyle = "#f85149";
    ctx.fillText(`brownout x${snap.power.scale.toFixed(2)}`, 190, height - 44);
  }

  // rpm dials
  ctx.textAlign = "right";
  snap.bikers.forEach((biker, i) => {
    const mine = view.localBikers.includes(biker.id);
    ctx.fillStyle = mine ? "#e6edf3" : "#8b949e";
    ctx.fillText(
      `biker ${biker.id}: ${biker.rpm.toFixed(0)} rpm`,
      width - 12,
      height - 64 + i * 16,
    );
  });

  ctx.fillStyle = "#484f58";
  ctx.textAlign = "right";
  ctx.font = "10px sans-serif";
  ctx.fillText(`t=${snap.t.toFixed(1)}s`, width - 12, 14);
}
