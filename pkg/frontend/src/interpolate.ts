// Snapshot buffering and leaf interpolation: the engine broadcasts at
// 20 Hz, the canvas draws at display rate, so leaf positions are lerped
// between the two most recent snapshots (rendered one snapshot interval
// in the past for smoothness).

import type { StateMessage } from "./protocol.js";

export const STALE_AFTER_MS = 500;
const RENDER_DELAY_MS = 50;

interface Timed {
  atMs: number;
  state: StateMessage;
}

export class SnapshotBuffer {
  private prev: Timed | null = null;
  private last: Timed | null = null;

  push(state: StateMessage, nowMs: number): void {
    this.prev = this.last;
    this.last = { atMs: nowMs, state };
  }

  latest(): StateMessage | null {
    return this.last?.state ?? null;
  }

  ageMs(nowMs: number): number {
    return this.last === null ? Infinity : nowMs - this.last.atMs;
  }

  isStale(nowMs: number): boolean {
    return this.ageMs(nowMs) > STALE_AFTER_MS;
  }

  leavesAt(nowMs: number): number[] {
    if (this.last === null) return [0, 0, 0];
    if (this.prev === null) return this.last.state.leaves;
    const renderT = nowMs - RENDER_DELAY_MS;
    const span = this.last.atMs - this.prev.atMs;
    if (span <= 0) return this.last.state.leaves;
    const alpha = Math.min(Math.max((renderT - this.prev.atMs) / span, 0), 1);
    return this.prev.state.leaves.map(
      (a, i) => a + (this.last!.state.leaves[i] - a) * alpha,
    );
  }
}
