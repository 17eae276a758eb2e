// Biker input: key taps (one tap = one crank revolution) and a virtual
// cadence slider that pedals on a timer.

export type InputMode = { kind: "tap"; key: string } | { kind: "slider" };

// Filters auto-repeat so holding a key down doesn't spin the cranks.
export class TapInput {
  private down = false;

  constructor(readonly key: string) {}

  keydown(key: string, repeat: boolean): boolean {
    if (key !== this.key || repeat || this.down) return false;
    this.down = true;
    return true; // one revolution
  }

  keyup(key: string): void {
    if (key === this.key) this.down = false;
  }
}

// Emits pedal pulses spaced 60/rpm seconds apart, driven by polling from
// the render loop. rpm 0 stops the cranks. A long stall (tab hidden)
// yields at most one catch-up pulse instead of a burst.
export class SliderPedaler {
  private rpm = 0;
  private nextAtMs: number | null = null;

  setRpm(rpm: number, nowMs: number): void {
    const clamped = Math.max(0, rpm);
    if (clamped === this.rpm) return;
    this.rpm = clamped;
    if (clamped <= 0) {
      this.nextAtMs = null;
    } else {
      // dragging the slider must not keep pushing the next pulse away
      const next = nowMs + 60000 / clamped;
      this.nextAtMs = this.nextAtMs === null ? next : Math.min(this.nextAtMs, next);
    }
  }

  currentRpm(): number {
    return this.rpm;
  }

  poll(nowMs: number): number {
    if (this.rpm <= 0 || this.nextAtMs === null || nowMs < this.nextAtMs) {
      return 0;
    }
    const spacing = 60000 / this.rpm;
    const missed = Math.floor((nowMs - this.nextAtMs) / spacing);
    this.nextAtMs += (missed + 1) * spacing;
    return Math.min(missed + 1, 1);
  }
}
