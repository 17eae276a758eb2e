import { describe, expect, it } from "vitest";

import { SliderPedaler, TapInput } from "../src/input.js";

describe("TapInput", () => {
  it("one keydown is one revolution", () => {
    const tap = new TapInput("a");
    expect(tap.keydown("a", false)).toBe(true);
    tap.keyup("a");
    expect(tap.keydown("a", false)).toBe(true);
  });

  it("ignores auto-repeat and held keys", () => {
    const tap = new TapInput("a");
    expect(tap.keydown("a", false)).toBe(true);
    expect(tap.keydown("a", true)).toBe(false);
    expect(tap.keydown("a", false)).toBe(false); // still held
    tap.keyup("a");
    expect(tap.keydown("a", false)).toBe(true);
  });

  it("ignores other keys", () => {
    const tap = new TapInput("l");
    expect(tap.keydown("a", false)).toBe(false);
  });
});

describe("SliderPedaler", () => {
  it("slider at 0 emits nothing", () => {
    const pedaler = new SliderPedaler();
    pedaler.setRpm(0, 0);
    for (let t = 0; t < 5000; t += 16) {
      expect(pedaler.poll(t)).toBe(0);
    }
  });

  it("90 rpm pedals every 2/3 s", () => {
    const pedaler = new SliderPedaler();
    pedaler.setRpm(90, 0);
    const times: number[] = [];
    for (let t = 0; t <= 4000; t += 10) {
      if (pedaler.poll(t) > 0) times.push(t);
    }
    expect(times.length).toBe(6);
    for (let i = 1; i < times.length; i += 1) {
      expect(times[i] - times[i - 1]).toBeCloseTo(60000 / 90, -2);
    }
  });

  it("a long stall yields one catch-up pulse, not a burst", () => {
    const pedaler = new SliderPedaler();
    pedaler.setRpm(120, 0);
    expect(pedaler.poll(10_000)).toBe(1);
  });

  it("dragging the slider does not starve pulses", () => {
    const pedaler = new SliderPedaler();
    pedaler.setRpm(60, 0);
    // nudge the value every 100 ms like a drag
    let pulses = 0;
    for (let t = 0; t <= 3000; t += 100) {
      pedaler.setRpm(60 + (t % 3) , t);
      pulses += pedaler.poll(t);
    }
    expect(pulses).toBeGreaterThanOrEqual(2);
  });
});
