import { describe, expect, it } from "vitest";

import { buildPalette, colorForOrbit } from "../src/palette.js";

describe("orbit palette", () => {
  it("is stable for a given index", () => {
    expect(colorForOrbit(3)).toBe(colorForOrbit(3));
  });

  it("is bijective over realistic orbit counts", () => {
    const palette = buildPalette(64);
    expect(new Set(palette).size).toBe(64);
  });

  it("indexes match the orbit partition order", () => {
    const palette = buildPalette(5);
    for (let i = 0; i < 5; i++) {
      expect(palette[i]).toBe(colorForOrbit(i));
    }
  });

  it("emits valid hsl() strings", () => {
    for (let i = 0; i < 20; i++) {
      expect(colorForOrbit(i)).toMatch(/^hsl\(\d+(\.\d+)?, 82%, \d+%\)$/);
    }
  });
});
