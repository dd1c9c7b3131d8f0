import { describe, expect, it } from "vitest";

import {
  LAMBDA_MAX,
  LAMBDA_MIN,
  SLIDER_STEPS,
  lambdaToSlider,
  sliderToLambda,
} from "../src/sliders.js";

describe("log slider mapping", () => {
  it("endpoints hit the lambda range", () => {
    expect(sliderToLambda(0)).toBeCloseTo(LAMBDA_MIN, 12);
    expect(sliderToLambda(SLIDER_STEPS)).toBeCloseTo(LAMBDA_MAX, 12);
  });

  it("midpoint is exactly 1", () => {
    expect(sliderToLambda(SLIDER_STEPS / 2)).toBeCloseTo(1.0, 12);
    expect(lambdaToSlider(1.0)).toBe(SLIDER_STEPS / 2);
  });

  it("round trips within slider resolution", () => {
    for (const lambda of [0.1, 0.25, 0.5, 1, 2, 3.7, 10]) {
      const back = sliderToLambda(lambdaToSlider(lambda));
      expect(back).toBeGreaterThan(lambda * 0.99);
      expect(back).toBeLessThan(lambda * 1.01);
    }
  });

  it("clamps out-of-range values", () => {
    expect(lambdaToSlider(0.001)).toBe(0);
    expect(lambdaToSlider(1e6)).toBe(SLIDER_STEPS);
    expect(sliderToLambda(-50)).toBeCloseTo(LAMBDA_MIN, 12);
  });

  it("is monotone", () => {
    let prev = 0;
    for (let pos = 0; pos <= SLIDER_STEPS; pos += 50) {
      const v = sliderToLambda(pos);
      expect(v).toBeGreaterThan(prev);
      prev = v;
    }
  });
});
