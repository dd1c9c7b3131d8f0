// Logarithmic slider mapping for scaling factors in [0.1, 10] with 1.0
// exactly in the middle.

export const LAMBDA_MIN = 0.1;
export const LAMBDA_MAX = 10;
export const SLIDER_STEPS = 1000;

export function sliderToLambda(position: number): number {
  const t = Math.min(Math.max(position / SLIDER_STEPS, 0), 1);
  return Math.pow(10, 2 * t - 1);
}

export function lambdaToSlider(lambda: number): number {
  const clamped = Math.min(Math.max(lambda, LAMBDA_MIN), LAMBDA_MAX);
  return Math.round(((Math.log10(clamped) + 1) / 2) * SLIDER_STEPS);
}
