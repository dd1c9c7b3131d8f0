// Stable orbit colors: one hue per orbit index, spread by the golden angle
// so neighbouring indices stay distinguishable for any orbit count.

const GOLDEN_ANGLE = 137.50776405003785;

export function colorForOrbit(index: number): string {
  const hue = ((index * GOLDEN_ANGLE) % 360 + 360) % 360;
  const light = 42 + 14 * ((index * 7919) % 3); // three lightness bands
  return `hsl(${hue.toFixed(2)}, 82%, ${light}%)`;
}

export const EXTERNAL_COLOR = "hsl(0, 0%, 62%)";

/** color per orbit index, bijective with the server's orbit partition */
export function buildPalette(orbitCount: number): string[] {
  return Array.from({ length: orbitCount }, (_, i) => colorForOrbit(i));
}
