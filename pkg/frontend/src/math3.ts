// Minimal 3D math for the orthographic wireframe view.

export type Vec3 = [number, number, number];

export interface Camera {
  azimuth: number; // radians about the world z axis
  elevation: number; // radians above the xy plane
  zoom: number; // screen pixels per model unit
  center: Vec3; // model-space look-at point
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function midpoint(a: Vec3, b: Vec3): Vec3 {
  return [(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2];
}

/** Turntable orthographic view: at azimuth 0 / elevation 0 the camera
 * looks along +y with world z up on screen. */
export function project(p: Vec3, cam: Camera): { x: number; y: number; depth: number } {
  const [dx, dy, dz] = sub(p, cam.center);
  const ca = Math.cos(cam.azimuth);
  const sa = Math.sin(cam.azimuth);
  const ce = Math.cos(cam.elevation);
  const se = Math.sin(cam.elevation);
  const x = ca * dx + sa * dy;
  const y = sa * se * dx - ca * se * dy + ce * dz;
  const depth = -sa * ce * dx + ca * ce * dy + se * dz;
  return { x: x * cam.zoom, y: y * cam.zoom, depth };
}

export function bboxCenter(points: Vec3[]): Vec3 {
  if (points.length === 0) return [0, 0, 0];
  const lo: Vec3 = [...points[0]] as Vec3;
  const hi: Vec3 = [...points[0]] as Vec3;
  for (const p of points) {
    for (let i = 0; i < 3; i++) {
      lo[i] = Math.min(lo[i], p[i]);
      hi[i] = Math.max(hi[i], p[i]);
    }
  }
  return [(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2];
}

export function bboxDiagonal(points: Vec3[]): number {
  if (points.length === 0) return 1;
  const lo: Vec3 = [...points[0]] as Vec3;
  const hi: Vec3 = [...points[0]] as Vec3;
  for (const p of points) {
    for (let i = 0; i < 3; i++) {
      lo[i] = Math.min(lo[i], p[i]);
      hi[i] = Math.max(hi[i], p[i]);
    }
  }
  return Math.hypot(hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]) || 1;
}

/** Camera that fits the given points into a viewport. */
export function fitCamera(points: Vec3[], width: number, height: number): Camera {
  return {
    azimuth: 0.65,
    elevation: 0.5,
    zoom: (0.42 * Math.min(width, height)) / bboxDiagonal(points),
    center: bboxCenter(points),
  };
}
