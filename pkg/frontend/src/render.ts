// Wireframe rendering: pure projection of the diagram into colored screen
// segments, plus a thin canvas painter over it.

import type { Camera, Vec3 } from "./math3.js";
import { midpoint, project } from "./math3.js";
import { EXTERNAL_COLOR } from "./palette.js";
import type { DiagramPayload } from "./types.js";

export interface Segment {
  edgeId: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  depth: number;
  color: string;
  independent: boolean;
  label?: { text: string; x: number; y: number };
}

/** Project every edge; painter's order by depth, labels on independent edges. */
export function projectSegments(
  diagram: DiagramPayload,
  palette: string[],
  cam: Camera,
): Segment[] {
  const pos = new Map<number, Vec3>();
  for (const v of diagram.vertices) pos.set(v.id, v.p);
  const segments: Segment[] = [];
  for (const e of diagram.edges) {
    const a = pos.get(e.tail);
    const b = pos.get(e.head);
    if (!a || !b) continue;
    const pa = project(a, cam);
    const pb = project(b, cam);
    const color =
      e.orbit_color === null ? EXTERNAL_COLOR : palette[e.orbit_color];
    const seg: Segment = {
      edgeId: e.id,
      x1: pa.x,
      y1: pa.y,
      x2: pb.x,
      y2: pb.y,
      depth: (pa.depth + pb.depth) / 2,
      color,
      independent: e.independent,
    };
    if (e.independent) {
      const m = project(midpoint(a, b), cam);
      seg.label = { text: `e${e.id}`, x: m.x, y: m.y };
    }
    segments.push(seg);
  }
  segments.sort((s, t) => s.depth - t.depth);
  return segments;
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  segments: Segment[],
): void {
  ctx.clearRect(0, 0, width, height);
  const cx = width / 2;
  const cy = height / 2;
  for (const s of segments) {
    ctx.strokeStyle = s.color;
    ctx.lineWidth = s.independent ? 3.5 : 2;
    ctx.beginPath();
    ctx.moveTo(cx + s.x1, cy - s.y1);
    ctx.lineTo(cx + s.x2, cy - s.y2);
    ctx.stroke();
  }
  ctx.font = "12px ui-monospace, monospace";
  ctx.textAlign = "center";
  for (const s of segments) {
    if (!s.label) continue;
    const x = cx + s.label.x;
    const y = cy - s.label.y;
    ctx.fillStyle = "#111";
    ctx.fillRect(x - 13, y - 9, 26, 14);
    ctx.fillStyle = "#fff";
    ctx.fillText(s.label.text, x, y + 2);
  }
}
