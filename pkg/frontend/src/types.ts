// Wire types for the manipulation service API.

export interface GroupInfo {
  name: string;
  order: number;
}

export interface VertexRecord {
  id: number;
  p: [number, number, number];
}

export interface EdgeRecord {
  id: number;
  tail: number;
  head: number;
  kind: "internal" | "external";
  orbit_color: number | null;
  length: number;
  independent: boolean;
}

export interface DiagramPayload {
  revision: number;
  group: GroupInfo;
  vertices: VertexRecord[];
  edges: EdgeRecord[];
  independent_edges: number[];
  scaling: Record<string, number>;
}

export interface PreservationRecord {
  preserved: boolean;
  original_group: string;
  original_order: number;
  new_group: string;
  new_order: number;
}

export interface ManipulatePayload extends DiagramPayload {
  preserved: boolean;
  preservation?: PreservationRecord;
}

export interface OrbitRecord {
  color: number;
  edges: number[];
  length_range: [number, number];
}

export interface GdofRecord {
  e_int: number;
  rows_of_s: number;
  m_raw: number;
  m_sym: number;
  reduction: number;
  independent_edges_raw: number[];
  independent_edges_sym: number[];
}

export interface AnalysisPayload {
  revision?: number;
  group: GroupInfo & { operations: unknown[] };
  orbits: OrbitRecord[];
  gdof: GdofRecord;
  warnings: string[];
}
