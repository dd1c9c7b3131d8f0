// Thin typed client for the manipulation service.

import type { AnalysisPayload, DiagramPayload, ManipulatePayload } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(`API error ${status}`);
  }
}

async function parseOrThrow<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail: unknown = null;
    try {
      detail = (await resp.json()).detail;
    } catch {
      /* no body */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class Client {
  constructor(readonly base: string = "") {}

  fetchDiagram(): Promise<DiagramPayload> {
    return fetch(`${this.base}/api/diagram`).then((r) => parseOrThrow(r));
  }

  fetchAnalysis(): Promise<AnalysisPayload> {
    return fetch(`${this.base}/api/analysis`).then((r) => parseOrThrow(r));
  }

  manipulate(scaling: Record<string, number>): Promise<ManipulatePayload> {
    return fetch(`${this.base}/api/manipulate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(scaling),
    }).then((r) => parseOrThrow(r));
  }

  reset(): Promise<DiagramPayload> {
    return fetch(`${this.base}/api/reset`, { method: "POST" }).then((r) =>
      parseOrThrow(r),
    );
  }
}
