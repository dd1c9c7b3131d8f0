// UI state machine: slider edits are debounced, sent through a
// single-in-flight gate, and only server-confirmed state is rendered.

import { ApiError, Client } from "./api.js";
import { RequestGate, debounce } from "./gate.js";
import { buildPalette } from "./palette.js";
import { BadgeState, badgeFor, reportLines } from "./report.js";
import type {
  AnalysisPayload,
  DiagramPayload,
  GroupInfo,
  ManipulatePayload,
} from "./types.js";

export interface ViewHooks {
  renderDiagram(diagram: DiagramPayload, palette: string[]): void;
  renderBadge(badge: BadgeState, preserved: boolean): void;
  renderReport(lines: [string, string][]): void;
  setSlider(edge: number, lambda: number): void;
  buildSliders(edges: number[], lambdas: Record<number, number>): void;
  showBanner(message: string | null): void;
}

export class Controller {
  base: GroupInfo = { name: "?", order: 0 };
  current: GroupInfo = { name: "?", order: 0 };
  lambdas: Record<number, number> = {};
  palette: string[] = [];
  diagram: DiagramPayload | null = null;
  analysis: AnalysisPayload | null = null;

  private pendingTargets: Record<number, number> = {};
  private readonly gate: RequestGate<Record<string, number>, ManipulatePayload>;
  private readonly flushSoon: () => void;

  constructor(
    private readonly client: Client,
    private readonly hooks: ViewHooks,
    debounceMs = 100,
  ) {
    this.gate = new RequestGate(
      (payload) => this.client.manipulate(payload),
      (result) => this.applyResult(result),
      (err) => this.handleError(err),
    );
    this.flushSoon = debounce(() => this.flush(), debounceMs);
  }

  async init(): Promise<void> {
    try {
      const [diagram, analysis] = await Promise.all([
        this.client.fetchDiagram(),
        this.client.fetchAnalysis(),
      ]);
      this.diagram = diagram;
      this.analysis = analysis;
      this.base = { ...diagram.group };
      this.current = { ...diagram.group };
      this.palette = buildPalette(analysis.orbits.length);
      this.lambdas = {};
      for (const [k, v] of Object.entries(diagram.scaling)) {
        this.lambdas[Number(k)] = v;
      }
      this.hooks.showBanner(null);
      this.hooks.buildSliders(diagram.independent_edges, this.lambdas);
      this.hooks.renderDiagram(diagram, this.palette);
      this.hooks.renderReport(reportLines(analysis));
      this.hooks.renderBadge(badgeFor(this.base, this.current), true);
    } catch (err) {
      this.hooks.showBanner(describe(err));
      throw err;
    }
  }

  /** Slider moved: remember the absolute target and debounce the send. */
  onSliderChange(edge: number, lambda: number): void {
    this.pendingTargets[edge] = lambda;
    this.flushSoon();
  }

  private flush(): void {
    const payload: Record<string, number> = {};
    for (const [edge, target] of Object.entries(this.pendingTargets)) {
      const current = this.lambdas[Number(edge)] ?? 1.0;
      const ratio = target / current;
      if (Math.abs(ratio - 1.0) > 1e-12) payload[edge] = ratio;
    }
    this.pendingTargets = {};
    if (Object.keys(payload).length > 0) this.gate.submit(payload);
  }

  private applyResult(result: ManipulatePayload): void {
    this.diagram = result;
    for (const [k, v] of Object.entries(result.scaling)) {
      this.lambdas[Number(k)] = v;
    }
    if (result.preservation) {
      this.current = {
        name: result.preservation.new_group,
        order: result.preservation.new_order,
      };
    }
    this.hooks.showBanner(null);
    this.hooks.renderDiagram(result, this.palette);
    this.hooks.renderBadge(
      badgeFor(this.base, this.current),
      result.preserved,
    );
  }

  private handleError(err: unknown): void {
    // revert sliders to the last confirmed state
    for (const [edge, lambda] of Object.entries(this.lambdas)) {
      this.hooks.setSlider(Number(edge), lambda);
    }
    if (err instanceof ApiError && err.status < 500) {
      const detail = err.detail as { error?: string } | null;
      this.hooks.showBanner(detail?.error ?? `request rejected (${err.status})`);
    } else {
      this.hooks.showBanner(describe(err));
    }
  }

  async reset(): Promise<void> {
    try {
      const diagram = await this.client.reset();
      this.diagram = diagram;
      this.current = { ...this.base };
      this.lambdas = {};
      for (const [k, v] of Object.entries(diagram.scaling)) {
        this.lambdas[Number(k)] = v;
        this.hooks.setSlider(Number(k), v);
      }
      this.hooks.showBanner(null);
      this.hooks.renderDiagram(diagram, this.palette);
      this.hooks.renderBadge(badgeFor(this.base, this.current), true);
    } catch (err) {
      this.hooks.showBanner(describe(err));
    }
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `server error (${err.status})`;
  if (err instanceof Error) return `connection failed: ${err.message}`;
  return "connection failed";
}
