// Report panel contents: the group badge and the GDoF summary lines.

import type { AnalysisPayload, GroupInfo } from "./types.js";

export interface BadgeState {
  text: string;
  grown: boolean;
}

export function badgeFor(base: GroupInfo, current: GroupInfo): BadgeState {
  if (current.order > base.order) {
    return {
      text: `${base.name} → ${current.name}  |G| ${base.order} → ${current.order}`,
      grown: true,
    };
  }
  return { text: `${current.name}  |G| = ${current.order}`, grown: false };
}

export function reportLines(analysis: AnalysisPayload): [string, string][] {
  const g = analysis.gdof;
  return [
    ["group", `${analysis.group.name} (|G| = ${analysis.group.order})`],
    ["internal edges", String(g.e_int)],
    ["orbits", String(analysis.orbits.length)],
    ["rows of S", String(g.rows_of_s)],
    ["GDoF", `${g.m_raw} → ${g.m_sym}`],
    ["reduction", g.reduction.toFixed(2)],
    ["independent", g.independent_edges_sym.map((e) => `e${e}`).join(", ")],
  ];
}
