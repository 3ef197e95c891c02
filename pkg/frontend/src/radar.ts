/** Radar normalization and rendering.
 *
 * The scoring is the one exception to the thin-client rule: it is pure
 * arithmetic over server-reported goal values, duplicated here so saved
 * designs can be re-normalized as the comparison set changes. The formulas
 * (and their operation order) mirror the batch engine and are parity-tested
 * against its radar.csv output.
 */

import type { GoalReport } from "./types.js";

export const RADAR_AXES = [
  "goal1_redistribution",
  "goal2_extreme_wealth",
  "goal3_rent",
  "goal4_emissions",
  "revenue",
] as const;

export type RadarAxis = (typeof RADAR_AXES)[number];

export const AXIS_LABELS: Record<RadarAxis, string> = {
  goal1_redistribution: "Redistribution",
  goal2_extreme_wealth: "Extreme wealth",
  goal3_rent: "Rent extraction",
  goal4_emissions: "CO2",
  revenue: "Revenue",
};

const CRITERIA_BY_AXIS: Record<RadarAxis, string[]> = {
  goal1_redistribution: ["top10_reduction_pp", "top1_reduction_pp", "kakwani"],
  goal2_extreme_wealth: ["count_abs_reduction", "count_p99_reduction"],
  goal3_rent: ["fip_reduction_pct"],
  goal4_emissions: ["co2_reduction_pct"],
  revenue: ["revenue"],
};

const CRITERIA: string[] = Object.values(CRITERIA_BY_AXIS).flat();

/** Improvement magnitude per criterion; harmful directions clamp to 0. */
export function radarCriteria(report: GoalReport): Record<string, number> {
  const fipReductionPct =
    report.fip_wealth_pre > 0.0
      ? (100.0 * (report.fip_wealth_pre - report.fip_wealth_post)) /
        report.fip_wealth_pre
      : 0.0;
  return {
    top10_reduction_pp: Math.max(
      0.0,
      100.0 * (report.top10_share_pre - report.top10_share_post),
    ),
    top1_reduction_pp: Math.max(
      0.0,
      100.0 * (report.top1_share_pre - report.top1_share_post),
    ),
    kakwani: Math.max(0.0, report.kakwani ?? 0.0),
    count_abs_reduction: Math.max(
      0.0,
      report.count_above_abs_pre - report.count_above_abs_post,
    ),
    count_p99_reduction: Math.max(
      0.0,
      report.count_above_p99_pre - report.count_above_p99_post,
    ),
    fip_reduction_pct: Math.max(0.0, fipReductionPct),
    co2_reduction_pct: Math.max(0.0, -report.co2_change),
    revenue: Math.max(0.0, report.revenue),
  };
}

export interface RadarScores {
  labels: string[];
  scores: Record<string, Record<RadarAxis, number>>;
  flaggedCriteria: string[];
}

export function computeRadar(
  entries: { label: string; report: GoalReport }[],
): RadarScores {
  if (entries.length === 0) {
    return { labels: [], scores: {}, flaggedCriteria: [] };
  }
  const labels = entries.map((e) => e.label);
  const criteria = new Map(
    entries.map((e) => [e.label, radarCriteria(e.report)]),
  );
  const best: Record<string, number> = {};
  for (const name of CRITERIA) {
    best[name] = Math.max(...labels.map((l) => criteria.get(l)![name]));
  }
  const flaggedCriteria = CRITERIA.filter((name) => best[name] === 0.0);

  const scores: Record<string, Record<RadarAxis, number>> = {};
  for (const label of labels) {
    const indexed: Record<string, number> = {};
    for (const name of CRITERIA) {
      indexed[name] =
        best[name] > 0.0 ? (100.0 * criteria.get(label)![name]) / best[name] : 0.0;
    }
    const axes = {} as Record<RadarAxis, number>;
    for (const axis of RADAR_AXES) {
      const parts = CRITERIA_BY_AXIS[axis].map((c) => indexed[c]);
      axes[axis] = parts.reduce((a, b) => a + b, 0.0) / parts.length;
    }
    scores[label] = axes;
  }
  return { labels, scores, flaggedCriteria };
}

const PALETTE = [
  "#2563eb",
  "#dc2626",
  "#16a34a",
  "#9333ea",
  "#ea580c",
  "#0891b2",
  "#be185d",
  "#4d7c0f",
  "#7c3aed",
  "#b45309",
  "#0f766e",
  "#6b7280",
];

function polygonPoints(
  values: number[],
  cx: number,
  cy: number,
  radius: number,
): string {
  const n = values.length;
  return values
    .map((v, i) => {
      const angle = -Math.PI / 2 + (2 * Math.PI * i) / n;
      const r = (Math.max(0, Math.min(100, v)) / 100) * radius;
      return `${(cx + r * Math.cos(angle)).toFixed(2)},${(cy + r * Math.sin(angle)).toFixed(2)}`;
    })
    .join(" ");
}

/** Standalone SVG markup for the five-axis radar; no DOM required. */
export function renderRadarSvg(scores: RadarScores, size = 360): string {
  const cx = size / 2;
  const cy = size / 2;
  const radius = size * 0.36;
  const rings = [25, 50, 75, 100]
    .map(
      (level) =>
        `<polygon points="${polygonPoints(
          RADAR_AXES.map(() => level),
          cx,
          cy,
          radius,
        )}" fill="none" stroke="#d4d4d8" stroke-width="1"/>`,
    )
    .join("");
  const axisLines = RADAR_AXES.map((axis, i) => {
    const angle = -Math.PI / 2 + (2 * Math.PI * i) / RADAR_AXES.length;
    const x = cx + radius * Math.cos(angle);
    const y = cy + radius * Math.sin(angle);
    const lx = cx + radius * 1.18 * Math.cos(angle);
    const ly = cy + radius * 1.12 * Math.sin(angle);
    return (
      `<line x1="${cx}" y1="${cy}" x2="${x.toFixed(2)}" y2="${y.toFixed(2)}" stroke="#d4d4d8"/>` +
      `<text x="${lx.toFixed(2)}" y="${ly.toFixed(2)}" text-anchor="middle" ` +
      `font-size="11" fill="#52525b">${AXIS_LABELS[axis]}</text>`
    );
  }).join("");
  const polygons = scores.labels
    .map((label, i) => {
      const color = PALETTE[i % PALETTE.length];
      const values = RADAR_AXES.map((axis) => scores.scores[label][axis]);
      return (
        `<polygon points="${polygonPoints(values, cx, cy, radius)}" ` +
        `fill="${color}22" stroke="${color}" stroke-width="2" data-label="${label}"/>`
      );
    })
    .join("");
  return (
    `<svg viewBox="0 0 ${size} ${size}" xmlns="http://www.w3.org/2000/svg" role="img">` +
    rings +
    axisLines +
    polygons +
    `</svg>`
  );
}
