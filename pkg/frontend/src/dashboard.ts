/** Goal panels built from one simulate response.
 *
 * Values are taken verbatim from the payload (or are fixed-arithmetic
 * deltas of payload fields); nothing is recomputed from microdata.
 */

import { formatCount, formatEurBn, formatIndex, formatPct, formatPp } from "./format.js";
import type { SimulateResponse } from "./types.js";

export interface Panel {
  id: string;
  goal: string;
  title: string;
  value: number | null;
  formatted: string;
  detail: string;
}

export function buildPanels(r: SimulateResponse): Panel[] {
  const top10Delta = 100.0 * (r.top10_share_pre - r.top10_share_post);
  const top1Delta = 100.0 * (r.top1_share_pre - r.top1_share_post);
  const absDelta = r.count_above_abs_pre - r.count_above_abs_post;
  const p99Delta = r.count_above_p99_pre - r.count_above_p99_post;
  const fipPct =
    r.fip_wealth_pre > 0.0
      ? (100.0 * (r.fip_wealth_post - r.fip_wealth_pre)) / r.fip_wealth_pre
      : 0.0;
  return [
    {
      id: "top10",
      goal: "Goal 1 - redistribute wealth",
      title: "Top 10% share reduction",
      value: top10Delta,
      formatted: formatPp(top10Delta),
      detail: `${formatPct(100.0 * r.top10_share_pre)} → ${formatPct(100.0 * r.top10_share_post)}`,
    },
    {
      id: "top1",
      goal: "Goal 1 - redistribute wealth",
      title: "Top 1% share reduction",
      value: top1Delta,
      formatted: formatPp(top1Delta),
      detail: `${formatPct(100.0 * r.top1_share_pre)} → ${formatPct(100.0 * r.top1_share_post)}`,
    },
    {
      id: "kakwani",
      goal: "Goal 1 - redistribute wealth",
      title: "Kakwani progressivity",
      value: r.kakwani,
      formatted: formatIndex(r.kakwani),
      detail: r.kakwani === null ? "no tax collected" : "positive = progressive",
    },
    {
      id: "extreme-abs",
      goal: "Goal 2 - eradicate extreme wealth",
      title: "Households above €8.9m removed",
      value: absDelta,
      formatted: formatCount(absDelta),
      detail: `${formatCount(r.count_above_abs_pre)} → ${formatCount(r.count_above_abs_post)}`,
    },
    {
      id: "extreme-p99",
      goal: "Goal 2 - eradicate extreme wealth",
      title: "Households above P99 removed",
      value: p99Delta,
      formatted: formatCount(p99Delta),
      detail: `${formatCount(r.count_above_p99_pre)} → ${formatCount(r.count_above_p99_post)}`,
    },
    {
      id: "fip",
      goal: "Goal 3 - curb rent extraction",
      title: "Financial + investment property wealth",
      value: fipPct,
      formatted: formatPct(fipPct),
      detail: `${formatEurBn(r.fip_wealth_pre)} → ${formatEurBn(r.fip_wealth_post)}`,
    },
    {
      id: "co2",
      goal: "Goal 4 - reduce emissions",
      title: "Expected CO2 change",
      value: r.co2_change,
      formatted: formatPct(r.co2_change),
      detail: "inequality channel",
    },
    {
      id: "revenue",
      goal: "Revenue",
      title: "First-year revenue",
      value: r.revenue,
      formatted: formatEurBn(r.revenue),
      detail: `thresholds €${Math.round(r.thresholds.t90).toLocaleString("en-US")} / ` +
        `€${Math.round(r.thresholds.t95).toLocaleString("en-US")} / ` +
        `€${Math.round(r.thresholds.t99).toLocaleString("en-US")}`,
    },
  ];
}
