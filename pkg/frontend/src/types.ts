/** Wire types shared with the simulation service. Field names mirror the
 * server's JSON payloads verbatim. */

export type WealthBase = "net" | "fip" | "property";

export const WEALTH_BASES: WealthBase[] = ["net", "fip", "property"];

export const BASE_LABELS: Record<WealthBase, string> = {
  net: "Net wealth",
  fip: "Financial + investment property",
  property: "Total property",
};

export interface TaxDesignPayload {
  base: string;
  exemption_percentile: number;
  rates: number[];
  label: string;
}

export interface Diagnostic {
  level: "error" | "warning";
  path: string;
  message: string;
}

export interface GoalReport {
  revenue: number;
  top10_share_pre: number;
  top10_share_post: number;
  top1_share_pre: number;
  top1_share_post: number;
  kakwani: number | null;
  count_above_abs_pre: number;
  count_above_abs_post: number;
  count_above_p99_pre: number;
  count_above_p99_post: number;
  fip_wealth_pre: number;
  fip_wealth_post: number;
  co2_change: number;
}

export interface SimulateResponse extends GoalReport {
  label: string;
  thresholds: { t90: number; t95: number; t99: number };
  timing_ms: number;
}

export interface SummaryResponse {
  reference_year: number;
  implicates: number;
  records_per_implicate: number;
  bases: Record<string, Record<string, number>>;
}

/** Client-side editing state; rates are held in percent (slider units,
 * step 0.1 pp) and converted to fractions on the wire. */
export interface DesignDraft {
  label: string;
  base: WealthBase;
  exemptionPercentile: 90 | 95;
  ratesPct: [number, number, number];
}
