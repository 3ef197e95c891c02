/** Client-side design validation.
 *
 * This is a line-for-line mirror of the server's rule table: same checks,
 * same order, same messages. Contract tests hold the two sides together, so
 * a draft is rejected locally exactly when the server would 422 it.
 */

import type { Diagnostic } from "./types.js";

export const MSG_BAD_BASE = "base must be one of: net, fip, property";
export const MSG_BAD_EXEMPTION = "exemption_percentile must be 90 or 95";
export const MSG_BAD_RATE_COUNT = "rates must have exactly 3 entries";
export const MSG_RATE_RANGE = "rates must lie within [0, 1]";
export const MSG_RATES_ORDER = "rates must be nondecreasing";
export const MSG_P95_RATE1 = "exemption at P95 requires the P90-P95 rate to be 0";

export function designDiagnostics(
  base: unknown,
  exemptionPercentile: unknown,
  rates: number[],
): Diagnostic[] {
  const problems: Diagnostic[] = [];
  const err = (path: string, message: string) =>
    problems.push({ level: "error", path, message });

  if (base !== "net" && base !== "fip" && base !== "property") {
    err("base", MSG_BAD_BASE);
  }
  if (exemptionPercentile !== 90 && exemptionPercentile !== 95) {
    err("exemption_percentile", MSG_BAD_EXEMPTION);
  }
  if (rates.length !== 3) {
    err("rates", MSG_BAD_RATE_COUNT);
    return problems;
  }
  if (rates.some((r) => !(r >= 0.0 && r <= 1.0))) {
    err("rates", MSG_RATE_RANGE);
  }
  if (!(rates[0] <= rates[1] && rates[1] <= rates[2])) {
    err("rates", MSG_RATES_ORDER);
  }
  if (exemptionPercentile === 95 && rates[0] !== 0.0) {
    err("rates", MSG_P95_RATE1);
  }
  return problems;
}
