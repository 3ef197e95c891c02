/** Design-draft editing: preset loading, slider changes, exemption locking.
 *
 * Sliders run 0..10% in 0.1 pp steps; values are quantized so that percent
 * round-trips exactly to the wire fractions (0.03 -> 3.0 -> 0.03).
 */

import type { DesignDraft, TaxDesignPayload, WealthBase } from "./types.js";

export const RATE_SLIDER_MIN = 0;
export const RATE_SLIDER_MAX = 10;
export const RATE_SLIDER_STEP = 0.1;

/** Fraction -> percent on the 0.1 pp grid (exact for grid values). */
export function fractionToPct(rate: number): number {
  return Math.round(rate * 1000) / 10;
}

export function pctToFraction(pct: number): number {
  return pct / 100;
}

export function presetToDraft(preset: TaxDesignPayload): DesignDraft {
  return {
    label: preset.label,
    base: preset.base as WealthBase,
    exemptionPercentile: preset.exemption_percentile === 95 ? 95 : 90,
    ratesPct: [
      fractionToPct(preset.rates[0]),
      fractionToPct(preset.rates[1]),
      fractionToPct(preset.rates[2]),
    ],
  };
}

export function draftToPayload(draft: DesignDraft): TaxDesignPayload {
  return {
    base: draft.base,
    exemption_percentile: draft.exemptionPercentile,
    rates: draft.ratesPct.map(pctToFraction),
    label: draft.label,
  };
}

/** First slider is pinned to 0 while the exemption sits at P95. */
export function isRateLocked(draft: DesignDraft, index: number): boolean {
  return index === 0 && draft.exemptionPercentile === 95;
}

export function withExemption(draft: DesignDraft, percentile: 90 | 95): DesignDraft {
  const ratesPct: [number, number, number] = [...draft.ratesPct];
  if (percentile === 95) {
    ratesPct[0] = 0;
  }
  return { ...draft, exemptionPercentile: percentile, ratesPct };
}

export function withRate(draft: DesignDraft, index: number, pct: number): DesignDraft {
  if (isRateLocked(draft, index)) {
    return draft;
  }
  const clamped = Math.min(RATE_SLIDER_MAX, Math.max(RATE_SLIDER_MIN, pct));
  const quantized = Math.round(clamped * 10) / 10;
  const ratesPct: [number, number, number] = [...draft.ratesPct];
  ratesPct[index] = quantized;
  return { ...draft, ratesPct };
}

export function withBase(draft: DesignDraft, base: WealthBase): DesignDraft {
  return { ...draft, base };
}

export function withLabel(draft: DesignDraft, label: string): DesignDraft {
  return { ...draft, label };
}

export function defaultDraft(): DesignDraft {
  return {
    label: "custom",
    base: "net",
    exemptionPercentile: 90,
    ratesPct: [1, 2, 3],
  };
}
