/** Saved-design comparison set: unique labels, capped at the size of the
 * canonical design space so the radar stays legible. */

import type { SimulateResponse } from "./types.js";

export const MAX_COMPARISONS = 12;

export class ComparisonSet {
  private entries = new Map<string, SimulateResponse>();

  /** Adds or replaces by label; false when the set is full. */
  add(response: SimulateResponse): boolean {
    if (!this.entries.has(response.label) && this.entries.size >= MAX_COMPARISONS) {
      return false;
    }
    this.entries.set(response.label, response);
    return true;
  }

  remove(label: string): boolean {
    return this.entries.delete(label);
  }

  has(label: string): boolean {
    return this.entries.has(label);
  }

  get size(): number {
    return this.entries.size;
  }

  labels(): string[] {
    return [...this.entries.keys()];
  }

  toArray(): SimulateResponse[] {
    return [...this.entries.values()];
  }

  clear(): void {
    this.entries.clear();
  }
}
