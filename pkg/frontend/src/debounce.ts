/** Debounce for slider-driven simulate calls (default 250 ms). The returned
 * function exposes cancel() to drop a pending invocation. */

export const SIMULATE_DEBOUNCE_MS = 250;

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number = SIMULATE_DEBOUNCE_MS,
): ((...args: A) => void) & { cancel: () => void } {
  let timer: ReturnType<typeof setTimeout> | null = null;

  const debounced = (...args: A) => {
    if (timer) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      fn(...args);
    }, delayMs);
  };

  debounced.cancel = () => {
    if (timer) clearTimeout(timer);
    timer = null;
  };

  return debounced as ((...args: A) => void) & { cancel: () => void };
}

/** Monotone token gate: responses carrying a stale token are discarded, so
 * an older in-flight simulate can never overwrite a newer edit. */
export class SequenceGate {
  private issued = 0;
  private applied = 0;

  next(): number {
    return ++this.issued;
  }

  /** True iff `token` is newer than everything applied so far. */
  accept(token: number): boolean {
    if (token <= this.applied) {
      return false;
    }
    this.applied = token;
    return true;
  }
}
