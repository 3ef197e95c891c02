/** Display formatting; values themselves always come from the service. */

export function formatEurBn(value: number): string {
  return `€${(value / 1e9).toFixed(1)}bn`;
}

export function formatPp(value: number): string {
  return `${value.toFixed(2)} pp`;
}

export function formatPct(value: number): string {
  return `${value.toFixed(2)}%`;
}

export function formatEur(value: number): string {
  return `€${withThousands(value.toFixed(0))}`;
}

export function formatCount(value: number): string {
  return withThousands(Math.round(value).toString());
}

export function formatIndex(value: number | null): string {
  return value === null ? "n/a" : value.toFixed(3);
}

function withThousands(digits: string): string {
  return digits.replace(/\B(?=(\d{3})+(?!\d))/g, ",");
}
