"""Marginal wealth-tax schedules: design resolution, per-household
liabilities, and aggregate revenue.

A design names a base, an exemption percentile (P90 or P95) and three band
rates; resolving it against a population turns the percentiles into absolute
thresholds (weighted quantiles of that base, pooled across countries).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import MultiImplicateDataset, Population, WealthBase
from .errors import InvalidDesign
from .stats import WeightedSeries, weighted_quantile

# Shared validation messages; the HTTP service and the UI reuse these
# verbatim so every surface rejects exactly the same designs.
MSG_BAD_BASE = "base must be one of: net, fip, property"
MSG_BAD_EXEMPTION = "exemption_percentile must be 90 or 95"
MSG_BAD_RATE_COUNT = "rates must have exactly 3 entries"
MSG_RATE_RANGE = "rates must lie within [0, 1]"
MSG_RATES_ORDER = "rates must be nondecreasing"
MSG_P95_RATE1 = "exemption at P95 requires the P90-P95 rate to be 0"


def design_diagnostics(base, exemption_percentile, rates) -> list[tuple[str, str]]:
    """Rule table for a raw design, as (path, message) pairs; empty = valid."""
    problems: list[tuple[str, str]] = []
    try:
        WealthBase(base)
    except ValueError:
        problems.append(("base", MSG_BAD_BASE))
    if exemption_percentile not in (90, 95):
        problems.append(("exemption_percentile", MSG_BAD_EXEMPTION))
    rates = list(rates)
    if len(rates) != 3:
        problems.append(("rates", MSG_BAD_RATE_COUNT))
        return problems
    if any(not 0.0 <= r <= 1.0 for r in rates):
        problems.append(("rates", MSG_RATE_RANGE))
    if not rates[0] <= rates[1] <= rates[2]:
        problems.append(("rates", MSG_RATES_ORDER))
    if exemption_percentile == 95 and rates[0] != 0.0:
        problems.append(("rates", MSG_P95_RATE1))
    return problems


@dataclass(frozen=True)
class TaxDesign:
    """Base selector, exemption percentile and the three band rates
    (P90-P95, P95-P99, above P99)."""

    base: WealthBase
    exemption_percentile: int
    rates: tuple[float, float, float]
    label: str = ""

    def __post_init__(self):
        problems = design_diagnostics(
            self.base.value if isinstance(self.base, WealthBase) else self.base,
            self.exemption_percentile,
            self.rates,
        )
        if problems:
            raise InvalidDesign("; ".join(msg for _, msg in problems))

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "base": self.base.value,
            "exemption_percentile": self.exemption_percentile,
            "rates": list(self.rates),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TaxDesign":
        return cls(
            base=WealthBase(d["base"]),
            exemption_percentile=int(d["exemption_percentile"]),
            rates=tuple(float(r) for r in d["rates"]),
            label=str(d.get("label", "")),
        )


@dataclass(frozen=True)
class BandSchedule:
    """Absolute band thresholds (t90 <= t95 <= t99) plus the rates."""

    thresholds: tuple[float, float, float]
    rates: tuple[float, float, float]

    def __post_init__(self):
        t90, t95, t99 = self.thresholds
        if not t90 <= t95 <= t99:
            raise InvalidDesign(f"thresholds must be nondecreasing, got {self.thresholds}")


def resolve(design: TaxDesign, pop: Population) -> BandSchedule:
    """Thresholds as weighted quantiles of the design's base at P90/P95/P99,
    over the whole pooled population (not per country)."""
    series = WeightedSeries(pop.base_values(design.base), pop.column("weight"))
    thresholds = tuple(weighted_quantile(series, p) for p in (0.90, 0.95, 0.99))
    return BandSchedule(thresholds=thresholds, rates=design.rates)


def liability(base_value: float, sched: BandSchedule) -> float:
    """Marginal tax on one base value; zero at or below the first threshold,
    continuous and nondecreasing above it. Negative values pay nothing."""
    t90, t95, t99 = sched.thresholds
    r1, r2, r3 = sched.rates
    v = base_value
    return (
        r1 * max(0.0, min(v, t95) - t90)
        + r2 * max(0.0, min(v, t99) - t95)
        + r3 * max(0.0, v - t99)
    )


def liability_array(values: np.ndarray, sched: BandSchedule) -> np.ndarray:
    """Vectorized `liability`; identical per-record arithmetic."""
    t90, t95, t99 = sched.thresholds
    r1, r2, r3 = sched.rates
    v = np.asarray(values, dtype=np.float64)
    return (
        r1 * np.maximum(0.0, np.minimum(v, t95) - t90)
        + r2 * np.maximum(0.0, np.minimum(v, t99) - t95)
        + r3 * np.maximum(0.0, v - t99)
    )


def implicate_revenue(
    pop: Population, design: TaxDesign, sched: BandSchedule | None = None
) -> float:
    """Weighted sum of liabilities for one implicate."""
    if sched is None:
        sched = resolve(design, pop)
    liab = liability_array(pop.base_values(design.base), sched)
    return float(np.sum(pop.column("weight") * liab))


def revenue(
    ds: MultiImplicateDataset, design: TaxDesign, shared_thresholds: bool = False
) -> float:
    """Mean over the five implicates of the weighted liability total.

    Thresholds are resolved per implicate; `shared_thresholds` reuses
    implicate 1's schedule everywhere (diagnostic mode).
    """
    shared = resolve(design, ds.implicates[0]) if shared_thresholds else None
    per_implicate = [implicate_revenue(pop, design, shared) for pop in ds]
    return float(np.mean(per_implicate))


def _preset(model: int, base: WealthBase) -> TaxDesign:
    exemption, rates = {
        1: (90, (0.01, 0.02, 0.03)),
        2: (90, (0.01, 0.03, 0.05)),
        3: (95, (0.00, 0.02, 0.03)),
        4: (95, (0.00, 0.03, 0.05)),
    }[model]
    return TaxDesign(
        base=base,
        exemption_percentile=exemption,
        rates=rates,
        label=f"model{model}-{base.value}",
    )


# The canonical 4 models x 3 bases = 12 preset designs.
PRESET_DESIGNS: tuple[TaxDesign, ...] = tuple(
    _preset(model, base)
    for model in (1, 2, 3, 4)
    for base in (WealthBase.NET, WealthBase.FIP, WealthBase.PROPERTY)
)
