"""Post-tax populations and the four policy goals: redistribution,
extreme-wealth eradication, rent-extraction curbing, and CO2 reduction,
plus the radar normalization used to compare designs.

All goal criteria are computed per implicate and averaged; thresholds for
extreme wealth are frozen at their pre-tax values.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .dataset import MultiImplicateDataset, Population, WealthBase
from .errors import MissingDecileShares, NonPositiveShare
from .stats import WeightedSeries, kakwani, top_share, weighted_quantile
from .tax import BandSchedule, TaxDesign, liability_array, resolve

# Absolute extreme-wealth line (survey-based USD 10m converted to EUR).
EXTREME_WEALTH_ABS = 8_900_000.0
# Elasticity of consumption-based CO2 emissions to the top-10% wealth share
# (Knight et al. 2017).
CO2_TOP10_ELASTICITY = 0.795

RADAR_AXES = (
    "goal1_redistribution",
    "goal2_extreme_wealth",
    "goal3_rent",
    "goal4_emissions",
    "revenue",
)


def apply_tax(pop: Population, design: TaxDesign, sched: BandSchedule) -> Population:
    """Post-tax population: each record's net wealth drops by its liability.

    The tax bill is booked as an extra liability, which keeps the asset side
    intact and the balance-sheet identity exact; weights are unchanged.
    """
    liab = liability_array(pop.base_values(design.base), sched)
    records = [
        r if t == 0.0 else replace(r, liabilities=r.liabilities + t)
        for r, t in zip(pop.records, liab)
    ]
    return Population(records, pop.reference_year)


@dataclass(frozen=True)
class Goal1Result:
    delta_top10_pp: float
    delta_top1_pp: float
    kakwani: float | None  # None marks the no-tax case
    top10_pre: float
    top10_post: float
    top1_pre: float
    top1_post: float


def goal1_redistribution(
    pre: Population, post: Population, tax: np.ndarray
) -> Goal1Result:
    """Percentage-point reductions of the net-wealth top shares plus the
    Kakwani index of the liabilities against pre-tax net wealth."""
    w = pre.column("weight")
    net_pre = pre.column("net_wealth")
    net_post = post.column("net_wealth")
    ws_pre = WeightedSeries(net_pre, w)
    ws_post = WeightedSeries(net_post, w)
    top10_pre = top_share(ws_pre, 0.10)
    top10_post = top_share(ws_post, 0.10)
    top1_pre = top_share(ws_pre, 0.01)
    top1_post = top_share(ws_post, 0.01)
    total_tax = float(np.sum(np.asarray(tax) * w))
    kak = kakwani(WeightedSeries(tax, w), ws_pre) if total_tax > 0.0 else None
    return Goal1Result(
        delta_top10_pp=100.0 * (top10_pre - top10_post),
        delta_top1_pp=100.0 * (top1_pre - top1_post),
        kakwani=kak,
        top10_pre=top10_pre,
        top10_post=top10_post,
        top1_pre=top1_pre,
        top1_post=top1_post,
    )


@dataclass(frozen=True)
class Goal2Result:
    delta_abs: float
    delta_p99: float
    count_abs_pre: float
    count_abs_post: float
    count_p99_pre: float
    count_p99_post: float
    threshold_p99: float


def goal2_extreme_wealth(
    pre: Population, post: Population, abs_threshold: float = EXTREME_WEALTH_ABS
) -> Goal2Result:
    """Weighted household counts above the absolute line and above the
    pre-tax P99 of net wealth; deltas are reductions (pre minus post).

    Both thresholds stay at their pre-tax values: re-deriving P99 post-tax
    would leave the relative count nearly invariant by construction.
    """
    w = pre.column("weight")
    net_pre = pre.column("net_wealth")
    net_post = post.column("net_wealth")
    p99 = weighted_quantile(WeightedSeries(net_pre, w), 0.99)
    count_abs_pre = float(np.sum(w[net_pre > abs_threshold]))
    count_abs_post = float(np.sum(post.column("weight")[net_post > abs_threshold]))
    count_p99_pre = float(np.sum(w[net_pre > p99]))
    count_p99_post = float(np.sum(post.column("weight")[net_post > p99]))
    return Goal2Result(
        delta_abs=count_abs_pre - count_abs_post,
        delta_p99=count_p99_pre - count_p99_post,
        count_abs_pre=count_abs_pre,
        count_abs_post=count_abs_post,
        count_p99_pre=count_p99_pre,
        count_p99_post=count_p99_post,
        threshold_p99=p99,
    )


@dataclass(frozen=True)
class Goal3Result:
    pct_change: float
    fip_pre: float
    fip_post: float
    delta: float


def net_decile_groups(pop: Population) -> np.ndarray:
    """Group index per record: net-wealth decile 0..9, or 10 for the top
    percentile."""
    w = pop.column("weight")
    net = pop.column("net_wealth")
    series = WeightedSeries(net, w)
    cuts = [weighted_quantile(series, p / 10.0) for p in range(1, 10)]
    p99 = weighted_quantile(series, 0.99)
    groups = np.searchsorted(np.asarray(cuts), net, side="left")
    groups = np.where(net > p99, 10, groups)
    return groups


def investment_property_decile_shares(pop: Population) -> tuple[float, ...]:
    """Share of total property wealth held as investment property, per
    net-wealth decile plus the top percentile (11 values).

    Computed from raw (uncorrected) data and later applied to corrected
    aggregates, because the correction only preserves aggregate property
    wealth.
    """
    w = pop.column("weight")
    ip = pop.column("investment_property")
    prop = pop.column("property_wealth")
    groups = net_decile_groups(pop)
    shares = []
    for g in range(11):
        mask = groups == g if g < 10 else groups == 10
        denom = float(np.sum(w[mask] * prop[mask]))
        num = float(np.sum(w[mask] * ip[mask]))
        shares.append(num / denom if denom > 0.0 else 0.0)
    return tuple(shares)


def goal3_rent(
    pre: Population,
    tax: np.ndarray,
    design: TaxDesign,
    revenue: float,
    decile_shares: tuple[float, ...] | None = None,
) -> Goal3Result:
    """Percent change in total financial + investment-property wealth.

    Per base: NET keeps each household's portfolio composition constant, so
    the FIP reduction is the liability times the household's FIP share of
    net wealth; PROPERTY routes each liability through the payer group's
    investment-property share of property wealth (raw-data decile shares);
    FIP deducts the whole revenue from the aggregate.
    """
    w = pre.column("weight")
    fip_pre = float(np.sum(w * pre.column("fip_wealth")))
    tax = np.asarray(tax, dtype=np.float64)

    if design.base is WealthBase.NET:
        net = pre.column("net_wealth")
        fip = pre.column("fip_wealth")
        with np.errstate(divide="ignore", invalid="ignore"):
            per_record = np.where((tax > 0.0) & (net > 0.0), tax * fip / net, 0.0)
        delta = float(np.sum(w * per_record))
    elif design.base is WealthBase.PROPERTY:
        if decile_shares is None:
            raise MissingDecileShares(
                "property-base evaluation needs the 11 investment-property shares"
            )
        if len(decile_shares) != 11:
            raise MissingDecileShares(
                f"expected 11 shares (10 deciles + top percentile), got {len(decile_shares)}"
            )
        groups = net_decile_groups(pre)
        share_per_record = np.asarray(decile_shares)[groups]
        delta = float(np.sum(w * tax * share_per_record))
    else:  # FIP base: the revenue comes straight out of the aggregate.
        delta = revenue

    fip_post = fip_pre - delta
    pct = -100.0 * delta / fip_pre if fip_pre > 0.0 else 0.0
    return Goal3Result(pct_change=pct, fip_pre=fip_pre, fip_post=fip_post, delta=delta)


def goal4_emissions(top10_pre: float, top10_post: float) -> float:
    """Expected percent change in CO2 emissions via the inequality channel.

    The elasticity applies to the relative change of the top-10% share:
    -elasticity * 100 * (pre - post) / pre.
    """
    if not top10_pre > 0.0:
        raise NonPositiveShare(f"top-10% share must be > 0, got {top10_pre}")
    return -CO2_TOP10_ELASTICITY * 100.0 * (top10_pre - top10_post) / top10_pre


@dataclass(frozen=True)
class GoalReport:
    """Implicate-averaged criteria for one design."""

    revenue: float
    top10_share_pre: float
    top10_share_post: float
    top1_share_pre: float
    top1_share_post: float
    kakwani: float | None
    count_above_abs_pre: float
    count_above_abs_post: float
    count_above_p99_pre: float
    count_above_p99_post: float
    fip_wealth_pre: float
    fip_wealth_post: float
    co2_change: float

    def to_dict(self) -> dict:
        return {
            "revenue": self.revenue,
            "top10_share_pre": self.top10_share_pre,
            "top10_share_post": self.top10_share_post,
            "top1_share_pre": self.top1_share_pre,
            "top1_share_post": self.top1_share_post,
            "kakwani": self.kakwani,
            "count_above_abs_pre": self.count_above_abs_pre,
            "count_above_abs_post": self.count_above_abs_post,
            "count_above_p99_pre": self.count_above_p99_pre,
            "count_above_p99_post": self.count_above_p99_post,
            "fip_wealth_pre": self.fip_wealth_pre,
            "fip_wealth_post": self.fip_wealth_post,
            "co2_change": self.co2_change,
        }


@dataclass(frozen=True)
class DesignResult:
    design: TaxDesign
    report: GoalReport
    thresholds: tuple[float, float, float]  # mean over implicates


def evaluate_design(
    ds: MultiImplicateDataset,
    design: TaxDesign,
    decile_shares: tuple[float, ...] | None = None,
    freeze_thresholds: bool = False,
) -> DesignResult:
    """Resolve, tax and score one design over all five implicates."""
    shared = resolve(design, ds.implicates[0]) if freeze_thresholds else None
    revenues, g1s, g2s, g3s, co2s, threshold_rows = [], [], [], [], [], []
    for pop in ds:
        sched = shared if shared is not None else resolve(design, pop)
        liab = liability_array(pop.base_values(design.base), sched)
        rev = float(np.sum(pop.column("weight") * liab))
        post = apply_tax(pop, design, sched)
        g1 = goal1_redistribution(pop, post, liab)
        g2 = goal2_extreme_wealth(pop, post)
        g3 = goal3_rent(pop, liab, design, rev, decile_shares)
        co2 = goal4_emissions(g1.top10_pre, g1.top10_post)
        revenues.append(rev)
        g1s.append(g1)
        g2s.append(g2)
        g3s.append(g3)
        co2s.append(co2)
        threshold_rows.append(sched.thresholds)

    def mean(values) -> float:
        return float(np.mean(values))

    kaks = [g.kakwani for g in g1s]
    report = GoalReport(
        revenue=mean(revenues),
        top10_share_pre=mean([g.top10_pre for g in g1s]),
        top10_share_post=mean([g.top10_post for g in g1s]),
        top1_share_pre=mean([g.top1_pre for g in g1s]),
        top1_share_post=mean([g.top1_post for g in g1s]),
        kakwani=None if any(k is None for k in kaks) else mean(kaks),
        count_above_abs_pre=mean([g.count_abs_pre for g in g2s]),
        count_above_abs_post=mean([g.count_abs_post for g in g2s]),
        count_above_p99_pre=mean([g.count_p99_pre for g in g2s]),
        count_above_p99_post=mean([g.count_p99_post for g in g2s]),
        fip_wealth_pre=mean([g.fip_pre for g in g3s]),
        fip_wealth_post=mean([g.fip_post for g in g3s]),
        co2_change=mean(co2s),
    )
    thresholds = tuple(float(np.mean([t[i] for t in threshold_rows])) for i in range(3))
    return DesignResult(design=design, report=report, thresholds=thresholds)


@dataclass(frozen=True)
class RadarScores:
    """Per-design, per-axis scores in [0, 100]; on every criterion the most
    effective design is indexed to 100, multi-criterion goals average their
    criterion indices."""

    labels: tuple[str, ...]
    scores: dict[str, dict[str, float]]  # label -> axis -> score
    flagged_criteria: tuple[str, ...]  # criteria where every design is at 0


def radar_criteria(report: GoalReport) -> dict[str, float]:
    """Improvement magnitudes per criterion; harmful directions clamp to 0.

    This mapping is mirrored client-side; keep the arithmetic stable.
    """
    fip_reduction_pct = (
        100.0 * (report.fip_wealth_pre - report.fip_wealth_post) / report.fip_wealth_pre
        if report.fip_wealth_pre > 0.0
        else 0.0
    )
    return {
        "top10_reduction_pp": max(
            0.0, 100.0 * (report.top10_share_pre - report.top10_share_post)
        ),
        "top1_reduction_pp": max(
            0.0, 100.0 * (report.top1_share_pre - report.top1_share_post)
        ),
        "kakwani": max(0.0, report.kakwani if report.kakwani is not None else 0.0),
        "count_abs_reduction": max(
            0.0, report.count_above_abs_pre - report.count_above_abs_post
        ),
        "count_p99_reduction": max(
            0.0, report.count_above_p99_pre - report.count_above_p99_post
        ),
        "fip_reduction_pct": max(0.0, fip_reduction_pct),
        "co2_reduction_pct": max(0.0, -report.co2_change),
        "revenue": max(0.0, report.revenue),
    }


_CRITERIA_BY_AXIS = {
    "goal1_redistribution": ("top10_reduction_pp", "top1_reduction_pp", "kakwani"),
    "goal2_extreme_wealth": ("count_abs_reduction", "count_p99_reduction"),
    "goal3_rent": ("fip_reduction_pct",),
    "goal4_emissions": ("co2_reduction_pct",),
    "revenue": ("revenue",),
}


def radar(labeled_reports: list[tuple[str, GoalReport]]) -> RadarScores:
    """Index every criterion against the best design (=100) and average the
    criterion indices within each goal axis."""
    if not labeled_reports:
        raise ValueError("radar needs at least one design")
    labels = tuple(label for label, _ in labeled_reports)
    criteria = {label: radar_criteria(rep) for label, rep in labeled_reports}
    names = list(next(iter(criteria.values())))
    best = {name: max(criteria[label][name] for label in labels) for name in names}
    flagged = tuple(name for name in names if best[name] == 0.0)

    indexed = {
        label: {
            name: (100.0 * criteria[label][name] / best[name]) if best[name] > 0.0 else 0.0
            for name in names
        }
        for label in labels
    }
    scores = {
        label: {
            axis: float(np.mean([indexed[label][c] for c in crits]))
            for axis, crits in _CRITERIA_BY_AXIS.items()
        }
        for label in labels
    }
    return RadarScores(labels=labels, scores=scores, flagged_criteria=flagged)
