"""Survey top-tail correction: reweighting, deposit floors, Pareto tail
imputation with rich-list anchoring, top-portfolio allocation, and
proportional rescaling to national accounts.

The six steps replicate the Distributional Wealth Accounts style of
reconciling household survey microdata with macro aggregates:

  1. adjust weights so per-country weight totals match household counts;
  2. link asset categories to national-accounts aggregates (the
     NationalAccountsTable ingestion);
  3. floor implausibly low deposits relative to income;
  4. fit a Pareto tail to the top of each country's distribution (survey
     households above a threshold plus rich-list entries) and fill the gap
     between the richest survey household and the poorest rich-list entry
     with sampled households;
  5. give sampled households a balance sheet via a top-portfolio model;
  6. rescale every asset category (and, carefully, liabilities) to the
     national-accounts aggregates.

Each step is a pure Population -> Population function; the pipeline applies
them per implicate, so implicates can be processed in parallel.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import numpy as np

from .dataset import (
    ASSET_CATEGORIES,
    AssetVector,
    HouseholdRecord,
    MultiImplicateDataset,
    Population,
)
from .errors import (
    EmptyGap,
    InvalidTheta,
    NonPositiveNetWealth,
    ObservationBelowThreshold,
    TooFewObservations,
    UnknownCountry,
    ZeroSurveyAggregate,
)
from .syngen import RichList

log = logging.getLogger(__name__)

LIABILITIES_CATEGORY = "liabilities"
HOUSEHOLDS_CATEGORY = "HOUSEHOLDS"

DEFAULT_THETA = 0.05
DEFAULT_W_MIN = 1_000_000.0
DEFAULT_LIABILITY_RATIO = 0.05
# Top-wealth portfolios are equity-heavy; used when no external breakdown is
# configured.
DEFAULT_TOP_ALLOCATION = {
    "deposits": 0.05,
    "bonds": 0.05,
    "listed_shares": 0.15,
    "funds": 0.10,
    "other_financial": 0.25,
    "main_residence": 0.05,
    "investment_property": 0.15,
    "business_wealth": 0.20,
    "vehicles_valuables": 0.00,
}


class TailSource(str, Enum):
    HFCS_ONLY = "HFCS_ONLY"
    HFCS_PLUS_RICHLIST = "HFCS_PLUS_RICHLIST"


@dataclass(frozen=True)
class ParetoTail:
    """Fitted power-law tail: P(W > w) = (w_min / w)^alpha for w >= w_min."""

    alpha: float
    w_min: float
    n_fit: int
    source: TailSource = TailSource.HFCS_ONLY

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be > 0")
        if not self.w_min > 0:
            raise ValueError("w_min must be > 0")
        if self.n_fit < 2:
            raise ValueError("n_fit must be >= 2")

    def survival(self, w: float) -> float:
        return (self.w_min / w) ** self.alpha if w > self.w_min else 1.0


@dataclass(frozen=True)
class TopPortfolioModel:
    """Balance-sheet template for sampled top households.

    `liability_ratio` is liabilities / net wealth; `allocation_shares`
    split gross wealth across asset categories and must sum to 1.
    """

    liability_ratio: float = DEFAULT_LIABILITY_RATIO
    allocation_shares: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_TOP_ALLOCATION)
    )

    def __post_init__(self):
        if self.liability_ratio < 0:
            raise ValueError("liability_ratio must be >= 0")
        unknown = set(self.allocation_shares) - set(ASSET_CATEGORIES)
        if unknown:
            raise ValueError(f"unknown asset categories: {sorted(unknown)}")
        if any(not 0.0 <= s <= 1.0 for s in self.allocation_shares.values()):
            raise ValueError("allocation shares must lie in [0, 1]")
        if abs(sum(self.allocation_shares.values()) - 1.0) > 1e-12:
            raise ValueError("allocation shares must sum to 1")


class NationalAccountsTable:
    """Per-country macro aggregates: one EUR total per asset category (plus
    liabilities) and the number of households."""

    def __init__(
        self,
        aggregates: dict[tuple[str, str], float],
        household_count: dict[str, float],
    ):
        for (country, category), value in aggregates.items():
            if category != LIABILITIES_CATEGORY and category not in ASSET_CATEGORIES:
                raise ValueError(f"unknown category {category!r} for {country}")
            if value < 0:
                raise ValueError(f"{country}/{category}: aggregate must be >= 0")
        for country, count in household_count.items():
            if not count > 0:
                raise ValueError(f"{country}: household count must be > 0")
        self.aggregates = dict(aggregates)
        self.household_count = dict(household_count)

    def aggregate(self, country: str, category: str) -> float | None:
        return self.aggregates.get((country, category))

    @classmethod
    def from_csv(cls, path: str | Path) -> "NationalAccountsTable":
        """Rows: country,category,aggregate with HOUSEHOLDS rows carrying the
        per-country household counts."""
        aggregates: dict[tuple[str, str], float] = {}
        counts: dict[str, float] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                country = row["country"].strip().upper()
                category = row["category"].strip()
                value = float(row["aggregate"])
                if category == HOUSEHOLDS_CATEGORY:
                    counts[country] = value
                else:
                    aggregates[(country, category)] = value
        return cls(aggregates, counts)


@dataclass(frozen=True)
class PipelineConfig:
    """Step toggles and parameters for `run_pipeline`.

    `skip_countries` maps a step name (adjust_weights, correct_deposits,
    tail_imputation, rescale) to the countries it must leave untouched,
    mirroring the per-country exemptions of the reference procedure.
    """

    adjust_weights: bool = True
    correct_deposits: bool = True
    tail_imputation: bool = True
    portfolio_allocation: bool = True
    rescale: bool = True
    theta: float = DEFAULT_THETA
    w_min: float = DEFAULT_W_MIN
    portfolio: TopPortfolioModel = field(default_factory=TopPortfolioModel)
    seed: int = 0
    sampling_mode: str = "random"  # or "quantile_grid"
    include_richlist_records: bool = True
    skip_countries: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def skipped(self, step: str, country: str) -> bool:
        return country in self.skip_countries.get(step, ())


def adjust_weights(pop: Population, na: NationalAccountsTable) -> Population:
    """Scale weights so each country's weight total equals its household
    count; relative weights within a country are unchanged (one multiply
    per record)."""
    factors: dict[str, float] = {}
    for country in pop.countries():
        if country not in na.household_count:
            raise UnknownCountry(country)
    weights = pop.column("weight")
    for country in pop.countries():
        mask = np.fromiter(
            (r.country == country for r in pop), dtype=bool, count=len(pop)
        )
        factors[country] = na.household_count[country] / float(np.sum(weights[mask]))
    records = [
        r if factors[r.country] == 1.0 else replace(r, weight=r.weight * factors[r.country])
        for r in pop
    ]
    return Population(records, pop.reference_year)


def correct_deposits(
    pop: Population, theta: float, skip: tuple[str, ...] = ()
) -> Population:
    """Floor deposits at `theta` times gross income.

    Deposits below the floor are considered underreported and raised to it;
    every other field is untouched. Modified record ids are logged.
    """
    if not 0.0 <= theta <= 1.0:
        raise InvalidTheta(f"theta must lie in [0, 1], got {theta}")
    if theta == 0.0:
        return pop
    records = []
    modified = []
    for r in pop:
        floor = theta * r.gross_income
        if r.country not in skip and r.assets.deposits < floor:
            records.append(replace(r, assets=replace(r.assets, deposits=floor)))
            modified.append(r.id)
        else:
            records.append(r)
    if modified:
        log.info("deposit floor raised %d of %d records", len(modified), len(pop))
        log.debug("deposit-corrected record ids: %s", modified)
    return Population(records, pop.reference_year)


def fit_pareto(
    top_obs, w_min: float, source: TailSource = TailSource.HFCS_ONLY
) -> ParetoTail:
    """Maximum-likelihood (Hill) tail fit: alpha = n / sum(ln(w_i / w_min)).

    Scale-equivariant: rescaling observations and the threshold together
    leaves alpha unchanged.
    """
    obs = np.asarray(top_obs, dtype=np.float64)
    if obs.size < 2:
        raise TooFewObservations(f"need >= 2 observations, got {obs.size}")
    if np.any(obs < w_min):
        raise ObservationBelowThreshold(
            f"all observations must be >= w_min = {w_min}"
        )
    log_sum = float(np.sum(np.log(obs / w_min)))
    if log_sum <= 0.0:
        raise TooFewObservations("observations carry no spread above w_min")
    return ParetoTail(
        alpha=obs.size / log_sum, w_min=w_min, n_fit=int(obs.size), source=source
    )


def _gap_wealths(
    tail: ParetoTail,
    a: float,
    b: float,
    weighted_count_above_wmin: float,
    seed: int,
    mode: str,
) -> np.ndarray:
    s_a = (tail.w_min / a) ** tail.alpha
    s_b = (tail.w_min / b) ** tail.alpha
    count = round(weighted_count_above_wmin * (s_a - s_b))
    if count <= 0:
        return np.empty(0)
    if mode == "quantile_grid":
        u = (np.arange(count, dtype=np.float64) + 0.5) / count
    elif mode == "random":
        rng = np.random.Generator(np.random.Philox(key=seed))
        u = rng.random(count)
    else:
        raise ValueError(f"unknown sampling mode: {mode!r}")
    # u = 0 maps to b (inclusive), u -> 1 approaches a from above: (a, b].
    survival = s_b + u * (s_a - s_b)
    return tail.w_min * np.power(survival, -1.0 / tail.alpha)


def sample_gap(
    tail: ParetoTail,
    gap: tuple[float, float],
    weighted_count_above_wmin: float,
    seed: int,
    country: str = "EU",
    implicate: int = 1,
    mode: str = "random",
    id_prefix: str = "imp",
) -> list[HouseholdRecord]:
    """Synthetic weight-1 households filling the wealth interval (a, b].

    The record count is the rounded Pareto mass of the interval relative to
    the weighted population above w_min; wealths come from the inverse CDF
    of the truncated tail. Sampled households carry their net wealth in a
    single placeholder asset until portfolio allocation replaces it.
    """
    a, b = gap
    if a > b:
        raise EmptyGap(f"gap bounds inverted: ({a}, {b}]")
    if a < tail.w_min:
        raise EmptyGap(f"gap must start at or above w_min = {tail.w_min}")
    if a == b:
        return []
    wealths = _gap_wealths(tail, a, b, weighted_count_above_wmin, seed, mode)
    return [
        HouseholdRecord(
            id=f"{id_prefix}-{country}-{implicate}-{i:06d}",
            country=country,
            implicate=implicate,
            weight=1.0,
            assets=AssetVector(other_financial=float(w)),
            liabilities=0.0,
            gross_income=0.0,
            synthetic=True,
        )
        for i, w in enumerate(wealths)
    ]


def allocate_portfolio(
    net_wealth: float, model: TopPortfolioModel
) -> tuple[AssetVector, float]:
    """Balance sheet for a household of which only net wealth is known.

    liabilities = ratio * net, gross = net + liabilities, and gross is split
    by the allocation shares; the largest share absorbs the float remainder
    so the components sum to gross and net reconstructs exactly.
    """
    if not net_wealth > 0:
        raise NonPositiveNetWealth(f"net wealth must be > 0, got {net_wealth}")
    liabilities = model.liability_ratio * net_wealth
    gross = net_wealth + liabilities
    shares = model.allocation_shares
    residual_cat = max(ASSET_CATEGORIES, key=lambda c: shares.get(c, 0.0))
    components = {
        c: shares.get(c, 0.0) * gross for c in ASSET_CATEGORIES if c != residual_cat
    }
    components[residual_cat] = gross - sum(components.values())
    return AssetVector(**components), liabilities


def richlist_records(
    entries: list[float],
    model: TopPortfolioModel | None,
    country: str,
    implicate: int,
) -> list[HouseholdRecord]:
    """Weight-1 records for rich-list households (net wealth only known)."""
    records = []
    for i, w in enumerate(entries):
        if model is not None:
            assets, liabilities = allocate_portfolio(w, model)
        else:
            assets, liabilities = AssetVector(other_financial=float(w)), 0.0
        records.append(
            HouseholdRecord(
                id=f"rl-{country}-{implicate}-{i:04d}",
                country=country,
                implicate=implicate,
                weight=1.0,
                assets=assets,
                liabilities=liabilities,
                gross_income=0.0,
                synthetic=True,
            )
        )
    return records


def rescale(pop: Population, na: NationalAccountsTable) -> Population:
    """Scale each asset category to its national-accounts aggregate.

    Categories without a target are left alone. Liabilities are scaled by
    their own factor, except that records entering the step with negative
    net wealth are capped at factor 1 so their net wealth cannot fall; the
    shortfall is redistributed over the uncapped records so the liability
    aggregate is still hit exactly.
    """
    weights = pop.column("weight")
    countries = np.array([r.country for r in pop.records], dtype=object)
    asset_factor: dict[tuple[str, str], float] = {}
    liab_plan: dict[str, tuple[float, float]] = {}  # country -> (uncapped, capped)

    for country in pop.countries():
        mask = countries == country
        for category in ASSET_CATEGORIES:
            target = na.aggregate(country, category)
            if target is None:
                continue
            survey = float(np.sum(weights[mask] * pop.column(category)[mask]))
            if survey == 0.0:
                if target == 0.0:
                    continue
                raise ZeroSurveyAggregate(country, category)
            asset_factor[(country, category)] = target / survey

        target = na.aggregate(country, LIABILITIES_CATEGORY)
        if target is None:
            continue
        liab = pop.column("liabilities")[mask]
        w = weights[mask]
        survey = float(np.sum(w * liab))
        if survey == 0.0:
            if target == 0.0:
                continue
            raise ZeroSurveyAggregate(country, LIABILITIES_CATEGORY)
        f = target / survey
        if f <= 1.0:
            liab_plan[country] = (f, f)
            continue
        # Cap net-negative records at 1 and spread the shortfall.
        negative = pop.column("net_wealth")[mask] < 0.0
        capped_total = float(np.sum(w[negative] * liab[negative]))
        uncapped_total = survey - capped_total
        if uncapped_total <= 0.0:
            log.warning(
                "%s: every liability holder is net-negative; aggregate target missed",
                country,
            )
            liab_plan[country] = (1.0, 1.0)
        else:
            liab_plan[country] = ((target - capped_total) / uncapped_total, 1.0)

    records = []
    for r in pop:
        updates = {}
        changed = False
        for category in ASSET_CATEGORIES:
            f = asset_factor.get((r.country, category))
            value = getattr(r.assets, category)
            if f is None or f == 1.0 or value == 0.0:
                updates[category] = value
            else:
                updates[category] = value * f
                changed = True
        liabilities = r.liabilities
        plan = liab_plan.get(r.country)
        if plan is not None and r.liabilities != 0.0:
            f = plan[1] if r.net_wealth < 0.0 else plan[0]
            if f != 1.0:
                liabilities = r.liabilities * f
                changed = True
        if changed:
            records.append(
                replace(r, assets=AssetVector(**updates), liabilities=liabilities)
            )
        else:
            records.append(r)
    return Population(records, pop.reference_year)


def _impute_tail(
    pop: Population, richlist: RichList | None, config: PipelineConfig
) -> Population:
    """Step 4 (and the rich-list append): per country, fit the tail and fill
    the survey/rich-list gap with sampled households."""
    model = config.portfolio if config.portfolio_allocation else None
    new_records = list(pop.records)
    for ci, country in enumerate(pop.countries()):
        if config.skipped("tail_imputation", country):
            continue
        rl_wealths = richlist.for_country(country) if richlist is not None else []
        if not rl_wealths:
            # No anchor beyond the survey: nothing to fill against.
            continue
        mask = np.fromiter(
            (r.country == country for r in pop), dtype=bool, count=len(pop)
        )
        net = pop.column("net_wealth")[mask]
        weights = pop.column("weight")[mask]
        top_mask = net >= config.w_min
        obs = np.concatenate((net[top_mask], np.asarray(rl_wealths)))
        if obs.size < 2:
            log.warning("%s: too few tail observations; imputation skipped", country)
            continue
        tail = fit_pareto(obs, config.w_min, source=TailSource.HFCS_PLUS_RICHLIST)
        n_above = float(np.sum(weights[top_mask]))
        a = float(np.max(net))
        b = float(min(rl_wealths))
        if b > a and a >= config.w_min:
            derived_seed = (
                config.seed * 1_000_003 + pop.implicate * 1_009 + ci
            ) % (2**63)
            sampled = sample_gap(
                tail,
                (a, b),
                n_above,
                seed=derived_seed,
                country=country,
                implicate=pop.implicate,
                mode=config.sampling_mode,
            )
            if model is not None:
                allocated = []
                for r in sampled:
                    assets, liabilities = allocate_portfolio(r.net_wealth, model)
                    allocated.append(
                        replace(r, assets=assets, liabilities=liabilities)
                    )
                sampled = allocated
            new_records.extend(sampled)
            log.info(
                "%s implicate %d: imputed %d tail households (alpha=%.3f)",
                country,
                pop.implicate,
                len(sampled),
                tail.alpha,
            )
        if config.include_richlist_records:
            new_records.extend(
                richlist_records(rl_wealths, model, country, pop.implicate)
            )
    return Population(new_records, pop.reference_year)


def correct_population(
    pop: Population,
    na: NationalAccountsTable | None,
    richlist: RichList | None,
    config: PipelineConfig,
) -> Population:
    """All enabled steps, in order, for a single implicate."""
    if config.adjust_weights and na is not None:
        skip = config.skip_countries.get("adjust_weights", ())
        if skip:
            # Per-country skipping: reuse targets equal to current totals.
            counts = dict(na.household_count)
            weights = pop.column("weight")
            for country in pop.countries():
                if country in skip:
                    mask = np.fromiter(
                        (r.country == country for r in pop), dtype=bool, count=len(pop)
                    )
                    counts[country] = float(np.sum(weights[mask]))
            pop = adjust_weights(pop, NationalAccountsTable(na.aggregates, counts))
        else:
            pop = adjust_weights(pop, na)
    if config.correct_deposits:
        pop = correct_deposits(
            pop, config.theta, skip=config.skip_countries.get("correct_deposits", ())
        )
    if config.tail_imputation:
        pop = _impute_tail(pop, richlist, config)
    if config.rescale and na is not None:
        pop = rescale(pop, na)
    return pop


def run_pipeline(
    ds: MultiImplicateDataset,
    na: NationalAccountsTable | None,
    richlist: RichList | None,
    config: PipelineConfig,
) -> MultiImplicateDataset:
    """Apply the correction steps to every implicate.

    With every step disabled the dataset passes through unchanged. Tail
    imputation appends synthetic records, so the record count can only
    grow, and grows strictly whenever a nonempty gap is filled.
    """
    populations = tuple(
        correct_population(pop, na, richlist, config) for pop in ds
    )
    return MultiImplicateDataset(
        populations, provenance=ds.provenance + " | corrected"
    )
