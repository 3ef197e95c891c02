"""Synthetic household populations with analytically known distributions.

Net wealth is drawn from a lognormal body with a Pareto upper tail, so the
full correction-and-taxation pipeline can be exercised and verified against
closed-form shares without access-restricted survey microdata.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .dataset import (
    ASSET_CATEGORIES,
    AssetVector,
    HouseholdRecord,
    MultiImplicateDataset,
    Population,
)
from .errors import InvalidFloor, InvalidSpec

DEFAULT_ASSET_SPLIT = {
    "deposits": 0.18,
    "bonds": 0.03,
    "listed_shares": 0.05,
    "funds": 0.07,
    "other_financial": 0.07,
    "main_residence": 0.40,
    "investment_property": 0.10,
    "business_wealth": 0.07,
    "vehicles_valuables": 0.03,
}


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of the synthetic population.

    Net wealth ~ lognormal(body_mu, body_sigma) with probability
    1 - tail_fraction, else Pareto(tail_alpha, tail_w_min). Assets are split
    across categories by fixed shares of gross wealth; liabilities are
    `liability_ratio` of gross. `income_rate` sets gross income as a fraction
    of gross wealth (used by the deposit-correction step).
    """

    n_households: int
    body_mu: float
    body_sigma: float
    tail_alpha: float
    tail_w_min: float
    tail_fraction: float
    asset_split: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_ASSET_SPLIT)
    )
    liability_ratio: float = 0.10
    seed: int = 0
    income_rate: float = 0.04
    implicate_noise: float = 0.0
    country: str = "EU"
    reference_year: int = 2017

    def validate(self) -> None:
        if self.n_households <= 0:
            raise InvalidSpec("n_households must be > 0")
        if self.body_sigma <= 0:
            raise InvalidSpec("body_sigma must be > 0")
        if self.tail_alpha <= 0:
            raise InvalidSpec("tail_alpha must be > 0")
        if self.tail_w_min <= 0:
            raise InvalidSpec("tail_w_min must be > 0")
        if not 0.0 <= self.tail_fraction < 1.0:
            raise InvalidSpec("tail_fraction must lie in [0, 1)")
        unknown = set(self.asset_split) - set(ASSET_CATEGORIES)
        if unknown:
            raise InvalidSpec(f"unknown asset categories: {sorted(unknown)}")
        if any(v < 0 for v in self.asset_split.values()):
            raise InvalidSpec("asset shares must be >= 0")
        if abs(sum(self.asset_split.values()) - 1.0) > 1e-12:
            raise InvalidSpec("asset shares must sum to 1")
        if not 0.0 <= self.liability_ratio < 1.0:
            raise InvalidSpec("liability_ratio must lie in [0, 1)")
        if self.income_rate < 0:
            raise InvalidSpec("income_rate must be >= 0")
        if self.implicate_noise < 0:
            raise InvalidSpec("implicate_noise must be >= 0")


@dataclass(frozen=True)
class RichList:
    """External ranking of very wealthy households, sorted descending."""

    entries: tuple[tuple[str, float], ...]

    def __post_init__(self):
        wealths = [w for _, w in self.entries]
        if any(w <= 0 for w in wealths):
            raise ValueError("rich-list wealth must be > 0")
        if any(wealths[i] < wealths[i + 1] for i in range(len(wealths) - 1)):
            raise ValueError("rich-list entries must be sorted descending")

    def for_country(self, country: str) -> list[float]:
        return [w for c, w in self.entries if c == country]

    def countries(self) -> tuple[str, ...]:
        return tuple(sorted({c for c, _ in self.entries}))


def pareto_draws(rng: np.random.Generator, alpha: float, w_min: float, n: int) -> np.ndarray:
    """Inverse-transform Pareto sample: w = w_min * (1 - u)^(-1/alpha)."""
    u = rng.random(n)
    return w_min * np.power(1.0 - u, -1.0 / alpha)


def _build_records(
    spec: SynthSpec, net: np.ndarray, implicate: int
) -> list[HouseholdRecord]:
    shares = [(name, spec.asset_split.get(name, 0.0)) for name in ASSET_CATEGORIES]
    # Largest share absorbs the rounding remainder so components sum to gross.
    residual_cat = max(shares, key=lambda kv: kv[1])[0]
    records = []
    rho = spec.liability_ratio
    for i, w in enumerate(net):
        w = float(w)
        gross = w / (1.0 - rho)
        liabilities = gross - w
        components = {
            name: share * gross for name, share in shares if name != residual_cat
        }
        components[residual_cat] = max(gross - sum(components.values()), 0.0)
        records.append(
            HouseholdRecord(
                id=f"syn-{i:06d}",
                country=spec.country,
                implicate=implicate,
                weight=1.0,
                assets=AssetVector(**components),
                liabilities=liabilities,
                gross_income=spec.income_rate * gross,
            )
        )
    return records


def generate(spec: SynthSpec) -> MultiImplicateDataset:
    """Deterministic five-implicate dataset for a given spec and seed.

    All draws come from one counter-based Philox stream keyed by the seed,
    so regeneration is bit-identical regardless of platform. Implicates are
    identical unless `implicate_noise` > 0, in which case implicates 2..5
    jitter asset values (and liabilities) by that relative factor.
    """
    spec.validate()
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    n = spec.n_households

    is_tail = rng.random(n) < spec.tail_fraction
    body = np.exp(spec.body_mu + spec.body_sigma * rng.standard_normal(n))
    tail = pareto_draws(rng, spec.tail_alpha, spec.tail_w_min, n)
    net = np.where(is_tail, tail, body)

    base_records = _build_records(spec, net, implicate=1)
    populations = [Population(base_records, spec.reference_year)]
    for k in (2, 3, 4, 5):
        if spec.implicate_noise > 0:
            factors = 1.0 + spec.implicate_noise * (2.0 * rng.random(n) - 1.0)
            jittered = []
            for r, f in zip(base_records, factors.tolist()):
                assets = AssetVector(
                    **{c: getattr(r.assets, c) * f for c in ASSET_CATEGORIES}
                )
                jittered.append(
                    replace(
                        r,
                        implicate=k,
                        assets=assets,
                        liabilities=r.liabilities * f,
                    )
                )
            populations.append(Population(jittered, spec.reference_year))
        else:
            populations.append(
                Population(
                    [replace(r, implicate=k) for r in base_records],
                    spec.reference_year,
                )
            )
    return MultiImplicateDataset(
        tuple(populations),
        provenance=f"synthetic n={n} seed={spec.seed}",
    )


def generate_richlist(
    tail, floor: float, count: int, seed: int, country: str = "EU"
) -> RichList:
    """Pareto draws conditioned on exceeding `floor`, sorted descending.

    `tail` carries the fitted shape and threshold; conditional draws use
    w = floor * (1 - u)^(-1/alpha).
    """
    if not floor > tail.w_min:
        raise InvalidFloor(
            f"floor must exceed the tail threshold {tail.w_min}, got {floor}"
        )
    if count < 0:
        raise InvalidFloor("count must be >= 0")
    rng = np.random.Generator(np.random.Philox(key=seed))
    draws = sorted(pareto_draws(rng, tail.alpha, floor, count), reverse=True)
    return RichList(tuple((country, float(w)) for w in draws))


def quantile_grid_richlist(tail, floor: float, count: int, country: str = "EU") -> RichList:
    """Deterministic rich list at conditional quantile midpoints.

    Entry i sits at u = (i - 0.5) / count of the conditional distribution
    above `floor`; useful when sampling noise must be excluded from a check.
    """
    if not floor > tail.w_min:
        raise InvalidFloor(
            f"floor must exceed the tail threshold {tail.w_min}, got {floor}"
        )
    u = (np.arange(count, dtype=np.float64) + 0.5) / count
    draws = floor * np.power(1.0 - u, -1.0 / tail.alpha)
    return RichList(tuple((country, float(w)) for w in sorted(draws, reverse=True)))
