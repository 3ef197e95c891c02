import numpy as np
import pytest

from wealthsim.dataset import AssetVector, HouseholdRecord, MultiImplicateDataset, Population
from wealthsim.syngen import SynthSpec, generate


def make_record(
    net,
    weight=1.0,
    rid="h0",
    country="EU",
    implicate=1,
    liabilities=0.0,
    income=0.0,
):
    """Record whose net wealth equals `net` via a single asset category."""
    return HouseholdRecord(
        id=rid,
        country=country,
        implicate=implicate,
        weight=weight,
        assets=AssetVector(other_financial=net + liabilities),
        liabilities=liabilities,
        gross_income=income,
    )


def make_population(values, weights=None, country="EU", implicate=1):
    values = list(values)
    weights = [1.0] * len(values) if weights is None else list(weights)
    return Population(
        [
            make_record(v, w, rid=f"h{i}", country=country, implicate=implicate)
            for i, (v, w) in enumerate(zip(values, weights))
        ]
    )


def replicate_dataset(pop: Population) -> MultiImplicateDataset:
    """Five identical implicates built from one population."""
    from dataclasses import replace

    pops = [pop]
    for k in range(2, 6):
        pops.append(
            Population([replace(r, implicate=k) for r in pop], pop.reference_year)
        )
    return MultiImplicateDataset(tuple(pops))


def random_population(rng, n=None, allow_negative=False, max_n=200):
    """Lognormal-ish population with random weights for oracle checks."""
    n = int(rng.integers(2, max_n + 1)) if n is None else n
    values = np.exp(rng.normal(11.0, 1.2, size=n))
    if allow_negative:
        flip = rng.random(n) < 0.15
        values = np.where(flip, -0.2 * values, values)
    weights = rng.uniform(0.5, 50.0, size=n)
    return values, weights


@pytest.fixture(scope="session")
def small_ds() -> MultiImplicateDataset:
    spec = SynthSpec(
        n_households=2_000,
        body_mu=11.0,
        body_sigma=1.0,
        tail_alpha=2.0,
        tail_w_min=1_000_000.0,
        tail_fraction=0.05,
        seed=7,
    )
    return generate(spec)


@pytest.fixture(scope="session")
def medium_ds() -> MultiImplicateDataset:
    spec = SynthSpec(
        n_households=10_000,
        body_mu=11.0,
        body_sigma=1.0,
        tail_alpha=2.0,
        tail_w_min=1_000_000.0,
        tail_fraction=0.05,
        seed=42,
    )
    return generate(spec)
