"""Household wealth microdata model and CSV ingestion.

Records follow the survey convention of five multiply-imputed implicates:
the same households appear once per implicate, downstream statistics are
computed per implicate and averaged. Monetary values are float64 EUR.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    BadImplicateIndex,
    EmptyPopulation,
    MissingColumn,
    NonNumericValue,
    NonPositiveWeight,
)

# Asset taxonomy: the smallest category set that supports the three tax bases
# and national-accounts linking. Land is not separate; land underlying
# dwellings rides inside the property categories, other land inside
# business_wealth.
ASSET_CATEGORIES = (
    "deposits",
    "bonds",
    "listed_shares",
    "funds",
    "other_financial",
    "main_residence",
    "investment_property",
    "business_wealth",
    "vehicles_valuables",
)

FIP_CATEGORIES = (
    "deposits",
    "bonds",
    "listed_shares",
    "funds",
    "other_financial",
    "investment_property",
)

PROPERTY_CATEGORIES = ("main_residence", "investment_property")

CSV_COLUMNS = (
    "country",
    "implicate",
    "hh_id",
    "weight",
    "gross_income",
    *ASSET_CATEGORIES,
    "liabilities",
)

IMPLICATE_INDICES = (1, 2, 3, 4, 5)


class WealthBase(str, Enum):
    """Tax base selector: net wealth, financial + investment property, or
    total property (main residence + investment property incl. land)."""

    NET = "net"
    FIP = "fip"
    PROPERTY = "property"


@dataclass(frozen=True, slots=True)
class AssetVector:
    """Gross asset holdings of one household, EUR, all components >= 0."""

    deposits: float = 0.0
    bonds: float = 0.0
    listed_shares: float = 0.0
    funds: float = 0.0
    other_financial: float = 0.0
    main_residence: float = 0.0
    investment_property: float = 0.0
    business_wealth: float = 0.0
    vehicles_valuables: float = 0.0

    def __post_init__(self):
        for name in ASSET_CATEGORIES:
            if getattr(self, name) < 0:
                raise ValueError(f"asset component {name} must be >= 0")

    @property
    def gross(self) -> float:
        return (
            self.deposits
            + self.bonds
            + self.listed_shares
            + self.funds
            + self.other_financial
            + self.main_residence
            + self.investment_property
            + self.business_wealth
            + self.vehicles_valuables
        )

    @property
    def fip(self) -> float:
        return (
            self.deposits
            + self.bonds
            + self.listed_shares
            + self.funds
            + self.other_financial
            + self.investment_property
        )

    @property
    def property_total(self) -> float:
        return self.main_residence + self.investment_property

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in ASSET_CATEGORIES}


@dataclass(frozen=True, slots=True)
class HouseholdRecord:
    """One household in one implicate.

    `weight` is the number of households the record represents. `synthetic`
    is set only by the top-tail imputation step.
    """

    id: str
    country: str
    implicate: int
    weight: float
    assets: AssetVector
    liabilities: float
    gross_income: float
    synthetic: bool = False

    def __post_init__(self):
        if not self.weight > 0:
            raise ValueError(f"record {self.id}: weight must be > 0")
        if self.implicate not in IMPLICATE_INDICES:
            raise ValueError(f"record {self.id}: implicate must be in 1..5")
        if self.liabilities < 0:
            raise ValueError(f"record {self.id}: liabilities must be >= 0")
        if self.gross_income < 0:
            raise ValueError(f"record {self.id}: gross_income must be >= 0")

    @property
    def gross_wealth(self) -> float:
        return self.assets.gross

    @property
    def net_wealth(self) -> float:
        # May be negative; liabilities are not capped by assets.
        return self.assets.gross - self.liabilities

    @property
    def fip_wealth(self) -> float:
        return self.assets.fip

    @property
    def property_wealth(self) -> float:
        return self.assets.property_total


def wealth_base(record: HouseholdRecord, base: WealthBase) -> float:
    """Value of `record` under the given tax base (NET may be negative)."""
    if base is WealthBase.NET:
        return record.net_wealth
    if base is WealthBase.FIP:
        return record.fip_wealth
    if base is WealthBase.PROPERTY:
        return record.property_wealth
    raise ValueError(f"unknown wealth base: {base!r}")


class Population:
    """All records of a single implicate. Immutable after construction;
    numpy column views are extracted lazily and cached, so shared read access
    is safe."""

    __slots__ = ("records", "reference_year", "_columns")

    def __init__(self, records: Iterable[HouseholdRecord], reference_year: int = 2017):
        records = tuple(records)
        if not records:
            raise EmptyPopulation("population must contain at least one record")
        implicates = {r.implicate for r in records}
        if len(implicates) != 1:
            raise BadImplicateIndex(
                f"population mixes implicate indices {sorted(implicates)}"
            )
        self.records = records
        self.reference_year = reference_year
        self._columns: dict[str, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[HouseholdRecord]:
        return iter(self.records)

    @property
    def implicate(self) -> int:
        return self.records[0].implicate

    def column(self, name: str) -> np.ndarray:
        """Cached float64 column for `weight`, `liabilities`, `gross_income`,
        any asset category, or the derived wealth aggregates."""
        cached = self._columns.get(name)
        if cached is not None:
            return cached
        n = len(self.records)
        if name in ASSET_CATEGORIES:
            col = np.fromiter(
                (getattr(r.assets, name) for r in self.records), np.float64, count=n
            )
        elif name in ("weight", "liabilities", "gross_income"):
            col = np.fromiter(
                (getattr(r, name) for r in self.records), np.float64, count=n
            )
        elif name in ("gross_wealth", "net_wealth", "fip_wealth", "property_wealth"):
            col = np.fromiter(
                (getattr(r, name) for r in self.records), np.float64, count=n
            )
        else:
            raise KeyError(f"unknown column: {name}")
        col.setflags(write=False)
        self._columns[name] = col
        return col

    def base_values(self, base: WealthBase) -> np.ndarray:
        return self.column(
            {
                WealthBase.NET: "net_wealth",
                WealthBase.FIP: "fip_wealth",
                WealthBase.PROPERTY: "property_wealth",
            }[base]
        )

    def countries(self) -> tuple[str, ...]:
        return tuple(sorted({r.country for r in self.records}))

    def total_weight(self) -> float:
        return float(np.sum(self.column("weight")))


@dataclass(frozen=True)
class MultiImplicateDataset:
    """The five implicate populations of one survey wave."""

    implicates: tuple[Population, ...]
    provenance: str = ""

    def __post_init__(self):
        indices = tuple(p.implicate for p in self.implicates)
        if indices != IMPLICATE_INDICES:
            raise BadImplicateIndex(
                f"dataset must hold implicates 1..5 in order, got {indices}"
            )

    def __iter__(self) -> Iterator[Population]:
        return iter(self.implicates)

    def population(self, implicate: int) -> Population:
        return self.implicates[implicate - 1]

    @property
    def n_records(self) -> int:
        return len(self.implicates[0])


DEFAULT_SCHEMA: Mapping[str, str] = {name: name for name in CSV_COLUMNS}


def _parse_float(raw: str | None, row: int, column: str) -> float:
    if raw is None or raw.strip() == "":
        raise NonNumericValue(row, column, "" if raw is None else raw)
    try:
        return float(raw)
    except ValueError:
        raise NonNumericValue(row, column, raw) from None


def load_population(
    path: str | Path,
    schema: Mapping[str, str] | None = None,
    reference_year: int = 2017,
) -> MultiImplicateDataset:
    """Read household microdata from CSV into a validated dataset.

    `schema` maps the canonical column names (CSV_COLUMNS) onto the file's
    header, so survey-specific variable codes stay out of the engine. Files
    carrying only implicate 1 are replicated to all five implicates; files
    carrying all five are grouped as-is. Missing numeric cells are an error,
    never implicit zeros.
    """
    schema = dict(DEFAULT_SCHEMA if schema is None else schema)
    for canonical in CSV_COLUMNS:
        if canonical not in schema:
            raise MissingColumn(canonical)

    by_implicate: dict[int, list[HouseholdRecord]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for canonical in CSV_COLUMNS:
            if schema[canonical] not in header:
                raise MissingColumn(schema[canonical])

        for row_no, row in enumerate(reader, start=1):
            raw_impl = row.get(schema["implicate"])
            impl_f = _parse_float(raw_impl, row_no, schema["implicate"])
            implicate = int(impl_f)
            if implicate != impl_f or implicate not in IMPLICATE_INDICES:
                raise BadImplicateIndex(
                    f"row {row_no}: implicate must be an integer in 1..5, got {raw_impl!r}"
                )
            weight = _parse_float(row.get(schema["weight"]), row_no, schema["weight"])
            if not weight > 0:
                raise NonPositiveWeight(row_no, weight)
            numeric = {
                name: _parse_float(row.get(schema[name]), row_no, schema[name])
                for name in (*ASSET_CATEGORIES, "liabilities", "gross_income")
            }
            assets = AssetVector(**{name: numeric[name] for name in ASSET_CATEGORIES})
            record = HouseholdRecord(
                id=str(row.get(schema["hh_id"], "")),
                country=str(row.get(schema["country"], "")).strip().upper(),
                implicate=implicate,
                weight=weight,
                assets=assets,
                liabilities=numeric["liabilities"],
                gross_income=numeric["gross_income"],
            )
            by_implicate.setdefault(implicate, []).append(record)

    present = set(by_implicate)
    if present == {1}:
        # Single-implicate file: replicate to the full five-implicate layout.
        base = by_implicate[1]
        populations = [Population(base, reference_year)]
        for k in (2, 3, 4, 5):
            populations.append(
                Population([replace(r, implicate=k) for r in base], reference_year)
            )
    elif present == set(IMPLICATE_INDICES):
        populations = [
            Population(by_implicate[k], reference_year) for k in IMPLICATE_INDICES
        ]
    elif not present:
        raise EmptyPopulation(f"{path}: no data rows")
    else:
        raise BadImplicateIndex(
            f"file must carry implicate 1 only or all of 1..5, got {sorted(present)}"
        )

    return MultiImplicateDataset(tuple(populations), provenance=f"loaded from {path}")


def save_dataset(ds: MultiImplicateDataset, path: str | Path) -> None:
    """Write all five implicates in the canonical CSV schema.

    Floats are written with repr so that load -> save -> load round-trips
    value-identically.
    """
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for pop in ds:
            for r in pop:
                writer.writerow(
                    [
                        r.country,
                        r.implicate,
                        r.id,
                        repr(float(r.weight)),
                        repr(float(r.gross_income)),
                        *(
                            repr(float(getattr(r.assets, name)))
                            for name in ASSET_CATEGORIES
                        ),
                        repr(float(r.liabilities)),
                    ]
                )
