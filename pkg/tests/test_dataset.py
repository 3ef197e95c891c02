import csv

import numpy as np
import pytest

from wealthsim.dataset import (
    CSV_COLUMNS,
    AssetVector,
    HouseholdRecord,
    Population,
    WealthBase,
    load_population,
    save_dataset,
    wealth_base,
)
from wealthsim.errors import (
    BadImplicateIndex,
    EmptyPopulation,
    MissingColumn,
    NonNumericValue,
    NonPositiveWeight,
)

from conftest import make_record


def write_csv(path, rows, columns=CSV_COLUMNS):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)


def base_row(**overrides):
    row = {name: "0" for name in CSV_COLUMNS}
    row.update(
        country="AT", implicate="1", hh_id="h1", weight="1.0", gross_income="0"
    )
    row.update(overrides)
    return row


class TestLoad:
    def test_single_implicate_replicates_to_five(self, tmp_path):
        path = tmp_path / "data.csv"
        write_csv(
            path,
            [
                base_row(hh_id="a", weight="1.5", deposits="100"),
                base_row(hh_id="b", weight="2.0", deposits="200"),
            ],
        )
        ds = load_population(path)
        assert len(ds.implicates) == 5
        for pop in ds:
            assert pop.total_weight() == pytest.approx(3.5)
            assert len(pop) == 2

    def test_nonpositive_weight(self, tmp_path):
        path = tmp_path / "data.csv"
        write_csv(path, [base_row(weight="0")])
        with pytest.raises(NonPositiveWeight):
            load_population(path)

    def test_non_numeric_value(self, tmp_path):
        path = tmp_path / "data.csv"
        write_csv(path, [base_row(deposits="abc")])
        with pytest.raises(NonNumericValue) as exc:
            load_population(path)
        assert exc.value.column == "deposits"
        assert exc.value.row == 1

    def test_missing_cell_is_error(self, tmp_path):
        path = tmp_path / "data.csv"
        write_csv(path, [base_row(bonds="")])
        with pytest.raises(NonNumericValue):
            load_population(path)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "data.csv"
        columns = [c for c in CSV_COLUMNS if c != "funds"]
        rows = [{k: v for k, v in base_row().items() if k != "funds"}]
        write_csv(path, rows, columns)
        with pytest.raises(MissingColumn):
            load_population(path)

    def test_bad_implicate_index(self, tmp_path):
        path = tmp_path / "data.csv"
        write_csv(path, [base_row(implicate="7")])
        with pytest.raises(BadImplicateIndex):
            load_population(path)

    def test_partial_implicates_rejected(self, tmp_path):
        path = tmp_path / "data.csv"
        write_csv(path, [base_row(implicate="1"), base_row(implicate="2")])
        with pytest.raises(BadImplicateIndex):
            load_population(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "data.csv"
        write_csv(path, [])
        with pytest.raises(EmptyPopulation):
            load_population(path)

    def test_schema_remap(self, tmp_path):
        path = tmp_path / "data.csv"
        columns = ["DA1110" if c == "deposits" else c for c in CSV_COLUMNS]
        row = base_row()
        row["DA1110"] = row.pop("deposits")
        row["DA1110"] = "55"
        write_csv(path, [row], columns)
        schema = {c: ("DA1110" if c == "deposits" else c) for c in CSV_COLUMNS}
        ds = load_population(path, schema)
        assert ds.implicates[0].records[0].assets.deposits == 55.0

    def test_round_trip_value_identical(self, tmp_path, small_ds):
        path = tmp_path / "round.csv"
        save_dataset(small_ds, path)
        loaded = load_population(path)
        for pop_a, pop_b in zip(small_ds, loaded):
            for a, b in zip(pop_a, pop_b):
                assert a.id == b.id
                assert a.weight == b.weight
                assert a.liabilities == b.liabilities
                assert a.assets.as_dict() == b.assets.as_dict()


class TestDerivedBases:
    def test_negative_net(self):
        r = HouseholdRecord(
            id="x",
            country="AT",
            implicate=1,
            weight=1.0,
            assets=AssetVector(),
            liabilities=10_000.0,
            gross_income=0.0,
        )
        assert wealth_base(r, WealthBase.NET) == -10_000.0

    def test_fip_sum(self):
        r = HouseholdRecord(
            id="x",
            country="AT",
            implicate=1,
            weight=1.0,
            assets=AssetVector(
                deposits=50_000,
                funds=30_000,
                investment_property=100_000,
                main_residence=200_000,
            ),
            liabilities=0.0,
            gross_income=0.0,
        )
        assert wealth_base(r, WealthBase.FIP) == 180_000.0
        assert wealth_base(r, WealthBase.PROPERTY) == 300_000.0

    def test_balance_sheet_identity(self, small_ds):
        for pop in small_ds:
            gross = pop.column("gross_wealth")
            net = pop.column("net_wealth")
            liab = pop.column("liabilities")
            np.testing.assert_allclose(net + liab, gross, rtol=1e-9)

    def test_fip_and_property_nonnegative(self, small_ds):
        pop = small_ds.implicates[0]
        assert np.all(pop.column("fip_wealth") >= 0)
        assert np.all(pop.column("property_wealth") >= 0)

    def test_negative_asset_rejected(self):
        with pytest.raises(ValueError):
            AssetVector(deposits=-1.0)


class TestPopulation:
    def test_mixed_implicates_rejected(self):
        records = [make_record(1.0, implicate=1), make_record(1.0, implicate=2)]
        with pytest.raises(BadImplicateIndex):
            Population(records)

    def test_empty_rejected(self):
        with pytest.raises(EmptyPopulation):
            Population([])

    def test_columns_are_readonly_and_cached(self):
        pop = Population([make_record(5.0, rid="a"), make_record(7.0, rid="b")])
        col = pop.column("net_wealth")
        assert col is pop.column("net_wealth")
        with pytest.raises(ValueError):
            col[0] = 1.0
