import numpy as np
import pytest

from wealthsim.dataset import WealthBase
from wealthsim.errors import InvalidDesign
from wealthsim.stats import WeightedSeries, weighted_quantile
from wealthsim.tax import (
    MSG_P95_RATE1,
    MSG_RATES_ORDER,
    PRESET_DESIGNS,
    BandSchedule,
    TaxDesign,
    design_diagnostics,
    liability,
    liability_array,
    resolve,
    revenue,
)

from conftest import make_population

# Reference magnitudes for net wealth (fixture constants, not recomputed).
NET_T90 = 629_352.0
NET_T95 = 973_265.0
NET_T99 = 2_406_940.0
NET_FIXTURE = (NET_T90, NET_T95, NET_T99)

MODEL1 = TaxDesign(WealthBase.NET, 90, (0.01, 0.02, 0.03), label="m1")
MODEL2 = TaxDesign(WealthBase.NET, 90, (0.01, 0.03, 0.05), label="m2")
MODEL3 = TaxDesign(WealthBase.NET, 95, (0.00, 0.02, 0.03), label="m3")


class TestDesignValidation:
    def test_nondecreasing_rule(self):
        problems = design_diagnostics("net", 90, [0.02, 0.01, 0.03])
        assert ("rates", MSG_RATES_ORDER) in problems

    def test_p95_forces_zero_first_rate(self):
        problems = design_diagnostics("net", 95, [0.01, 0.02, 0.03])
        assert ("rates", MSG_P95_RATE1) in problems

    def test_constructor_rejects(self):
        with pytest.raises(InvalidDesign):
            TaxDesign(WealthBase.NET, 90, (0.05, 0.01, 0.03))
        with pytest.raises(InvalidDesign):
            TaxDesign(WealthBase.NET, 92, (0.01, 0.02, 0.03))

    def test_presets(self):
        assert len(PRESET_DESIGNS) == 12
        labels = [d.label for d in PRESET_DESIGNS]
        assert len(set(labels)) == 12
        by_label = {d.label: d for d in PRESET_DESIGNS}
        assert by_label["model2-fip"].rates == (0.01, 0.03, 0.05)
        assert by_label["model3-net"].rates[0] == 0.0
        assert by_label["model3-net"].exemption_percentile == 95
        bases = {d.base for d in PRESET_DESIGNS}
        assert bases == {WealthBase.NET, WealthBase.FIP, WealthBase.PROPERTY}


class TestResolve:
    def test_uniform_1_to_100(self):
        pop = make_population(range(1, 101))
        sched = resolve(MODEL1, pop)
        assert sched.thresholds == (90.0, 95.0, 99.0)

    def test_single_record(self):
        pop = make_population([42.0])
        sched = resolve(MODEL1, pop)
        assert sched.thresholds == (42.0, 42.0, 42.0)

    def test_matches_quantile_oracle(self, small_ds):
        pop = small_ds.implicates[0]
        sched = resolve(MODEL1, pop)
        series = WeightedSeries(pop.column("net_wealth"), pop.column("weight"))
        for t, p in zip(sched.thresholds, (0.90, 0.95, 0.99)):
            assert t == weighted_quantile(series, p)


class TestLiability:
    fixture_m1 = BandSchedule(NET_FIXTURE, MODEL1.rates)
    fixture_m2 = BandSchedule(NET_FIXTURE, MODEL2.rates)
    fixture_m3 = BandSchedule(NET_FIXTURE, MODEL3.rates)

    def test_below_exemption(self):
        assert liability(500_000.0, self.fixture_m1) == 0.0

    def test_one_million_model1(self):
        assert liability(1_000_000.0, self.fixture_m1) == pytest.approx(3_973.83, abs=0.01)

    def test_model2_worked_example(self):
        assert liability(3_406_940.0, self.fixture_m2) == pytest.approx(96_449.38, abs=0.01)

    def test_boundary_p95_model3(self):
        assert liability(NET_T95, self.fixture_m3) == 0.0

    def test_negative_value_pays_zero(self):
        assert liability(-1e6, self.fixture_m1) == 0.0

    def test_continuity_at_thresholds(self):
        cent = 0.01
        for t in NET_FIXTURE:
            lo = liability(t - cent, self.fixture_m1)
            hi = liability(t + cent, self.fixture_m1)
            assert abs(hi - lo) <= 2 * cent * max(self.fixture_m1.rates)

    def test_monotone_with_bounded_slope(self):
        values = np.linspace(-1e6, 1e7, 2_001)
        liab = liability_array(values, self.fixture_m1)
        diffs = np.diff(liab)
        steps = np.diff(values)
        assert np.all(diffs >= -1e-9)
        assert np.all(diffs <= 0.03 * steps + 1e-9)

    def test_never_confiscates(self):
        values = np.exp(np.linspace(10, 20, 100))
        liab = liability_array(values, self.fixture_m2)
        assert np.all(liab < values)

    def test_array_matches_scalar(self):
        values = np.array([-5.0, 0.0, 7e5, 1e6, 2.5e6, 9e6])
        arr = liability_array(values, self.fixture_m2)
        for v, expected in zip(values, arr):
            assert liability(float(v), self.fixture_m2) == expected


class TestRevenue:
    def test_weighted_sum(self):
        # two households with liabilities {100, 50} at weights {2, 1}
        pop = make_population([100.0, 50.0], weights=[2.0, 1.0])
        sched = BandSchedule((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
        liab = liability_array(pop.base_values(WealthBase.NET), sched)
        total = float(np.sum(pop.column("weight") * liab))
        assert total == pytest.approx(250.0)

    def test_zero_rates(self, small_ds):
        design = TaxDesign(WealthBase.NET, 90, (0.0, 0.0, 0.0), label="zero")
        assert revenue(small_ds, design) == 0.0

    def test_brute_force_oracle(self, small_ds):
        design = PRESET_DESIGNS[0]
        engine = revenue(small_ds, design)
        total = 0.0
        for pop in small_ds:
            sched = resolve(design, pop)
            total += sum(
                r.weight * liability(r.net_wealth, sched) for r in pop
            )
        assert engine == pytest.approx(total / 5.0, rel=1e-9)

    def test_rate_dominance(self, small_ds):
        for base in WealthBase:
            m1 = TaxDesign(base, 90, (0.01, 0.02, 0.03))
            m2 = TaxDesign(base, 90, (0.01, 0.03, 0.05))
            m3 = TaxDesign(base, 95, (0.00, 0.02, 0.03))
            r1, r2, r3 = (revenue(small_ds, d) for d in (m1, m2, m3))
            assert r2 >= r1 >= r3

    def test_linear_in_weights(self, small_ds):
        from dataclasses import replace

        from wealthsim.dataset import MultiImplicateDataset, Population

        design = PRESET_DESIGNS[0]
        doubled = MultiImplicateDataset(
            tuple(
                Population([replace(r, weight=2 * r.weight) for r in pop])
                for pop in small_ds
            )
        )
        assert revenue(doubled, design) == pytest.approx(
            2 * revenue(small_ds, design), rel=1e-12
        )

    def test_shared_thresholds_mode(self, small_ds):
        design = PRESET_DESIGNS[0]
        # identical implicates -> shared thresholds change nothing
        assert revenue(small_ds, design, shared_thresholds=True) == pytest.approx(
            revenue(small_ds, design), rel=1e-12
        )
