"""Wealth-tax microsimulation workbench.

Corrects survey-style household wealth microdata for the missing top tail,
applies marginal wealth-tax designs on three bases, and scores each design
against redistribution, extreme-wealth, rent-extraction and CO2 goals.
"""

from .dataset import (
    AssetVector,
    HouseholdRecord,
    MultiImplicateDataset,
    Population,
    WealthBase,
    load_population,
    save_dataset,
    wealth_base,
)
from .correction import (
    NationalAccountsTable,
    ParetoTail,
    PipelineConfig,
    TopPortfolioModel,
    adjust_weights,
    allocate_portfolio,
    correct_deposits,
    fit_pareto,
    rescale,
    run_pipeline,
    sample_gap,
)
from .goals import GoalReport, RadarScores, apply_tax, evaluate_design, radar
from .stats import (
    LorenzCurve,
    WeightedSeries,
    concentration_index,
    gini,
    kakwani,
    lorenz_curve,
    top_share,
    weighted_quantile,
)
from .syngen import RichList, SynthSpec, generate, generate_richlist
from .tax import (
    PRESET_DESIGNS,
    BandSchedule,
    TaxDesign,
    liability,
    resolve,
    revenue,
)

__version__ = "0.1.0"
