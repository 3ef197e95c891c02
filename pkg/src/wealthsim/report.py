"""Run configuration, validation diagnostics, and batch emission of the
summary tables and per-design series.

A run produces, under the output directory:

  summary.json       per-design goal reports, resolved thresholds, radar
  percentiles.csv    P50/P75/P90/P95/P99 and Gini per wealth base
  topshares.csv      net-wealth top 10/5/1 shares before/after correction
  lorenz.csv         1,001-point Lorenz grid per base (implicate 1)
  figures/*.csv      one series per goal criterion, one row per design
  radar.csv          normalized goal scores per design

Outputs are byte-deterministic for a fixed config and seed.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from . import syngen
from .correction import (
    DEFAULT_LIABILITY_RATIO,
    DEFAULT_THETA,
    DEFAULT_W_MIN,
    NationalAccountsTable,
    PipelineConfig,
    TopPortfolioModel,
    run_pipeline,
)
from .dataset import MultiImplicateDataset, WealthBase, load_population
from .errors import WealthsimError
from .goals import (
    RADAR_AXES,
    DesignResult,
    RadarScores,
    evaluate_design,
    investment_property_decile_shares,
    radar,
)
from .stats import WeightedSeries, gini, lorenz_curve, top_share, weighted_quantile
from .syngen import RichList, SynthSpec
from .tax import PRESET_DESIGNS, TaxDesign, design_diagnostics

LORENZ_GRID_POINTS = 1001
PERCENTILE_PROBS = (("p50", 0.50), ("p75", 0.75), ("p90", 0.90), ("p95", 0.95), ("p99", 0.99))


class ConfigError(WealthsimError):
    pass


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" | "warning"
    path: str
    message: str

    def as_dict(self) -> dict:
        return {"level": self.level, "path": self.path, "message": self.message}

    def __str__(self) -> str:
        return f"{self.level}: {self.path}: {self.message}"


def _err(path: str, message: str) -> Diagnostic:
    return Diagnostic("error", path, message)


def _warn(path: str, message: str) -> Diagnostic:
    return Diagnostic("warning", path, message)


def _validate_designs(raw, out: list[Diagnostic]) -> None:
    if raw == "presets":
        return
    if not isinstance(raw, list) or not raw:
        out.append(_err("designs", "at least one tax design is required"))
        return
    labels = set()
    for i, d in enumerate(raw):
        path = f"designs[{i}]"
        if not isinstance(d, dict):
            out.append(_err(path, "design must be an object"))
            continue
        try:
            rates = [float(r) for r in d.get("rates", [])]
        except (TypeError, ValueError):
            out.append(_err(f"{path}.rates", "rates must be numeric"))
            continue
        for field_path, message in design_diagnostics(
            d.get("base"), d.get("exemption_percentile"), rates
        ):
            out.append(_err(f"{path}.{field_path}", message))
        label = d.get("label", f"design-{i}")
        if label in labels:
            out.append(_err(f"{path}.label", f"duplicate design label {label!r}"))
        labels.add(label)


def validate_config(raw: dict) -> list[Diagnostic]:
    """Machine-readable diagnostics for a raw config dict; a run refuses to
    start on any error-level entry."""
    out: list[Diagnostic] = []
    if not isinstance(raw, dict):
        return [_err("", "config must be a JSON object")]

    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        out.append(_err("seed", "seed must be an integer"))

    source = raw.get("input")
    if not isinstance(source, dict) or ("csv" in source) == ("synthetic" in source):
        out.append(_err("input", "input must carry exactly one of 'csv' or 'synthetic'"))
    else:
        if "csv" in source and not Path(source["csv"]).is_file():
            out.append(_err("input.csv", f"file not found: {source['csv']}"))
        if "synthetic" in source:
            try:
                _synth_spec(source["synthetic"], seed if isinstance(seed, int) else 0)
            except (WealthsimError, TypeError, ValueError, KeyError) as exc:
                out.append(_err("input.synthetic", str(exc)))

    _validate_designs(raw.get("designs", "presets"), out)

    pipeline = raw.get("pipeline")
    if pipeline is not None:
        if not isinstance(pipeline, dict):
            out.append(_err("pipeline", "pipeline must be an object"))
        else:
            theta = pipeline.get("theta", DEFAULT_THETA)
            if not isinstance(theta, (int, float)) or not 0.0 <= theta <= 1.0:
                out.append(_err("pipeline.theta", "theta must lie in [0, 1]"))
            w_min = pipeline.get("w_min", DEFAULT_W_MIN)
            if not isinstance(w_min, (int, float)) or w_min <= 0:
                out.append(_err("pipeline.w_min", "w_min must be > 0"))
            ratio = pipeline.get("liability_ratio", DEFAULT_LIABILITY_RATIO)
            if not isinstance(ratio, (int, float)) or ratio < 0:
                out.append(_err("pipeline.liability_ratio", "liability_ratio must be >= 0"))
            mode = pipeline.get("sampling_mode", "random")
            if mode not in ("random", "quantile_grid"):
                out.append(_err("pipeline.sampling_mode",
                                "sampling_mode must be 'random' or 'quantile_grid'"))
            shares = pipeline.get("allocation_shares")
            if shares is not None:
                try:
                    TopPortfolioModel(
                        liability_ratio=pipeline.get("liability_ratio", DEFAULT_LIABILITY_RATIO),
                        allocation_shares=dict(shares),
                    )
                except (ValueError, TypeError) as exc:
                    out.append(_err("pipeline.allocation_shares", str(exc)))
            na_path = raw.get("national_accounts_csv")
            needs_na = pipeline.get("adjust_weights", True) or pipeline.get("rescale", True)
            if pipeline.get("enabled", True) and needs_na:
                if not na_path:
                    out.append(_err(
                        "national_accounts_csv",
                        "weight adjustment and rescaling need a national-accounts table",
                    ))
                elif not Path(na_path).is_file():
                    out.append(_err("national_accounts_csv", f"file not found: {na_path}"))
            rl_path = raw.get("richlist_csv")
            if rl_path and not Path(rl_path).is_file():
                out.append(_err("richlist_csv", f"file not found: {rl_path}"))
            if pipeline.get("enabled", True) and pipeline.get("tail_imputation", True) and not rl_path:
                out.append(_warn(
                    "richlist_csv",
                    "tail imputation without a rich list leaves the top tail unfilled",
                ))

    if not raw.get("output_dir"):
        out.append(_err("output_dir", "output_dir is required"))
    return out


def _synth_spec(block: dict, default_seed: int) -> SynthSpec:
    spec = SynthSpec(
        n_households=int(block["n_households"]),
        body_mu=float(block["body_mu"]),
        body_sigma=float(block["body_sigma"]),
        tail_alpha=float(block["tail_alpha"]),
        tail_w_min=float(block["tail_w_min"]),
        tail_fraction=float(block["tail_fraction"]),
        asset_split=dict(block.get("asset_split", syngen.DEFAULT_ASSET_SPLIT)),
        liability_ratio=float(block.get("liability_ratio", 0.10)),
        seed=int(block.get("seed", default_seed)),
        income_rate=float(block.get("income_rate", 0.04)),
        implicate_noise=float(block.get("implicate_noise", 0.0)),
        country=str(block.get("country", "EU")),
        reference_year=int(block.get("reference_year", 2017)),
    )
    spec.validate()
    return spec


def _designs_from(raw) -> tuple[TaxDesign, ...]:
    if raw == "presets" or raw is None:
        return PRESET_DESIGNS
    designs = []
    for i, d in enumerate(raw):
        design = TaxDesign.from_dict({**d, "label": d.get("label", f"design-{i}")})
        designs.append(design)
    return tuple(designs)


@dataclass(frozen=True)
class RunConfig:
    seed: int
    reference_year: int
    input_csv: str | None
    input_schema: dict | None
    synth: SynthSpec | None
    national_accounts_csv: str | None
    richlist_csv: str | None
    pipeline: PipelineConfig | None
    designs: tuple[TaxDesign, ...]
    output_dir: str
    freeze_thresholds: bool = False

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        problems = [d for d in validate_config(raw) if d.level == "error"]
        if problems:
            raise ConfigError("; ".join(str(p) for p in problems))
        seed = raw.get("seed", 0)
        source = raw["input"]
        synth = _synth_spec(source["synthetic"], seed) if "synthetic" in source else None
        pipeline_raw = raw.get("pipeline")
        pipeline = None
        if pipeline_raw is not None and pipeline_raw.get("enabled", True):
            pipeline = PipelineConfig(
                adjust_weights=pipeline_raw.get("adjust_weights", True),
                correct_deposits=pipeline_raw.get("correct_deposits", True),
                tail_imputation=pipeline_raw.get("tail_imputation", True),
                portfolio_allocation=pipeline_raw.get("portfolio_allocation", True),
                rescale=pipeline_raw.get("rescale", True),
                theta=pipeline_raw.get("theta", DEFAULT_THETA),
                w_min=pipeline_raw.get("w_min", DEFAULT_W_MIN),
                portfolio=TopPortfolioModel(
                    liability_ratio=pipeline_raw.get(
                        "liability_ratio", DEFAULT_LIABILITY_RATIO
                    ),
                    allocation_shares=dict(
                        pipeline_raw.get("allocation_shares")
                        or TopPortfolioModel().allocation_shares
                    ),
                ),
                seed=pipeline_raw.get("seed", seed),
                sampling_mode=pipeline_raw.get("sampling_mode", "random"),
                include_richlist_records=pipeline_raw.get(
                    "include_richlist_records", True
                ),
                skip_countries={
                    step: tuple(countries)
                    for step, countries in pipeline_raw.get("skip_countries", {}).items()
                },
            )
        return cls(
            seed=seed,
            reference_year=raw.get("reference_year", 2017),
            input_csv=source.get("csv"),
            input_schema=source.get("schema"),
            synth=synth,
            national_accounts_csv=raw.get("national_accounts_csv"),
            richlist_csv=raw.get("richlist_csv"),
            pipeline=pipeline,
            designs=_designs_from(raw.get("designs", "presets")),
            output_dir=raw["output_dir"],
            freeze_thresholds=raw.get("freeze_thresholds", False),
        )


def load_config(path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return RunConfig.from_dict(raw)


def load_richlist(path: str | Path) -> RichList:
    entries = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            entries.append((row["country"].strip().upper(), float(row["net_wealth"])))
    entries.sort(key=lambda e: -e[1])
    return RichList(tuple(entries))


def save_richlist(richlist: RichList, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["country", "net_wealth"])
        for country, wealth in richlist.entries:
            writer.writerow([country, repr(wealth)])


class Snapshot:
    """A loaded-and-corrected dataset plus everything needed to score
    designs. Immutable after construction; share freely across threads."""

    def __init__(
        self,
        raw: MultiImplicateDataset,
        corrected: MultiImplicateDataset,
        decile_shares: tuple[float, ...],
        designs: tuple[TaxDesign, ...],
        seed: int,
        reference_year: int,
        freeze_thresholds: bool = False,
    ):
        self.raw = raw
        self.corrected = corrected
        self.decile_shares = decile_shares
        self.designs = designs
        self.seed = seed
        self.reference_year = reference_year
        self.freeze_thresholds = freeze_thresholds

    def evaluate(self, design: TaxDesign, freeze_thresholds: bool | None = None) -> DesignResult:
        freeze = self.freeze_thresholds if freeze_thresholds is None else freeze_thresholds
        return evaluate_design(
            self.corrected, design, self.decile_shares, freeze_thresholds=freeze
        )

    @cached_property
    def base_summary(self) -> dict[str, dict[str, float]]:
        """Implicate-averaged percentiles, Gini and top shares per base."""
        out: dict[str, dict[str, float]] = {}
        for base in WealthBase:
            rows = []
            for pop in self.corrected:
                series = WeightedSeries(pop.base_values(base), pop.column("weight"))
                stats_row = {
                    name: weighted_quantile(series, p) for name, p in PERCENTILE_PROBS
                }
                stats_row["gini"] = gini(series)
                stats_row["top10"] = top_share(series, 0.10)
                stats_row["top5"] = top_share(series, 0.05)
                stats_row["top1"] = top_share(series, 0.01)
                rows.append(stats_row)
            out[base.value] = {
                key: float(np.mean([r[key] for r in rows])) for key in rows[0]
            }
        return out

    @cached_property
    def correction_topshares(self) -> dict[str, dict[str, float]]:
        """Net-wealth top shares before and after correction."""
        out = {}
        for stage, ds in (("uncorrected", self.raw), ("corrected", self.corrected)):
            rows = []
            for pop in ds:
                series = WeightedSeries(pop.column("net_wealth"), pop.column("weight"))
                rows.append(
                    {
                        "top10": top_share(series, 0.10),
                        "top5": top_share(series, 0.05),
                        "top1": top_share(series, 0.01),
                    }
                )
            out[stage] = {k: float(np.mean([r[k] for r in rows])) for k in rows[0]}
        return out


def build_snapshot(cfg: RunConfig) -> Snapshot:
    if cfg.synth is not None:
        raw = syngen.generate(cfg.synth)
    else:
        raw = load_population(cfg.input_csv, cfg.input_schema, cfg.reference_year)

    shares_rows = [investment_property_decile_shares(pop) for pop in raw]
    decile_shares = tuple(
        float(np.mean([row[i] for row in shares_rows])) for i in range(11)
    )

    if cfg.pipeline is not None:
        na = (
            NationalAccountsTable.from_csv(cfg.national_accounts_csv)
            if cfg.national_accounts_csv
            else None
        )
        richlist = load_richlist(cfg.richlist_csv) if cfg.richlist_csv else None
        corrected = run_pipeline(raw, na, richlist, cfg.pipeline)
    else:
        corrected = raw

    return Snapshot(
        raw=raw,
        corrected=corrected,
        decile_shares=decile_shares,
        designs=cfg.designs,
        seed=cfg.seed,
        reference_year=cfg.reference_year,
        freeze_thresholds=cfg.freeze_thresholds,
    )


def _eur(v: float) -> str:
    return f"{v:.2f}"


def _num(v: float | None) -> str:
    return "" if v is None else repr(float(v))


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _figure_rows(results: list[DesignResult], value) -> list[list[str]]:
    return [[res.design.label, value(res.report)] for res in results]


def write_outputs(
    out_dir: str | Path,
    snapshot: Snapshot,
    results: list[DesignResult],
    scores: RadarScores,
) -> list[Path]:
    out = Path(out_dir)
    (out / "figures").mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit_csv(rel: str, header: list[str], rows: list[list[str]]) -> None:
        path = out / rel
        _write_csv(path, header, rows)
        written.append(path)

    summary = {
        "seed": snapshot.seed,
        "reference_year": snapshot.reference_year,
        "records_per_implicate": snapshot.corrected.n_records,
        "designs": [
            {
                **res.design.to_dict(),
                "thresholds": {
                    "t90": res.thresholds[0],
                    "t95": res.thresholds[1],
                    "t99": res.thresholds[2],
                },
                "report": res.report.to_dict(),
            }
            for res in results
        ],
        "radar": {
            "axes": list(scores.scores[scores.labels[0]]) if scores.labels else [],
            "scores": scores.scores,
            "flagged_criteria": list(scores.flagged_criteria),
        },
    }
    summary_path = out / "summary.json"
    summary_path.write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written.append(summary_path)

    emit_csv(
        "percentiles.csv",
        ["base", "p50", "p75", "p90", "p95", "p99", "gini"],
        [
            [
                base,
                *(_eur(row[name]) for name, _ in PERCENTILE_PROBS),
                _num(row["gini"]),
            ]
            for base, row in snapshot.base_summary.items()
        ],
    )

    emit_csv(
        "topshares.csv",
        ["stage", "top10", "top5", "top1"],
        [
            [stage, _num(row["top10"]), _num(row["top5"]), _num(row["top1"])]
            for stage, row in snapshot.correction_topshares.items()
        ],
    )

    grid = np.linspace(0.0, 1.0, LORENZ_GRID_POINTS)
    pop1 = snapshot.corrected.implicates[0]
    curves = {
        base.value: lorenz_curve(
            WeightedSeries(pop1.base_values(base), pop1.column("weight"))
        ).at(grid)
        for base in WealthBase
    }
    emit_csv(
        "lorenz.csv",
        ["population_share", "net", "fip", "property"],
        [
            [_num(g), _num(curves["net"][i]), _num(curves["fip"][i]), _num(curves["property"][i])]
            for i, g in enumerate(grid)
        ],
    )

    figures = {
        "revenue.csv": (
            "revenue_eur",
            lambda rep: _eur(rep.revenue),
        ),
        "top10_reduction.csv": (
            "top10_reduction_pp",
            lambda rep: _num(100.0 * (rep.top10_share_pre - rep.top10_share_post)),
        ),
        "top1_reduction.csv": (
            "top1_reduction_pp",
            lambda rep: _num(100.0 * (rep.top1_share_pre - rep.top1_share_post)),
        ),
        "kakwani.csv": (
            "kakwani",
            lambda rep: _num(rep.kakwani),
        ),
        "extreme_wealth_abs.csv": (
            "households_removed",
            lambda rep: _num(rep.count_above_abs_pre - rep.count_above_abs_post),
        ),
        "extreme_wealth_p99.csv": (
            "households_removed",
            lambda rep: _num(rep.count_above_p99_pre - rep.count_above_p99_post),
        ),
        "fip_change.csv": (
            "fip_change_pct",
            lambda rep: _num(
                -100.0 * (rep.fip_wealth_pre - rep.fip_wealth_post) / rep.fip_wealth_pre
                if rep.fip_wealth_pre > 0.0
                else 0.0
            ),
        ),
        "co2_change.csv": (
            "co2_change_pct",
            lambda rep: _num(rep.co2_change),
        ),
    }
    for filename, (column, value) in figures.items():
        emit_csv(
            f"figures/{filename}",
            ["design", column],
            _figure_rows(results, value),
        )

    axes = list(RADAR_AXES)
    emit_csv(
        "radar.csv",
        ["design", *axes],
        [
            [label, *(_num(scores.scores[label][axis]) for axis in axes)]
            for label in scores.labels
        ],
    )
    return written


def run(cfg: RunConfig) -> list[Path]:
    """Build the snapshot, score every design, and write all outputs."""
    snapshot = build_snapshot(cfg)
    results = [snapshot.evaluate(design) for design in cfg.designs]
    scores = radar([(res.design.label, res.report) for res in results])
    return write_outputs(cfg.output_dir, snapshot, results, scores)
