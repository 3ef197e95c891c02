"""Weighted inequality statistics: quantiles, Lorenz and concentration
curves, Gini, Kakwani, and top shares.

Conventions, fixed so that the Kakwani difference is taken between
commensurable estimators:

  * quantiles use the lower-quantile rule on cumulative weights;
  * Gini and concentration index are 1 - 2 * (trapezoid area under the
    piecewise-linear cumulative-share curve);
  * negative values are admitted (net wealth), so Gini may exceed 1;
  * top shares split the boundary record's weight fractionally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadProbability,
    EmptySeries,
    LengthMismatch,
    ZeroTotal,
    ZeroTotalPayments,
)


class WeightedSeries:
    """Paired (value, weight) observations, unsorted, weights > 0."""

    __slots__ = ("values", "weights")

    def __init__(self, values, weights=None):
        values = np.asarray(values, dtype=np.float64)
        if weights is None:
            weights = np.ones_like(values)
        else:
            weights = np.asarray(weights, dtype=np.float64)
        if values.shape != weights.shape or values.ndim != 1:
            raise LengthMismatch(
                f"values {values.shape} and weights {weights.shape} must be aligned 1-d arrays"
            )
        if values.size and not np.all(weights > 0):
            raise ValueError("weights must be > 0")
        self.values = values
        self.weights = weights

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class LorenzCurve:
    """Piecewise-linear cumulative curve from (0,0) to (1,1).

    `population_share` is strictly increasing (ties in value are merged);
    `value_share` is nondecreasing whenever all values are >= 0.
    """

    population_share: np.ndarray
    value_share: np.ndarray

    def at(self, grid) -> np.ndarray:
        """Linear interpolation of the curve at the given population shares."""
        return np.interp(np.asarray(grid, dtype=np.float64),
                         self.population_share, self.value_share)


def _require_nonempty(s: WeightedSeries) -> None:
    if len(s) == 0:
        raise EmptySeries("statistic needs at least one observation")


def weighted_quantile(s: WeightedSeries, p: float) -> float:
    """Smallest value whose cumulative weight reaches p of the total.

    Lower-quantile convention: with values sorted ascending and ties
    aggregated, returns the first value v with cumweight(x <= v) >= p * W.
    """
    _require_nonempty(s)
    if not 0.0 <= p <= 1.0:
        raise BadProbability(f"p must lie in [0, 1], got {p}")
    order = np.argsort(s.values, kind="stable")
    cum = np.cumsum(s.weights[order])
    target = p * cum[-1]
    idx = int(np.searchsorted(cum, target, side="left"))
    if idx >= len(cum):
        idx = len(cum) - 1
    return float(s.values[order[idx]])


def _curve_area(ordered_values: np.ndarray, ordered_weights: np.ndarray,
                total: float) -> float:
    """Trapezoid area under the cumulative-share curve of pre-ordered data."""
    w = np.cumsum(ordered_weights)
    x = w / w[-1]
    y = np.cumsum(ordered_values * ordered_weights) / total
    x = np.concatenate(([0.0], x))
    y = np.concatenate(([0.0], y))
    return float(np.sum((y[1:] + y[:-1]) * np.diff(x)) * 0.5)


def lorenz_curve(s: WeightedSeries) -> LorenzCurve:
    """Lorenz curve of `s`, records ordered by value, equal values merged."""
    _require_nonempty(s)
    total = float(np.sum(s.values * s.weights))
    if total == 0.0:
        raise ZeroTotal("total value is zero; Lorenz shares undefined")
    order = np.argsort(s.values, kind="stable")
    v = s.values[order]
    w = s.weights[order]
    # Merge ties so population shares are strictly increasing.
    boundary = np.nonzero(np.diff(v))[0]
    last = np.concatenate((boundary, [v.size - 1]))
    cw = np.cumsum(w)[last]
    cvw = np.cumsum(v * w)[last]
    x = np.concatenate(([0.0], cw / cw[-1]))
    y = np.concatenate(([0.0], cvw / total))
    return LorenzCurve(x, y)


def gini(s: WeightedSeries) -> float:
    """Gini coefficient, 1 - 2 * trapezoid Lorenz area.

    Negative values are allowed (net wealth with indebted households); the
    result is then not bounded by 1.
    """
    _require_nonempty(s)
    total = float(np.sum(s.values * s.weights))
    if total == 0.0:
        raise ZeroTotal("total value is zero; Gini undefined")
    order = np.argsort(s.values, kind="stable")
    return 1.0 - 2.0 * _curve_area(s.values[order], s.weights[order], total)


def concentration_index(payments: WeightedSeries, ranking) -> float:
    """Concentration index of `payments` with records ordered by `ranking`.

    Ties in the ranking variable keep record order (stable sort). Equals the
    Gini of the payments when payments are proportional to the ranking value.
    """
    _require_nonempty(payments)
    ranking = np.asarray(ranking, dtype=np.float64)
    if ranking.shape != payments.values.shape:
        raise LengthMismatch("ranking must align with payments")
    total = float(np.sum(payments.values * payments.weights))
    if total == 0.0:
        raise ZeroTotalPayments("total payments are zero")
    order = np.argsort(ranking, kind="stable")
    return 1.0 - 2.0 * _curve_area(
        payments.values[order], payments.weights[order], total
    )


def kakwani(tax: WeightedSeries, wealth: WeightedSeries) -> float:
    """Kakwani progressivity index: concentration index of tax payments
    (ranked by wealth) minus the wealth Gini. Positive means the tax is
    more concentrated at the top than wealth itself."""
    if len(tax) != len(wealth) or not np.array_equal(tax.weights, wealth.weights):
        raise LengthMismatch("tax and wealth series must share records and weights")
    return concentration_index(tax, wealth.values) - gini(wealth)


def top_share(s: WeightedSeries, top_fraction: float) -> float:
    """Share of the total held by the top `top_fraction` of the weighted
    population, splitting the boundary record fractionally so exactly that
    fraction of total weight is counted."""
    _require_nonempty(s)
    if not 0.0 < top_fraction <= 1.0:
        raise BadProbability(f"top_fraction must lie in (0, 1], got {top_fraction}")
    total = float(np.sum(s.values * s.weights))
    if total == 0.0:
        raise ZeroTotal("total value is zero; share undefined")
    order = np.argsort(-s.values, kind="stable")
    v = s.values[order]
    w = s.weights[order]
    cw = np.cumsum(w)
    target = top_fraction * cw[-1]
    k = int(np.searchsorted(cw, target, side="left"))
    if k >= v.size:
        k = v.size - 1
    held = float(np.sum(v[:k] * w[:k]))
    prev = float(cw[k - 1]) if k > 0 else 0.0
    held += float(v[k]) * (target - prev)
    return held / total
