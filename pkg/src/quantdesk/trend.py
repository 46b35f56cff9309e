"""Swing pivots, OLS support/resistance fitting, and channel labeling.

The channel pairs a resistance line fitted through recent pivot highs with
a support line through pivot lows; their average slope, normalized by the
mean close, drives an Uptrend/Downtrend/Sideways label, and the geometric
relationship of the two lines (parallel, converging, widening) is reduced
to a discrete descriptor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .market_data import BarSeries

__all__ = [
    "TrendError",
    "TrendLabel",
    "ChannelGeometry",
    "TrendConfig",
    "PivotSet",
    "FittedLine",
    "TrendChannel",
    "find_pivots",
    "fit_line_ols",
    "detect_trend",
    "channel_geometry",
]

DEFAULT_TAU = 3e-4  # per-bar relative drift separating a trend from noise


class TrendError(ValueError):
    """Raised on windows too short or degenerate for fitting."""


class TrendLabel(enum.Enum):
    UPTREND = "Uptrend"
    DOWNTREND = "Downtrend"
    SIDEWAYS = "Sideways"


class ChannelGeometry(enum.Enum):
    PARALLEL_UP = "ParallelUp"
    PARALLEL_DOWN = "ParallelDown"
    CONVERGING_WEDGE_UP = "ConvergingWedgeUp"
    CONVERGING_WEDGE_DOWN = "ConvergingWedgeDown"
    SYMMETRIC_CONVERGING = "SymmetricConverging"
    DIVERGING = "Diverging"
    FLAT = "Flat"


@dataclass(frozen=True)
class TrendConfig:
    window: int = 40          # trailing bars the channel is fitted on
    tau: float = DEFAULT_TAU  # relative-slope threshold for the label
    pivot_k: int = 3          # neighborhood half-width for swing pivots
    gap_tolerance: float = 0.15  # end/start gap ratio band for "parallel"


def _merge_pivots(
    points: tuple[tuple[int, float], ...], k: int, keep_max: bool
) -> tuple[tuple[int, float], ...]:
    merged: list[tuple[int, float]] = []
    for idx, price in points:
        if merged and idx - merged[-1][0] <= k:
            last_idx, last_price = merged[-1]
            better = price > last_price if keep_max else price < last_price
            if better:
                merged[-1] = (idx, price)
            continue
        merged.append((idx, price))
    return tuple(merged)


@dataclass(frozen=True)
class PivotSet:
    """Swing highs/lows: bars dominating their k-neighborhood on both sides."""

    highs: tuple[tuple[int, float], ...]
    lows: tuple[tuple[int, float], ...]
    k: int

    def clustered(self) -> "PivotSet":
        """Merge pivots within k bars of each other into one swing each.

        Flat turns produce runs of tied neighboring pivots; detectors that
        reason about distinct swings want one representative per run (the
        most extreme price, earliest on ties).
        """
        return PivotSet(
            highs=_merge_pivots(self.highs, self.k, keep_max=True),
            lows=_merge_pivots(self.lows, self.k, keep_max=False),
            k=self.k,
        )


@dataclass(frozen=True)
class FittedLine:
    """Least-squares line y = slope*x + intercept over n_points samples."""

    slope: float
    intercept: float
    r_squared: float
    n_points: int

    def value_at(self, x: float) -> float:
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class TrendChannel:
    """Fitted resistance/support pair with drift estimate and labels."""

    resistance: FittedLine
    support: FittedLine
    kappa: float       # (m_r + m_s) / 2, price per bar
    kappa_rel: float   # kappa / mean close: scale-free per-bar drift
    label: TrendLabel
    geometry: ChannelGeometry
    window_start: int  # index of the first fitted bar within the window
    window_end: int    # index of the last fitted bar
    mean_close: float

    def to_dict(self) -> dict:
        x0, x1 = self.window_start, self.window_end
        return {
            "label": self.label.value,
            "geometry": self.geometry.value,
            "kappa": self.kappa,
            "kappa_rel": self.kappa_rel,
            "support": {
                "slope": self.support.slope,
                "intercept": self.support.intercept,
                "r_squared": self.support.r_squared,
                "x0": x0, "y0": self.support.value_at(x0),
                "x1": x1, "y1": self.support.value_at(x1),
            },
            "resistance": {
                "slope": self.resistance.slope,
                "intercept": self.resistance.intercept,
                "r_squared": self.resistance.r_squared,
                "x0": x0, "y0": self.resistance.value_at(x0),
                "x1": x1, "y1": self.resistance.value_at(x1),
            },
        }

    def to_text(self) -> str:
        return (
            f"Trend: {self.label.value} (per-bar drift "
            f"{self.kappa_rel:+.2e} of price). Resistance slope "
            f"{self.resistance.slope:+.6g}, support slope "
            f"{self.support.slope:+.6g}; channel geometry "
            f"{self.geometry.value}."
        )


def find_pivots(bars: BarSeries, k: int) -> PivotSet:
    """All interior bars whose high (low) dominates the +-k neighborhood.

    Endpoints lack a full neighborhood and are never pivots.
    """
    n = len(bars)
    if n < 2 * k + 1:
        raise TrendError(f"need at least {2 * k + 1} bars for k={k}")
    highs = bars.highs()
    lows = bars.lows()
    pivot_highs = []
    pivot_lows = []
    for i in range(k, n - k):
        lo, hi = i - k, i + k + 1
        if highs[i] >= highs[lo:hi].max():
            pivot_highs.append((i, float(highs[i])))
        if lows[i] <= lows[lo:hi].min():
            pivot_lows.append((i, float(lows[i])))
    return PivotSet(tuple(pivot_highs), tuple(pivot_lows), k)


def fit_line_ols(points: Sequence[tuple[int, float]]) -> FittedLine:
    """Ordinary least squares over (index, price) points.

    Minimizes squared vertical residuals via the centered closed form. A
    vertical point set (all indices equal) is rejected. r-squared is 1 for
    an exact fit, including the degenerate all-equal-price case.
    """
    if len(points) < 2:
        raise TrendError("need at least 2 points to fit a line")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    sxx = float(((x - x.mean()) ** 2).sum())
    if sxx == 0.0:
        raise TrendError("all indices identical: vertical line")
    sxy = float(((x - x.mean()) * (y - y.mean())).sum())
    slope = sxy / sxx
    intercept = float(y.mean()) - slope * float(x.mean())
    residuals = y - (slope * x + intercept)
    ss_res = float((residuals**2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_res == 0.0:
        r2 = 1.0
    elif ss_tot == 0.0:
        r2 = 0.0
    else:
        r2 = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return FittedLine(slope, intercept, r2, len(points))


def _classify_geometry(
    resistance: FittedLine,
    support: FittedLine,
    x_start: int,
    x_end: int,
    mean_close: float,
    tau: float,
    eta: float,
) -> ChannelGeometry:
    r_rel = resistance.slope / mean_close
    s_rel = support.slope / mean_close
    flat_bound = tau / 2.0
    if abs(r_rel) < flat_bound and abs(s_rel) < flat_bound:
        return ChannelGeometry.FLAT
    gap_start = resistance.value_at(x_start) - support.value_at(x_start)
    gap_end = resistance.value_at(x_end) - support.value_at(x_end)
    kappa = (resistance.slope + support.slope) / 2.0
    if gap_start <= 0.0 or gap_end <= 0.0:
        # Crossed lines: fall back to slope signs alone.
        if r_rel < 0.0 < s_rel:
            return ChannelGeometry.SYMMETRIC_CONVERGING
        return (
            ChannelGeometry.CONVERGING_WEDGE_UP
            if kappa >= 0.0
            else ChannelGeometry.CONVERGING_WEDGE_DOWN
        )
    ratio = gap_end / gap_start
    if ratio > 1.0 + eta:
        return ChannelGeometry.DIVERGING
    if ratio < 1.0 - eta:
        if r_rel < 0.0 < s_rel:
            return ChannelGeometry.SYMMETRIC_CONVERGING
        return (
            ChannelGeometry.CONVERGING_WEDGE_UP
            if kappa >= 0.0
            else ChannelGeometry.CONVERGING_WEDGE_DOWN
        )
    # Gap stable: parallel rails when at least one side carries real slope.
    return (
        ChannelGeometry.PARALLEL_UP
        if kappa > 0.0
        else ChannelGeometry.PARALLEL_DOWN
    )


def channel_geometry(
    channel: TrendChannel,
    window_length: int,
    tau: float = DEFAULT_TAU,
    eta: float = 0.15,
) -> ChannelGeometry:
    """Geometry descriptor for a fitted channel over its trailing window."""
    x_end = channel.window_end
    x_start = x_end - window_length + 1
    return _classify_geometry(
        channel.resistance, channel.support, x_start, x_end,
        channel.mean_close, tau, eta,
    )


def detect_trend(
    bars: BarSeries, config: TrendConfig = TrendConfig()
) -> TrendChannel:
    """Fit the support/resistance channel on the trailing window and label it.

    Resistance goes through the window's pivot highs and support through its
    pivot lows; a pivot-poor side falls back to fitting every bar's high or
    low so the classification is total over arbitrary windows.
    """
    n = len(bars)
    if n < config.window:
        raise TrendError(
            f"window of {n} bars is shorter than the configured "
            f"{config.window}"
        )
    start = n - config.window
    tail = bars.slice(start, n)
    pivots = find_pivots(tail, config.pivot_k).clustered()
    highs = tail.highs()
    lows = tail.lows()
    closes = tail.closes()

    def shifted(points: tuple[tuple[int, float], ...]) -> list[tuple[int, float]]:
        return [(i + start, p) for i, p in points]

    high_pts = shifted(pivots.highs)
    if len(high_pts) < 2:
        high_pts = [(start + i, float(h)) for i, h in enumerate(highs)]
    low_pts = shifted(pivots.lows)
    if len(low_pts) < 2:
        low_pts = [(start + i, float(lo)) for i, lo in enumerate(lows)]

    resistance = fit_line_ols(high_pts)
    support = fit_line_ols(low_pts)
    kappa = (resistance.slope + support.slope) / 2.0
    mean_close = float(closes.mean())
    kappa_rel = kappa / mean_close
    if kappa_rel > config.tau:
        label = TrendLabel.UPTREND
    elif kappa_rel < -config.tau:
        label = TrendLabel.DOWNTREND
    else:
        label = TrendLabel.SIDEWAYS
    geometry = _classify_geometry(
        resistance, support, start, n - 1, mean_close,
        config.tau, config.gap_tolerance,
    )
    return TrendChannel(
        resistance=resistance,
        support=support,
        kappa=kappa,
        kappa_rel=kappa_rel,
        label=label,
        geometry=geometry,
        window_start=start,
        window_end=n - 1,
        mean_close=mean_close,
    )
