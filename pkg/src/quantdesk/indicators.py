"""The five indicator series and their condensed, flag-based report.

All functions return arrays aligned with the input; positions inside an
indicator's warm-up are NaN. Oscillators honor their codomains ([0, 100]
for RSI and %K/%D, [-100, 0] for Williams %R) for every valid input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .market_data import BarSeries

__all__ = [
    "IndicatorConfig",
    "MacdSeries",
    "IndicatorReport",
    "IndicatorError",
    "ema",
    "macd",
    "rsi",
    "roc",
    "stoch",
    "willr",
    "summarize_indicators",
]


class IndicatorError(ValueError):
    """Raised when a series is too short for the requested indicator."""


@dataclass(frozen=True)
class IndicatorConfig:
    """Periods and oscillator thresholds for the indicator suite."""

    rsi_period: int = 14
    roc_period: int = 10
    stoch_k_period: int = 14
    stoch_d_period: int = 3
    willr_period: int = 14
    macd_fast: int = 12
    macd_slow: int = 26
    macd_signal: int = 9
    rsi_overbought: float = 70.0
    rsi_oversold: float = 30.0
    stoch_overbought: float = 80.0
    stoch_oversold: float = 20.0
    willr_overbought: float = -20.0
    willr_oversold: float = -80.0

    def __post_init__(self) -> None:
        periods = (
            self.rsi_period, self.roc_period, self.stoch_k_period,
            self.stoch_d_period, self.willr_period, self.macd_fast,
            self.macd_slow, self.macd_signal,
        )
        if any(p < 1 for p in periods):
            raise ValueError("all periods must be >= 1")
        if self.macd_fast >= self.macd_slow:
            raise ValueError("macd_fast must be smaller than macd_slow")

    def min_bars(self) -> dict[str, int]:
        """Bars each indicator needs before its latest value exists."""
        return {
            "rsi": self.rsi_period + 1,
            "roc": self.roc_period + 1,
            "stoch": self.stoch_k_period + self.stoch_d_period - 1,
            "willr": self.willr_period,
            # two histogram points back the cross flags
            "macd": self.macd_slow + 1,
        }


def _as_array(prices: Sequence[float] | np.ndarray) -> np.ndarray:
    arr = np.asarray(prices, dtype=float)
    if arr.ndim != 1:
        raise IndicatorError("expected a 1-D price series")
    return arr


def ema(prices: Sequence[float] | np.ndarray, period: int) -> np.ndarray:
    """Exponential moving average with smoothing 2/(period+1), seeded at P0.

    Uses the increment form E += a*(P - E), which is algebraically the same
    recursion but keeps constant series exactly fixed in floating point.
    """
    if period < 1:
        raise IndicatorError("period must be >= 1")
    arr = _as_array(prices)
    if arr.size == 0:
        raise IndicatorError("empty series")
    alpha = 2.0 / (period + 1.0)
    out = np.empty_like(arr)
    e = arr[0]
    out[0] = e
    for i in range(1, arr.size):
        e += alpha * (arr[i] - e)
        out[i] = e
    return out


@dataclass(frozen=True)
class MacdSeries:
    """MACD line, its signal EMA, and their pointwise difference."""

    macd: np.ndarray
    signal: np.ndarray
    histogram: np.ndarray


def macd(
    prices: Sequence[float] | np.ndarray,
    fast: int = 12,
    slow: int = 26,
    signal: int = 9,
) -> MacdSeries:
    """Fast-minus-slow EMA momentum line with a signal EMA over it."""
    arr = _as_array(prices)
    if arr.size < slow:
        raise IndicatorError(
            f"macd needs at least {slow} bars, got {arr.size}"
        )
    line = ema(arr, fast) - ema(arr, slow)
    sig = ema(line, signal)
    return MacdSeries(macd=line, signal=sig, histogram=line - sig)


def rsi(prices: Sequence[float] | np.ndarray, period: int = 14) -> np.ndarray:
    """Relative strength index with Wilder-smoothed average gains/losses."""
    arr = _as_array(prices)
    if arr.size < period + 1:
        raise IndicatorError(
            f"rsi needs at least {period + 1} bars, got {arr.size}"
        )
    deltas = np.diff(arr)
    gains = np.clip(deltas, 0.0, None)
    losses = np.clip(-deltas, 0.0, None)
    out = np.full(arr.size, np.nan)
    avg_gain = gains[:period].mean()
    avg_loss = losses[:period].mean()
    out[period] = _rsi_value(avg_gain, avg_loss)
    for i in range(period, deltas.size):
        avg_gain = (avg_gain * (period - 1) + gains[i]) / period
        avg_loss = (avg_loss * (period - 1) + losses[i]) / period
        out[i + 1] = _rsi_value(avg_gain, avg_loss)
    return out


def _rsi_value(avg_gain: float, avg_loss: float) -> float:
    if avg_loss == 0.0 and avg_gain == 0.0:
        return 50.0
    if avg_loss == 0.0:
        return 100.0
    if avg_gain == 0.0:
        return 0.0
    rs = avg_gain / avg_loss
    return 100.0 - 100.0 / (1.0 + rs)


def roc(prices: Sequence[float] | np.ndarray, period: int = 10) -> np.ndarray:
    """Percent rate of change over ``period`` bars."""
    arr = _as_array(prices)
    if arr.size < period + 1:
        raise IndicatorError(
            f"roc needs at least {period + 1} bars, got {arr.size}"
        )
    out = np.full(arr.size, np.nan)
    out[period:] = 100.0 * (arr[period:] - arr[:-period]) / arr[:-period]
    return out


def _rolling_extrema(values: np.ndarray, window: int) -> tuple[np.ndarray, np.ndarray]:
    view = np.lib.stride_tricks.sliding_window_view(values, window)
    return view.max(axis=1), view.min(axis=1)


def stoch(
    bars: BarSeries,
    k_period: int = 14,
    d_period: int = 3,
) -> tuple[np.ndarray, np.ndarray]:
    """Stochastic oscillator %K and its ``d_period`` moving average %D.

    A flat window (window high equals window low) maps to the 50 midpoint.
    """
    n = len(bars)
    if n < k_period:
        raise IndicatorError(
            f"stoch needs at least {k_period} bars, got {n}"
        )
    highs, lows, closes = bars.highs(), bars.lows(), bars.closes()
    hi, _ = _rolling_extrema(highs, k_period)
    _, lo = _rolling_extrema(lows, k_period)
    span = hi - lo
    safe = np.where(span == 0.0, 1.0, span)
    k_valid = np.where(
        span == 0.0, 50.0, 100.0 * (closes[k_period - 1 :] - lo) / safe
    )
    k = np.full(n, np.nan)
    k[k_period - 1 :] = k_valid
    d = np.full(n, np.nan)
    if k_valid.size >= d_period:
        kernel = np.ones(d_period) / d_period
        d[k_period - 1 + d_period - 1 :] = np.convolve(
            k_valid, kernel, mode="valid"
        )
    return k, d


def willr(bars: BarSeries, period: int = 14) -> np.ndarray:
    """Williams %R: distance of the close from the window high, in [-100, 0].

    A flat window maps to the -50 midpoint.
    """
    n = len(bars)
    if n < period:
        raise IndicatorError(
            f"willr needs at least {period} bars, got {n}"
        )
    highs, lows, closes = bars.highs(), bars.lows(), bars.closes()
    hi, _ = _rolling_extrema(highs, period)
    _, lo = _rolling_extrema(lows, period)
    span = hi - lo
    safe = np.where(span == 0.0, 1.0, span)
    valid = np.where(
        span == 0.0, -50.0, -100.0 * (hi - closes[period - 1 :]) / safe
    )
    out = np.full(n, np.nan)
    out[period - 1 :] = valid
    return out


# Sign each flag contributes to the momentum score. Overbought oscillator
# zones read as strong upward momentum here (and mirrored for oversold):
# the score grades current momentum, not mean-reversion odds.
_FLAG_SIGNS = {
    "rsi_overbought": +1,
    "rsi_oversold": -1,
    "macd_bullish_cross": +1,
    "macd_bearish_cross": -1,
    "stoch_overbought": +1,
    "stoch_oversold": -1,
    "willr_overbought": +1,
    "willr_oversold": -1,
    "roc_positive": +1,
}


@dataclass(frozen=True)
class IndicatorReport:
    """Latest indicator values, threshold flags, and a momentum score."""

    rsi: float
    macd: float
    macd_signal: float
    macd_histogram: float
    roc: float
    stoch_k: float
    stoch_d: float
    willr: float
    rsi_overbought: bool
    rsi_oversold: bool
    macd_bullish_cross: bool
    macd_bearish_cross: bool
    stoch_overbought: bool
    stoch_oversold: bool
    willr_overbought: bool
    willr_oversold: bool
    roc_positive: bool
    momentum_score: float

    @property
    def flags(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in _FLAG_SIGNS}

    def to_dict(self) -> dict:
        return {
            "values": {
                "rsi": self.rsi,
                "macd": self.macd,
                "macd_signal": self.macd_signal,
                "macd_histogram": self.macd_histogram,
                "roc": self.roc,
                "stoch_k": self.stoch_k,
                "stoch_d": self.stoch_d,
                "willr": self.willr,
            },
            "flags": self.flags,
            "momentum_score": self.momentum_score,
        }

    def to_text(self) -> str:
        """Five-section narrative used in prompts and console panes."""
        zone = (
            "overbought" if self.rsi_overbought
            else "oversold" if self.rsi_oversold
            else "neutral"
        )
        macd_side = "above" if self.macd > self.macd_signal else "below"
        cross = (
            " after a fresh bullish cross" if self.macd_bullish_cross
            else " after a fresh bearish cross" if self.macd_bearish_cross
            else ""
        )
        stoch_zone = (
            "overbought" if self.stoch_overbought
            else "oversold" if self.stoch_oversold
            else "mid-range"
        )
        willr_zone = (
            "overbought" if self.willr_overbought
            else "oversold" if self.willr_oversold
            else "mid-range"
        )
        lean = (
            "bullish" if self.momentum_score > 0
            else "bearish" if self.momentum_score < 0
            else "mixed"
        )
        return "\n".join(
            [
                f"RSI: {self.rsi:.2f} ({zone}).",
                (
                    f"MACD: {self.macd:.4f} {macd_side} signal "
                    f"{self.macd_signal:.4f}{cross}; histogram "
                    f"{self.macd_histogram:.4f}."
                ),
                f"ROC: {self.roc:.2f}% over the lookback.",
                (
                    f"Stochastic: %K {self.stoch_k:.2f} / %D "
                    f"{self.stoch_d:.2f} ({stoch_zone})."
                ),
                f"Williams %R: {self.willr:.2f} ({willr_zone}).",
                (
                    f"Conclusion: momentum reads {lean} "
                    f"(score {self.momentum_score:+.2f})."
                ),
            ]
        )


def summarize_indicators(
    bars: BarSeries, config: IndicatorConfig = IndicatorConfig()
) -> IndicatorReport:
    """Condense the five indicators into latest values, flags, and a score.

    The momentum score is the signed mean of the active flags (clamped to
    [-1, 1]); cross flags compare the sign of the last two MACD-minus-signal
    values.
    """
    n = len(bars)
    needs = config.min_bars()
    binding = max(needs, key=lambda k: needs[k])
    if n < needs[binding]:
        raise IndicatorError(
            f"need at least {needs[binding]} bars for {binding}, got {n}"
        )
    closes = bars.closes()
    rsi_last = float(rsi(closes, config.rsi_period)[-1])
    macd_series = macd(
        closes, config.macd_fast, config.macd_slow, config.macd_signal
    )
    roc_last = float(roc(closes, config.roc_period)[-1])
    k_series, d_series = stoch(
        bars, config.stoch_k_period, config.stoch_d_period
    )
    willr_last = float(willr(bars, config.willr_period)[-1])

    hist_prev = float(macd_series.histogram[-2])
    hist_last = float(macd_series.histogram[-1])
    flags = {
        "rsi_overbought": rsi_last > config.rsi_overbought,
        "rsi_oversold": rsi_last < config.rsi_oversold,
        "macd_bullish_cross": hist_prev <= 0.0 < hist_last,
        "macd_bearish_cross": hist_prev >= 0.0 > hist_last,
        "stoch_overbought": float(k_series[-1]) > config.stoch_overbought
        and float(d_series[-1]) > config.stoch_overbought,
        "stoch_oversold": float(k_series[-1]) < config.stoch_oversold
        and float(d_series[-1]) < config.stoch_oversold,
        "willr_overbought": willr_last > config.willr_overbought,
        "willr_oversold": willr_last < config.willr_oversold,
        "roc_positive": roc_last > 0.0,
    }
    active = [_FLAG_SIGNS[name] for name, on in flags.items() if on]
    score = float(np.clip(np.mean(active), -1.0, 1.0)) if active else 0.0

    return IndicatorReport(
        rsi=rsi_last,
        macd=float(macd_series.macd[-1]),
        macd_signal=float(macd_series.signal[-1]),
        macd_histogram=hist_last,
        roc=roc_last,
        stoch_k=float(k_series[-1]),
        stoch_d=float(d_series[-1]),
        willr=willr_last,
        momentum_score=score,
        **flags,
    )
