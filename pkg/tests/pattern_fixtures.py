"""Synthetic labeled windows, one per implemented pattern kind.

Each builder returns a BarSeries crafted so its intended detector scores
near the top of the ranking. Painted-rail fixtures put highs/lows exactly
on the boundary lines so fitted slopes are exact.
"""

import numpy as np

from quantdesk.market_data import BarSeries, OhlcBar
from quantdesk.patterns import PatternKind

from conftest import make_bars


def piecewise(points):
    """Linear close path through (index, value) anchors."""
    xs = [p[0] for p in points]
    values = [p[1] for p in points]
    n = xs[-1] + 1
    return np.interp(np.arange(n), xs, values).tolist()


def channel_bars(top, bot, n, symbol="FIX"):
    """Bars whose highs/lows sit exactly on the given boundary lines."""
    highs = [top(t) for t in range(n)]
    lows = [bot(t) for t in range(n)]
    closes = [(h + l) / 2.0 for h, l in zip(highs, lows)]
    return make_bars(closes, symbol=symbol, highs=highs, lows=lows)


def mirror_series(series: BarSeries) -> BarSeries:
    """Reflect all prices about the mean close (highs/lows swap roles)."""
    mu = float(series.closes().mean())
    bars = [
        OhlcBar(
            timestamp=b.timestamp,
            open=2 * mu - b.open,
            high=2 * mu - b.low,
            low=2 * mu - b.high,
            close=2 * mu - b.close,
        )
        for b in series.bars
    ]
    return BarSeries(series.symbol, series.timeframe, tuple(bars))


def double_bottom_window():
    closes = piecewise(
        [(0, 102.8), (14, 100.0), (24, 102.5), (34, 100.0), (49, 101.8)]
    )
    return make_bars(closes, spread=0.0004)


def inverse_hs_window():
    closes = piecewise(
        [
            (0, 103.0), (12, 100.0), (18, 101.5), (27, 97.0),
            (33, 101.5), (39, 100.0), (55, 102.0),
        ]
    )
    return make_bars(closes, spread=0.0004)


def v_reversal_window():
    closes = piecewise(
        [(0, 100.6), (29, 100.0), (34, 96.0), (39, 100.0), (49, 100.5)]
    )
    return make_bars(closes, spread=0.0004)


def ascending_triangle_window():
    return channel_bars(lambda t: 102.0, lambda t: 98.0 + 0.06 * t, 40)


def descending_triangle_window():
    return channel_bars(lambda t: 102.0 - 0.06 * t, lambda t: 98.0, 40)


def symmetrical_triangle_window():
    return channel_bars(
        lambda t: 104.0 - 0.06 * t, lambda t: 96.0 + 0.06 * t, 40
    )


def expanding_triangle_window():
    return channel_bars(
        lambda t: 101.0 + 0.06 * t, lambda t: 99.0 - 0.06 * t, 40
    )


def rising_wedge_window():
    return channel_bars(
        lambda t: 102.0 + 0.06 * t, lambda t: 98.0 + 0.12 * t, 40
    )


def falling_wedge_window():
    return channel_bars(
        lambda t: 105.0 - 0.12 * t, lambda t: 100.0 - 0.06 * t, 40
    )


def rectangle_window():
    return channel_bars(lambda t: 101.0, lambda t: 100.0, 40)


def bullish_flag_window():
    closes = piecewise([(0, 100.2), (29, 100.0), (34, 104.0), (44, 103.8)])
    # consolidation bars lean gently against the pole
    return make_bars(closes, spread=0.0008)


def bearish_flag_window():
    closes = piecewise([(0, 99.8), (29, 100.0), (34, 96.0), (44, 96.2)])
    return make_bars(closes, spread=0.0008)


def negative_monotone_ramp():
    closes = [100.0 * (1 + 0.001) ** t for t in range(50)]
    return make_bars(closes, spread=0.0008)


def negative_parallel_up_channel():
    return channel_bars(
        lambda t: 102.0 + 0.08 * t, lambda t: 98.0 + 0.08 * t, 50
    )


def negative_parallel_down_channel():
    return channel_bars(
        lambda t: 102.0 - 0.08 * t, lambda t: 98.0 - 0.08 * t, 50
    )


POSITIVE_FIXTURES = [
    ("double_bottom", double_bottom_window, PatternKind.DOUBLE_BOTTOM),
    ("inverse_hs", inverse_hs_window, PatternKind.INVERSE_HEAD_AND_SHOULDERS),
    ("v_reversal", v_reversal_window, PatternKind.V_SHAPED_REVERSAL),
    (
        "ascending_triangle",
        ascending_triangle_window,
        PatternKind.ASCENDING_TRIANGLE,
    ),
    (
        "descending_triangle",
        descending_triangle_window,
        PatternKind.DESCENDING_TRIANGLE,
    ),
    (
        "symmetrical_triangle",
        symmetrical_triangle_window,
        PatternKind.SYMMETRICAL_TRIANGLE,
    ),
    (
        "expanding_triangle",
        expanding_triangle_window,
        PatternKind.EXPANDING_TRIANGLE,
    ),
    ("rising_wedge", rising_wedge_window, PatternKind.RISING_WEDGE),
    ("falling_wedge", falling_wedge_window, PatternKind.FALLING_WEDGE),
    ("rectangle", rectangle_window, PatternKind.RECTANGLE),
    ("bullish_flag", bullish_flag_window, PatternKind.BULLISH_FLAG),
    ("bearish_flag", bearish_flag_window, PatternKind.BEARISH_FLAG),
]

NEGATIVE_FIXTURES = [
    ("monotone_ramp", negative_monotone_ramp),
    ("parallel_up", negative_parallel_up_channel),
    ("parallel_down", negative_parallel_down_channel),
]

TRIANGLE_MIRRORS = {
    PatternKind.ASCENDING_TRIANGLE: PatternKind.DESCENDING_TRIANGLE,
    PatternKind.DESCENDING_TRIANGLE: PatternKind.ASCENDING_TRIANGLE,
    PatternKind.SYMMETRICAL_TRIANGLE: PatternKind.SYMMETRICAL_TRIANGLE,
    PatternKind.EXPANDING_TRIANGLE: PatternKind.EXPANDING_TRIANGLE,
}


def make_scaled(series: BarSeries, c: float) -> BarSeries:
    bars = [
        OhlcBar(b.timestamp, c * b.open, c * b.high, c * b.low, c * b.close)
        for b in series.bars
    ]
    return BarSeries(series.symbol, series.timeframe, tuple(bars))


def make_translated(series: BarSeries, offset: float) -> BarSeries:
    bars = [
        OhlcBar(
            b.timestamp,
            b.open + offset,
            b.high + offset,
            b.low + offset,
            b.close + offset,
        )
        for b in series.bars
    ]
    return BarSeries(series.symbol, series.timeframe, tuple(bars))
