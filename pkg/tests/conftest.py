import numpy as np
import pytest

from quantdesk.market_data import BarSeries, OhlcBar


def make_bars(
    closes,
    symbol: str = "TEST",
    timeframe: str = "1h",
    spread: float = 0.0,
    highs=None,
    lows=None,
) -> BarSeries:
    """Bars from a close path: each bar opens at the previous close.

    ``spread`` widens high/low symmetrically as a fraction of the close;
    explicit ``highs``/``lows`` override that.
    """
    closes = [float(c) for c in closes]
    bars = []
    for i, c in enumerate(closes):
        o = closes[i - 1] if i > 0 else c
        hi = highs[i] if highs is not None else max(o, c) * (1.0 + spread)
        lo = lows[i] if lows is not None else min(o, c) * (1.0 - spread)
        bars.append(
            OhlcBar(
                timestamp=3600 * (i + 1),
                open=o,
                high=max(hi, o, c),
                low=min(lo, o, c),
                close=c,
                volume=None,
            )
        )
    return BarSeries(symbol, timeframe, tuple(bars))


def line_bars(
    closes, symbol: str = "TEST", timeframe: str = "1h"
) -> BarSeries:
    """Degenerate bars where open=high=low=close: exact path fixtures."""
    return BarSeries(
        symbol,
        timeframe,
        tuple(
            OhlcBar(3600 * (i + 1), float(c), float(c), float(c), float(c))
            for i, c in enumerate(closes)
        ),
    )


def random_walk_bars(
    rng: np.random.Generator,
    n: int,
    start: float = 100.0,
    vol: float = 0.01,
    drift: float = 0.0,
    symbol: str = "RAND",
) -> BarSeries:
    """Geometric random walk with random intrabar extensions."""
    steps = rng.normal(drift, vol, size=n - 1)
    closes = start * np.exp(np.concatenate([[0.0], np.cumsum(steps)]))
    highs = []
    lows = []
    prev = closes[0]
    for i, c in enumerate(closes):
        o = prev if i > 0 else c
        hi = max(o, c) * (1.0 + abs(rng.normal(0, vol / 2)))
        lo = min(o, c) * (1.0 - abs(rng.normal(0, vol / 2)))
        highs.append(hi)
        lows.append(lo)
        prev = c
    return make_bars(closes, symbol=symbol, highs=highs, lows=lows)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
