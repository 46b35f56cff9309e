"""OHLC ingestion, validation, and evaluation-segment sampling."""

from __future__ import annotations

import csv
import hashlib
import random
import re
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

__all__ = [
    "MarketDataError",
    "OhlcBar",
    "BarSeries",
    "Segment",
    "load_csv",
    "sample_segments",
    "stable_seed",
    "timeframe_to_seconds",
]


class MarketDataError(ValueError):
    """Raised when input data violates a bar or series invariant."""


_TIMEFRAME_UNITS = {"s": 1, "m": 60, "h": 3600, "d": 86400, "w": 604800}


def timeframe_to_seconds(timeframe: str) -> int:
    """Parse a bar duration like ``1h``, ``4h``, ``15m`` into seconds."""
    m = re.fullmatch(r"(\d+)([smhdw])", timeframe.strip().lower())
    if not m:
        raise MarketDataError(f"unrecognized timeframe {timeframe!r}")
    return int(m.group(1)) * _TIMEFRAME_UNITS[m.group(2)]


def stable_seed(*parts: object) -> int:
    """Derive a 64-bit seed from arbitrary parts, stable across processes.

    Never use ``hash()`` for this: string hashing is salted per process and
    would break run-to-run reproducibility.
    """
    payload = "\x1f".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(payload).digest()[:8], "big")


@dataclass(frozen=True)
class OhlcBar:
    """One interval's open/high/low/close prices plus optional volume."""

    timestamp: int  # epoch seconds, UTC
    open: float
    high: float
    low: float
    close: float
    volume: float | None = None

    def __post_init__(self) -> None:
        if min(self.open, self.high, self.low, self.close) <= 0:
            raise MarketDataError("prices must be positive")
        if self.high < max(self.open, self.close):
            raise MarketDataError("high below max(open, close)")
        if self.low > min(self.open, self.close):
            raise MarketDataError("low above min(open, close)")
        if self.volume is not None and self.volume < 0:
            raise MarketDataError("negative volume")


@dataclass(frozen=True)
class BarSeries:
    """An ordered, validated sequence of bars for one symbol and timeframe."""

    symbol: str
    timeframe: str
    bars: tuple[OhlcBar, ...]

    def __post_init__(self) -> None:
        if not self.bars:
            raise MarketDataError("empty series")
        ts = [b.timestamp for b in self.bars]
        for i in range(1, len(ts)):
            if ts[i] <= ts[i - 1]:
                raise MarketDataError(
                    f"non-monotonic timestamps at position {i} "
                    f"({ts[i]} after {ts[i - 1]})"
                )
        spacing = timeframe_to_seconds(self.timeframe)
        irregular = sum(
            1 for i in range(1, len(ts)) if (ts[i] - ts[i - 1]) != spacing
        )
        # Session gaps (limited-hour instruments) are tolerated: warn, never fail.
        if irregular:
            warnings.warn(
                f"{self.symbol}: {irregular} bar gaps deviate from the "
                f"{self.timeframe} spacing (session gaps are allowed)",
                stacklevel=2,
            )

    def __len__(self) -> int:
        return len(self.bars)

    def opens(self) -> np.ndarray:
        return np.array([b.open for b in self.bars], dtype=float)

    def highs(self) -> np.ndarray:
        return np.array([b.high for b in self.bars], dtype=float)

    def lows(self) -> np.ndarray:
        return np.array([b.low for b in self.bars], dtype=float)

    def closes(self) -> np.ndarray:
        return np.array([b.close for b in self.bars], dtype=float)

    def slice(self, start: int, stop: int) -> "BarSeries":
        """Contiguous sub-series over ``bars[start:stop]``."""
        return BarSeries(self.symbol, self.timeframe, self.bars[start:stop])

    def window_ending_at(self, end_index: int, size: int) -> "BarSeries":
        """Trailing window of ``size`` bars whose last bar is ``end_index``."""
        if end_index < 0:
            end_index += len(self.bars)
        if end_index >= len(self.bars) or end_index + 1 < size:
            raise MarketDataError(
                f"cannot take a {size}-bar window ending at index {end_index} "
                f"of a {len(self.bars)}-bar series"
            )
        return self.slice(end_index + 1 - size, end_index + 1)


@dataclass(frozen=True)
class Segment:
    """A contiguous evaluation slice: visible bars plus a withheld horizon."""

    source: str
    start_index: int
    visible: tuple[OhlcBar, ...]
    hidden: tuple[OhlcBar, ...] = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.visible) + len(self.hidden)

    def visible_series(self, symbol: str, timeframe: str) -> BarSeries:
        return BarSeries(symbol, timeframe, self.visible)


_COLUMN_ALIASES = {
    "timestamp": ("timestamp", "time", "date", "datetime"),
    "open": ("open",),
    "high": ("high",),
    "low": ("low",),
    "close": ("close",),
    "volume": ("volume", "vol"),
}


def _parse_timestamp(raw: str) -> int:
    raw = raw.strip()
    try:
        return int(float(raw))
    except ValueError:
        pass
    try:
        dt = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError as exc:
        raise ValueError(f"unparsable timestamp {raw!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def load_csv(path: str | Path, symbol: str, timeframe: str) -> BarSeries:
    """Load and validate a bar series from a CSV file.

    The header must name at least timestamp, open, high, low, close (any
    order, any case; ``time``/``date`` accepted for the timestamp column).
    Timestamps may be epoch seconds or ISO-8601. Any row violating a bar
    invariant aborts the load with the offending row number.
    """
    path = Path(path)
    if not path.exists():
        raise MarketDataError(f"no such file: {path}")
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise MarketDataError(f"{path}: empty file") from None
        lookup = {name.strip().lower(): i for i, name in enumerate(header)}
        cols: dict[str, int | None] = {}
        for field_name, aliases in _COLUMN_ALIASES.items():
            cols[field_name] = next(
                (lookup[a] for a in aliases if a in lookup), None
            )
        missing = [
            f for f in ("timestamp", "open", "high", "low", "close")
            if cols[f] is None
        ]
        if missing:
            raise MarketDataError(f"{path}: missing columns {missing}")

        bars: list[OhlcBar] = []
        for rownum, row in enumerate(reader, start=2):
            if not row or not "".join(row).strip():
                continue
            try:
                vol_idx = cols["volume"]
                volume = (
                    float(row[vol_idx])
                    if vol_idx is not None and row[vol_idx].strip() != ""
                    else None
                )
                bar = OhlcBar(
                    timestamp=_parse_timestamp(row[cols["timestamp"]]),
                    open=float(row[cols["open"]]),
                    high=float(row[cols["high"]]),
                    low=float(row[cols["low"]]),
                    close=float(row[cols["close"]]),
                    volume=volume,
                )
            except (MarketDataError, ValueError, IndexError) as exc:
                raise MarketDataError(f"{path} row {rownum}: {exc}") from exc
            bars.append(bar)
    if not bars:
        raise MarketDataError(f"{path}: no data rows")
    try:
        return BarSeries(symbol, timeframe, tuple(bars))
    except MarketDataError as exc:
        raise MarketDataError(f"{path}: {exc}") from exc


def sample_segments(
    series: BarSeries,
    count: int,
    length: int,
    holdout: int,
    seed: int,
) -> list[Segment]:
    """Sample ``count`` segments of ``length`` bars, last ``holdout`` hidden.

    Start offsets are drawn uniformly without replacement from every valid
    offset, so segments may overlap but never repeat. The result is a pure
    function of (series, count, length, holdout, seed).
    """
    if count < 1:
        raise MarketDataError("count must be >= 1")
    if holdout >= length:
        raise MarketDataError("holdout must be smaller than segment length")
    n = len(series)
    if n < length:
        raise MarketDataError(
            f"series has {n} bars; need at least {length}"
        )
    n_offsets = n - length + 1
    if count > n_offsets:
        raise MarketDataError(
            f"cannot draw {count} distinct start offsets from {n_offsets}"
        )
    rng = random.Random(seed)
    starts = sorted(rng.sample(range(n_offsets), count))
    source = f"{series.symbol}:{series.timeframe}"
    segments = []
    for start in starts:
        window = series.bars[start : start + length]
        segments.append(
            Segment(
                source=source,
                start_index=start,
                visible=window[: length - holdout],
                hidden=window[length - holdout :],
            )
        )
    return segments
