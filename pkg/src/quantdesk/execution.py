"""Risk-constrained trade simulation over the 3-bar hidden horizon.

A trade exits at the first stop or target touched while scanning the hidden
bars in order. Within-bar touches fill exactly at the level; a bar that
already opens beyond a level fills at its open (gaps trade at real prices,
not wished-for ones). If nothing triggers, the trade closes at the third
bar's close.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .decision import Direction, RiskLevels, TradeDecision
from .market_data import OhlcBar

__all__ = [
    "ExitReason",
    "TieBreak",
    "TradeOutcome",
    "directional_hits",
    "excursions",
    "simulate_execution",
]

HORIZON = 3


class ExitReason(enum.Enum):
    STOP_HIT = "StopHit"
    TARGET_HIT = "TargetHit"
    HORIZON_CLOSE = "HorizonClose"


class TieBreak(enum.Enum):
    """Policy when one bar's range contains both stop and target."""

    STOP_FIRST = "stop"
    TARGET_FIRST = "target"
    OPEN_DIRECTION = "open"  # whichever level sits closer to the bar's open


@dataclass(frozen=True)
class TradeOutcome:
    direction: Direction
    entry: float
    exit: float
    exit_reason: ExitReason
    exit_bar: int
    r_cc: float   # percent, direction-signed, entry -> exit
    r_max: float  # percent, best favorable excursion over the horizon
    r_min: float  # percent, worst adverse excursion over the horizon
    hits: int     # hidden closes on the predicted side of entry

    def to_dict(self) -> dict:
        return {
            "direction": self.direction.value,
            "entry": self.entry,
            "exit": self.exit,
            "exit_reason": self.exit_reason.value,
            "exit_bar": self.exit_bar,
            "r_cc": self.r_cc,
            "r_max": self.r_max,
            "r_min": self.r_min,
            "hits": self.hits,
        }


def directional_hits(
    direction: Direction, entry_close: float, hidden_closes: Sequence[float]
) -> int:
    """Count hidden closes strictly on the predicted side of the entry close.

    Ties count for neither direction.
    """
    if len(hidden_closes) != HORIZON:
        raise ValueError(f"expected {HORIZON} hidden closes")
    if direction is Direction.LONG:
        return sum(1 for c in hidden_closes if c > entry_close)
    return sum(1 for c in hidden_closes if c < entry_close)


def excursions(
    direction: Direction,
    entry: float,
    hidden: Sequence[OhlcBar],
) -> tuple[float, float]:
    """Best and worst direction-adjusted percent excursions over the horizon.

    The envelope always contains 0: a flat exit at entry is available by
    construction, so the favorable side is floored at 0 and the adverse side
    capped at 0 even when every hidden bar gaps beyond the entry.
    """
    if len(hidden) != HORIZON:
        raise ValueError(f"expected {HORIZON} hidden bars")
    max_high = max(b.high for b in hidden)
    min_low = min(b.low for b in hidden)
    if direction is Direction.LONG:
        r_max = 100.0 * (max_high - entry) / entry
        r_min = 100.0 * (min_low - entry) / entry
    else:
        r_max = 100.0 * (entry - min_low) / entry
        r_min = 100.0 * (entry - max_high) / entry
    return max(0.0, r_max), min(0.0, r_min)


def _signed_return(direction: Direction, entry: float, exit_price: float) -> float:
    if direction is Direction.LONG:
        return 100.0 * (exit_price - entry) / entry
    return 100.0 * (entry - exit_price) / entry


def simulate_execution(
    decision: TradeDecision,
    levels: RiskLevels,
    hidden: Sequence[OhlcBar],
    tiebreak: TieBreak = TieBreak.STOP_FIRST,
    cap_excursions: bool = False,
) -> TradeOutcome:
    """Walk the hidden bars and exit at the first triggered level.

    ``cap_excursions`` additionally clips the excursion envelope to the
    stop/target bounds (while always keeping the realized return inside it).
    """
    if len(hidden) != HORIZON:
        raise ValueError(f"expected {HORIZON} hidden bars")
    direction = decision.direction
    entry, stop, target = levels.entry, levels.stop, levels.target
    if direction is Direction.LONG and not (stop < entry < target):
        raise ValueError("malformed levels for a LONG trade")
    if direction is Direction.SHORT and not (target < entry < stop):
        raise ValueError("malformed levels for a SHORT trade")

    exit_price: float | None = None
    exit_reason = ExitReason.HORIZON_CLOSE
    exit_bar = HORIZON - 1
    for i, bar in enumerate(hidden):
        adverse = bar.open <= stop if direction is Direction.LONG else bar.open >= stop
        favorable = bar.open >= target if direction is Direction.LONG else bar.open <= target
        if adverse:
            exit_price, exit_reason, exit_bar = bar.open, ExitReason.STOP_HIT, i
            break
        if favorable:
            exit_price, exit_reason, exit_bar = bar.open, ExitReason.TARGET_HIT, i
            break
        stop_in = bar.low <= stop <= bar.high
        target_in = bar.low <= target <= bar.high
        if stop_in and target_in:
            if tiebreak is TieBreak.STOP_FIRST:
                first_stop = True
            elif tiebreak is TieBreak.TARGET_FIRST:
                first_stop = False
            else:
                first_stop = abs(bar.open - stop) <= abs(bar.open - target)
            if first_stop:
                exit_price, exit_reason = stop, ExitReason.STOP_HIT
            else:
                exit_price, exit_reason = target, ExitReason.TARGET_HIT
            exit_bar = i
            break
        if stop_in:
            exit_price, exit_reason, exit_bar = stop, ExitReason.STOP_HIT, i
            break
        if target_in:
            exit_price, exit_reason, exit_bar = target, ExitReason.TARGET_HIT, i
            break
    if exit_price is None:
        exit_price = hidden[-1].close
    r_cc = _signed_return(direction, entry, exit_price)
    r_max, r_min = excursions(direction, entry, hidden)
    if cap_excursions:
        r_max = min(r_max, 100.0 * levels.r * levels.rho)
        r_min = max(r_min, -100.0 * levels.rho)
        r_max = max(r_max, r_cc)
        r_min = min(r_min, r_cc)
    hits = directional_hits(direction, entry, [b.close for b in hidden])
    return TradeOutcome(
        direction=direction,
        entry=entry,
        exit=exit_price,
        exit_reason=exit_reason,
        exit_bar=exit_bar,
        r_cc=r_cc,
        r_max=r_max,
        r_min=r_min,
        hits=hits,
    )
