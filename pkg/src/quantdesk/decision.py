"""Signal aggregation and the risk-bounded LONG/SHORT policy.

Holding is never an option: every window produces a direction, a
risk-reward ratio inside [1.2, 1.8], and stop/target levels anchored at a
fixed relative stop distance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .indicators import IndicatorReport
from .patterns import PatternReport
from .trend import TrendChannel, TrendLabel

__all__ = [
    "Direction",
    "SignalState",
    "TradeDecision",
    "RiskLevels",
    "DecisionConfig",
    "aggregate_signals",
    "decide_rule_based",
    "risk_levels",
]

R_MIN = 1.2
R_MAX = 1.8
DEFAULT_RHO = 0.0005
DEFAULT_WEIGHTS = (0.35, 0.30, 0.35)  # indicator, pattern, trend


class Direction(enum.Enum):
    LONG = "LONG"
    SHORT = "SHORT"


@dataclass(frozen=True)
class DecisionConfig:
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS
    rho: float = DEFAULT_RHO
    tau: float = 3e-4  # relative-slope scale used for the trend score


@dataclass(frozen=True)
class SignalState:
    """The three upstream reports plus per-source directional scores."""

    indicator: IndicatorReport
    pattern: PatternReport
    trend: TrendChannel
    s_ind: float
    s_pat: float
    s_trend: float
    agreement: int


@dataclass(frozen=True)
class TradeDecision:
    direction: Direction
    risk_reward_ratio: float
    justification: str
    confidence: float
    forecast_horizon: int = 3

    def __post_init__(self) -> None:
        if not (R_MIN <= self.risk_reward_ratio <= R_MAX):
            raise ValueError(
                f"risk_reward_ratio {self.risk_reward_ratio} outside "
                f"[{R_MIN}, {R_MAX}]"
            )

    def to_dict(self) -> dict:
        return {
            "forecast_horizon": f"Predicting next {self.forecast_horizon} candlesticks",
            "decision": self.direction.value,
            "justification": self.justification,
            "risk_reward_ratio": self.risk_reward_ratio,
            "confidence": self.confidence,
        }


@dataclass(frozen=True)
class RiskLevels:
    """Entry, stop, and target: the target sits r stop-distances away."""

    entry: float
    stop: float
    target: float
    rho: float
    r: float

    def to_dict(self) -> dict:
        return {
            "entry": self.entry,
            "stop": self.stop,
            "target": self.target,
            "rho": self.rho,
            "r": self.r,
        }


def _sign(x: float) -> int:
    return int(x > 0) - int(x < 0)


def aggregate_signals(
    indicator: IndicatorReport,
    pattern: PatternReport,
    trend: TrendChannel,
    tau: float = 3e-4,
) -> SignalState:
    """Fuse the three reports into per-source scores and an agreement count.

    Scores: the indicator momentum score; the pattern bias weighted by match
    confidence (0 when nothing matched); +-1 per the trend label, scaled by
    how far the relative drift clears tau. Agreement counts sources whose
    score sign matches the majority sign; with no majority it is the larger
    directional camp.
    """
    s_ind = indicator.momentum_score
    if pattern.top is None:
        s_pat = 0.0
    else:
        s_pat = pattern.top.kind.bias.score * pattern.top.confidence
    if trend.label is TrendLabel.UPTREND:
        s_trend = min(1.0, abs(trend.kappa_rel) / tau)
    elif trend.label is TrendLabel.DOWNTREND:
        s_trend = -min(1.0, abs(trend.kappa_rel) / tau)
    else:
        s_trend = 0.0
    signs = [_sign(s_ind), _sign(s_pat), _sign(s_trend)]
    majority = _sign(sum(signs))
    if majority != 0:
        agreement = sum(1 for s in signs if s == majority)
    else:
        agreement = max(signs.count(1), signs.count(-1))
    return SignalState(
        indicator=indicator,
        pattern=pattern,
        trend=trend,
        s_ind=s_ind,
        s_pat=s_pat,
        s_trend=s_trend,
        agreement=agreement,
    )


def decide_rule_based(
    state: SignalState,
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS,
) -> TradeDecision:
    """Weighted-sum policy: LONG above zero, SHORT below.

    An exact zero composite defers to the trend slope's sign and finally to
    SHORT, so the policy is total and never holds. The ratio rises linearly
    with the composite magnitude and is clamped into [1.2, 1.8].
    """
    w_ind, w_pat, w_trend = weights
    c = w_ind * state.s_ind + w_pat * state.s_pat + w_trend * state.s_trend
    if c > 0:
        direction = Direction.LONG
        basis = f"composite score {c:+.3f}"
    elif c < 0:
        direction = Direction.SHORT
        basis = f"composite score {c:+.3f}"
    elif state.trend.kappa_rel > 0:
        direction = Direction.LONG
        basis = "tied signals; deferring to the rising channel slope"
    elif state.trend.kappa_rel < 0:
        direction = Direction.SHORT
        basis = "tied signals; deferring to the falling channel slope"
    else:
        direction = Direction.SHORT
        basis = "tied signals on a flat channel; defensive short"
    confidence = min(1.0, abs(c))
    r = min(R_MAX, max(R_MIN, R_MIN + 0.6 * abs(c)))
    pattern_bit = (
        f"pattern {state.pattern.top.kind.value} ({state.s_pat:+.2f})"
        if state.pattern.top is not None
        else "no pattern"
    )
    justification = (
        f"{basis}; indicators {state.s_ind:+.2f}, {pattern_bit}, trend "
        f"{state.trend.label.value} ({state.s_trend:+.2f}); "
        f"{state.agreement}/3 sources agree"
    )
    return TradeDecision(
        direction=direction,
        risk_reward_ratio=r,
        justification=justification,
        confidence=confidence,
    )


def risk_levels(
    entry: float,
    direction: Direction,
    rho: float = DEFAULT_RHO,
    r: float = 1.5,
) -> RiskLevels:
    """Stop one rho away from entry, target r stop-distances the other way."""
    if entry <= 0:
        raise ValueError("entry price must be positive")
    if rho <= 0:
        raise ValueError("rho must be positive")
    if not (R_MIN <= r <= R_MAX):
        raise ValueError(f"r must lie in [{R_MIN}, {R_MAX}], got {r}")
    if direction is Direction.LONG:
        stop = entry * (1.0 - rho)
        target = entry * (1.0 + r * rho)
    else:
        stop = entry * (1.0 + rho)
        target = entry * (1.0 - r * rho)
    return RiskLevels(entry=entry, stop=stop, target=target, rho=rho, r=r)
