"""One-shot analysis of a visible window: reports, decision, risk levels."""

from __future__ import annotations

from dataclasses import dataclass, field

from .decision import (
    DecisionConfig,
    RiskLevels,
    SignalState,
    TradeDecision,
    aggregate_signals,
    decide_rule_based,
    risk_levels,
)
from .indicators import IndicatorConfig, IndicatorReport, summarize_indicators
from .llm import LlmTransportError, Transport, decide_llm
from .market_data import BarSeries
from .patterns import (
    PatternConfig,
    PatternReport,
    detect_patterns,
    pattern_report,
)
from .trend import TrendChannel, TrendConfig, detect_trend, find_pivots

__all__ = ["PipelineConfig", "AnalysisResult", "analyze_window", "min_window_bars"]


@dataclass(frozen=True)
class PipelineConfig:
    indicators: IndicatorConfig = field(default_factory=IndicatorConfig)
    trend: TrendConfig = field(default_factory=TrendConfig)
    patterns: PatternConfig = field(default_factory=PatternConfig)
    decision: DecisionConfig = field(default_factory=DecisionConfig)


def min_window_bars(config: PipelineConfig = PipelineConfig()) -> int:
    """Smallest window every analyzer in the pipeline accepts."""
    return max(
        max(config.indicators.min_bars().values()),
        config.trend.window,
        2 * config.trend.pivot_k + 1,
    )


@dataclass(frozen=True)
class AnalysisResult:
    indicator: IndicatorReport
    pattern: PatternReport
    trend: TrendChannel
    state: SignalState
    decision: TradeDecision
    risk: RiskLevels
    warning: str | None = None


def analyze_window(
    bars: BarSeries,
    config: PipelineConfig = PipelineConfig(),
    backend: str = "rule",
    transport: Transport | None = None,
) -> AnalysisResult:
    """Run indicators, trend, and patterns over the window, then decide.

    ``backend="llm"`` routes the aggregated state through the chat
    transport; an unconfigured or failing transport degrades to the rule
    policy and reports why in ``warning``.
    """
    needed = min_window_bars(config)
    if len(bars) < needed:
        raise ValueError(
            f"analysis needs at least {needed} bars, got {len(bars)}"
        )
    indicator = summarize_indicators(bars, config.indicators)
    channel = detect_trend(bars, config.trend)
    pivots = find_pivots(bars, config.trend.pivot_k)
    matches = detect_patterns(bars, pivots, channel, config.patterns)
    report = pattern_report(matches, channel)
    state = aggregate_signals(indicator, report, channel, config.decision.tau)

    warning = None
    if backend == "llm":
        if transport is None:
            warning = "llm backend not configured; used rule backend"
            decision = decide_rule_based(state, config.decision.weights)
        else:
            try:
                decision = decide_llm(
                    state,
                    bars.symbol,
                    bars.timeframe,
                    transport,
                    fallback_weights=config.decision.weights,
                )
            except LlmTransportError as exc:
                warning = f"llm transport failed ({exc}); used rule backend"
                decision = decide_rule_based(state, config.decision.weights)
    elif backend == "rule":
        decision = decide_rule_based(state, config.decision.weights)
    else:
        raise ValueError(f"unknown backend {backend!r}")

    entry = float(bars.bars[-1].close)
    risk = risk_levels(
        entry, decision.direction, config.decision.rho,
        decision.risk_reward_ratio,
    )
    return AnalysisResult(
        indicator=indicator,
        pattern=report,
        trend=channel,
        state=state,
        decision=decision,
        risk=risk,
        warning=warning,
    )
