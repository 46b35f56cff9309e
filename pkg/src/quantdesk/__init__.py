"""Price-action trading desk.

Everything here works from OHLC bars alone: indicator summaries, trend
channels fitted through swing pivots, chart-pattern detection, and a
risk-bounded LONG/SHORT decision engine, plus the evaluation harness
(execution simulation, baselines, benchmark runner, rolling case study)
and an HTTP service for the analysis console.
"""

__version__ = "0.1.0"
