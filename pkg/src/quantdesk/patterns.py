"""Chart-formation detectors over bar geometry.

Every detector works on relative (scale- and translation-free) criteria:
price tolerances are fractions of price, slopes are per-bar fractions of
the mean close. Confidence is the clamped product of criterion margins, so
a barely-qualifying match scores near 0 and a comfortable one near 1. Four
catalog entries (rounded top/bottom, hidden base, island reversal) ship as
descriptors only, with no detector.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .market_data import BarSeries
from .trend import FittedLine, PivotSet, TrendChannel, TrendLabel, fit_line_ols

__all__ = [
    "Bias",
    "PatternKind",
    "PatternConfig",
    "PatternMatch",
    "PatternReport",
    "detect_patterns",
    "detect_double_bottom",
    "detect_triangles",
    "detect_flags_and_wedges",
    "detect_v_and_inverse_hs",
    "pattern_report",
]


class Bias(enum.Enum):
    BULLISH = "bullish"
    BEARISH = "bearish"
    NEUTRAL = "neutral"

    @property
    def score(self) -> int:
        return {"bullish": 1, "bearish": -1, "neutral": 0}[self.value]


class PatternKind(enum.Enum):
    INVERSE_HEAD_AND_SHOULDERS = "InverseHeadAndShoulders"
    DOUBLE_BOTTOM = "DoubleBottom"
    ROUNDED_BOTTOM = "RoundedBottom"
    HIDDEN_BASE = "HiddenBase"
    FALLING_WEDGE = "FallingWedge"
    RISING_WEDGE = "RisingWedge"
    ASCENDING_TRIANGLE = "AscendingTriangle"
    DESCENDING_TRIANGLE = "DescendingTriangle"
    BULLISH_FLAG = "BullishFlag"
    BEARISH_FLAG = "BearishFlag"
    RECTANGLE = "Rectangle"
    ISLAND_REVERSAL = "IslandReversal"
    V_SHAPED_REVERSAL = "VShapedReversal"
    ROUNDED_TOP = "RoundedTop"
    EXPANDING_TRIANGLE = "ExpandingTriangle"
    SYMMETRICAL_TRIANGLE = "SymmetricalTriangle"

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]

    @property
    def bias(self) -> Bias:
        return _BIASES[self]


_DESCRIPTIONS = {
    PatternKind.INVERSE_HEAD_AND_SHOULDERS: (
        "Three lows with the middle one being the lowest; symmetrical "
        "structure, typically precedes an upward trend."
    ),
    PatternKind.DOUBLE_BOTTOM: (
        "Two similar lows with a rebound in between, forming a 'W'."
    ),
    PatternKind.ROUNDED_BOTTOM: (
        "Gradual decline followed by a gradual rise ('U'-shape)."
    ),
    PatternKind.HIDDEN_BASE: (
        "Horizontal consolidation followed by a sudden up-break."
    ),
    PatternKind.FALLING_WEDGE: (
        "Range narrows downward, often resolves upward."
    ),
    PatternKind.RISING_WEDGE: (
        "Range narrows upward, often resolves downward."
    ),
    PatternKind.ASCENDING_TRIANGLE: (
        "Rising support, flat resistance; breakout usually up."
    ),
    PatternKind.DESCENDING_TRIANGLE: (
        "Falling resistance, flat support; breakout usually down."
    ),
    PatternKind.BULLISH_FLAG: (
        "Sharp rise then brief downward channel before continuation."
    ),
    PatternKind.BEARISH_FLAG: (
        "Sharp drop then brief upward channel before continuation."
    ),
    PatternKind.RECTANGLE: (
        "Sideways range between horizontal support/resistance."
    ),
    PatternKind.ISLAND_REVERSAL: (
        "Two gaps in opposite directions forming an 'island'."
    ),
    PatternKind.V_SHAPED_REVERSAL: (
        "Sharp decline followed by sharp recovery (or vice versa)."
    ),
    PatternKind.ROUNDED_TOP: (
        "Gradual peaking, arc-shaped; often precedes a downward turn."
    ),
    PatternKind.EXPANDING_TRIANGLE: (
        "Highs and lows spread wider, volatile swings."
    ),
    PatternKind.SYMMETRICAL_TRIANGLE: (
        "Highs and lows converge; breakout after apex."
    ),
}

_BIASES = {
    PatternKind.INVERSE_HEAD_AND_SHOULDERS: Bias.BULLISH,
    PatternKind.DOUBLE_BOTTOM: Bias.BULLISH,
    PatternKind.ROUNDED_BOTTOM: Bias.BULLISH,
    PatternKind.HIDDEN_BASE: Bias.BULLISH,
    PatternKind.FALLING_WEDGE: Bias.BULLISH,
    PatternKind.RISING_WEDGE: Bias.BEARISH,
    PatternKind.ASCENDING_TRIANGLE: Bias.BULLISH,
    PatternKind.DESCENDING_TRIANGLE: Bias.BEARISH,
    PatternKind.BULLISH_FLAG: Bias.BULLISH,
    PatternKind.BEARISH_FLAG: Bias.BEARISH,
    PatternKind.RECTANGLE: Bias.NEUTRAL,
    PatternKind.ISLAND_REVERSAL: Bias.NEUTRAL,
    PatternKind.V_SHAPED_REVERSAL: Bias.NEUTRAL,
    PatternKind.ROUNDED_TOP: Bias.BEARISH,
    PatternKind.EXPANDING_TRIANGLE: Bias.NEUTRAL,
    PatternKind.SYMMETRICAL_TRIANGLE: Bias.NEUTRAL,
}

# Tie-break order when confidences are equal: prefer the kind with more
# structural constraints over the catch-all shapes.
_SPECIFICITY = [
    PatternKind.INVERSE_HEAD_AND_SHOULDERS,
    PatternKind.DOUBLE_BOTTOM,
    PatternKind.V_SHAPED_REVERSAL,
    PatternKind.BULLISH_FLAG,
    PatternKind.BEARISH_FLAG,
    PatternKind.FALLING_WEDGE,
    PatternKind.RISING_WEDGE,
    PatternKind.ASCENDING_TRIANGLE,
    PatternKind.DESCENDING_TRIANGLE,
    PatternKind.SYMMETRICAL_TRIANGLE,
    PatternKind.EXPANDING_TRIANGLE,
    PatternKind.RECTANGLE,
    PatternKind.ROUNDED_BOTTOM,
    PatternKind.ROUNDED_TOP,
    PatternKind.HIDDEN_BASE,
    PatternKind.ISLAND_REVERSAL,
]
_RANK = {kind: i for i, kind in enumerate(_SPECIFICITY)}

DETECTED_KINDS = frozenset(_SPECIFICITY[:12])
DESCRIPTOR_ONLY_KINDS = frozenset(PatternKind) - DETECTED_KINDS


@dataclass(frozen=True)
class PatternConfig:
    """Relative thresholds shared by all detectors."""

    price_tol_rel: float = 0.004       # "similar price" tolerance
    impulse_return: float = 0.02       # sharp-move threshold over impulse_span
    impulse_span: int = 5
    flat_slope_rel: float = 1.5e-4     # per-bar |slope|/price counted as flat
    trend_slope_rel: float = 3e-4      # per-bar slope counted as significant
    gap_tolerance: float = 0.15        # stable-gap band for parallel channels
    min_span: int = 10
    consolidation_min: int = 4
    consolidation_max: int = 20
    flag_retrace_max: float = 0.6      # consolidation drift vs impulse move

    def __post_init__(self) -> None:
        if min(
            self.price_tol_rel, self.impulse_return, self.flat_slope_rel,
            self.trend_slope_rel, self.gap_tolerance, self.flag_retrace_max,
        ) <= 0:
            raise ValueError("all tolerances must be positive")


@dataclass(frozen=True)
class PatternMatch:
    kind: PatternKind
    span: tuple[int, int]
    confidence: float
    structure_summary: str
    trend_summary: str
    symmetry_summary: str
    key_points: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "confidence", float(self.confidence))
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError("confidence outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "bias": self.kind.bias.value,
            "span": list(self.span),
            "confidence": self.confidence,
            "structure_summary": self.structure_summary,
            "trend_summary": self.trend_summary,
            "symmetry_summary": self.symmetry_summary,
            "key_points": [[i, p] for i, p in self.key_points],
        }


@dataclass(frozen=True)
class PatternReport:
    """Structure/trend/symmetry triple for the dominant match (or absence)."""

    structure: str
    trend: str
    symmetry: str
    top: PatternMatch | None

    def to_dict(self) -> dict:
        return {
            "structure": self.structure,
            "trend": self.trend,
            "symmetry": self.symmetry,
            "top": self.top.to_dict() if self.top else None,
        }

    def to_text(self) -> str:
        return (
            f"Structure: {self.structure}\nTrend: {self.trend}\n"
            f"Symmetry: {self.symmetry}"
        )


def _clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else x


def _margin_below(x: float, bound: float) -> float:
    """1 when x is far under the bound, 0 at the bound."""
    return _clamp01((bound - x) / bound)


def _margin_above(x: float, bound: float) -> float:
    """0 at the bound, 1 once x reaches twice the bound."""
    return _clamp01((x - bound) / bound)


def _bias_text(kind: PatternKind) -> str:
    return f"{kind.value}: {kind.bias.value} bias."


def _line_points(
    line: FittedLine, x0: int, x1: int
) -> tuple[tuple[int, float], tuple[int, float]]:
    return (x0, line.value_at(x0)), (x1, line.value_at(x1))


def detect_double_bottom(
    pivots: PivotSet, config: PatternConfig = PatternConfig()
) -> PatternMatch | None:
    """W shape: last two pivot lows nearly equal, rebound high in between."""
    pivots = pivots.clustered()
    if len(pivots.lows) < 2 or not pivots.highs:
        return None
    (i1, p1), (i2, p2) = pivots.lows[-2], pivots.lows[-1]
    mean_low = (p1 + p2) / 2.0
    diff_rel = abs(p1 - p2) / mean_low
    if diff_rel > config.price_tol_rel:
        return None
    between = [(i, p) for i, p in pivots.highs if i1 < i < i2]
    if not between:
        return None
    ih, ph = max(between, key=lambda t: t[1])
    neck_rel = (ph - max(p1, p2)) / mean_low
    if neck_rel < 2.0 * config.price_tol_rel:
        return None
    confidence = _margin_below(diff_rel, config.price_tol_rel) * _margin_above(
        neck_rel, 2.0 * config.price_tol_rel
    )
    return PatternMatch(
        kind=PatternKind.DOUBLE_BOTTOM,
        span=(i1, i2),
        confidence=confidence,
        structure_summary=(
            f"two lows near {mean_low:.4g} with a rebound to {ph:.4g} "
            "between them"
        ),
        trend_summary=_bias_text(PatternKind.DOUBLE_BOTTOM),
        symmetry_summary=(
            f"W-shaped double tap of support; lows differ by "
            f"{100 * diff_rel:.2f}%"
        ),
        key_points=((i1, p1), (ih, ph), (i2, p2)),
    )


def detect_triangles(
    pivots: PivotSet,
    channel: TrendChannel,
    config: PatternConfig = PatternConfig(),
) -> PatternMatch | None:
    """Triangle family decided by the channel's relative slopes.

    Ascending = rising support into flat resistance, descending its mirror,
    symmetrical = significant opposite slopes, expanding = widening both
    ways. The margin products are arranged so a vertically mirrored window
    yields the mirror kind with identical confidence.
    """
    r_rel = channel.resistance.slope / channel.mean_close
    s_rel = channel.support.slope / channel.mean_close
    thr = config.trend_slope_rel
    flat = config.flat_slope_rel
    x0, x1 = channel.window_start, channel.window_end

    kind = None
    if s_rel >= thr and abs(r_rel) <= flat:
        kind = PatternKind.ASCENDING_TRIANGLE
        confidence = _margin_above(s_rel, thr) * _margin_below(abs(r_rel), flat)
        structure = "rising support into flat resistance"
    elif -r_rel >= thr and abs(s_rel) <= flat:
        kind = PatternKind.DESCENDING_TRIANGLE
        confidence = _margin_above(-r_rel, thr) * _margin_below(abs(s_rel), flat)
        structure = "lower highs over flat support"
    elif -r_rel >= thr and s_rel >= thr:
        kind = PatternKind.SYMMETRICAL_TRIANGLE
        confidence = _margin_above(-r_rel, thr) * _margin_above(s_rel, thr)
        structure = "falling resistance converging on rising support"
    elif r_rel >= thr and -s_rel >= thr:
        kind = PatternKind.EXPANDING_TRIANGLE
        confidence = _margin_above(r_rel, thr) * _margin_above(-s_rel, thr)
        structure = "higher highs over lower lows, range widening"
    if kind is None or confidence <= 0.0:
        return None
    converging = kind in (
        PatternKind.ASCENDING_TRIANGLE,
        PatternKind.DESCENDING_TRIANGLE,
        PatternKind.SYMMETRICAL_TRIANGLE,
    )
    return PatternMatch(
        kind=kind,
        span=(x0, x1),
        confidence=confidence,
        structure_summary=structure,
        trend_summary=_bias_text(kind),
        symmetry_summary=(
            "triangular convergence of the boundary lines"
            if converging
            else "boundary lines diverging"
        ),
        key_points=(
            *_line_points(channel.resistance, x0, x1),
            *_line_points(channel.support, x0, x1),
        ),
    )


def _channel_gap_ratio(channel: TrendChannel) -> float | None:
    gap0 = channel.resistance.value_at(channel.window_start) - \
        channel.support.value_at(channel.window_start)
    gap1 = channel.resistance.value_at(channel.window_end) - \
        channel.support.value_at(channel.window_end)
    if gap0 <= 0.0:
        return None
    return gap1 / gap0


def detect_flags_and_wedges(
    bars: BarSeries,
    pivots: PivotSet,
    channel: TrendChannel,
    config: PatternConfig = PatternConfig(),
) -> PatternMatch | None:
    """Best of: impulse-plus-counter-channel flags, converging same-sign
    wedges, and the flat-rails rectangle."""
    candidates: list[PatternMatch] = []
    r_rel = channel.resistance.slope / channel.mean_close
    s_rel = channel.support.slope / channel.mean_close
    thr = config.trend_slope_rel
    flat = config.flat_slope_rel
    eta = config.gap_tolerance
    x0, x1 = channel.window_start, channel.window_end
    ratio = _channel_gap_ratio(channel)
    shrink = 1.0 - ratio if ratio is not None else 1.0

    wedge_kind = None
    if r_rel >= thr and s_rel >= thr and shrink >= eta:
        wedge_kind = PatternKind.RISING_WEDGE
        structure = "both boundaries rising, range narrowing upward"
    elif -r_rel >= thr and -s_rel >= thr and shrink >= eta:
        wedge_kind = PatternKind.FALLING_WEDGE
        structure = "both boundaries falling, range narrowing downward"
    if wedge_kind is not None:
        confidence = (
            _margin_above(abs(r_rel), thr)
            * _margin_above(abs(s_rel), thr)
            * _margin_above(shrink, eta)
        )
        if confidence > 0.0:
            candidates.append(
                PatternMatch(
                    kind=wedge_kind,
                    span=(x0, x1),
                    confidence=confidence,
                    structure_summary=structure,
                    trend_summary=_bias_text(wedge_kind),
                    symmetry_summary=(
                        f"wedge compression: channel gap shrank "
                        f"{100 * shrink:.0f}% across the window"
                    ),
                    key_points=(
                        *_line_points(channel.resistance, x0, x1),
                        *_line_points(channel.support, x0, x1),
                    ),
                )
            )

    if (
        ratio is not None
        and abs(r_rel) <= flat
        and abs(s_rel) <= flat
        and abs(ratio - 1.0) <= eta
    ):
        confidence = (
            _margin_below(abs(r_rel), flat)
            * _margin_below(abs(s_rel), flat)
            * _margin_below(abs(ratio - 1.0), eta)
        )
        if confidence > 0.0:
            candidates.append(
                PatternMatch(
                    kind=PatternKind.RECTANGLE,
                    span=(x0, x1),
                    confidence=confidence,
                    structure_summary=(
                        "horizontal support and resistance rails"
                    ),
                    trend_summary=_bias_text(PatternKind.RECTANGLE),
                    symmetry_summary="parallel flat rails, stable gap",
                    key_points=(
                        *_line_points(channel.resistance, x0, x1),
                        *_line_points(channel.support, x0, x1),
                    ),
                )
            )

    flag = _detect_flag(bars, config)
    if flag is not None:
        candidates.append(flag)
    if not candidates:
        return None
    return min(candidates, key=lambda m: (-m.confidence, _RANK[m.kind]))


def _detect_flag(
    bars: BarSeries, config: PatternConfig
) -> PatternMatch | None:
    n = len(bars)
    closes = bars.closes()
    highs = bars.highs()
    lows = bars.lows()
    m = config.impulse_span
    best: PatternMatch | None = None
    for consol_len in range(
        config.consolidation_min, min(config.consolidation_max, n - m - 1) + 1
    ):
        e = n - 1 - consol_len  # impulse ends here
        i0 = e - m
        if i0 < 0:
            continue
        impulse_ret = (closes[e] - closes[i0]) / closes[i0]
        if abs(impulse_ret) < config.impulse_return:
            continue
        xs = range(e + 1, n)
        top = fit_line_ols([(i, float(highs[i])) for i in xs])
        bot = fit_line_ols([(i, float(lows[i])) for i in xs])
        drift = (top.slope + bot.slope) / 2.0
        if drift == 0.0 or (drift > 0) == (impulse_ret > 0):
            continue  # consolidation must lean against the impulse
        gap0 = top.value_at(e + 1) - bot.value_at(e + 1)
        gap1 = top.value_at(n - 1) - bot.value_at(n - 1)
        if gap0 <= 0.0 or gap1 <= 0.0:
            continue
        ratio = gap1 / gap0
        if abs(ratio - 1.0) > config.gap_tolerance:
            continue
        impulse_move = abs(closes[e] - closes[i0])
        retrace = abs(drift) * (consol_len - 1) / impulse_move
        if retrace > config.flag_retrace_max:
            continue
        confidence = (
            _margin_above(abs(impulse_ret), config.impulse_return)
            * _margin_below(abs(ratio - 1.0), config.gap_tolerance)
            * _margin_below(retrace, config.flag_retrace_max)
        )
        if confidence <= 0.0:
            continue
        kind = (
            PatternKind.BULLISH_FLAG
            if impulse_ret > 0
            else PatternKind.BEARISH_FLAG
        )
        match = PatternMatch(
            kind=kind,
            span=(i0, n - 1),
            confidence=confidence,
            structure_summary=(
                f"{100 * impulse_ret:+.1f}% impulse over {m} bars, then a "
                f"{consol_len}-bar counter-sloped channel"
            ),
            trend_summary=_bias_text(kind),
            symmetry_summary="parallel consolidation channel after the pole",
            key_points=(
                (i0, float(closes[i0])),
                (e, float(closes[e])),
                *_line_points(top, e + 1, n - 1),
                *_line_points(bot, e + 1, n - 1),
            ),
        )
        if best is None or match.confidence > best.confidence:
            best = match
    return best


def detect_v_and_inverse_hs(
    pivots: PivotSet,
    config: PatternConfig = PatternConfig(),
    bars: BarSeries | None = None,
) -> PatternMatch | None:
    """Inverse head-and-shoulders over pivot lows, or a sharp V spike.

    The V detector needs the raw bars to measure leg steepness around the
    dominant low; without them only the head-and-shoulders check runs.
    """
    candidates: list[PatternMatch] = []
    tol = config.price_tol_rel
    pivots = pivots.clustered()
    for (i1, p1), (i2, p2), (i3, p3) in zip(
        pivots.lows, pivots.lows[1:], pivots.lows[2:]
    ):
        if not (p2 < p1 and p2 < p3):
            continue
        shoulder_rel = abs(p1 - p3) / ((p1 + p3) / 2.0)
        if shoulder_rel > tol:
            continue
        depth_rel = (min(p1, p3) - p2) / p2
        confidence = _margin_below(shoulder_rel, tol) * _margin_above(
            depth_rel, 2.0 * tol
        )
        if confidence <= 0.0:
            continue
        candidates.append(
            PatternMatch(
                kind=PatternKind.INVERSE_HEAD_AND_SHOULDERS,
                span=(i1, i3),
                confidence=confidence,
                structure_summary=(
                    f"three lows with the middle at {p2:.4g} below shoulders "
                    f"near {(p1 + p3) / 2:.4g}"
                ),
                trend_summary=_bias_text(
                    PatternKind.INVERSE_HEAD_AND_SHOULDERS
                ),
                symmetry_summary=(
                    f"shoulders within {100 * shoulder_rel:.2f}% of each other"
                ),
                key_points=((i1, p1), (i2, p2), (i3, p3)),
            )
        )

    if bars is not None and len(bars) > 2 * config.impulse_span:
        lows = bars.lows()
        closes = bars.closes()
        m = config.impulse_span
        v = int(lows.argmin())
        if m <= v < len(bars) - m:
            left_ref = closes[v - m]
            right_ref = closes[v + m]
            drop_rel = (left_ref - lows[v]) / left_ref
            rise_rel = (right_ref - lows[v]) / lows[v]
            if (
                drop_rel >= config.impulse_return
                and rise_rel >= config.impulse_return
            ):
                confidence = _margin_above(
                    drop_rel, config.impulse_return
                ) * _margin_above(rise_rel, config.impulse_return)
                if confidence > 0.0:
                    candidates.append(
                        PatternMatch(
                            kind=PatternKind.V_SHAPED_REVERSAL,
                            span=(v - m, v + m),
                            confidence=confidence,
                            structure_summary=(
                                f"{100 * drop_rel:.1f}% plunge into "
                                f"{lows[v]:.4g} and {100 * rise_rel:.1f}% "
                                "snap-back"
                            ),
                            trend_summary=_bias_text(
                                PatternKind.V_SHAPED_REVERSAL
                            ),
                            symmetry_summary=(
                                "steep legs on both sides of a single "
                                "dominant low"
                            ),
                            key_points=(
                                (v - m, float(left_ref)),
                                (v, float(lows[v])),
                                (v + m, float(right_ref)),
                            ),
                        )
                    )
    if not candidates:
        return None
    return min(candidates, key=lambda c: (-c.confidence, _RANK[c.kind]))


def detect_patterns(
    bars: BarSeries,
    pivots: PivotSet,
    channel: TrendChannel,
    config: PatternConfig = PatternConfig(),
) -> list[PatternMatch]:
    """Run every registered detector; matches sorted by confidence.

    The empty list is a valid "no pattern" outcome. Ties are broken by
    structural specificity so ordering is fully deterministic.
    """
    if len(bars) < config.min_span:
        return []
    matches = [
        detect_double_bottom(pivots, config),
        detect_triangles(pivots, channel, config),
        detect_flags_and_wedges(bars, pivots, channel, config),
        detect_v_and_inverse_hs(pivots, config, bars),
    ]
    found = [m for m in matches if m is not None]
    found.sort(key=lambda m: (-m.confidence, _RANK[m.kind]))
    return found


def pattern_report(
    matches: list[PatternMatch], channel: TrendChannel
) -> PatternReport:
    """Compose the structure/trend/symmetry report for the top match.

    With no match the report defers to the channel's trend label.
    """
    if not matches:
        return PatternReport(
            structure="no distinct formation in the window",
            trend=(
                "no pattern; defer to the channel label "
                f"({channel.label.value})"
            ),
            symmetry="no convergence or parallel structure detected",
            top=None,
        )
    top = matches[0]
    bias = top.kind.bias
    if bias is Bias.NEUTRAL:
        lean = f"{top.kind.value} is direction-neutral"
    else:
        lean = f"{top.kind.value} carries a {bias.value} "
        lean += "breakout bias" if bias is Bias.BULLISH else "breakdown bias"
    against = (
        (bias is Bias.BULLISH and channel.label is TrendLabel.DOWNTREND)
        or (bias is Bias.BEARISH and channel.label is TrendLabel.UPTREND)
    )
    if against:
        trend_text = (
            f"{lean}, a potential reversal of the prevailing "
            f"{channel.label.value.lower()}"
        )
    else:
        trend_text = f"{lean} within a {channel.label.value.lower()} channel"
    return PatternReport(
        structure=top.structure_summary,
        trend=trend_text,
        symmetry=top.symmetry_summary,
        top=top,
    )
