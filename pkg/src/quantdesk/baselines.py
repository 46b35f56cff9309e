"""Reference methods the desk pipeline is measured against.

The tree baseline is a from-scratch gradient-boosted ensemble of depth-1
stumps on logistic loss over indicator features, with Newton leaf values
and a step-halving guard that makes the training loss provably
non-increasing round over round.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decision import R_MAX, R_MIN, Direction, TradeDecision
from .indicators import IndicatorConfig, macd, roc, rsi, stoch, willr
from .market_data import BarSeries
from .trend import fit_line_ols

__all__ = [
    "baseline_random",
    "baseline_linreg",
    "FEATURE_NAMES",
    "stump_features",
    "Stump",
    "BoostedStumpsModel",
    "train_boosted_stumps",
    "predict_tree_baseline",
    "save_model",
    "load_model",
]

LINREG_WINDOW = 40
FEATURE_WINDOW = 40  # trailing bars consumed per feature vector
SMA_PERIOD = 20
FEATURE_NAMES = (
    "rsi", "macd", "macd_histogram", "sma_ratio", "roc", "stoch_k", "willr",
)


def baseline_random(rng: random.Random) -> TradeDecision:
    """Uniform direction and uniform risk-reward ratio from a seeded stream."""
    direction = Direction.LONG if rng.random() < 0.5 else Direction.SHORT
    r = rng.uniform(R_MIN, R_MAX)
    return TradeDecision(
        direction=direction,
        risk_reward_ratio=r,
        justification="random baseline",
        confidence=0.0,
    )


def baseline_linreg(
    closes: np.ndarray, window: int = LINREG_WINDOW
) -> TradeDecision:
    """LONG iff the OLS slope over the trailing window of closes exceeds 0."""
    closes = np.asarray(closes, dtype=float)
    if closes.size < window:
        raise ValueError(f"need at least {window} closes, got {closes.size}")
    tail = closes[-window:]
    line = fit_line_ols(list(enumerate(tail.tolist())))
    direction = Direction.LONG if line.slope > 0 else Direction.SHORT
    return TradeDecision(
        direction=direction,
        risk_reward_ratio=1.5,
        justification=(
            f"{window}-bar close slope {line.slope:+.6g} -> "
            f"{direction.value}"
        ),
        confidence=min(1.0, line.r_squared),
    )


def stump_features(bars: BarSeries, config: IndicatorConfig = IndicatorConfig()) -> np.ndarray:
    """Feature vector at the window's last bar.

    Price-level features are normalized (MACD by the close, close by its
    SMA) so one model generalizes across assets of any price scale.
    """
    closes = bars.closes()
    last_close = closes[-1]
    macd_series = macd(
        closes, config.macd_fast, config.macd_slow, config.macd_signal
    )
    k_series, _ = stoch(bars, config.stoch_k_period, config.stoch_d_period)
    sma = closes[-SMA_PERIOD:].mean()
    return np.array(
        [
            rsi(closes, config.rsi_period)[-1],
            100.0 * macd_series.macd[-1] / last_close,
            100.0 * macd_series.histogram[-1] / last_close,
            last_close / sma,
            roc(closes, config.roc_period)[-1],
            k_series[-1],
            willr(bars, config.willr_period)[-1],
        ],
        dtype=float,
    )


@dataclass(frozen=True)
class Stump:
    feature: int
    threshold: float
    left: float   # value when x[feature] <= threshold
    right: float
    weight: float


@dataclass(frozen=True)
class BoostedStumpsModel:
    stumps: tuple[Stump, ...]
    learning_rate: float
    rounds: int
    feature_names: tuple[str, ...]
    base_score: float
    training_loss: tuple[float, ...]
    degenerate: bool  # all training labels were one class

    def predict_score(self, x: np.ndarray) -> float:
        """Raw log-odds score: sign gives the direction vote."""
        score = self.base_score
        for s in self.stumps:
            score += s.weight * (
                s.left if x[s.feature] <= s.threshold else s.right
            )
        return score

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        scores = np.full(X.shape[0], self.base_score)
        for s in self.stumps:
            scores += s.weight * np.where(
                X[:, s.feature] <= s.threshold, s.left, s.right
            )
        return scores


def _log_loss(y: np.ndarray, score: np.ndarray) -> float:
    p = 1.0 / (1.0 + np.exp(-score))
    p = np.clip(p, 1e-12, 1.0 - 1e-12)
    return float(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)).mean())


def _best_stump(
    X: np.ndarray, g: np.ndarray, h: np.ndarray
) -> tuple[int, float, float, float]:
    """Split maximizing the Newton gain; falls back to a single leaf."""
    n_features = X.shape[1]
    total_g, total_h = g.sum(), h.sum()
    base_value = -total_g / total_h if total_h > 0 else 0.0
    best = (0, np.inf, base_value, base_value)  # feature, thr, left, right
    best_gain = 0.0
    for j in range(n_features):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        gs = g[order].cumsum()
        hs = h[order].cumsum()
        distinct = np.nonzero(xs[:-1] < xs[1:])[0]
        for idx in distinct:
            gl, hl = gs[idx], hs[idx]
            gr, hr = total_g - gl, total_h - hl
            if hl <= 0 or hr <= 0:
                continue
            gain = gl * gl / hl + gr * gr / hr - total_g * total_g / total_h
            if gain > best_gain:
                best_gain = gain
                thr = (xs[idx] + xs[idx + 1]) / 2.0
                best = (j, thr, -gl / hl, -gr / hr)
    return best


def train_boosted_stumps(
    X: np.ndarray,
    y: np.ndarray,
    rounds: int = 30,
    learning_rate: float = 0.3,
    feature_names: tuple[str, ...] = FEATURE_NAMES,
) -> BoostedStumpsModel:
    """Stagewise logistic boosting of depth-1 stumps.

    Each round fits the stump with the best Newton gain on the current
    gradients, then halves the step until the training loss does not
    increase, so the recorded loss sequence is monotone non-increasing.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.shape[0] != y.shape[0]:
        raise ValueError("feature/label length mismatch")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 training samples")
    degenerate = bool(np.all(y == y[0]))
    score = np.zeros(X.shape[0])
    stumps: list[Stump] = []
    losses = [_log_loss(y, score)]
    for _ in range(rounds):
        p = 1.0 / (1.0 + np.exp(-score))
        g = p - y
        h = np.clip(p * (1.0 - p), 1e-12, None)
        feature, threshold, left, right = _best_stump(X, g, h)
        values = np.where(X[:, feature] <= threshold, left, right)
        step = learning_rate
        accepted = 0.0
        for _ in range(40):
            candidate = score + step * values
            if _log_loss(y, candidate) <= losses[-1] + 1e-15:
                accepted = step
                break
            step /= 2.0
        if accepted > 0.0:
            score = score + accepted * values
        stumps.append(Stump(feature, threshold, left, right, accepted))
        losses.append(_log_loss(y, score))
    return BoostedStumpsModel(
        stumps=tuple(stumps),
        learning_rate=learning_rate,
        rounds=rounds,
        feature_names=tuple(feature_names),
        base_score=0.0,
        training_loss=tuple(losses),
        degenerate=degenerate,
    )


def predict_tree_baseline(
    model: BoostedStumpsModel,
    visible: BarSeries,
    stride: int = 5,
    dead_zone: float = 0.05,
    feature_window: int = FEATURE_WINDOW,
    indicator_config: IndicatorConfig = IndicatorConfig(),
) -> TradeDecision | None:
    """Majority vote over sliding sub-window scores; None means abstain.

    Scores inside the dead zone vote HOLD; a tied LONG/SHORT tally is also
    an abstention, and abstaining segments are dropped from the averages.
    """
    n = len(visible)
    if n < feature_window:
        raise ValueError(
            f"need at least {feature_window} bars, got {n}"
        )
    votes_long = votes_short = 0
    for end in range(feature_window - 1, n, stride):
        window = visible.slice(end - feature_window + 1, end + 1)
        x = stump_features(window, indicator_config)
        s = model.predict_score(x)
        if s > dead_zone:
            votes_long += 1
        elif s < -dead_zone:
            votes_short += 1
    if votes_long == votes_short:
        return None
    direction = Direction.LONG if votes_long > votes_short else Direction.SHORT
    return TradeDecision(
        direction=direction,
        risk_reward_ratio=1.5,
        justification=(
            f"stump ensemble vote {votes_long} LONG / {votes_short} SHORT"
        ),
        confidence=abs(votes_long - votes_short)
        / max(1, votes_long + votes_short),
    )


MODEL_FORMAT_VERSION = 1


def save_model(model: BoostedStumpsModel, path: str | Path) -> None:
    payload = {
        "version": MODEL_FORMAT_VERSION,
        "learning_rate": model.learning_rate,
        "rounds": model.rounds,
        "feature_names": list(model.feature_names),
        "base_score": model.base_score,
        "degenerate": model.degenerate,
        "training_loss": list(model.training_loss),
        "stumps": [
            {
                "feature": s.feature,
                "threshold": s.threshold,
                "left": s.left,
                "right": s.right,
                "weight": s.weight,
            }
            for s in model.stumps
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=2))


def load_model(path: str | Path) -> BoostedStumpsModel:
    payload = json.loads(Path(path).read_text())
    if payload.get("version") != MODEL_FORMAT_VERSION:
        raise ValueError(
            f"unsupported model format version {payload.get('version')}"
        )
    return BoostedStumpsModel(
        stumps=tuple(Stump(**s) for s in payload["stumps"]),
        learning_rate=payload["learning_rate"],
        rounds=payload["rounds"],
        feature_names=tuple(payload["feature_names"]),
        base_score=payload["base_score"],
        training_loss=tuple(payload["training_loss"]),
        degenerate=payload["degenerate"],
    )
