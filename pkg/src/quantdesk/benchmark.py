"""Multi-asset benchmark runner and the rolling-window case study.

A manifest lists one entry per asset (symbol, timeframe, csv, sampling
parameters). Every method sees the same sampled segments; per-segment
randomness is derived from (run seed, asset, segment index) so serial and
parallel executions produce byte-identical results.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .baselines import (
    BoostedStumpsModel,
    FEATURE_WINDOW,
    baseline_linreg,
    baseline_random,
    predict_tree_baseline,
    stump_features,
    train_boosted_stumps,
)
from .decision import TradeDecision, risk_levels
from .execution import HORIZON, TieBreak, TradeOutcome, directional_hits, simulate_execution
from .market_data import BarSeries, MarketDataError, Segment, load_csv, sample_segments, stable_seed
from .pipeline import PipelineConfig, analyze_window

__all__ = [
    "ManifestAsset",
    "load_manifest",
    "BenchmarkConfig",
    "EvalRow",
    "SegmentRecord",
    "EvalSummary",
    "METHOD_ORDER",
    "run_benchmark",
    "delta_alpha",
    "CaseStudyRow",
    "CaseStudyResult",
    "rolling_case_study",
]

METHOD_ORDER = ("random", "linreg", "stumps", "rule", "llm")


@dataclass(frozen=True)
class ManifestAsset:
    symbol: str
    timeframe: str
    csv: Path
    count: int = 100
    length: int = 100
    holdout: int = 3
    seed: int | None = None


def load_manifest(path: str | Path) -> list[ManifestAsset]:
    """Parse the benchmark manifest; csv paths resolve against its folder."""
    path = Path(path)
    payload = json.loads(path.read_text())
    assets = []
    for entry in payload["assets"]:
        csv_path = Path(entry["csv"])
        if not csv_path.is_absolute():
            csv_path = path.parent / csv_path
        assets.append(
            ManifestAsset(
                symbol=entry["symbol"],
                timeframe=entry["timeframe"],
                csv=csv_path,
                count=int(entry.get("count", 100)),
                length=int(entry.get("length", 100)),
                holdout=int(entry.get("holdout", 3)),
                seed=entry.get("seed"),
            )
        )
    if not assets:
        raise ValueError(f"{path}: manifest lists no assets")
    return assets


@dataclass(frozen=True)
class BenchmarkConfig:
    tiebreak: TieBreak = TieBreak.STOP_FIRST
    cap_excursions: bool = False
    jobs: int = 1
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    stumps_rounds: int = 30
    stumps_learning_rate: float = 0.3
    stumps_stride: int = 5
    stumps_dead_zone: float = 0.05


@dataclass(frozen=True)
class SegmentRecord:
    asset: str
    method: str
    segment_index: int
    start_index: int
    direction: str
    risk_reward_ratio: float
    hits: int
    r_cc: float
    r_max: float
    r_min: float
    exit_reason: str

    def to_dict(self) -> dict:
        return self.__dict__.copy()


@dataclass(frozen=True)
class EvalRow:
    asset: str
    method: str
    segments: int
    abstained: int
    alpha: float
    delta_alpha: float | None
    mean_r_cc: float
    mean_r_max: float
    mean_r_min: float

    def to_dict(self) -> dict:
        return self.__dict__.copy()


def delta_alpha(alpha_method: float, alpha_random: float) -> float:
    """Percent improvement of a method's accuracy over the random row."""
    return 100.0 * (alpha_method - alpha_random) / alpha_random


_TABLE_HEADER = (
    f"{'Asset':<16}{'Method':<9}{'Segs':>5}{'Abst':>5}"
    f"{'Acc a':>8}{'da%':>9}{'R_cc':>9}{'R_max':>9}{'R_min':>9}"
)


@dataclass
class EvalSummary:
    seed: int
    rows: list[EvalRow]
    notes: list[str]
    records: list[SegmentRecord]

    def to_table(self) -> str:
        lines = [_TABLE_HEADER, "-" * len(_TABLE_HEADER)]
        for row in self.rows:
            da = "--" if row.delta_alpha is None else f"{row.delta_alpha:+.1f}%"
            lines.append(
                f"{row.asset:<16}{row.method:<9}{row.segments:>5}"
                f"{row.abstained:>5}{row.alpha:>8.1f}{da:>9}"
                f"{row.mean_r_cc:>9.3f}{row.mean_r_max:>9.3f}"
                f"{row.mean_r_min:>9.3f}"
            )
        for note in self.notes:
            lines.append(f"# {note}")
        return "\n".join(lines) + "\n"

    def to_dict(self, include_records: bool = False) -> dict:
        payload = {
            "seed": self.seed,
            "rows": [r.to_dict() for r in self.rows],
            "notes": list(self.notes),
        }
        if include_records:
            payload["records"] = [r.to_dict() for r in self.records]
        return payload


def _segment_visible(asset: ManifestAsset, segment: Segment) -> BarSeries:
    return BarSeries(asset.symbol, asset.timeframe, segment.visible)


def _train_stumps_for_asset(
    asset: ManifestAsset,
    segments: Sequence[Segment],
    train_indices: Sequence[int],
    config: BenchmarkConfig,
) -> BoostedStumpsModel | None:
    ind_cfg = config.pipeline.indicators
    features = []
    labels = []
    for i in train_indices:
        bars = segments[i].visible + segments[i].hidden
        series = BarSeries(asset.symbol, asset.timeframe, bars)
        closes = series.closes()
        for end in range(
            FEATURE_WINDOW - 1, len(bars) - HORIZON, config.stumps_stride
        ):
            window = series.slice(end - FEATURE_WINDOW + 1, end + 1)
            features.append(stump_features(window, ind_cfg))
            labels.append(1.0 if closes[end + HORIZON] > closes[end] else 0.0)
    if len(features) < 50:
        return None
    return train_boosted_stumps(
        np.array(features),
        np.array(labels),
        rounds=config.stumps_rounds,
        learning_rate=config.stumps_learning_rate,
    )


def _decide(
    method: str,
    asset: ManifestAsset,
    segment: Segment,
    segment_index: int,
    seed: int,
    config: BenchmarkConfig,
    model: BoostedStumpsModel | None,
) -> TradeDecision | None:
    visible = _segment_visible(asset, segment)
    if method == "random":
        rng = random.Random(
            stable_seed(seed, asset.symbol, asset.timeframe, segment_index, "random")
        )
        return baseline_random(rng)
    if method == "linreg":
        return baseline_linreg(visible.closes())
    if method == "stumps":
        if model is None:
            return None
        return predict_tree_baseline(
            model,
            visible,
            stride=config.stumps_stride,
            dead_zone=config.stumps_dead_zone,
            indicator_config=config.pipeline.indicators,
        )
    if method == "rule":
        return analyze_window(visible, config.pipeline, backend="rule").decision
    raise ValueError(f"unknown method {method!r}")


def _evaluate_segment(
    method: str,
    asset: ManifestAsset,
    segment: Segment,
    segment_index: int,
    seed: int,
    config: BenchmarkConfig,
    model: BoostedStumpsModel | None,
) -> SegmentRecord | None:
    decision = _decide(
        method, asset, segment, segment_index, seed, config, model
    )
    if decision is None:
        return None
    entry = float(segment.visible[-1].close)
    levels = risk_levels(
        entry,
        decision.direction,
        config.pipeline.decision.rho,
        decision.risk_reward_ratio,
    )
    outcome: TradeOutcome = simulate_execution(
        decision,
        levels,
        segment.hidden,
        tiebreak=config.tiebreak,
        cap_excursions=config.cap_excursions,
    )
    return SegmentRecord(
        asset=asset.symbol,
        method=method,
        segment_index=segment_index,
        start_index=segment.start_index,
        direction=decision.direction.value,
        risk_reward_ratio=decision.risk_reward_ratio,
        hits=outcome.hits,
        r_cc=outcome.r_cc,
        r_max=outcome.r_max,
        r_min=outcome.r_min,
        exit_reason=outcome.exit_reason.value,
    )


def run_benchmark(
    assets: Sequence[ManifestAsset] | str | Path,
    methods: Sequence[str],
    seed: int,
    config: BenchmarkConfig = BenchmarkConfig(),
    trained_models: dict[str, BoostedStumpsModel] | None = None,
) -> EvalSummary:
    """Evaluate every requested method on every loadable asset.

    The tree baseline trains on a seeded half of each asset's segments and
    is scored on the other half; every other method is scored on all
    segments. An asset whose csv fails to load is skipped with a note. When
    ``trained_models`` is given, the per-asset stump models are stored there
    keyed by symbol.
    """
    if isinstance(assets, (str, Path)):
        assets = load_manifest(assets)
    methods = [m for m in METHOD_ORDER if m in set(methods)]
    if not methods:
        raise ValueError("no recognized methods selected")
    rows: list[EvalRow] = []
    notes: list[str] = []
    records: list[SegmentRecord] = []
    for asset in assets:
        try:
            series = load_csv(asset.csv, asset.symbol, asset.timeframe)
            sampling_seed = (
                asset.seed
                if asset.seed is not None
                else stable_seed(seed, asset.symbol, asset.timeframe, "sample")
            )
            segments = sample_segments(
                series, asset.count, asset.length, asset.holdout, sampling_seed
            )
        except MarketDataError as exc:
            notes.append(f"skipped {asset.symbol}: {exc}")
            continue
        alpha_random: float | None = None
        for method in methods:
            model = None
            eval_indices = list(range(len(segments)))
            if method == "stumps":
                split_rng = random.Random(
                    stable_seed(seed, asset.symbol, asset.timeframe, "split")
                )
                shuffled = list(range(len(segments)))
                split_rng.shuffle(shuffled)
                half = len(shuffled) // 2
                train_indices = sorted(shuffled[:half])
                eval_indices = sorted(shuffled[half:])
                model = _train_stumps_for_asset(
                    asset, segments, train_indices, config
                )
                if model is None:
                    notes.append(
                        f"{asset.symbol}/stumps: too little training data"
                    )
                    continue
                if trained_models is not None:
                    trained_models[asset.symbol] = model

            def job(i: int) -> SegmentRecord | None:
                return _evaluate_segment(
                    method, asset, segments[i], i, seed, config, model
                )

            if config.jobs > 1:
                with ThreadPoolExecutor(max_workers=config.jobs) as pool:
                    results = list(pool.map(job, eval_indices))
            else:
                results = [job(i) for i in eval_indices]
            evaluated = [r for r in results if r is not None]
            abstained = len(results) - len(evaluated)
            if not evaluated:
                notes.append(
                    f"{asset.symbol}/{method}: every segment abstained"
                )
                continue
            n = len(evaluated)
            alpha = 100.0 * sum(r.hits for r in evaluated) / (HORIZON * n)
            if method == "random":
                alpha_random = alpha
                da = None
            elif alpha_random is not None:
                da = delta_alpha(alpha, alpha_random)
            else:
                da = None
            rows.append(
                EvalRow(
                    asset=asset.symbol,
                    method=method,
                    segments=n,
                    abstained=abstained,
                    alpha=alpha,
                    delta_alpha=da,
                    mean_r_cc=float(np.mean([r.r_cc for r in evaluated])),
                    mean_r_max=float(np.mean([r.r_max for r in evaluated])),
                    mean_r_min=float(np.mean([r.r_min for r in evaluated])),
                )
            )
            records.extend(evaluated)
    return EvalSummary(seed=seed, rows=rows, notes=notes, records=records)


# A case-study method sees the visible window and its window index.
CaseStudyMethod = Callable[[BarSeries, int], TradeDecision]


@dataclass(frozen=True)
class CaseStudyRow:
    window_index: int
    window_start: int
    decision: TradeDecision
    hits: int
    correct: bool


@dataclass(frozen=True)
class CaseStudyResult:
    rows: tuple[CaseStudyRow, ...]

    @property
    def correct_count(self) -> int:
        return sum(1 for r in self.rows if r.correct)

    def summary(self) -> str:
        n = len(self.rows)
        pct = 100.0 * self.correct_count / n
        return f"{self.correct_count}/{n} ({pct:.0f}%)"


def rolling_case_study(
    series: BarSeries,
    method: CaseStudyMethod,
    window_length: int = 100,
    num_windows: int = 10,
    offset: int = 5,
) -> CaseStudyResult:
    """Score a method on overlapping windows stepped by ``offset`` bars.

    Each window's decision is checked against the 3 bars that follow it; a
    window counts as correct when at least 2 of the 3 closes land on the
    predicted side.
    """
    needed = window_length + offset * (num_windows - 1) + HORIZON
    if len(series) < needed:
        raise ValueError(
            f"series has {len(series)} bars; need at least {needed}"
        )
    rows = []
    for w in range(num_windows):
        start = w * offset
        window = series.slice(start, start + window_length)
        hidden = series.bars[
            start + window_length : start + window_length + HORIZON
        ]
        decision = method(window, w)
        entry = float(window.bars[-1].close)
        hits = directional_hits(
            decision.direction, entry, [b.close for b in hidden]
        )
        rows.append(
            CaseStudyRow(
                window_index=w,
                window_start=start,
                decision=decision,
                hits=hits,
                correct=hits >= 2,
            )
        )
    return CaseStudyResult(rows=tuple(rows))
