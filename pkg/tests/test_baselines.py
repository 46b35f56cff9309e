import random

import numpy as np
import pytest

from quantdesk.baselines import (
    FEATURE_NAMES,
    baseline_linreg,
    baseline_random,
    load_model,
    predict_tree_baseline,
    save_model,
    stump_features,
    train_boosted_stumps,
)
from quantdesk.decision import Direction, R_MAX, R_MIN

from conftest import make_bars, random_walk_bars
from oracles import ols_oracle


class TestBaselineRandom:
    def test_seeded_determinism(self):
        rng_a, rng_b = random.Random(7), random.Random(7)
        seq_a = [baseline_random(rng_a) for _ in range(50)]
        seq_b = [baseline_random(rng_b) for _ in range(50)]
        assert [d.direction for d in seq_a] == [d.direction for d in seq_b]
        assert [d.risk_reward_ratio for d in seq_a] == [
            d.risk_reward_ratio for d in seq_b
        ]

    def test_distribution_bounds_10k(self):
        rng = random.Random(31337)
        draws = [baseline_random(rng) for _ in range(10_000)]
        long_frac = sum(
            1 for d in draws if d.direction is Direction.LONG
        ) / len(draws)
        mean_r = np.mean([d.risk_reward_ratio for d in draws])
        assert abs(long_frac - 0.5) <= 0.02
        assert abs(mean_r - 1.5) <= 0.01
        assert all(R_MIN <= d.risk_reward_ratio <= R_MAX for d in draws)


class TestBaselineLinreg:
    def test_strictly_increasing_long(self):
        closes = np.linspace(100, 110, 60)
        assert baseline_linreg(closes).direction is Direction.LONG

    def test_strictly_decreasing_short(self):
        closes = np.linspace(110, 100, 60)
        assert baseline_linreg(closes).direction is Direction.SHORT

    def test_exactly_flat_shorts(self):
        closes = np.full(60, 100.0)
        assert baseline_linreg(closes).direction is Direction.SHORT

    def test_agrees_with_oracle_sign_on_100_fixtures(self):
        rng = np.random.default_rng(4242)
        for _ in range(100):
            closes = 100 * np.exp(
                np.cumsum(rng.normal(rng.normal(0, 5e-4), 0.004, size=60))
            )
            decision = baseline_linreg(closes)
            slope, _ = ols_oracle(list(enumerate(closes[-40:].tolist())))
            expected = Direction.LONG if slope > 0 else Direction.SHORT
            assert decision.direction is expected

    def test_too_few_closes(self):
        with pytest.raises(ValueError):
            baseline_linreg(np.ones(39))


def separable_training_set(n_windows=120, seed=7):
    """Windows with strong drift: the sign is recoverable from features."""
    rng = np.random.default_rng(seed)
    X, y = [], []
    for i in range(n_windows):
        up = i % 2 == 0
        drift = 0.004 if up else -0.004
        bars = random_walk_bars(rng, 40, vol=0.002, drift=drift)
        X.append(stump_features(bars))
        y.append(1.0 if up else 0.0)
    return np.array(X), np.array(y)


class TestBoostedStumps:
    def test_loss_monotone_non_increasing(self):
        X, y = separable_training_set()
        model = train_boosted_stumps(X, y, rounds=30, learning_rate=0.3)
        losses = model.training_loss
        assert len(losses) == 31
        for a, b in zip(losses, losses[1:]):
            assert b <= a + 1e-12

    def test_separable_data_trains_accurately(self):
        X, y = separable_training_set()
        X_train, y_train = X[:80], y[:80]
        X_valid, y_valid = X[80:], y[80:]
        model = train_boosted_stumps(X_train, y_train, rounds=30)
        scores = model.predict_scores(X_valid)
        acc = np.mean((scores > 0) == (y_valid == 1.0))
        assert acc > 0.55

    def test_degenerate_labels_constant_model(self):
        X, _ = separable_training_set(40)
        y = np.ones(len(X))
        model = train_boosted_stumps(X, y, rounds=5)
        assert model.degenerate
        scores = model.predict_scores(X)
        assert np.all(scores > 0)  # 100% train accuracy on one-class data
        assert np.allclose(scores, scores[0])

    def test_xor_style_set_beats_chance(self):
        # the four XOR corners, but with the mixed corners duplicated so an
        # additive stump model can beat chance (exact XOR is not additive)
        X = np.array(
            [
                [0.0, 0.0],
                [0.0, 1.0], [0.0, 1.0],
                [1.0, 0.0], [1.0, 0.0],
                [1.0, 1.0],
            ]
        )
        y = np.array([0.0, 1.0, 1.0, 1.0, 1.0, 0.0])
        # exhaustive single-stump oracle: best achievable accuracy over every
        # (feature, threshold, left/right class) combination
        best_single = 0.0
        for j in range(2):
            for thr in (-0.5, 0.5, 1.5):
                left = X[:, j] <= thr
                for left_class in (0.0, 1.0):
                    pred = np.where(left, left_class, 1.0 - left_class)
                    best_single = max(best_single, np.mean(pred == y))
        assert best_single > 0.5  # the set is learnable by stumps
        model = train_boosted_stumps(
            X, y, rounds=2, learning_rate=0.5, feature_names=("a", "b")
        )
        acc = np.mean((model.predict_scores(X) > 0) == (y == 1.0))
        assert acc > 0.5
        assert acc >= best_single - 1e-12

    def test_deterministic_given_data(self):
        X, y = separable_training_set()
        m1 = train_boosted_stumps(X, y, rounds=10)
        m2 = train_boosted_stumps(X, y, rounds=10)
        assert m1 == m2

    def test_save_load_roundtrip(self, tmp_path):
        X, y = separable_training_set(60)
        model = train_boosted_stumps(X, y, rounds=8)
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded == model
        x = X[3]
        assert loaded.predict_score(x) == model.predict_score(x)

    def test_load_rejects_unknown_version(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"version": 99}')
        with pytest.raises(ValueError, match="version"):
            load_model(path)


class TestTreePrediction:
    def train_drift_model(self):
        X, y = separable_training_set()
        return train_boosted_stumps(X, y, rounds=30)

    def test_unanimous_up_votes_long(self):
        model = self.train_drift_model()
        rng = np.random.default_rng(11)
        visible = random_walk_bars(rng, 97, vol=0.002, drift=0.004)
        decision = predict_tree_baseline(model, visible)
        assert decision is not None
        assert decision.direction is Direction.LONG

    def test_down_drift_votes_short(self):
        model = self.train_drift_model()
        rng = np.random.default_rng(12)
        visible = random_walk_bars(rng, 97, vol=0.002, drift=-0.004)
        decision = predict_tree_baseline(model, visible)
        assert decision.direction is Direction.SHORT

    def test_dead_zone_abstains(self):
        model = self.train_drift_model()
        rng = np.random.default_rng(13)
        visible = random_walk_bars(rng, 97, vol=0.002, drift=0.004)
        # an absurdly wide dead zone turns every vote into HOLD
        assert predict_tree_baseline(model, visible, dead_zone=1e9) is None

    def test_feature_vector_shape(self):
        bars = make_bars([100 + 0.1 * i for i in range(40)], spread=0.001)
        x = stump_features(bars)
        assert x.shape == (len(FEATURE_NAMES),)
        assert np.all(np.isfinite(x))
