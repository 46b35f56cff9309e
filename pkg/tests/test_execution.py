import random

import numpy as np
import pytest

from quantdesk.decision import Direction, TradeDecision, risk_levels
from quantdesk.execution import (
    ExitReason,
    TieBreak,
    TradeOutcome,
    directional_hits,
    excursions,
    simulate_execution,
)
from quantdesk.market_data import OhlcBar


def bar(o, h, l, c, t=0):
    return OhlcBar(timestamp=3600 * (t + 1), open=o, high=h, low=l, close=c)


def decision(direction, r=1.5):
    return TradeDecision(
        direction=direction,
        risk_reward_ratio=r,
        justification="test",
        confidence=0.5,
    )


def quiet_bar(entry, t=0):
    """A bar hugging the entry, touching no level at default rho."""
    return bar(entry, entry * 1.0001, entry * 0.9999, entry, t)


class TestDirectionalHits:
    def test_long_all_above(self):
        assert directional_hits(Direction.LONG, 100, [101, 102, 103]) == 3

    def test_short_complement(self):
        assert directional_hits(Direction.SHORT, 100, [101, 102, 103]) == 0

    def test_tie_counts_for_neither(self):
        assert directional_hits(Direction.LONG, 100, [101, 99, 100]) == 1
        assert directional_hits(Direction.SHORT, 100, [101, 99, 100]) == 1

    def test_partition_property(self, rng):
        for _ in range(200):
            entry = float(rng.uniform(50, 150))
            closes = [float(rng.uniform(50, 150)) for _ in range(3)]
            long_hits = directional_hits(Direction.LONG, entry, closes)
            short_hits = directional_hits(Direction.SHORT, entry, closes)
            ties = sum(1 for c in closes if c == entry)
            assert long_hits + short_hits + ties == 3

    def test_requires_three_closes(self):
        with pytest.raises(ValueError):
            directional_hits(Direction.LONG, 100, [101, 102])


class TestExcursions:
    def test_long_direct_arithmetic(self):
        hidden = [
            bar(100, 101, 99.5, 100.5, 0),
            bar(100.5, 100.8, 99.8, 100.2, 1),
            bar(100.2, 100.9, 99.9, 100.4, 2),
        ]
        r_max, r_min = excursions(Direction.LONG, 100.0, hidden)
        assert r_max == pytest.approx(1.0)
        assert r_min == pytest.approx(-0.5)

    def test_short_mirror(self):
        hidden = [
            bar(100, 101, 99.5, 100.5, 0),
            bar(100.5, 100.8, 99.8, 100.2, 1),
            bar(100.2, 100.9, 99.9, 100.4, 2),
        ]
        r_max, r_min = excursions(Direction.SHORT, 100.0, hidden)
        assert r_max == pytest.approx(0.5)
        assert r_min == pytest.approx(-1.0)

    def test_flat_bars_zero_envelope(self):
        hidden = [bar(100, 100, 100, 100, t) for t in range(3)]
        assert excursions(Direction.LONG, 100.0, hidden) == (0.0, 0.0)

    def test_envelope_contains_zero_even_on_gaps(self):
        hidden = [bar(98, 98.5, 97.5, 98, t) for t in range(3)]
        r_max, r_min = excursions(Direction.LONG, 100.0, hidden)
        assert r_max == 0.0
        assert r_min < 0


class TestSimulateExecution:
    def make(self, direction, r=1.5, entry=100.0):
        d = decision(direction, r)
        return d, risk_levels(entry, direction, 0.0005, r)

    def test_target_hit_first_bar(self):
        d, levels = self.make(Direction.LONG)
        hidden = [
            bar(100.0, 100.2, 99.99, 100.1, 0),
            quiet_bar(100.1, 1),
            quiet_bar(100.1, 2),
        ]
        out = simulate_execution(d, levels, hidden)
        assert out.exit_reason is ExitReason.TARGET_HIT
        assert out.exit_bar == 0
        assert out.r_cc == pytest.approx(0.075)

    def test_stop_hit(self):
        d, levels = self.make(Direction.LONG)
        hidden = [
            bar(100.0, 100.02, 99.90, 99.95, 0),
            quiet_bar(99.95, 1),
            quiet_bar(99.95, 2),
        ]
        out = simulate_execution(d, levels, hidden)
        assert out.exit_reason is ExitReason.STOP_HIT
        assert out.r_cc == pytest.approx(-0.05)

    def test_horizon_close(self):
        d, levels = self.make(Direction.LONG)
        hidden = [quiet_bar(100.0, t) for t in range(3)]
        out = simulate_execution(d, levels, hidden)
        assert out.exit_reason is ExitReason.HORIZON_CLOSE
        assert out.exit_bar == 2
        assert -0.05 < out.r_cc < 0.075

    def test_gap_open_beyond_stop_fills_at_open(self):
        d, levels = self.make(Direction.LONG)
        hidden = [
            bar(99.5, 99.6, 99.4, 99.5, 0),
            quiet_bar(99.5, 1),
            quiet_bar(99.5, 2),
        ]
        out = simulate_execution(d, levels, hidden)
        assert out.exit_reason is ExitReason.STOP_HIT
        assert out.exit == 99.5
        assert out.r_cc == pytest.approx(-0.5)

    def test_gap_open_beyond_target_fills_at_open(self):
        d, levels = self.make(Direction.SHORT)
        hidden = [
            bar(99.0, 99.1, 98.9, 99.0, 0),
            quiet_bar(99.0, 1),
            quiet_bar(99.0, 2),
        ]
        out = simulate_execution(d, levels, hidden)
        assert out.exit_reason is ExitReason.TARGET_HIT
        assert out.exit == 99.0
        assert out.r_cc == pytest.approx(1.0)

    def test_later_bar_exit(self):
        d, levels = self.make(Direction.LONG)
        hidden = [
            quiet_bar(100.0, 0),
            quiet_bar(100.0, 1),
            bar(100.0, 100.2, 99.99, 100.1, 2),
        ]
        out = simulate_execution(d, levels, hidden)
        assert out.exit_bar == 2
        assert out.exit_reason is ExitReason.TARGET_HIT

    def test_malformed_levels_rejected(self):
        d, levels = self.make(Direction.LONG)
        short_levels = risk_levels(100.0, Direction.SHORT, 0.0005, 1.5)
        hidden = [quiet_bar(100.0, t) for t in range(3)]
        with pytest.raises(ValueError, match="malformed"):
            simulate_execution(d, short_levels, hidden)

    def test_cap_excursions_mode(self):
        d, levels = self.make(Direction.LONG)
        hidden = [
            bar(100.0, 103.0, 99.99, 100.05, 0),
            quiet_bar(100.05, 1),
            quiet_bar(100.05, 2),
        ]
        out = simulate_execution(d, levels, hidden, cap_excursions=True)
        assert out.r_max == pytest.approx(100 * 1.5 * 0.0005)
        uncapped = simulate_execution(d, levels, hidden)
        assert uncapped.r_max == pytest.approx(3.0)


def tie_bar(entry, stop, target, open_frac):
    """One bar whose range spans both levels; open interpolates stop->target."""
    lo = min(stop, target) * 0.9995
    hi = max(stop, target) * 1.0005
    o = stop + open_frac * (target - stop)
    return bar(o, hi, lo, o)


class TestTieBreakTable:
    """Hand-enumerated 12-case policy table: for each direction, a bar with
    only the target in range, only the stop, and both-in-range under each
    of the three policies."""

    @pytest.mark.parametrize("direction", [Direction.LONG, Direction.SHORT])
    def test_only_target_in_range(self, direction):
        d = decision(direction)
        levels = risk_levels(100.0, direction, 0.0005, 1.5)
        sign = 1 if direction is Direction.LONG else -1
        hidden = [
            bar(
                100.0,
                100.0 + sign * 0.1 if sign > 0 else 100.01,
                99.99 if sign > 0 else 100.0 - 0.1,
                100.0,
                0,
            ),
            quiet_bar(100.0, 1),
            quiet_bar(100.0, 2),
        ]
        out = simulate_execution(d, levels, hidden)
        assert out.exit_reason is ExitReason.TARGET_HIT
        assert out.exit == levels.target

    @pytest.mark.parametrize("direction", [Direction.LONG, Direction.SHORT])
    def test_only_stop_in_range(self, direction):
        d = decision(direction)
        levels = risk_levels(100.0, direction, 0.0005, 1.5)
        sign = 1 if direction is Direction.LONG else -1
        hidden = [
            bar(
                100.0,
                100.01 if sign > 0 else 100.0 + 0.1,
                100.0 - 0.1 if sign > 0 else 99.99,
                100.0,
                0,
            ),
            quiet_bar(100.0, 1),
            quiet_bar(100.0, 2),
        ]
        out = simulate_execution(d, levels, hidden)
        assert out.exit_reason is ExitReason.STOP_HIT
        assert out.exit == levels.stop

    @pytest.mark.parametrize("direction", [Direction.LONG, Direction.SHORT])
    def test_both_in_range_stop_first(self, direction):
        d = decision(direction)
        levels = risk_levels(100.0, direction, 0.0005, 1.5)
        hidden = [
            tie_bar(100.0, levels.stop, levels.target, 0.5),
            quiet_bar(100.0, 1),
            quiet_bar(100.0, 2),
        ]
        out = simulate_execution(d, levels, hidden, TieBreak.STOP_FIRST)
        assert out.exit_reason is ExitReason.STOP_HIT

    @pytest.mark.parametrize("direction", [Direction.LONG, Direction.SHORT])
    def test_both_in_range_target_first(self, direction):
        d = decision(direction)
        levels = risk_levels(100.0, direction, 0.0005, 1.5)
        hidden = [
            tie_bar(100.0, levels.stop, levels.target, 0.5),
            quiet_bar(100.0, 1),
            quiet_bar(100.0, 2),
        ]
        out = simulate_execution(d, levels, hidden, TieBreak.TARGET_FIRST)
        assert out.exit_reason is ExitReason.TARGET_HIT

    @pytest.mark.parametrize("direction", [Direction.LONG, Direction.SHORT])
    def test_both_in_range_open_nearer_stop(self, direction):
        d = decision(direction)
        levels = risk_levels(100.0, direction, 0.0005, 1.5)
        hidden = [
            tie_bar(100.0, levels.stop, levels.target, 0.25),
            quiet_bar(100.0, 1),
            quiet_bar(100.0, 2),
        ]
        out = simulate_execution(d, levels, hidden, TieBreak.OPEN_DIRECTION)
        assert out.exit_reason is ExitReason.STOP_HIT

    @pytest.mark.parametrize("direction", [Direction.LONG, Direction.SHORT])
    def test_both_in_range_open_nearer_target(self, direction):
        d = decision(direction)
        levels = risk_levels(100.0, direction, 0.0005, 1.5)
        hidden = [
            tie_bar(100.0, levels.stop, levels.target, 0.75),
            quiet_bar(100.0, 1),
            quiet_bar(100.0, 2),
        ]
        out = simulate_execution(d, levels, hidden, TieBreak.OPEN_DIRECTION)
        assert out.exit_reason is ExitReason.TARGET_HIT


def random_continuous_path(rand: random.Random, entry: float):
    """3 bars whose opens chain from the entry: no opening gaps possible."""
    bars = []
    prev_close = entry
    for t in range(3):
        o = prev_close
        c = o * (1.0 + rand.uniform(-0.002, 0.002))
        hi = max(o, c) * (1.0 + rand.uniform(0, 0.001))
        lo = min(o, c) * (1.0 - rand.uniform(0, 0.001))
        bars.append(bar(o, hi, lo, c, t))
        prev_close = c
    return bars


class TestSimulatorProperties:
    def test_bounds_and_envelope_10k_random_paths(self):
        rand = random.Random(987654)
        violations = 0
        for _ in range(10_000):
            direction = (
                Direction.LONG if rand.random() < 0.5 else Direction.SHORT
            )
            r = rand.uniform(1.2, 1.8)
            entry = rand.uniform(10, 1000)
            levels = risk_levels(entry, direction, 0.0005, r)
            hidden = random_continuous_path(rand, entry)
            out = simulate_execution(
                decision(direction, r), levels, hidden
            )
            lo_bound = -100 * 0.0005
            hi_bound = 100 * r * 0.0005
            if out.exit_reason is ExitReason.STOP_HIT:
                if abs(out.r_cc - lo_bound) > 1e-9:
                    violations += 1
            elif out.exit_reason is ExitReason.TARGET_HIT:
                if abs(out.r_cc - hi_bound) > 1e-9:
                    violations += 1
            else:
                if not (lo_bound < out.r_cc < hi_bound):
                    violations += 1
            if not (out.r_min - 1e-12 <= out.r_cc <= out.r_max + 1e-12):
                violations += 1
        assert violations == 0
