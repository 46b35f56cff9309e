#!/usr/bin/env python3
"""Generate the bundled synthetic benchmark: four regime-flavored assets.

Writes data/synthetic/<asset>.csv plus manifest.json. Fully deterministic:
rerunning reproduces byte-identical files.
"""

import argparse
import json
from pathlib import Path

import numpy as np

ASSETS = [
    # (symbol, timeframe, regime, seed)
    ("SYN_TREND_UP", "1h", "trend_up", 101),
    ("SYN_TREND_DOWN", "1h", "trend_down", 102),
    ("SYN_MEANREV", "4h", "meanrev", 103),
    ("SYN_CHOPPY", "1h", "choppy", 104),
]

N_BARS = 1200
START_PRICE = 100.0


def close_path(regime: str, rng: np.random.Generator) -> np.ndarray:
    if regime == "trend_up":
        steps = rng.normal(4e-4, 0.004, size=N_BARS - 1)
    elif regime == "trend_down":
        steps = rng.normal(-4e-4, 0.004, size=N_BARS - 1)
    elif regime == "meanrev":
        # Ornstein-Uhlenbeck-flavored log-price around the start level
        log_p = np.empty(N_BARS)
        log_p[0] = 0.0
        noise = rng.normal(0, 0.006, size=N_BARS - 1)
        for i in range(1, N_BARS):
            log_p[i] = 0.97 * log_p[i - 1] + noise[i - 1]
        return START_PRICE * np.exp(log_p)
    elif regime == "choppy":
        vol = 0.003 + 0.004 * (rng.uniform(size=N_BARS - 1) > 0.8)
        steps = rng.normal(0, 1, size=N_BARS - 1) * vol
    else:
        raise ValueError(regime)
    return START_PRICE * np.exp(np.concatenate([[0.0], np.cumsum(steps)]))


def write_asset(symbol, timeframe, regime, seed, out_dir: Path) -> str:
    rng = np.random.default_rng(seed)
    closes = close_path(regime, rng)
    spacing = 3600 if timeframe == "1h" else 14400
    rows = ["timestamp,open,high,low,close,volume"]
    prev_close = closes[0]
    for i, c in enumerate(closes):
        o = prev_close if i > 0 else c
        hi = max(o, c) * (1.0 + abs(rng.normal(0, 0.0015)))
        lo = min(o, c) * (1.0 - abs(rng.normal(0, 0.0015)))
        vol = float(np.round(rng.uniform(100, 10_000), 2))
        ts = 1_600_000_000 + spacing * i
        rows.append(
            f"{ts},{o:.6f},{hi:.6f},{lo:.6f},{c:.6f},{vol}"
        )
        prev_close = c
    name = f"{symbol.lower()}.csv"
    (out_dir / name).write_text("\n".join(rows) + "\n")
    return name


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=Path(__file__).resolve().parent.parent / "data" / "synthetic",
        type=Path,
    )
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    manifest = {"assets": []}
    for symbol, timeframe, regime, seed in ASSETS:
        csv_name = write_asset(symbol, timeframe, regime, seed, args.out)
        manifest["assets"].append(
            {
                "symbol": symbol,
                "timeframe": timeframe,
                "csv": csv_name,
                "count": 100,
                "length": 100,
                "holdout": 3,
                "seed": seed,
            }
        )
    (args.out / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n"
    )
    print(f"wrote {len(ASSETS)} assets to {args.out}")


if __name__ == "__main__":
    main()
