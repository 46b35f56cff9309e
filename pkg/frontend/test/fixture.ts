import type { AnalyzeResponse, Candle } from "../src/types.js";

function candles(): Candle[] {
  const out: Candle[] = [];
  let close = 100;
  for (let i = 0; i < 97; i++) {
    const open = close;
    close = open * (1 + 0.002 * Math.sin(i / 5) + 0.001);
    out.push({
      timestamp: 1_600_000_000 + 3600 * i,
      open,
      high: Math.max(open, close) * 1.001,
      low: Math.min(open, close) * 0.999,
      close,
    });
  }
  return out;
}

export const FIXTURE: AnalyzeResponse = {
  symbol: "SYN_TREND_UP",
  timeframe: "1h",
  decision: {
    forecast_horizon: "Predicting next 3 candlesticks",
    decision: "LONG",
    justification:
      "composite score +0.612; indicators +0.71, pattern AscendingTriangle (+0.64), trend Uptrend (+1.00); 3/3 sources agree",
    risk_reward_ratio: 1.567,
    confidence: 0.612,
  },
  risk: {
    entry: 110.4188,
    stop: 110.3636,
    target: 110.5053,
    rho: 0.0005,
    r: 1.567,
  },
  indicator: {
    values: {
      rsi: 68.49,
      macd: 0.2145,
      macd_signal: 0.1873,
      macd_histogram: 0.0272,
      roc: 0.94,
      stoch_k: 84.21,
      stoch_d: 82.77,
      willr: -12.43,
    },
    flags: {
      rsi_overbought: false,
      rsi_oversold: false,
      macd_bullish_cross: true,
      macd_bearish_cross: false,
      stoch_overbought: true,
      stoch_oversold: false,
      willr_overbought: true,
      willr_oversold: false,
      roc_positive: true,
    },
    momentum_score: 1.0,
    text: "RSI: 68.49 (neutral).\nMACD: 0.2145 above signal 0.1873 after a fresh bullish cross; histogram 0.0272.\nROC: 0.94% over the lookback.\nStochastic: %K 84.21 / %D 82.77 (overbought).\nWilliams %R: -12.43 (overbought).\nConclusion: momentum reads bullish (score +1.00).",
  },
  pattern: {
    structure: "rising support into flat resistance",
    trend: "AscendingTriangle carries a bullish breakout bias within a uptrend channel",
    symmetry: "triangular convergence of the boundary lines",
    top: {
      kind: "AscendingTriangle",
      bias: "bullish",
      span: [57, 96],
      confidence: 0.64,
      structure_summary: "rising support into flat resistance",
      trend_summary: "AscendingTriangle: bullish bias.",
      symmetry_summary: "triangular convergence of the boundary lines",
      key_points: [
        [57, 111.2],
        [96, 111.3],
        [57, 108.1],
        [96, 110.2],
      ],
    },
    text: "Structure: rising support into flat resistance\nTrend: AscendingTriangle carries a bullish breakout bias within a uptrend channel\nSymmetry: triangular convergence of the boundary lines",
  },
  trend: {
    label: "Uptrend",
    geometry: "ConvergingWedgeUp",
    kappa: 0.0271,
    kappa_rel: 2.45e-4,
    support: {
      slope: 0.0538,
      intercept: 105.03,
      r_squared: 0.94,
      x0: 57,
      y0: 108.1,
      x1: 96,
      y1: 110.2,
    },
    resistance: {
      slope: 0.0026,
      intercept: 111.05,
      r_squared: 0.31,
      x0: 57,
      y0: 111.2,
      x1: 96,
      y1: 111.3,
    },
    text: "Trend: Uptrend (per-bar drift +2.45e-04 of price). Resistance slope +0.0026, support slope +0.0538; channel geometry ConvergingWedgeUp.",
  },
  chart: {
    candles: candles(),
    support: {
      slope: 0.0538,
      intercept: 105.03,
      r_squared: 0.94,
      x0: 57,
      y0: 108.1,
      x1: 96,
      y1: 110.2,
    },
    resistance: {
      slope: 0.0026,
      intercept: 111.05,
      r_squared: 0.31,
      x0: 57,
      y0: 111.2,
      x1: 96,
      y1: 111.3,
    },
    trend: {
      label: "Uptrend",
      geometry: "ConvergingWedgeUp",
      kappa: 0.0271,
      kappa_rel: 2.45e-4,
    },
    pattern: {
      kind: "AscendingTriangle",
      bias: "bullish",
      span: [57, 96],
      confidence: 0.64,
      structure_summary: "rising support into flat resistance",
      trend_summary: "AscendingTriangle: bullish bias.",
      symmetry_summary: "triangular convergence of the boundary lines",
      key_points: [
        [57, 111.2],
        [96, 111.3],
        [57, 108.1],
        [96, 110.2],
      ],
    },
    levels: {
      entry: 110.4188,
      stop: 110.3636,
      target: 110.5053,
      rho: 0.0005,
      r: 1.567,
    },
  },
  warning: null,
};

export function withWarning(warning: string): AnalyzeResponse {
  return { ...FIXTURE, warning };
}

export function shortResponse(): AnalyzeResponse {
  return {
    ...FIXTURE,
    decision: {
      ...FIXTURE.decision,
      decision: "SHORT",
      justification: "second request",
      risk_reward_ratio: 1.25,
    },
  };
}
