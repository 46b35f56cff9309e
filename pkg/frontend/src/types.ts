// Wire types mirroring the analysis service's JSON responses. The console
// renders these verbatim and computes nothing analytical on its own.

export type Direction = "LONG" | "SHORT";
export type Backend = "rule" | "llm";

export interface DecisionPayload {
  forecast_horizon: string;
  decision: Direction;
  justification: string;
  risk_reward_ratio: number;
  confidence: number;
}

export interface RiskPayload {
  entry: number;
  stop: number;
  target: number;
  rho: number;
  r: number;
}

export interface IndicatorValues {
  rsi: number;
  macd: number;
  macd_signal: number;
  macd_histogram: number;
  roc: number;
  stoch_k: number;
  stoch_d: number;
  willr: number;
}

export interface IndicatorPayload {
  values: IndicatorValues;
  flags: Record<string, boolean>;
  momentum_score: number;
  text: string;
}

export interface PatternTop {
  kind: string;
  bias: "bullish" | "bearish" | "neutral";
  span: [number, number];
  confidence: number;
  structure_summary: string;
  trend_summary: string;
  symmetry_summary: string;
  key_points: Array<[number, number]>;
}

export interface PatternPayload {
  structure: string;
  trend: string;
  symmetry: string;
  top: PatternTop | null;
  text: string;
}

export interface LineSegment {
  slope: number;
  intercept: number;
  r_squared: number;
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface TrendPayload {
  label: string;
  geometry: string;
  kappa: number;
  kappa_rel: number;
  support: LineSegment;
  resistance: LineSegment;
  text: string;
}

export interface Candle {
  timestamp: number;
  open: number;
  high: number;
  low: number;
  close: number;
}

export interface ChartPayload {
  candles: Candle[];
  support: LineSegment;
  resistance: LineSegment;
  trend: { label: string; geometry: string; kappa: number; kappa_rel: number };
  pattern: PatternTop | null;
  levels: RiskPayload;
}

export interface AnalyzeResponse {
  symbol: string;
  timeframe: string;
  decision: DecisionPayload;
  risk: RiskPayload;
  indicator: IndicatorPayload;
  pattern: PatternPayload;
  trend: TrendPayload;
  chart: ChartPayload;
  warning: string | null;
}

export interface DatasetInfo {
  name: string;
  symbol: string;
  timeframe: string;
  bars: number;
}

export interface AnalyzeRequest {
  dataset: string;
  end_index: number | null;
  backend: Backend;
  context_bars: number;
}

export interface ApiErrorBody {
  code: string;
  message: string;
  detail?: string;
}
