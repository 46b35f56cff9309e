// Pure string renderers: state in, markup out. No analytical computation
// happens here; every number shown comes from a response field and the
// only arithmetic is mapping prices and bar indices onto pixels.

import type {
  AnalyzeResponse,
  ChartPayload,
  IndicatorPayload,
  LineSegment,
  PatternPayload,
  TrendPayload,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const price = (x: number): string => x.toFixed(4);

export function renderDecisionCard(response: AnalyzeResponse | null): string {
  if (response === null) {
    return (
      '<div class="card decision-card placeholder" data-empty="true">' +
      "<p>No analysis yet. Pick a dataset and window, then submit.</p></div>"
    );
  }
  const { decision, risk, symbol, timeframe, warning } = response;
  const side = decision.decision === "LONG" ? "long" : "short";
  const warningBanner = warning
    ? `<div class="warning-banner" role="alert">${escapeHtml(warning)}</div>`
    : "";
  return `<div class="card decision-card" data-direction="${decision.decision}">
${warningBanner}<header>
  <span class="badge badge-${side}">${decision.decision}</span>
  <span class="scope">${escapeHtml(symbol)} &middot; ${escapeHtml(timeframe)}</span>
</header>
<dl>
  <dt>Forecast horizon</dt><dd>${escapeHtml(decision.forecast_horizon)}</dd>
  <dt>Risk-reward ratio</dt><dd data-field="risk_reward_ratio">${decision.risk_reward_ratio.toFixed(2)}</dd>
  <dt>Confidence</dt><dd data-field="confidence">${decision.confidence.toFixed(2)}</dd>
  <dt>Entry</dt><dd data-field="entry">${price(risk.entry)}</dd>
  <dt>Stop</dt><dd data-field="stop">${price(risk.stop)}</dd>
  <dt>Target</dt><dd data-field="target">${price(risk.target)}</dd>
</dl>
<p class="justification">${escapeHtml(decision.justification)}</p>
</div>`;
}

export function renderIndicatorPane(indicator: IndicatorPayload | null): string {
  if (indicator === null) {
    return '<div class="card indicator-pane placeholder"><p>Indicator report appears here.</p></div>';
  }
  const v = indicator.values;
  const activeFlags = Object.entries(indicator.flags)
    .filter(([, on]) => on)
    .map(([name]) => `<span class="flag">${escapeHtml(name)}</span>`)
    .join(" ");
  return `<div class="card indicator-pane">
<h3>Indicators</h3>
<table>
  <tr><td>RSI</td><td data-field="rsi">${v.rsi.toFixed(2)}</td></tr>
  <tr><td>MACD</td><td data-field="macd">${v.macd.toFixed(4)}</td></tr>
  <tr><td>Signal</td><td data-field="macd_signal">${v.macd_signal.toFixed(4)}</td></tr>
  <tr><td>Histogram</td><td data-field="macd_histogram">${v.macd_histogram.toFixed(4)}</td></tr>
  <tr><td>ROC</td><td data-field="roc">${v.roc.toFixed(2)}%</td></tr>
  <tr><td>Stoch %K</td><td data-field="stoch_k">${v.stoch_k.toFixed(2)}</td></tr>
  <tr><td>Stoch %D</td><td data-field="stoch_d">${v.stoch_d.toFixed(2)}</td></tr>
  <tr><td>Williams %R</td><td data-field="willr">${v.willr.toFixed(2)}</td></tr>
  <tr><td>Momentum score</td><td data-field="momentum_score">${indicator.momentum_score.toFixed(2)}</td></tr>
</table>
<p class="flags">${activeFlags || "no active flags"}</p>
<pre class="report-text">${escapeHtml(indicator.text)}</pre>
</div>`;
}

export function renderPatternTrendPane(
  pattern: PatternPayload | null,
  trend: TrendPayload | null,
): string {
  if (pattern === null || trend === null) {
    return '<div class="card pattern-trend-pane placeholder"><p>Pattern and trend reports appear here.</p></div>';
  }
  const top = pattern.top;
  const patternHead = top
    ? `<span class="pattern-kind" data-field="pattern_kind">${escapeHtml(top.kind)}</span>
       <span class="pattern-bias bias-${top.bias}">${top.bias}</span>
       <span class="pattern-confidence" data-field="pattern_confidence">confidence ${top.confidence.toFixed(2)}</span>`
    : '<span class="pattern-kind none">no pattern</span>';
  return `<div class="card pattern-trend-pane">
<h3>Pattern</h3>
<p>${patternHead}</p>
<dl>
  <dt>Structure</dt><dd data-field="structure">${escapeHtml(pattern.structure)}</dd>
  <dt>Trend</dt><dd data-field="pattern_trend">${escapeHtml(pattern.trend)}</dd>
  <dt>Symmetry</dt><dd data-field="symmetry">${escapeHtml(pattern.symmetry)}</dd>
</dl>
<h3>Channel</h3>
<p>
  <span class="trend-label" data-field="trend_label">${escapeHtml(trend.label)}</span>
  <span class="trend-geometry" data-field="trend_geometry">${escapeHtml(trend.geometry)}</span>
  <span data-field="kappa_rel">drift ${trend.kappa_rel.toExponential(2)}/bar</span>
</p>
</div>`;
}

export interface ChartDimensions {
  width: number;
  height: number;
  padding: number;
}

const DEFAULT_DIMS: ChartDimensions = { width: 900, height: 420, padding: 24 };

interface Scales {
  x(index: number): number;
  y(value: number): number;
}

function makeScales(chart: ChartPayload, dims: ChartDimensions): Scales {
  const highs = chart.candles.map((c) => c.high);
  const lows = chart.candles.map((c) => c.low);
  const yCandidates = [
    ...highs,
    ...lows,
    chart.levels.stop,
    chart.levels.target,
  ];
  const yMin = Math.min(...yCandidates);
  const yMax = Math.max(...yCandidates);
  const ySpan = yMax - yMin || 1;
  const innerW = dims.width - 2 * dims.padding;
  const innerH = dims.height - 2 * dims.padding;
  const n = Math.max(chart.candles.length - 1, 1);
  return {
    x: (index) => dims.padding + (index / n) * innerW,
    y: (value) => dims.padding + ((yMax - value) / ySpan) * innerH,
  };
}

function lineSvg(
  seg: LineSegment,
  scales: Scales,
  cssClass: string,
  color: string,
): string {
  return (
    `<line class="${cssClass}" x1="${scales.x(seg.x0).toFixed(1)}" ` +
    `y1="${scales.y(seg.y0).toFixed(1)}" x2="${scales.x(seg.x1).toFixed(1)}" ` +
    `y2="${scales.y(seg.y1).toFixed(1)}" stroke="${color}" stroke-width="1.5" ` +
    `data-price0="${seg.y0}" data-price1="${seg.y1}"/>`
  );
}

export function renderChart(
  chart: ChartPayload | null,
  dims: ChartDimensions = DEFAULT_DIMS,
): string {
  if (chart === null || chart.candles.length === 0) {
    return '<div class="card chart placeholder" data-empty="true"><p>No chart data.</p></div>';
  }
  const scales = makeScales(chart, dims);
  const slot = (dims.width - 2 * dims.padding) / Math.max(chart.candles.length, 1);
  const bodyW = Math.max(Math.min(slot * 0.6, 9), 1);
  const candles = chart.candles
    .map((c, i) => {
      const cx = scales.x(i);
      const up = c.close >= c.open;
      const top = scales.y(Math.max(c.open, c.close));
      const bottom = scales.y(Math.min(c.open, c.close));
      const cls = up ? "candle-up" : "candle-down";
      return (
        `<g class="candle ${cls}" data-timestamp="${c.timestamp}">` +
        `<line x1="${cx.toFixed(1)}" y1="${scales.y(c.high).toFixed(1)}" ` +
        `x2="${cx.toFixed(1)}" y2="${scales.y(c.low).toFixed(1)}" stroke="currentColor"/>` +
        `<rect x="${(cx - bodyW / 2).toFixed(1)}" y="${top.toFixed(1)}" ` +
        `width="${bodyW.toFixed(1)}" height="${Math.max(bottom - top, 0.5).toFixed(1)}"/>` +
        `</g>`
      );
    })
    .join("");

  const bandTop = scales.y(Math.max(chart.levels.stop, chart.levels.target));
  const bandBottom = scales.y(Math.min(chart.levels.stop, chart.levels.target));
  const levelBand =
    `<rect class="level-band" x="${dims.padding}" y="${bandTop.toFixed(1)}" ` +
    `width="${dims.width - 2 * dims.padding}" ` +
    `height="${(bandBottom - bandTop).toFixed(1)}" ` +
    `data-stop="${chart.levels.stop}" data-target="${chart.levels.target}"/>`;
  const entryY = scales.y(chart.levels.entry).toFixed(1);
  const entryLine =
    `<line class="entry-line" x1="${dims.padding}" y1="${entryY}" ` +
    `x2="${dims.width - dims.padding}" y2="${entryY}" ` +
    `stroke="#888" stroke-dasharray="2 3" data-entry="${chart.levels.entry}"/>`;

  let patternSvg = "";
  if (chart.pattern !== null) {
    const pts = chart.pattern.key_points;
    const polyline = pts
      .map(([i, p]) => `${scales.x(i).toFixed(1)},${scales.y(p).toFixed(1)}`)
      .join(" ");
    const markers = pts
      .map(
        ([i, p]) =>
          `<circle class="key-point" cx="${scales.x(i).toFixed(1)}" ` +
          `cy="${scales.y(p).toFixed(1)}" r="3.5" data-index="${i}" data-price="${p}"/>`,
      )
      .join("");
    patternSvg =
      `<g class="pattern" data-kind="${chart.pattern.kind}">` +
      `<polyline points="${polyline}" fill="none" stroke="#b8860b" ` +
      `stroke-dasharray="5 4" stroke-width="1.5"/>${markers}</g>`;
  }

  return `<svg class="chart" viewBox="0 0 ${dims.width} ${dims.height}" role="img" data-candles="${chart.candles.length}" data-trend="${chart.trend.label}">
${levelBand}
${entryLine}
${candles}
${lineSvg(chart.support, scales, "support-line", "#1f6fd6")}
${lineSvg(chart.resistance, scales, "resistance-line", "#d63a1f")}
${patternSvg}
</svg>`;
}

export function renderStatus(status: string, error: string | null): string {
  if (status === "error" && error) {
    return `<div class="status status-error" role="alert">${escapeHtml(error)}</div>`;
  }
  if (status === "pending") {
    return '<div class="status status-pending">analyzing&hellip;</div>';
  }
  return `<div class="status status-${status}"></div>`;
}
