"""HTTP facade for the analysis console.

Three endpoints: POST /analyze runs the pipeline on an inline or dataset
window, GET /datasets lists the loaded series, GET /health is a probe.
Errors always use the {code, message, detail} envelope. Loaded datasets
are immutable shared state; each request's pipeline shares nothing.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .benchmark import load_manifest
from .llm import ChatCompletionClient, LlmConfig, Transport
from .market_data import BarSeries, MarketDataError, OhlcBar, load_csv
from .pipeline import AnalysisResult, PipelineConfig, analyze_window, min_window_bars

__all__ = ["ApiError", "create_app", "load_datasets", "chart_payload"]

DEFAULT_CONTEXT_BARS = 97


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


class BarModel(BaseModel):
    timestamp: int
    open: float
    high: float
    low: float
    close: float
    volume: float | None = None


class AnalyzeRequestModel(BaseModel):
    symbol: str | None = None
    timeframe: str = "1h"
    bars: list[BarModel] | None = None
    dataset: str | None = None
    end_index: int | None = None
    backend: Literal["rule", "llm"] = "rule"
    context_bars: int = Field(default=DEFAULT_CONTEXT_BARS, ge=1)


def chart_payload(window: BarSeries, result: AnalysisResult) -> dict:
    """Everything the console needs to draw: candles, lines, annotations."""
    trend = result.trend.to_dict()
    return {
        "candles": [
            {
                "timestamp": b.timestamp,
                "open": b.open,
                "high": b.high,
                "low": b.low,
                "close": b.close,
            }
            for b in window.bars
        ],
        "support": trend["support"],
        "resistance": trend["resistance"],
        "trend": {
            "label": trend["label"],
            "geometry": trend["geometry"],
            "kappa": trend["kappa"],
            "kappa_rel": trend["kappa_rel"],
        },
        "pattern": result.pattern.top.to_dict() if result.pattern.top else None,
        "levels": result.risk.to_dict(),
    }


def load_datasets(data_path: str | Path) -> dict[str, BarSeries]:
    """Load series from a benchmark manifest or a directory of csv files."""
    data_path = Path(data_path)
    datasets: dict[str, BarSeries] = {}
    if data_path.is_dir():
        for csv_file in sorted(data_path.glob("*.csv")):
            symbol = csv_file.stem.upper()
            datasets[symbol] = load_csv(csv_file, symbol, "1h")
    else:
        for asset in load_manifest(data_path):
            datasets[asset.symbol] = load_csv(
                asset.csv, asset.symbol, asset.timeframe
            )
    return datasets


def create_app(
    datasets: dict[str, BarSeries] | None = None,
    config: PipelineConfig = PipelineConfig(),
    transport: Transport | None = None,
) -> FastAPI:
    """Build the service; ``transport`` enables the llm backend when set.

    With no explicit transport, the chat client is configured from the
    environment if the endpoint variables are present.
    """
    datasets = dict(datasets or {})
    if transport is None:
        llm_config = LlmConfig.from_env()
        if llm_config is not None:
            transport = ChatCompletionClient(llm_config)
    app = FastAPI(title="quantdesk", version="0.1.0")
    minimum = min_window_bars(config)

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={
                "code": exc.code,
                "message": exc.message,
                "detail": exc.detail,
            },
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "code": "validation_error",
                "message": "request body failed validation",
                "detail": str(exc.errors()),
            },
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "datasets": len(datasets)}

    @app.get("/datasets")
    def list_datasets() -> dict:
        return {
            "datasets": [
                {
                    "name": name,
                    "symbol": series.symbol,
                    "timeframe": series.timeframe,
                    "bars": len(series),
                }
                for name, series in sorted(datasets.items())
            ]
        }

    def resolve_window(request: AnalyzeRequestModel) -> BarSeries:
        if request.context_bars < minimum:
            raise ApiError(
                400,
                "window_too_short",
                f"analysis needs at least {minimum} bars",
                f"context_bars={request.context_bars}",
            )
        if request.bars is not None:
            try:
                series = BarSeries(
                    request.symbol or "INLINE",
                    request.timeframe,
                    tuple(
                        OhlcBar(
                            timestamp=b.timestamp,
                            open=b.open,
                            high=b.high,
                            low=b.low,
                            close=b.close,
                            volume=b.volume,
                        )
                        for b in request.bars
                    ),
                )
            except MarketDataError as exc:
                raise ApiError(400, "invalid_bars", str(exc)) from exc
            if len(series) < request.context_bars:
                raise ApiError(
                    400,
                    "window_too_short",
                    f"need at least {max(minimum, request.context_bars)} "
                    f"bars, got {len(series)}",
                )
            return series.slice(len(series) - request.context_bars, len(series))
        if request.dataset is not None:
            series = datasets.get(request.dataset)
            if series is None:
                raise ApiError(
                    404,
                    "unknown_dataset",
                    f"dataset {request.dataset!r} is not loaded",
                    f"available: {sorted(datasets)}",
                )
            end_index = (
                request.end_index
                if request.end_index is not None
                else len(series) - 1
            )
            try:
                return series.window_ending_at(end_index, request.context_bars)
            except MarketDataError as exc:
                raise ApiError(400, "window_too_short", str(exc)) from exc
        raise ApiError(
            400, "missing_input", "provide either inline bars or a dataset"
        )

    @app.post("/analyze")
    def analyze(request: AnalyzeRequestModel) -> dict:
        window = resolve_window(request)
        result = analyze_window(
            window, config, backend=request.backend, transport=transport
        )
        return {
            "symbol": window.symbol,
            "timeframe": window.timeframe,
            "decision": result.decision.to_dict(),
            "risk": result.risk.to_dict(),
            "indicator": result.indicator.to_dict()
            | {"text": result.indicator.to_text()},
            "pattern": result.pattern.to_dict()
            | {"text": result.pattern.to_text()},
            "trend": result.trend.to_dict() | {"text": result.trend.to_text()},
            "chart": chart_payload(window, result),
            "warning": result.warning,
        }

    return app
