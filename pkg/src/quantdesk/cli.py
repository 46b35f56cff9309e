"""Command-line entry points: benchmark runs, one-off analysis, case
studies, and the HTTP service.

Exit codes: 0 success, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from .baselines import save_model
from .benchmark import (
    METHOD_ORDER,
    BenchmarkConfig,
    load_manifest,
    rolling_case_study,
    run_benchmark,
)
from .execution import TieBreak
from .llm import ChatCompletionClient, LlmConfig
from .market_data import MarketDataError, load_csv
from .pipeline import PipelineConfig, analyze_window
from .service import create_app, load_datasets

_TIEBREAKS = {
    "stop": TieBreak.STOP_FIRST,
    "target": TieBreak.TARGET_FIRST,
    "open": TieBreak.OPEN_DIRECTION,
}


@click.group()
def main() -> None:
    """Price-action analysis desk."""


def _parse_methods(methods: str) -> list[str]:
    if methods.strip().lower() == "all":
        return [m for m in METHOD_ORDER if m != "llm"]
    requested = [m.strip() for m in methods.split(",") if m.strip()]
    unknown = [m for m in requested if m not in METHOD_ORDER]
    if unknown or not requested:
        raise click.UsageError(
            f"unknown methods {unknown or methods!r}; choose from "
            f"{', '.join(METHOD_ORDER)} or 'all'"
        )
    return requested


@main.command()
@click.option("--manifest", "manifest_path", required=True, type=click.Path())
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--methods", default="all", show_default=True)
@click.option(
    "--out", "out_dir", default="bench-results", show_default=True,
    type=click.Path(),
)
@click.option("--cap-excursions", is_flag=True, default=False)
@click.option(
    "--tiebreak", default="stop", show_default=True,
    type=click.Choice(sorted(_TIEBREAKS)),
)
@click.option("--jobs", default=1, show_default=True, type=int)
def bench(manifest_path, seed, methods, out_dir, cap_excursions, tiebreak, jobs):
    """Run the benchmark described by a manifest and write result files."""
    method_list = _parse_methods(methods)
    try:
        assets = load_manifest(manifest_path)
    except (OSError, ValueError, KeyError) as exc:
        raise click.ClickException(f"unreadable manifest: {exc}") from exc
    config = BenchmarkConfig(
        tiebreak=_TIEBREAKS[tiebreak],
        cap_excursions=cap_excursions,
        jobs=jobs,
    )
    models: dict = {}
    summary = run_benchmark(
        assets, method_list, seed, config, trained_models=models
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = summary.to_table()
    (out / "summary.txt").write_text(table)
    (out / "results.json").write_text(
        json.dumps(summary.to_dict(include_records=True), indent=2) + "\n"
    )
    if models:
        model_dir = out / "models"
        model_dir.mkdir(exist_ok=True)
        for symbol, model in models.items():
            save_model(model, model_dir / f"{symbol.lower()}.json")
    click.echo(table, nl=False)
    click.echo(f"results written to {out}")


@main.command()
@click.option("--csv", "csv_path", required=True, type=click.Path())
@click.option("--symbol", default=None)
@click.option("--timeframe", default="1h", show_default=True)
@click.option(
    "--at", "at_index", default=-1, show_default=True, type=int,
    help="index of the last analyzed bar",
)
@click.option(
    "--backend", default="rule", show_default=True,
    type=click.Choice(["rule", "llm"]),
)
@click.option(
    "--context", "context_bars", default=97, show_default=True, type=int,
    help="trailing bars fed to the analyzers",
)
def analyze(csv_path, symbol, timeframe, at_index, backend, context_bars):
    """Analyze one window of a csv file and print the desk report."""
    symbol = symbol or Path(csv_path).stem.upper()
    try:
        series = load_csv(csv_path, symbol, timeframe)
        window = series.window_ending_at(at_index, context_bars)
    except MarketDataError as exc:
        raise click.ClickException(str(exc)) from exc
    transport = None
    if backend == "llm":
        llm_config = LlmConfig.from_env()
        if llm_config is not None:
            transport = ChatCompletionClient(llm_config)
    try:
        result = analyze_window(
            window, PipelineConfig(), backend=backend, transport=transport
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    if result.warning:
        click.echo(f"warning: {result.warning}")
    click.echo("== Indicators ==")
    click.echo(result.indicator.to_text())
    click.echo("== Trend ==")
    click.echo(result.trend.to_text())
    click.echo("== Pattern ==")
    click.echo(result.pattern.to_text())
    click.echo("== Decision ==")
    decision = result.decision
    click.echo(
        f"{decision.direction.value} r={decision.risk_reward_ratio:.2f} "
        f"confidence={decision.confidence:.2f}"
    )
    click.echo(decision.justification)
    risk = result.risk
    click.echo(
        f"entry={risk.entry:.4f} stop={risk.stop:.4f} target={risk.target:.4f}"
    )


@main.command("case-study")
@click.option("--csv", "csv_path", required=True, type=click.Path())
@click.option("--symbol", default=None)
@click.option("--timeframe", default="1h", show_default=True)
@click.option("--windows", default=10, show_default=True, type=int)
@click.option("--offset", default=5, show_default=True, type=int)
@click.option("--window-length", default=100, show_default=True, type=int)
def case_study(csv_path, symbol, timeframe, windows, offset, window_length):
    """Overlapping-window walk-forward check of the rule pipeline."""
    symbol = symbol or Path(csv_path).stem.upper()
    try:
        series = load_csv(csv_path, symbol, timeframe)
    except MarketDataError as exc:
        raise click.ClickException(str(exc)) from exc
    config = PipelineConfig()

    def method(window, _index):
        return analyze_window(window, config).decision

    try:
        result = rolling_case_study(
            series, method,
            window_length=window_length,
            num_windows=windows,
            offset=offset,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    for row in result.rows:
        mark = "correct" if row.correct else "wrong"
        click.echo(
            f"window {row.window_index:2d} start={row.window_start:4d} "
            f"{row.decision.direction.value:5s} hits={row.hits}/3 {mark}"
        )
    click.echo(result.summary())


@main.command()
@click.option("--data", "data_path", required=True, type=click.Path())
@click.option("--host", default=lambda: os.environ.get("QUANTDESK_HOST", "127.0.0.1"))
@click.option(
    "--port", type=int,
    default=lambda: int(os.environ.get("QUANTDESK_PORT", "8000")),
)
def serve(data_path, host, port):
    """Serve the analysis API over HTTP."""
    import uvicorn

    try:
        datasets = load_datasets(data_path)
    except (OSError, ValueError, KeyError, MarketDataError) as exc:
        raise click.ClickException(f"cannot load datasets: {exc}") from exc
    app = create_app(datasets)
    click.echo(f"serving {len(datasets)} datasets on {host}:{port}")
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
