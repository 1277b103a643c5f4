"""Command line front end.

Exit codes: 0 on success, 2 on usage errors (bad flags or arguments,
handled by click), 1 on runtime failures (unreadable files, failed
backends, impossible routes).
"""
from __future__ import annotations

import json
import os
import sys
from datetime import datetime
from pathlib import Path

import click

from .benchmark import (
    assign_labels,
    load_benchmark,
    load_labels,
    records_to_json,
    render_table,
    report_to_csv,
    report_to_json,
    run_benchmark,
    Report,
    save_report_figure,
)
from .config import EngineConfig, load_config
from .conversation import ChatBackend, Conversation, LiveBackend, ScriptedBackend
from .model import MapModel, Point, load_map
from .session import replay as replay_trace
from .spatial import RouteNotFound, route_instructions, shortest_route
from .tools import ToolContext, ToolError, resolve_place

LIVE_SETTINGS_ENV = "TACTIMAP_LIVE_CONFIG"


def _fail(message: str) -> "click.exceptions.Exit":
    click.echo(f"error: {message}", err=True)
    return click.exceptions.Exit(1)


def _load_map(path: str) -> MapModel:
    try:
        return load_map(Path(path).read_bytes())
    except (OSError, ValueError) as exc:
        raise _fail(f"cannot load map {path}: {exc}") from exc


def _load_config(path: str | None) -> EngineConfig:
    try:
        return load_config(path)
    except (OSError, ValueError) as exc:
        raise _fail(f"cannot load config: {exc}") from exc


def _make_backend(spec: str) -> ChatBackend:
    if spec.startswith("scripted:"):
        path = spec.split(":", 1)[1]
        try:
            return ScriptedBackend.from_file(path)
        except (OSError, ValueError) as exc:
            raise _fail(f"cannot load script {path}: {exc}") from exc
    if spec == "live" or spec.startswith("live:"):
        path = spec.split(":", 1)[1] if ":" in spec else os.environ.get(LIVE_SETTINGS_ENV, "")
        if not path:
            raise _fail(
                f"live backend needs settings: use live:<settings.json> or set {LIVE_SETTINGS_ENV}"
            )
        try:
            return LiveBackend.from_file(path)
        except (OSError, ValueError, RuntimeError) as exc:
            raise _fail(f"cannot configure live backend: {exc}") from exc
    raise click.UsageError(f"unknown backend {spec!r} (use scripted:<file> or live)")


def _parse_time(raw: str | None) -> datetime | None:
    if raw is None:
        return None
    try:
        return datetime.fromisoformat(raw)
    except ValueError as exc:
        raise click.UsageError(f"bad --time {raw!r}: {exc}") from exc


map_option = click.option("--map", "map_path", required=True, help="map document JSON")
preset_option = click.option(
    "--preset", type=click.IntRange(1, 8), default=8, show_default=True, help="instruction preset"
)
backend_option = click.option(
    "--backend", default="scripted:script.json", show_default=True,
    help="chat backend: scripted:<file> or live",
)
config_option = click.option("--config", "config_path", default=None, help="engine config JSON")


@click.group()
def main() -> None:
    """Conversational tactile-map engine."""


@main.command()
@map_option
@preset_option
@backend_option
@config_option
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8077, show_default=True)
def serve(map_path: str, preset: int, backend: str, config_path: str | None, host: str, port: int) -> None:
    """Run the HTTP service with the live event stream."""
    import uvicorn

    from .service import create_app

    app = create_app(_load_map(map_path), preset, _load_config(config_path), _make_backend(backend))
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.argument("question")
@map_option
@preset_option
@backend_option
@config_option
@click.option("--position", default=None, help="pointing position as 'x,y' in meters")
@click.option("--time", "time_text", default=None, help="wall-clock time (ISO 8601)")
@click.option("--json", "as_json", is_flag=True, help="print the full turn as JSON")
def ask(
    question: str,
    map_path: str,
    preset: int,
    backend: str,
    config_path: str | None,
    position: str | None,
    time_text: str | None,
    as_json: bool,
) -> None:
    """Ask one question and print the answer."""
    model = _load_map(map_path)
    pos = None
    if position is not None:
        try:
            x, y = (float(v) for v in position.split(","))
        except ValueError:
            raise click.UsageError(f"bad --position {position!r}, expected 'x,y'") from None
        pos = Point(x, y)
    conversation = Conversation(model, preset, _load_config(config_path), _make_backend(backend))
    try:
        result = conversation.ask(question, position=pos, now=_parse_time(time_text))
    except RuntimeError as exc:
        raise _fail(str(exc)) from exc
    if as_json:
        click.echo(json.dumps(result.transcript(conversation.system, preset), indent=2, sort_keys=True))
    else:
        click.echo(result.answer)


@main.command()
@click.argument("from_place")
@click.argument("to_place")
@map_option
@config_option
@click.option("--accessible", is_flag=True, help="include accessibility details in instructions")
def route(from_place: str, to_place: str, map_path: str, config_path: str | None, accessible: bool) -> None:
    """Shortest walking route between two places, as JSON."""
    model = _load_map(map_path)
    config = _load_config(config_path)
    ctx = ToolContext(model=model, config=config)
    try:
        a = resolve_place(ctx, from_place)
        b = resolve_place(ctx, to_place)
        found = shortest_route(model, a.node_id, b.node_id)
    except (ToolError, RouteNotFound) as exc:
        raise _fail(str(exc)) from exc
    steps = route_instructions(model, found, accessible=accessible)
    click.echo(
        json.dumps(
            {
                "from": a.name,
                "to": b.name,
                "nodes": found.node_ids(),
                "length_m": found.length_m,
                "walking_time_s": found.length_m / config.walking_speed_mps,
                "instructions": [s.text for s in steps],
            },
            indent=2,
        )
    )


@main.group()
def bench() -> None:
    """Answer-quality benchmark."""


@bench.command(name="run")
@map_option
@preset_option
@backend_option
@config_option
@click.option("--queries", "queries_path", required=True, help="benchmark queries JSON")
@click.option("--out", "out_dir", required=True, help="output directory for answers.json")
def bench_run(
    map_path: str,
    preset: int,
    backend: str,
    config_path: str | None,
    queries_path: str,
    out_dir: str,
) -> None:
    """Ask every benchmark query and record the answers."""
    model = _load_map(map_path)
    try:
        queries = load_benchmark(queries_path)
    except (OSError, ValueError) as exc:
        raise _fail(f"cannot load queries {queries_path}: {exc}") from exc
    try:
        records = run_benchmark(model, preset, _load_config(config_path), _make_backend(backend), queries)
    except RuntimeError as exc:
        raise _fail(str(exc)) from exc
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    answers_path = out / "answers.json"
    answers_path.write_text(json.dumps(records_to_json(records), indent=2) + "\n", encoding="utf-8")
    auto = sum(1 for r in records if r.suggestion.label is not None)
    review = sum(1 for r in records if r.suggestion.needs_review)
    click.echo(f"{len(records)} answers -> {answers_path}")
    click.echo(f"pre-labeled: {auto}, needing review: {review}")


@bench.command(name="report")
@map_option
@preset_option
@backend_option
@config_option
@click.option("--queries", "queries_path", required=True, help="benchmark queries JSON")
@click.option("--labels", "labels_path", default=None, help="review labels JSON (id -> label)")
@click.option("--out-dir", "out_dir", required=True, help="directory for report files")
def bench_report(
    map_path: str,
    preset: int,
    backend: str,
    config_path: str | None,
    queries_path: str,
    labels_path: str | None,
    out_dir: str,
) -> None:
    """Run the benchmark and render the quality report (table, CSV, JSON, figure)."""
    model = _load_map(map_path)
    try:
        queries = load_benchmark(queries_path)
        explicit = load_labels(labels_path) if labels_path else {}
    except (OSError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    try:
        records = run_benchmark(model, preset, _load_config(config_path), _make_backend(backend), queries)
        labels = assign_labels(records, explicit)
    except (RuntimeError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    report = Report.from_labels(labels.values())
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "answers.json").write_text(
        json.dumps(records_to_json(records), indent=2) + "\n", encoding="utf-8"
    )
    (out / "report.json").write_text(
        json.dumps(report_to_json(report), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (out / "report.csv").write_text(report_to_csv(report), encoding="utf-8")
    save_report_figure(report, out / "report.png")
    click.echo(render_table(report))
    click.echo(f"report files in {out}")


@main.command(name="replay")
@map_option
@preset_option
@backend_option
@config_option
@click.option("--trace", "trace_path", required=True, help="pointer trace file")
@click.option("--time", "time_text", default=None, help="wall-clock time at trace start (ISO 8601)")
@click.option("--out", "out_path", default=None, help="write events here instead of stdout")
def replay_cmd(
    map_path: str,
    preset: int,
    backend: str,
    config_path: str | None,
    trace_path: str,
    time_text: str | None,
    out_path: str | None,
) -> None:
    """Replay a recorded pointer trace and print the wire events as JSON lines."""
    model = _load_map(map_path)
    try:
        trace_text = Path(trace_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _fail(f"cannot read trace {trace_path}: {exc}") from exc
    try:
        log = replay_trace(
            model,
            preset,
            _load_config(config_path),
            _make_backend(backend),
            trace_text,
            now=_parse_time(time_text),
        )
    except (RuntimeError, ValueError) as exc:
        raise _fail(str(exc)) from exc
    if out_path:
        Path(out_path).write_text(log.lines(), encoding="utf-8")
        click.echo(f"{len(log.events)} events -> {out_path}")
    else:
        for event in log.events:
            click.echo(event.to_line())


if __name__ == "__main__":
    main()
