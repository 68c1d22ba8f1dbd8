"""Pipeline orchestration CLI.

Stages: ingest -> (optional) crawl -> mark -> diffuse -> sample -> serve /
import-labels -> features -> centrality -> report. Every stage writes its
outputs plus a manifest entry under the workdir. Exit codes: 0 success,
2 config error, 3 missing upstream artifact, 4 data error.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import ConfigError, PipelineConfig, load_config
from .pipeline import (
    DataError,
    Manifest,
    MissingArtifactError,
    stage_centrality,
    stage_crawl,
    stage_diffuse,
    stage_features,
    stage_import_labels,
    stage_ingest,
    stage_mark,
    stage_report,
    stage_sample,
)
from .records import RecordError

EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_DATA = 4


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _run(stage_fn, *args, **kwargs):
    try:
        return stage_fn(*args, **kwargs)
    except MissingArtifactError as exc:
        _fail(EXIT_MISSING, str(exc))
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    except (DataError, RecordError) as exc:
        _fail(EXIT_DATA, str(exc))


@click.group()
@click.option("--workdir", type=click.Path(path_type=Path), default=Path("workdir"), show_default=True)
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None, help="TOML config file")
@click.option("--seed", type=int, default=None, help="root seed override")
@click.pass_context
def main(ctx: click.Context, workdir: Path, config_path: Path | None, seed: int | None) -> None:
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        _fail(EXIT_CONFIG, str(exc))
    cfg = cfg.with_overrides(seed=seed)
    workdir.mkdir(parents=True, exist_ok=True)
    ctx.obj = {"cfg": cfg, "workdir": workdir}


def _echo(result: dict) -> None:
    click.echo(json.dumps(result, sort_keys=True))


@main.command()
@click.option("--users", "users_path", type=click.Path(path_type=Path), required=True)
@click.option("--tweets", "tweets_path", type=click.Path(path_type=Path), required=True)
@click.pass_obj
def ingest(obj, users_path: Path, tweets_path: Path) -> None:
    """Build the retweet graph snapshot from users/tweets JSONL files."""
    _echo(_run(stage_ingest, obj["workdir"], obj["cfg"], users_path, tweets_path))


@main.command()
@click.option("--model", type=click.Choice(["uniform", "preferential", "configuration"]), required=True)
@click.option("--n", type=int, required=True)
@click.option("--p", type=float, default=None, help="edge probability for the uniform model")
@click.option("--m", type=int, default=None, help="out-edges per node for preferential attachment")
@click.option("--w", "jump_weight", type=float, default=None, help="jump weight")
@click.option("--budget", type=int, default=None)
@click.option("--seed", type=int, default=None, help="root seed override for this run")
@click.pass_obj
def crawl(obj, model: str, n: int, p, m, jump_weight, budget, seed) -> None:
    """Run the simulated out-edge crawler on a synthetic graph oracle."""
    cfg: PipelineConfig = obj["cfg"].with_overrides(jump_weight=jump_weight, budget=budget, seed=seed)
    if n < 1:
        _fail(EXIT_CONFIG, f"n must be >= 1, got {n}")
    try:
        result = stage_crawl(obj["workdir"], cfg, model, n, p=p, m=m)
    except MissingArtifactError as exc:
        _fail(EXIT_MISSING, str(exc))
    except (ConfigError, ValueError) as exc:
        _fail(EXIT_CONFIG, str(exc))
    _echo(result)


@main.command()
@click.pass_obj
def mark(obj) -> None:
    """Flag users whose timelines hit the seed lexicon."""
    _echo(_run(stage_mark, obj["workdir"], obj["cfg"]))


@main.command()
@click.option("--t", "steps", type=int, default=None, help="diffusion steps")
@click.option("--boundaries", type=str, default=None, help="three comma-separated stratum boundaries")
@click.option("--transpose", is_flag=True, default=False, help="use the transposed matrix reading")
@click.pass_obj
def diffuse(obj, steps, boundaries, transpose) -> None:
    """Run belief diffusion from the marked users and stratify everyone."""
    overrides: dict = {}
    if steps is not None:
        if steps < 0:
            _fail(EXIT_CONFIG, f"t must be >= 0, got {steps}")
        overrides["diffusion_steps"] = steps
    if boundaries is not None:
        try:
            parts = tuple(float(x) for x in boundaries.split(","))
        except ValueError:
            _fail(EXIT_CONFIG, f"bad boundaries: {boundaries!r}")
        if len(parts) != 3 or not (0 < parts[0] < parts[1] < parts[2] < 1):
            _fail(EXIT_CONFIG, f"boundaries must be three increasing values in (0, 1): {boundaries}")
        overrides["boundaries"] = parts
    if transpose:
        overrides["transpose"] = True
    cfg = obj["cfg"].with_overrides(**overrides)
    _echo(_run(stage_diffuse, obj["workdir"], cfg))


@main.command()
@click.option("--cap", type=int, default=None, help="per-stratum cap")
@click.pass_obj
def sample(obj, cap) -> None:
    """Stratified sample of users for annotation."""
    if cap is not None and cap < 1:
        _fail(EXIT_CONFIG, f"cap must be >= 1, got {cap}")
    cfg = obj["cfg"].with_overrides(stratum_cap=cap)
    _echo(_run(stage_sample, obj["workdir"], cfg))


@main.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--journal", type=click.Path(path_type=Path), default=None)
@click.option("--closed-registration", is_flag=True, default=False)
@click.option("--annotators", default=None, help="comma-separated allow-list")
@click.option("--webui", type=click.Path(path_type=Path), default=None, help="static annotation UI build to mount at /ui")
@click.pass_obj
def serve(obj, host, port, journal, closed_registration, annotators, webui) -> None:
    """Serve the annotation HTTP API, preloading tasks for the sample."""
    import uvicorn

    from .annotation.api import create_app
    from .annotation.store import AnnotationStore

    cfg: PipelineConfig = obj["cfg"].with_overrides(serve_host=host, serve_port=port)
    workdir: Path = obj["workdir"]
    manifest = Manifest(workdir)
    try:
        sampled_path = manifest.require("sample", "sampled_users")
        tweets_path = manifest.input_path("ingest", "tweets")
        users_path = manifest.input_path("ingest", "users")
    except MissingArtifactError as exc:
        _fail(EXIT_MISSING, str(exc))
    allow = tuple(a.strip() for a in annotators.split(",")) if annotators else cfg.annotators
    store = AnnotationStore(
        journal or workdir / "annotation_journal.jsonl",
        open_registration=not closed_registration and cfg.open_registration,
        annotators=allow,
    )
    if store.task_count() == 0:
        from .pipeline import build_cards

        cards = build_cards(sampled_path, users_path, tweets_path)
        store.create_tasks(cards)
        click.echo(f"loaded {len(cards)} tasks")
    app = create_app(store, webui_dir=webui)
    uvicorn.run(app, host=cfg.serve_host, port=cfg.serve_port, log_level="warning")


@main.command("import-labels")
@click.option("--source", required=True, help="service base URL or an exported labels CSV path")
@click.pass_obj
def import_labels(obj, source: str) -> None:
    """Fetch adjudicated labels from the service (or a file) into the workdir."""
    _echo(_run(stage_import_labels, obj["workdir"], obj["cfg"], source))


@main.command()
@click.option("--snapshot-date", default=None, help="ISO-8601 snapshot timestamp")
@click.pass_obj
def features(obj, snapshot_date) -> None:
    """Per-user activity and content features."""
    cfg = obj["cfg"].with_overrides(snapshot_date=snapshot_date)
    _echo(_run(stage_features, obj["workdir"], cfg))


@main.command()
@click.option("--raw-direction", is_flag=True, default=False, help="skip the influence-direction inversion")
@click.pass_obj
def centrality(obj, raw_direction: bool) -> None:
    """Betweenness, eigenvector and degree centralities."""
    _echo(_run(stage_centrality, obj["workdir"], obj["cfg"], raw_direction))


@main.command()
@click.option("--plots", type=click.Choice(["svg"]), default=None)
@click.pass_obj
def report(obj, plots) -> None:
    """Group report, suspension table, KDE series and hashtag rankings."""
    _echo(_run(stage_report, obj["workdir"], obj["cfg"], plots))


@main.command()
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--n-users", type=int, default=300, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.pass_obj
def synth(obj, out: Path, n_users: int, seed: int) -> None:
    """Generate the bundled synthetic dataset (offline ingest fixture)."""
    from .synth import generate_dataset

    truth = generate_dataset(out, n_users=n_users, seed=seed)
    _echo({"out": str(out), "planted": len(truth["planted"])})


if __name__ == "__main__":
    main()
