"""Pipeline stages and the content-addressed run manifest.

Each stage validates that its upstream artifacts exist, does its work, and
records a manifest entry (input hashes, effective config, derived seed,
package version, output hashes) so every output file is reproducible from
the manifest alone. Stages run sequentially; modules parallelize
internally where their contracts allow.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, PipelineConfig, derive_seed
from .content import (
    CategoryLexiconSet,
    Lexicon,
    ValenceLexicon,
    content_profile,
    default_lexicon_dir,
    hashtag_frequencies,
    match_lexicon,
    tokenize,
)
from .crawl import (
    durw_sample,
    estimate_outdegree_distribution,
    generate_synthetic_graph,
    write_trace_jsonl,
)
from .diffusion import (
    build_transition_matrix,
    diffuse,
    read_beliefs_csv,
    seed_beliefs,
    stratified_sample,
    stratify,
    write_beliefs_csv,
)
from .features import compute_features, read_features_csv, write_features_csv
from .graph import RetweetGraph, build_retweet_graph, load_snapshot, neighborhood, save_snapshot
from .centrality import betweenness, degree_scores, eigenvector_centrality, group_centrality_summary
from .records import RecordError, UserId, iter_jsonl, read_tweets, read_users
from .stats import GroupReport, build_group_report, kde, suspension_table
from .annotation.store import parse_export_csv

__all__ = [
    "Manifest",
    "MissingArtifactError",
    "DataError",
    "stage_ingest",
    "stage_crawl",
    "stage_mark",
    "stage_diffuse",
    "stage_sample",
    "stage_features",
    "stage_centrality",
    "stage_import_labels",
    "stage_report",
]


class MissingArtifactError(Exception):
    """An upstream artifact is absent; carries the stage that produces it."""

    def __init__(self, missing: str, produced_by: str):
        self.missing = missing
        self.produced_by = produced_by
        super().__init__(f"missing artifact {missing!r}: run the {produced_by!r} stage first")


class DataError(Exception):
    """Input data failed validation beyond per-row rejects."""


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


class Manifest:
    """Per-workdir record of every stage run, stored as manifest.json."""

    def __init__(self, workdir: Path):
        self.workdir = Path(workdir)
        self.path = self.workdir / "manifest.json"
        self.entries: dict[str, dict] = {}
        if self.path.exists():
            self.entries = json.loads(self.path.read_text(encoding="utf-8"))

    def record(
        self,
        stage: str,
        inputs: dict[str, Path],
        outputs: dict[str, Path],
        config: dict,
        seed: int | None,
    ) -> list[str]:
        """Write the stage entry; returns resume warnings when the stage was
        re-run with a different config or seed."""
        warnings = self.warn_on_mismatch(stage, config, seed)
        self.entries[stage] = {
            "inputs": {name: {"path": str(p), "sha256": _sha256(p)} for name, p in inputs.items()},
            "outputs": {name: {"path": str(p), "sha256": _sha256(p)} for name, p in outputs.items()},
            "config": config,
            "seed": seed,
            "version": __version__,
        }
        self.path.write_text(json.dumps(self.entries, indent=2, sort_keys=True), encoding="utf-8")
        return warnings

    def require(self, stage: str, artifact: str) -> Path:
        """Path of an upstream output; raises MissingArtifactError if the
        stage has not run or the file is gone."""
        entry = self.entries.get(stage)
        if entry is None or artifact not in entry.get("outputs", {}):
            raise MissingArtifactError(artifact, stage)
        path = Path(entry["outputs"][artifact]["path"])
        if not path.exists():
            raise MissingArtifactError(artifact, stage)
        return path

    def input_path(self, stage: str, name: str) -> Path:
        entry = self.entries.get(stage)
        if entry is None or name not in entry.get("inputs", {}):
            raise MissingArtifactError(name, stage)
        path = Path(entry["inputs"][name]["path"])
        if not path.exists():
            raise MissingArtifactError(name, stage)
        return path

    def warn_on_mismatch(self, stage: str, config: dict, seed: int | None) -> list[str]:
        """Config/seed drift warnings when re-running a stage."""
        entry = self.entries.get(stage)
        if entry is None:
            return []
        warnings = []
        if entry.get("seed") != seed:
            warnings.append(f"{stage}: seed changed from {entry.get('seed')} to {seed}")
        if entry.get("config") != config:
            warnings.append(f"{stage}: config changed since the previous run")
        return warnings


def _lexicon_dir(cfg: PipelineConfig) -> Path:
    return Path(cfg.lexicon_dir) if cfg.lexicon_dir else default_lexicon_dir()


def _load_graph(manifest: Manifest) -> RetweetGraph:
    edges = manifest.require("ingest", "graph_edges")
    idmap = manifest.require("ingest", "graph_idmap")
    return load_snapshot(edges, idmap)


# ---- stages -----------------------------------------------------------------


def stage_ingest(workdir: Path, cfg: PipelineConfig, users_path: Path, tweets_path: Path) -> dict:
    if not users_path.exists():
        raise DataError(f"users file not found: {users_path}")
    if not tweets_path.exists():
        raise DataError(f"tweets file not found: {tweets_path}")
    graph, report = build_retweet_graph(iter_jsonl(tweets_path), iter_jsonl(users_path))
    edges_path = workdir / "graph_edges.csv"
    idmap_path = workdir / "graph_idmap.csv"
    report_path = workdir / "ingest_report.json"
    save_snapshot(graph, edges_path, idmap_path)
    report_path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True), encoding="utf-8")
    Manifest(workdir).record(
        "ingest",
        inputs={"users": users_path, "tweets": tweets_path},
        outputs={"graph_edges": edges_path, "graph_idmap": idmap_path, "ingest_report": report_path},
        config={},
        seed=None,
    )
    return {
        "nodes": graph.node_count,
        "edges": graph.edge_count,
        "rows_read": report.rows_read,
        "rows_rejected": report.rows_rejected,
    }


def _finish(result: dict, warnings: list[str]) -> dict:
    if warnings:
        result["warnings"] = warnings
    return result


def stage_crawl(
    workdir: Path,
    cfg: PipelineConfig,
    model: str,
    n: int,
    *,
    p: float | None = None,
    m: int | None = None,
    degree_choices: tuple[int, ...] = (1, 2, 3, 4, 5),
) -> dict:
    """Synthetic-oracle crawl: run the jump-augmented walk and estimate the
    out-degree distribution, scoring it against the hidden ground truth."""
    seed = derive_seed(cfg.seed, "crawl")
    if model == "configuration":
        rng = np.random.default_rng(derive_seed(cfg.seed, "crawl", "degrees"))
        out_degrees = tuple(int(d) for d in rng.choice(degree_choices, size=n))
        oracle = generate_synthetic_graph(model, n, seed=seed, out_degrees=out_degrees)
    else:
        oracle = generate_synthetic_graph(model, n, seed=seed, p=p, m=m)
    budget = cfg.budget if cfg.budget is not None else max(1, n // 5)
    trace = durw_sample(oracle, cfg.jump_weight, budget, derive_seed(cfg.seed, "crawl", "walk"))
    estimate = estimate_outdegree_distribution(trace, oracle)
    truth = oracle.true_outdegree_distribution()

    trace_path = workdir / "crawl_trace.jsonl"
    estimate_path = workdir / "crawl_estimate.json"
    write_trace_jsonl(trace, trace_path)
    estimate_path.write_text(
        json.dumps(
            {
                "jump_weight": cfg.jump_weight,
                "budget": budget,
                "estimated": {str(k): v for k, v in estimate.mass.items()},
                "true": {str(k): v for k, v in truth.items()},
                "l1_distance": estimate.l1_distance(truth),
                "oracle_queries": oracle.query_count,
            },
            indent=2,
            sort_keys=True,
        ),
        encoding="utf-8",
    )
    warnings = Manifest(workdir).record(
        "crawl",
        inputs={},
        outputs={"trace": trace_path, "estimate": estimate_path},
        config={"model": model, "n": n, "w": cfg.jump_weight, "budget": budget},
        seed=seed,
    )
    return _finish({"steps": len(trace), "l1_distance": estimate.l1_distance(truth)}, warnings)


def stage_mark(workdir: Path, cfg: PipelineConfig) -> dict:
    manifest = Manifest(workdir)
    tweets_path = manifest.input_path("ingest", "tweets")
    lexicon = Lexicon.from_file(_lexicon_dir(cfg) / "hate_seed.txt", name="hate_seed")
    hits: set[UserId] = set()
    try:
        tweets = read_tweets(tweets_path)
    except RecordError as exc:
        raise DataError(str(exc)) from exc
    for tweet in tweets:
        if tweet.user_id in hits:
            continue
        if match_lexicon(tokenize(tweet.text), lexicon):
            hits.add(tweet.user_id)
    marked_path = workdir / "marked_users.csv"
    marked_path.write_text(
        "user_id\n" + "".join(f"{uid}\n" for uid in sorted(hits)), encoding="utf-8"
    )
    warnings = manifest.record(
        "mark",
        inputs={"tweets": tweets_path},
        outputs={"marked_users": marked_path},
        config={"lexicon": "hate_seed"},
        seed=None,
    )
    return _finish({"marked": len(hits)}, warnings)


def _read_marked(path: Path) -> set[UserId]:
    lines = path.read_text(encoding="utf-8").splitlines()
    return {int(line) for line in lines[1:] if line.strip()}


def stage_diffuse(workdir: Path, cfg: PipelineConfig) -> dict:
    manifest = Manifest(workdir)
    graph = _load_graph(manifest)
    marked = _read_marked(manifest.require("mark", "marked_users"))
    T = build_transition_matrix(graph, invert_edges=cfg.transpose)
    p0 = seed_beliefs(graph, marked)
    beliefs = diffuse(T, p0, cfg.diffusion_steps)
    assignment = stratify(graph, beliefs, cfg.boundaries)
    beliefs_path = workdir / "beliefs.csv"
    write_beliefs_csv(beliefs_path, assignment, beliefs)
    warnings = manifest.record(
        "diffuse",
        inputs={
            "graph_edges": manifest.require("ingest", "graph_edges"),
            "marked_users": manifest.require("mark", "marked_users"),
        },
        outputs={"beliefs": beliefs_path},
        config={
            "t": cfg.diffusion_steps,
            "boundaries": list(cfg.boundaries),
            "transpose": cfg.transpose,
        },
        seed=None,
    )
    strata_counts = {int(s): int((assignment.strata == s).sum()) for s in (1, 2, 3, 4)}
    return _finish({"seeded": len(marked), "strata": strata_counts}, warnings)


def stage_sample(workdir: Path, cfg: PipelineConfig) -> dict:
    manifest = Manifest(workdir)
    beliefs_path = manifest.require("diffuse", "beliefs")
    assignment, _ = read_beliefs_csv(beliefs_path)
    seed = derive_seed(cfg.seed, "sample")
    chosen = stratified_sample(assignment, cap=cfg.stratum_cap, seed=seed)
    sampled_path = workdir / "sampled_users.csv"
    sampled_path.write_text(
        "user_id\n" + "".join(f"{uid}\n" for uid in sorted(chosen)), encoding="utf-8"
    )
    warnings = manifest.record(
        "sample",
        inputs={"beliefs": beliefs_path},
        outputs={"sampled_users": sampled_path},
        config={"cap": cfg.stratum_cap},
        seed=seed,
    )
    return _finish({"sampled": len(chosen)}, warnings)


def _group_tweets(tweets_path: Path) -> dict[UserId, list]:
    grouped: dict[UserId, list] = {}
    try:
        for tweet in read_tweets(tweets_path):
            grouped.setdefault(tweet.user_id, []).append(tweet)
    except RecordError as exc:
        raise DataError(str(exc)) from exc
    return grouped


def stage_features(workdir: Path, cfg: PipelineConfig) -> dict:
    manifest = Manifest(workdir)
    users_path = manifest.input_path("ingest", "users")
    tweets_path = manifest.input_path("ingest", "tweets")
    if cfg.snapshot_date is None:
        raise ConfigError("snapshot_date is required for the features stage")
    snapshot = datetime.fromisoformat(cfg.snapshot_date.replace("Z", "+00:00"))
    if snapshot.tzinfo is None:
        snapshot = snapshot.replace(tzinfo=timezone.utc)

    lexdir = _lexicon_dir(cfg)
    categories = CategoryLexiconSet.from_directory(lexdir / "categories")
    valence = ValenceLexicon.from_files(lexdir / "valence.tsv", lexdir / "negations.txt")
    badwords = Lexicon.from_file(lexdir / "badwords.txt", name="badwords")

    try:
        users = read_users(users_path)
    except RecordError as exc:
        raise DataError(str(exc)) from exc
    grouped = _group_tweets(tweets_path)

    rows = []
    for user in users:
        tweets = grouped.get(user.id, [])
        try:
            vector = compute_features(user, tweets, snapshot)
        except ValueError as exc:
            raise DataError(str(exc)) from exc
        row: dict[str, object] = vector.as_row()
        if tweets:
            profile = content_profile(
                tweets,
                categories,
                valence,
                badwords,
                negation_window=cfg.negation_window,
                profanity_mode=cfg.profanity_mode,
            )
            row["sentiment"] = profile.sentiment
            row["subjectivity"] = profile.subjectivity
            row["profanity_per_tweet"] = profile.profanity_per_tweet
            row["url_per_tweet"] = profile.url_per_tweet
            row["hashtag_per_tweet"] = profile.hashtag_per_tweet
            for cat, score in profile.category_occurrence.items():
                row[f"category_{cat}"] = score
        else:
            for col in (
                "sentiment",
                "subjectivity",
                "profanity_per_tweet",
                "url_per_tweet",
                "hashtag_per_tweet",
            ):
                row[col] = None
            for cat in categories.categories:
                row[f"category_{cat}"] = None
        rows.append(row)

    features_path = workdir / "features.csv"
    write_features_csv(features_path, rows)
    warnings = Manifest(workdir).record(
        "features",
        inputs={"users": users_path, "tweets": tweets_path},
        outputs={"features": features_path},
        config={
            "snapshot_date": cfg.snapshot_date,
            "negation_window": cfg.negation_window,
            "profanity_mode": cfg.profanity_mode,
        },
        seed=None,
    )
    return _finish({"users": len(rows)}, warnings)


def stage_centrality(workdir: Path, cfg: PipelineConfig, raw_direction: bool = False) -> dict:
    manifest = Manifest(workdir)
    graph = _load_graph(manifest)
    # centralities live on the influence-direction graph unless asked otherwise
    target = graph if raw_direction else graph.invert()
    bet = betweenness(target)
    eig = eigenvector_centrality(target)
    indeg, outdeg = degree_scores(target)
    centrality_path = workdir / "centrality.csv"
    with open(centrality_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("user_id,betweenness,eigenvector,in_degree,out_degree\n")
        for uid in target.nodes():
            fh.write(f"{uid},{bet[uid]!r},{eig.scores[uid]!r},{indeg[uid]},{outdeg[uid]}\n")
    warnings = manifest.record(
        "centrality",
        inputs={"graph_edges": manifest.require("ingest", "graph_edges")},
        outputs={"centrality": centrality_path},
        config={"raw_direction": raw_direction, "eigenvector_converged": eig.converged},
        seed=None,
    )
    return _finish({"nodes": len(bet), "eigenvector_converged": eig.converged}, warnings)


def stage_import_labels(workdir: Path, cfg: PipelineConfig, source: str) -> dict:
    """Pull the service's label export (URL or file path) into the workdir."""
    manifest = Manifest(workdir)
    if source.startswith("http://") or source.startswith("https://"):
        from .annotation.client import AnnotationClient

        with AnnotationClient(source) as client:
            text = client.export_csv()
        inputs: dict[str, Path] = {}
    else:
        source_path = Path(source)
        if not source_path.exists():
            raise MissingArtifactError(str(source_path), "serve")
        text = source_path.read_text(encoding="utf-8")
        inputs = {"export": source_path}
    try:
        resolutions = parse_export_csv(text)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    labels_path = workdir / "labels.csv"
    labels_path.write_text(text, encoding="utf-8")
    warnings = manifest.record(
        "import-labels",
        inputs=inputs,
        outputs={"labels": labels_path},
        config={"source": source},
        seed=None,
    )
    return _finish({"resolved": len(resolutions)}, warnings)


def build_cards(sampled_path: Path, users_path: Path, tweets_path: Path) -> list[tuple[UserId, dict]]:
    """Annotation cards for the sampled users: profile fields, up to 200
    newest tweets, and a hashtag summary."""
    sampled = _read_marked(sampled_path)
    try:
        users = {u.id: u for u in read_users(users_path)}
    except RecordError as exc:
        raise DataError(str(exc)) from exc
    grouped = _group_tweets(tweets_path)
    cards = []
    for uid in sorted(sampled):
        user = users.get(uid)
        tweets = sorted(grouped.get(uid, []), key=lambda t: (t.created_at, t.id), reverse=True)[:200]
        profile = (
            {
                "created_at": user.created_at.isoformat(),
                "statuses_count": user.statuses_count,
                "followers_count": user.followers_count,
                "followees_count": user.followees_count,
                "favorites_count": user.favorites_count,
            }
            if user is not None
            else {"note": "no profile collected"}
        )
        card = {
            "user_id": uid,
            "profile": profile,
            "tweets": [
                {"created_at": t.created_at.isoformat(), "text": t.text, "hashtags": list(t.hashtags)}
                for t in tweets
            ],
            "hashtag_summary": [[t, c] for t, c in hashtag_frequencies(tweets, 10)] if tweets else [],
        }
        cards.append((uid, card))
    return cards


def _read_centrality(path: Path) -> dict[str, dict[UserId, float]]:
    import csv as _csv

    metrics: dict[str, dict[UserId, float]] = {
        "betweenness": {},
        "eigenvector": {},
        "in_degree": {},
        "out_degree": {},
    }
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in _csv.DictReader(fh):
            uid = int(row["user_id"])
            for metric in metrics:
                metrics[metric][uid] = float(row[metric])
    return metrics


def stage_report(workdir: Path, cfg: PipelineConfig, plots: str | None = None) -> dict:
    manifest = Manifest(workdir)
    features_path = manifest.require("features", "features")
    centrality_path = manifest.require("centrality", "centrality")
    labels_path = manifest.require("import-labels", "labels")
    users_path = manifest.input_path("ingest", "users")
    tweets_path = manifest.input_path("ingest", "tweets")
    graph = _load_graph(manifest)

    feature_rows = read_features_csv(features_path)
    features = {
        int(row["user_id"]): {k: v for k, v in row.items() if k != "user_id"}
        for row in feature_rows
    }
    resolutions = parse_export_csv(labels_path.read_text(encoding="utf-8"))
    labels = {r.user_id: r.label for r in resolutions}
    if not labels:
        raise DataError("label export contains no resolved users")

    seed = derive_seed(cfg.seed, "report")
    report = build_group_report(
        features,
        labels,
        graph,
        seed=seed,
        level=cfg.ci_level,
        resamples=cfg.bootstrap_resamples,
    )

    metrics = _read_centrality(centrality_path)
    hateful = sorted(u for u, lab in labels.items() if lab == "hateful")
    normal = sorted(u for u, lab in labels.items() if lab == "not_hateful")
    labeled = set(labels)
    groups = {
        "hateful": hateful,
        "normal": normal,
        "hateful_neighborhood": sorted(
            neighborhood(graph, [u for u in hateful if graph.has_node(u)]) - labeled
        ),
        "normal_neighborhood": sorted(
            neighborhood(graph, [u for u in normal if graph.has_node(u)]) - labeled
        ),
    }
    centrality_summary = group_centrality_summary(metrics, groups)

    try:
        users = read_users(users_path)
    except RecordError as exc:
        raise DataError(str(exc)) from exc
    suspended = {u.id for u in users if u.suspended}
    table = suspension_table(labels, [u.id for u in users], suspended)

    grouped_tweets = _group_tweets(tweets_path)
    hashtags = {}
    for group_name in ("hateful", "normal"):
        tweets = [t for uid in groups[group_name] for t in grouped_tweets.get(uid, [])]
        hashtags[group_name] = hashtag_frequencies(tweets, cfg.hashtag_top_k) if tweets else []

    series_dir = workdir / "series"
    series_dir.mkdir(exist_ok=True)
    kde_files = {}
    for group_name, members in groups.items():
        values = [
            features[u]["created_at_days"]
            for u in members
            if u in features and features[u].get("created_at_days") is not None
        ]
        if not values:
            continue
        grid, density = kde(values)
        path = series_dir / f"kde_created_at_{group_name}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("days_since_epoch,density\n")
            for g, d in zip(grid, density):
                fh.write(f"{float(g)!r},{float(d)!r}\n")
        kde_files[group_name] = path.name

    summary_path = series_dir / "feature_summary.csv"
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("group,feature,n,mean,ci_lo,ci_hi,median\n")
        for group_name in sorted(report.groups):
            for fname in sorted(report.groups[group_name]):
                s = report.groups[group_name][fname]
                cells = [
                    group_name,
                    fname,
                    str(s.n),
                    "" if s.mean is None else repr(s.mean),
                    "" if s.ci_lo is None else repr(s.ci_lo),
                    "" if s.ci_hi is None else repr(s.ci_hi),
                    "" if s.median is None else repr(s.median),
                ]
                fh.write(",".join(cells) + "\n")

    hashtags_path = series_dir / "hashtags.csv"
    with open(hashtags_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("group,tag,count\n")
        for group_name, pairs in hashtags.items():
            for tag, count in pairs:
                fh.write(f"{group_name},{tag},{count}\n")

    payload = {
        "groups": report.to_dict(),
        "centrality_summary": {
            f"{g}:{m}": {"n": s.n, "median": s.median, "mean": s.mean}
            for (g, m), s in sorted(centrality_summary.items())
        },
        "suspension": table.to_dict(),
        "hashtags": {g: [[t, c] for t, c in pairs] for g, pairs in hashtags.items()},
        "series": {"kde": kde_files, "feature_summary": summary_path.name, "hashtags": hashtags_path.name},
        "config": {
            "seed": cfg.seed,
            "ci_level": cfg.ci_level,
            "resamples": cfg.bootstrap_resamples,
        },
    }
    report_path = workdir / "report.json"
    report_path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")

    md_path = workdir / "report.md"
    md_path.write_text(_render_markdown(report, centrality_summary, table, hashtags), encoding="utf-8")

    outputs = {
        "report": report_path,
        "report_md": md_path,
        "feature_summary": summary_path,
        "hashtags": hashtags_path,
    }
    if plots == "svg":
        plot_dir = workdir / "plots"
        written = _render_svg_plots(plot_dir, report, groups, features, kde_files, series_dir)
        for i, p in enumerate(written):
            outputs[f"plot_{i}"] = p
    warnings = manifest.record(
        "report",
        inputs={
            "features": features_path,
            "centrality": centrality_path,
            "labels": labels_path,
        },
        outputs=outputs,
        config={"plots": plots, "ci_level": cfg.ci_level, "resamples": cfg.bootstrap_resamples},
        seed=seed,
    )
    return _finish(
        {
            "groups": report.group_sizes,
            "empty_groups": list(report.empty_groups),
            "report": str(report_path),
        },
        warnings,
    )


def _render_markdown(report, centrality_summary, table, hashtags) -> str:
    lines = ["# Group characterization report", ""]
    lines.append("## Group sizes")
    lines.append("")
    for group, size in report.group_sizes.items():
        flag = " (empty)" if group in report.empty_groups else ""
        lines.append(f"- {group}: {size}{flag}")
    lines.append("")
    lines.append("## Feature summaries (mean [95% CI], median)")
    lines.append("")
    lines.append("| feature | " + " | ".join(report.groups) + " | p (hateful vs normal) |")
    lines.append("|---|" + "---|" * (len(report.groups) + 1))
    feature_names = sorted(next(iter(report.groups.values())).keys()) if report.groups else []
    for fname in feature_names:
        cells = []
        for group in report.groups:
            s = report.groups[group][fname]
            if s.n == 0:
                cells.append("-")
            else:
                cells.append(f"{s.mean:.4g} [{s.ci_lo:.4g}, {s.ci_hi:.4g}], med {s.median:.4g}")
        p = report.p_values[fname]["hateful_vs_normal"]
        p_str = "-" if p is None else f"{p:.2e}"
        lines.append(f"| {fname} | " + " | ".join(cells) + f" | {p_str} |")
    lines.append("")
    lines.append("## Centrality (median / mean)")
    lines.append("")
    lines.append("| group | metric | median | mean |")
    lines.append("|---|---|---|---|")
    for (group, metric), s in sorted(centrality_summary.items()):
        if s.empty:
            lines.append(f"| {group} | {metric} | - | - |")
        else:
            lines.append(f"| {group} | {metric} | {s.median:.6g} | {s.mean:.6g} |")
    lines.append("")
    lines.append("## Suspended accounts")
    lines.append("")
    lines.append("| group | suspended |")
    lines.append("|---|---|")
    for row in table.rows:
        lines.append(f"| {row.group} | {row.formatted()} |")
    lines.append("")
    lines.append("## Top hashtags")
    lines.append("")
    for group, pairs in hashtags.items():
        shown = ", ".join(f"#{t} ({c})" for t, c in pairs[:15])
        lines.append(f"- {group}: {shown if shown else '(none)'}")
    lines.append("")
    return "\n".join(lines)


def _render_svg_plots(plot_dir, report, groups, features, kde_files, series_dir) -> list[Path]:
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    plot_dir.mkdir(exist_ok=True)
    written: list[Path] = []

    # KDE line plot of account creation dates
    if kde_files:
        fig, ax = plt.subplots(figsize=(7, 4))
        for group_name, fname in kde_files.items():
            rows = (series_dir / fname).read_text(encoding="utf-8").splitlines()[1:]
            xs = [float(r.split(",")[0]) for r in rows]
            ys = [float(r.split(",")[1]) for r in rows]
            ax.plot(xs, ys, label=group_name)
        ax.set_xlabel("account creation (days since epoch)")
        ax.set_ylabel("density")
        ax.legend()
        path = plot_dir / "created_at_kde.svg"
        fig.savefig(path)
        plt.close(fig)
        written.append(path)

    # boxplots for a few headline features
    for fname in ("statuses_per_day", "followers_per_followee", "sentiment", "profanity_per_tweet"):
        data, labels_x = [], []
        for group_name, members in groups.items():
            values = [
                float(features[u][fname])
                for u in members
                if u in features and features[u].get(fname) is not None
            ]
            if values:
                data.append(values)
                labels_x.append(group_name)
        if not data:
            continue
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.boxplot(data, tick_labels=labels_x, showfliers=False)
        ax.set_ylabel(fname)
        fig.autofmt_xdate(rotation=20)
        path = plot_dir / f"box_{fname}.svg"
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    return written
