"""Command-line entry point.

Subcommands: ingest, squat, clone-exact, clone-lev, clone-sem, crossplat,
stats, sample-size. Reports land in --out as json-lines (or CSV) plus a
manifest.json; report bodies are deterministic for identical inputs and
config. Exit codes: 0 success, 1 validation/usage error, 2 pipeline or
provider error.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .analysis import (
    HistogramSpec,
    cross_platform_matrix,
    engagement_histogram,
    flag_same_author_cross_platform,
    rank_targeting,
    sample_size,
)
from .corpus import Corpus, StopNameList, dump_corpus, load_corpus
from .embedding import HashingEmbedder, RemoteEmbedder
from .errors import PipelineError, ValidationError
from .estimators import (
    ExactCloneDetector,
    LevenshteinCloneDetector,
    SemanticCloneDetector,
    SquatDetector,
)
from .report import (
    EDGE_FIELDS,
    FLAG_FIELDS,
    GROUP_FIELDS,
    HISTOGRAM_FIELDS,
    HIT_FIELDS,
    MATRIX_FIELDS,
    RANK_FIELDS,
    RunManifest,
    edge_row,
    flag_rows,
    group_row,
    histogram_rows,
    hit_row,
    matrix_rows,
    max_engagement_row,
    parse_group_row,
    parse_hit_row,
    rank_rows,
    read_rows,
    write_report,
)
from .squatgen import SquatGenConfig, parse_models

_FIELD_CHOICE = click.Choice(["name", "description", "instructions"])
_FORMAT_CHOICE = click.Choice(["jsonl", "csv"])


def _read_corpus(path: Path, input_format: str = "jsonl") -> Corpus:
    with path.open("rb") as handle:
        return load_corpus(handle, format=input_format)


def _prepare_out(out: str) -> Path:
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir


def _finish(out_dir: Path, command: str, config: dict, inputs: list[Path], counts: dict) -> None:
    manifest = RunManifest.create(command, config, inputs, __version__, counts)
    manifest.write(out_dir)
    summary = ", ".join(f"{key}={value}" for key, value in sorted(counts.items()))
    click.echo(f"{command}: {summary} -> {out_dir}")


@click.group()
@click.version_option(version=__version__, prog_name="appmimic")
def cli():
    """Detect squatting and cloning in LLM app-store metadata."""


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--input-format", type=click.Choice(["jsonl", "json"]), default="jsonl", show_default=True)
@click.option("--out", default="out", show_default=True)
@click.option("--format", "report_format", type=_FORMAT_CHOICE, default="jsonl", show_default=True)
def ingest(corpus_path: Path, input_format: str, out: str, report_format: str):
    """Validate, deduplicate and normalize a metadata dump."""
    corpus = _read_corpus(corpus_path, input_format)
    out_dir = _prepare_out(out)
    (out_dir / "corpus.jsonl").write_text(
        "".join(line + "\n" for line in dump_corpus(corpus)), encoding="utf-8"
    )
    for index, message in enumerate(corpus.invalid_records):
        if index < 20:
            click.echo(f"skipped: {message}", err=True)
    counts = {
        "records": len(corpus),
        "duplicates_dropped": corpus.duplicates_dropped,
        "invalid_records": len(corpus.invalid_records),
    }
    _finish(out_dir, "ingest", {"input_format": input_format}, [corpus_path], counts)


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--targets-top-k", default=1000, show_default=True, type=click.IntRange(min=1))
@click.option("--models", default="all", show_default=True, help="Comma list of model names, or 'all'.")
@click.option("--stoplist", "stoplist_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON file overriding generation lexicons/sets/limits.")
@click.option("--include-identical", is_flag=True, help="Also report exact-name duplicates.")
@click.option("--keep-same-developer", is_flag=True, help="Keep hits matching the target's developer.")
@click.option("--out", default="out", show_default=True)
@click.option("--format", "report_format", type=_FORMAT_CHOICE, default="jsonl", show_default=True)
def squat(
    corpus_path: Path,
    targets_top_k: int,
    models: str,
    stoplist_path: Optional[Path],
    config_path: Optional[Path],
    include_identical: bool,
    keep_same_developer: bool,
    out: str,
    report_format: str,
):
    """Find apps whose names squat on the top-ranked apps."""
    corpus = _read_corpus(corpus_path)
    model_set = parse_models(models)
    stoplist = None
    inputs = [corpus_path]
    if stoplist_path is not None:
        stoplist = StopNameList.from_text(stoplist_path.read_text(encoding="utf-8"))
        inputs.append(stoplist_path)
    gen_config = None
    if config_path is not None:
        gen_config = SquatGenConfig.from_json(config_path.read_text(encoding="utf-8"))
        inputs.append(config_path)
    detector = SquatDetector(
        models=model_set,
        config=gen_config,
        top_k=targets_top_k,
        stoplist=stoplist,
        drop_same_developer=not keep_same_developer,
        include_identical=include_identical,
    )
    hits = detector.fit(corpus).predict(corpus)
    out_dir = _prepare_out(out)
    write_report(out_dir, "hits", [hit_row(hit) for hit in hits], HIT_FIELDS, report_format)
    config = {
        "targets_top_k": targets_top_k,
        "models": sorted(model.value for model in model_set),
        "stoplist": stoplist_path.name if stoplist_path else None,
        "gen_config": config_path.name if config_path else None,
        "include_identical": include_identical,
        "keep_same_developer": keep_same_developer,
        "format": report_format,
    }
    counts = {
        "records": len(corpus),
        "targets": len(detector.targets_),
        "variants": len(detector.variants_),
        "hits": len(hits),
    }
    _finish(out_dir, "squat", config, inputs, counts)


@cli.command("clone-exact")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--field", type=_FIELD_CHOICE, default="instructions", show_default=True)
@click.option("--out", default="out", show_default=True)
@click.option("--format", "report_format", type=_FORMAT_CHOICE, default="jsonl", show_default=True)
def clone_exact(corpus_path: Path, field: str, out: str, report_format: str):
    """Group apps whose chosen field is byte-identical."""
    corpus = _read_corpus(corpus_path)
    detector = ExactCloneDetector(field=field)
    groups = detector.fit_predict(corpus)
    out_dir = _prepare_out(out)
    rows = [group_row(index, group) for index, group in enumerate(groups)]
    write_report(out_dir, "groups", rows, GROUP_FIELDS, report_format)
    counts = {
        "records": len(corpus),
        "groups": len(groups),
        "apps_in_groups": sum(len(group.members) for group in groups),
    }
    _finish(out_dir, "clone-exact", {"field": field, "format": report_format}, [corpus_path], counts)


@cli.command("clone-lev")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--field", type=_FIELD_CHOICE, default="instructions", show_default=True)
@click.option("--threshold", default="0.95", show_default=True,
              help="Similarity threshold; decimal strings are exact.")
@click.option("--min-chars", default=50, show_default=True, type=click.IntRange(min=0))
@click.option("--include-exact/--exclude-exact", "include_exact", default=False, show_default=True)
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1))
@click.option("--out", default="out", show_default=True)
@click.option("--format", "report_format", type=_FORMAT_CHOICE, default="jsonl", show_default=True)
def clone_lev(
    corpus_path: Path,
    field: str,
    threshold: str,
    min_chars: int,
    include_exact: bool,
    jobs: int,
    out: str,
    report_format: str,
):
    """Find near-duplicate fields by Levenshtein similarity."""
    corpus = _read_corpus(corpus_path)
    detector = LevenshteinCloneDetector(
        field=field, threshold=threshold, min_chars=min_chars, include_exact=include_exact, jobs=jobs
    )
    detector.fit(corpus)
    out_dir = _prepare_out(out)
    write_report(out_dir, "edges", [edge_row(edge) for edge in detector.edges_], EDGE_FIELDS, report_format)
    rows = [group_row(index, group) for index, group in enumerate(detector.groups_)]
    write_report(out_dir, "groups", rows, GROUP_FIELDS, report_format)
    config = {
        "field": field,
        "threshold": str(threshold),
        "min_chars": min_chars,
        "include_exact": include_exact,
        "format": report_format,
    }
    counts = {
        "records": len(corpus),
        "edges": len(detector.edges_),
        "groups": len(detector.groups_),
        "apps_in_groups": sum(len(group.members) for group in detector.groups_),
    }
    _finish(out_dir, "clone-lev", config, [corpus_path], counts)


@cli.command("clone-sem")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--field", type=_FIELD_CHOICE, default="instructions", show_default=True)
@click.option("--threshold", default="0.95", show_default=True)
@click.option("--min-chars", default=50, show_default=True, type=click.IntRange(min=0))
@click.option("--max-chars", default=512, show_default=True, type=click.IntRange(min=0))
@click.option("--include-exact/--exclude-exact", "include_exact", default=True, show_default=True)
@click.option("--embed-endpoint", default=None, help="Sidecar URL; omit to use the local hashing embedder.")
@click.option("--embed-batch", default=64, show_default=True, type=click.IntRange(min=1))
@click.option("--embed-timeout", default=30.0, show_default=True, type=float)
@click.option("--embed-in-flight", default=2, show_default=True, type=click.IntRange(min=1))
@click.option("--out", default="out", show_default=True)
@click.option("--format", "report_format", type=_FORMAT_CHOICE, default="jsonl", show_default=True)
def clone_sem(
    corpus_path: Path,
    field: str,
    threshold: str,
    min_chars: int,
    max_chars: int,
    include_exact: bool,
    embed_endpoint: Optional[str],
    embed_batch: int,
    embed_timeout: float,
    embed_in_flight: int,
    out: str,
    report_format: str,
):
    """Find semantically similar fields by embedding cosine similarity."""
    corpus = _read_corpus(corpus_path)
    if embed_endpoint:
        provider = RemoteEmbedder(
            embed_endpoint,
            batch_size=embed_batch,
            timeout=embed_timeout,
            max_in_flight=embed_in_flight,
        )
        if not provider.health():
            raise PipelineError(f"embedding endpoint {embed_endpoint} failed its health check")
    else:
        provider = HashingEmbedder()
    detector = SemanticCloneDetector(
        field=field,
        threshold=threshold,
        min_chars=min_chars,
        max_chars=max_chars,
        include_exact=include_exact,
        provider=provider,
    )
    detector.fit(corpus)
    out_dir = _prepare_out(out)
    write_report(out_dir, "edges", [edge_row(edge) for edge in detector.edges_], EDGE_FIELDS, report_format)
    rows = [group_row(index, group) for index, group in enumerate(detector.groups_)]
    write_report(out_dir, "groups", rows, GROUP_FIELDS, report_format)
    config = {
        "field": field,
        "threshold": str(threshold),
        "min_chars": min_chars,
        "max_chars": max_chars,
        "include_exact": include_exact,
        "embed_endpoint": embed_endpoint,
        "embed_batch": embed_batch,
        "format": report_format,
    }
    counts = {
        "records": len(corpus),
        "edges": len(detector.edges_),
        "groups": len(detector.groups_),
        "apps_in_groups": sum(len(group.members) for group in detector.groups_),
    }
    _finish(out_dir, "clone-sem", config, [corpus_path], counts)


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--groups", "groups_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="A groups report produced by a clone-* subcommand.")
@click.option("--out", default="out", show_default=True)
@click.option("--format", "report_format", type=_FORMAT_CHOICE, default="jsonl", show_default=True)
def crossplat(corpus_path: Path, groups_path: Path, out: str, report_format: str):
    """Cross-platform plagiarism matrix and same-author cross-post flags."""
    corpus = _read_corpus(corpus_path)
    groups = [parse_group_row(row) for row in read_rows(groups_path)]
    matrix = cross_platform_matrix(groups, corpus)
    flags = flag_same_author_cross_platform(groups, corpus)
    out_dir = _prepare_out(out)
    write_report(out_dir, "matrix", matrix_rows(matrix), MATRIX_FIELDS, report_format)
    write_report(out_dir, "flags", flag_rows(flags), FLAG_FIELDS, report_format)
    counts = {
        "groups": len(groups),
        "platform_pairs": len(matrix.counts),
        "flagged_cross_posts": sum(1 for flag in flags if flag.flagged),
    }
    _finish(out_dir, "crossplat", {"format": report_format}, [corpus_path, groups_path], counts)


@cli.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--hits", "hits_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="A hits report; restricts stats to matched apps and adds rank targeting.")
@click.option("--buckets", default="0,1000,50000", show_default=True,
              help="Comma-separated histogram edges.")
@click.option("--out", default="out", show_default=True)
@click.option("--format", "report_format", type=_FORMAT_CHOICE, default="jsonl", show_default=True)
def stats(corpus_path: Path, hits_path: Optional[Path], buckets: str, out: str, report_format: str):
    """Engagement histograms and (with --hits) rank-targeting counts."""
    corpus = _read_corpus(corpus_path)
    try:
        edges = tuple(int(part) for part in buckets.split(","))
    except ValueError:
        raise ValidationError(f"buckets must be comma-separated integers, got {buckets!r}") from None
    spec = HistogramSpec(edges=edges)
    inputs = [corpus_path]
    records = list(corpus)
    rank_counts = None
    if hits_path is not None:
        inputs.append(hits_path)
        hits = [parse_hit_row(row, corpus) for row in read_rows(hits_path)]
        seen = set()
        records = []
        for hit in hits:
            if hit.matched.key not in seen:
                seen.add(hit.matched.key)
                records.append(hit.matched)
        rank_counts = rank_targeting(hits)
    histogram = engagement_histogram(records, spec)
    out_dir = _prepare_out(out)
    write_report(out_dir, "histogram", histogram_rows(histogram), HISTOGRAM_FIELDS, report_format)
    write_report(
        out_dir, "max_engagement", max_engagement_row(histogram.max_record),
        ("platform", "id", "name", "conversations"), report_format,
    )
    counts = {"records": len(records), "unknown_engagement": histogram.unknown}
    if rank_counts is not None:
        write_report(out_dir, "rank_targeting", rank_rows(rank_counts), RANK_FIELDS, report_format)
        counts["hits"] = sum(rank_counts.values())
    _finish(out_dir, "stats", {"buckets": list(edges), "format": report_format}, inputs, counts)


@cli.command("sample-size")
@click.option("--population", required=True, type=click.IntRange(min=1))
@click.option("--confidence", default=0.95, show_default=True, type=float)
@click.option("--margin", default=0.05, show_default=True, type=float)
@click.option("--proportion", default=0.5, show_default=True, type=float)
@click.option("--out", default=None, help="Optionally also write a report directory.")
@click.option("--format", "report_format", type=_FORMAT_CHOICE, default="jsonl", show_default=True)
def sample_size_cmd(
    population: int, confidence: float, margin: float, proportion: float,
    out: Optional[str], report_format: str,
):
    """Cochran sample size with finite-population correction."""
    n = sample_size(population, confidence, margin, proportion)
    click.echo(str(n))
    if out is not None:
        out_dir = _prepare_out(out)
        row = {
            "population": population,
            "confidence": confidence,
            "margin": margin,
            "proportion": proportion,
            "sample_size": n,
        }
        write_report(
            out_dir, "sample_size", [row],
            ("population", "confidence", "margin", "proportion", "sample_size"), report_format,
        )
        config = {"confidence": confidence, "margin": margin, "proportion": proportion}
        _finish(out_dir, "sample-size", config, [], {"sample_size": n})


def main(argv: Optional[list[str]] = None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, prog_name="appmimic", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except PipelineError as exc:
        click.echo(f"pipeline error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
