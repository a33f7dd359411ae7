"""Deterministic report serialization: row schemas, jsonl/csv writers,
and the per-run manifest.

Report bodies are byte-identical across runs on identical inputs and
config; only the manifest's timestamp field is outside that contract.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .analysis import CrossPlatformMatrix, CrossPostFlag, EngagementHistogram
from .clonedetect import CloneGroup, DetectorMethod, SimilarityEdge, TextField
from .corpus import AppRecord, Corpus
from .errors import ValidationError
from .squatgen import IDENTICAL_NAME, SquatHit, SquatModel

HIT_FIELDS = (
    "target_id", "target_name", "variant", "model",
    "matched_platform", "matched_id", "matched_name", "same_developer",
)
EDGE_FIELDS = ("a_platform", "a_id", "b_platform", "b_id", "field", "method", "score")
GROUP_FIELDS = ("group_id", "method", "field", "size", "members")
MATRIX_FIELDS = ("platform_a", "platform_b", "count")
FLAG_FIELDS = ("group_id", "flagged", "author")
HISTOGRAM_FIELDS = ("bucket", "count")
RANK_FIELDS = ("rank", "count")


def hit_row(hit: SquatHit) -> dict:
    return {
        "target_id": hit.target.id,
        "target_name": hit.target.name,
        "variant": hit.variant,
        "model": hit.model_label,
        "matched_platform": hit.matched.platform.label,
        "matched_id": hit.matched.id,
        "matched_name": hit.matched.name,
        "same_developer": hit.same_developer,
    }


def edge_row(edge: SimilarityEdge) -> dict:
    return {
        "a_platform": edge.a[0],
        "a_id": edge.a[1],
        "b_platform": edge.b[0],
        "b_id": edge.b[1],
        "field": edge.field.value,
        "method": edge.method.value,
        "score": round(edge.score, 6),
    }


def parse_hit_row(row: Mapping, corpus: Corpus) -> SquatHit:
    """Rebuild a SquatHit from a report row, resolving records in ``corpus``.

    Hit rows carry the target's id and name but not its platform; the
    target is resolved through the exact-name index.
    """
    try:
        matched = corpus.get(row["matched_platform"], row["matched_id"])
        target = None
        for candidate in corpus.by_name(row["target_name"]):
            if candidate.id == row["target_id"]:
                target = candidate
                break
        if matched is None or target is None:
            raise ValidationError("hit references records missing from the corpus")
        label = row["model"]
        model = None if label == IDENTICAL_NAME else SquatModel(label)
        same_developer = row["same_developer"]
        if isinstance(same_developer, str):  # csv round-trip
            same_developer = same_developer == "True"
        return SquatHit(
            target=target,
            matched=matched,
            variant=row["variant"],
            model=model,
            same_developer=same_developer,
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationError(f"bad hit row {row!r}: {exc}") from exc


def parse_edge_row(row: Mapping) -> SimilarityEdge:
    """Rebuild a SimilarityEdge from a report row (jsonl dict or csv strings)."""
    try:
        return SimilarityEdge(
            a=(row["a_platform"], row["a_id"]),
            b=(row["b_platform"], row["b_id"]),
            field=TextField(row["field"]),
            method=DetectorMethod(row["method"]),
            score=float(row["score"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationError(f"bad edge row {row!r}: {exc}") from exc


def group_row(group_id: int, group: CloneGroup) -> dict:
    return {
        "group_id": group_id,
        "method": group.method.value,
        "field": group.field.value,
        "size": len(group.members),
        "members": [[platform, record_id] for platform, record_id in group.members],
    }


def parse_group_row(row: Mapping) -> CloneGroup:
    """Rebuild a CloneGroup from a report row (jsonl dict or csv strings)."""
    try:
        members = row["members"]
        if isinstance(members, str):
            members = json.loads(members)
        return CloneGroup(
            members=tuple(sorted((platform, record_id) for platform, record_id in members)),
            field=TextField(row["field"]),
            method=DetectorMethod(row["method"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationError(f"bad group row {row!r}: {exc}") from exc


def matrix_rows(matrix: CrossPlatformMatrix) -> list[dict]:
    return [
        {"platform_a": a, "platform_b": b, "count": count}
        for a, b, count in matrix.rows()
    ]


def flag_rows(flags: Sequence[CrossPostFlag]) -> list[dict]:
    return [
        {"group_id": index, "flagged": flag.flagged, "author": flag.author}
        for index, flag in enumerate(flags)
    ]


def histogram_rows(histogram: EngagementHistogram) -> list[dict]:
    rows = [
        {"bucket": label, "count": count}
        for label, count in zip(histogram.spec.labels, histogram.bucket_counts)
    ]
    rows.append({"bucket": "unknown", "count": histogram.unknown})
    return rows


def max_engagement_row(record: Optional[AppRecord]) -> list[dict]:
    if record is None:
        return []
    return [
        {
            "platform": record.platform.label,
            "id": record.id,
            "name": record.name,
            "conversations": record.conversation_count,
        }
    ]


def rank_rows(counts: Mapping[Optional[int], int]) -> list[dict]:
    rows = [
        {"rank": rank, "count": count} for rank, count in counts.items() if rank is not None
    ]
    if None in counts:
        rows.append({"rank": "unranked", "count": counts[None]})
    return rows


def render_rows(rows: Iterable[Mapping], fieldnames: Sequence[str], format: str = "jsonl") -> str:
    """Serialize rows with a fixed column order; jsonl or csv."""
    if format == "jsonl":
        lines = []
        for row in rows:
            ordered = {name: row[name] for name in fieldnames}
            lines.append(json.dumps(ordered, ensure_ascii=False, separators=(",", ":")))
        return "".join(line + "\n" for line in lines)
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            encoded = {
                name: json.dumps(row[name], ensure_ascii=False)
                if isinstance(row[name], (list, dict))
                else row[name]
                for name in fieldnames
            }
            writer.writerow(encoded)
        return buffer.getvalue()
    raise ValidationError(f"unknown report format {format!r} (expected jsonl or csv)")


def write_report(
    out_dir: Path, name: str, rows: Iterable[Mapping], fieldnames: Sequence[str], format: str
) -> Path:
    suffix = "jsonl" if format == "jsonl" else "csv"
    path = out_dir / f"{name}.{suffix}"
    path.write_text(render_rows(rows, fieldnames, format), encoding="utf-8")
    return path


def read_rows(path: Path) -> list[dict]:
    """Read back a jsonl or csv report written by write_report."""
    if path.suffix == ".csv":
        with path.open(newline="", encoding="utf-8") as handle:
            return list(csv.DictReader(handle))
    rows = []
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_files(paths: Iterable[Path]) -> str:
    """Stable digest over a set of input files (name + content)."""
    digest = hashlib.sha256()
    for path in sorted(Path(p) for p in paths):
        digest.update(path.name.encode("utf-8"))
        digest.update(b"\x00")
        digest.update(path.read_bytes())
        digest.update(b"\x00")
    return digest.hexdigest()


def digest_config(config: Mapping) -> str:
    return sha256_hex(json.dumps(config, sort_keys=True, ensure_ascii=False).encode("utf-8"))


@dataclass
class RunManifest:
    command: str
    config_digest: str
    input_digest: str
    tool_version: str
    timestamp: str
    result_counts: dict

    @classmethod
    def create(
        cls,
        command: str,
        config: Mapping,
        input_paths: Iterable[Path],
        tool_version: str,
        result_counts: Mapping[str, int],
    ) -> "RunManifest":
        counts = dict(result_counts)
        if any(count < 0 for count in counts.values()):
            raise ValidationError("result counts must be non-negative")
        return cls(
            command=command,
            config_digest=digest_config(config),
            input_digest=digest_files(input_paths),
            tool_version=tool_version,
            timestamp=datetime.now(timezone.utc).isoformat(),
            result_counts=counts,
        )

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        body = {
            "command": self.command,
            "config_digest": self.config_digest,
            "input_digest": self.input_digest,
            "tool_version": self.tool_version,
            "timestamp": self.timestamp,
            "result_counts": self.result_counts,
        }
        path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path
