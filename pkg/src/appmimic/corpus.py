"""Load, validate, deduplicate and index app-store metadata dumps.

Input records are JSON objects with fields ``id``, ``name``, ``platform``
and optional ``description``, ``instructions``, ``author``,
``conversations``, ``rank``. Text fields are NFC-normalized and trimmed at
load time so every downstream comparison sees one canonical byte sequence;
empty strings are canonicalized to absent.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping, Optional, Union

from .errors import CorpusDecodeError, ValidationError

_KNOWN_PLATFORMS = {
    "gptstore": "GPTStore",
    "flowgpt": "FlowGPT",
    "poe": "Poe",
    "coze": "Coze",
    "cici": "Cici",
    "characterai": "CharacterAI",
}


@dataclass(frozen=True, order=True)
class Platform:
    """One app store. Unknown stores keep their (trimmed) label verbatim."""

    label: str

    def __post_init__(self):
        if not self.label or self.label != self.label.strip():
            raise ValidationError(f"platform label must be non-empty and trimmed: {self.label!r}")

    @classmethod
    def parse(cls, raw: str) -> "Platform":
        """Match ``raw`` case-insensitively against the six known stores."""
        label = raw.strip()
        if not label:
            raise ValidationError("platform is empty")
        return cls(_KNOWN_PLATFORMS.get(label.lower(), label))

    @property
    def known(self) -> bool:
        return self.label in _KNOWN_PLATFORMS.values()

    def __str__(self) -> str:
        return self.label


Platform.GPTSTORE = Platform("GPTStore")
Platform.FLOWGPT = Platform("FlowGPT")
Platform.POE = Platform("Poe")
Platform.COZE = Platform("Coze")
Platform.CICI = Platform("Cici")
Platform.CHARACTERAI = Platform("CharacterAI")

#: Canonical record key: (platform label, id).
RecordKey = tuple[str, str]


@dataclass(frozen=True)
class AppRecord:
    """One app's metadata. (platform, id) is unique within a corpus."""

    id: str
    platform: Platform
    name: str
    description: Optional[str] = None
    instructions: Optional[str] = None
    author: Optional[str] = None
    conversation_count: Optional[int] = None
    rank: Optional[int] = None

    def __post_init__(self):
        # trim at construction so name-index lookups are exact regardless
        # of how the record was built (full NFC canonicalization is the
        # loader's job)
        object.__setattr__(self, "id", self.id.strip())
        object.__setattr__(self, "name", self.name.strip())
        if not self.id:
            raise ValidationError("record id is empty")
        if not self.name:
            raise ValidationError("record name is empty after trimming")
        if self.conversation_count is not None and self.conversation_count < 0:
            raise ValidationError(f"conversation_count must be >= 0, got {self.conversation_count}")
        if self.rank is not None and self.rank < 1:
            raise ValidationError(f"rank must be >= 1, got {self.rank}")

    @property
    def key(self) -> RecordKey:
        return (self.platform.label, self.id)


def _normalize_text(value) -> Optional[str]:
    """NFC-normalize and trim; empty or missing becomes None."""
    if value is None:
        return None
    if not isinstance(value, str):
        raise ValidationError(f"expected string, got {type(value).__name__}")
    value = unicodedata.normalize("NFC", value).strip()
    return value or None


def _parse_count(value, minimum: int, what: str) -> Optional[int]:
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{what} must be an integer, got {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise ValidationError(f"{what} must be an integer, got {value!r}")
        value = int(value)
    if value < minimum:
        raise ValidationError(f"{what} must be >= {minimum}, got {value}")
    return value


def parse_record(obj) -> AppRecord:
    """Validate and canonicalize one raw JSON object into an AppRecord."""
    if not isinstance(obj, Mapping):
        raise ValidationError(f"record must be an object, got {type(obj).__name__}")
    for required in ("id", "name", "platform"):
        if obj.get(required) in (None, ""):
            raise ValidationError(f"missing required field {required!r}")
    if not isinstance(obj["id"], str):
        raise ValidationError(f"id must be a string, got {obj['id']!r}")
    name = _normalize_text(obj["name"])
    if name is None:
        raise ValidationError("name is empty after trimming")
    if not isinstance(obj["platform"], str):
        raise ValidationError(f"platform must be a string, got {obj['platform']!r}")
    author = obj.get("author")
    if author is not None and not isinstance(author, str):
        raise ValidationError(f"author must be a string, got {author!r}")
    author = author.strip() if author else None
    return AppRecord(
        id=obj["id"].strip(),
        platform=Platform.parse(obj["platform"]),
        name=name,
        description=_normalize_text(obj.get("description")),
        instructions=_normalize_text(obj.get("instructions")),
        author=author or None,
        conversation_count=_parse_count(obj.get("conversations"), 0, "conversations"),
        rank=_parse_count(obj.get("rank"), 1, "rank"),
    )


def record_to_dict(record: AppRecord) -> dict:
    """External-schema dict for one record (optional fields omitted)."""
    row = {"id": record.id, "name": record.name, "platform": record.platform.label}
    if record.description is not None:
        row["description"] = record.description
    if record.instructions is not None:
        row["instructions"] = record.instructions
    if record.author is not None:
        row["author"] = record.author
    if record.conversation_count is not None:
        row["conversations"] = record.conversation_count
    if record.rank is not None:
        row["rank"] = record.rank
    return row


class Corpus:
    """Immutable, indexed collection of AppRecords.

    Duplicate (platform, id) entries collapse to the first occurrence;
    the number of dropped duplicates is recorded.
    """

    def __init__(self, records: Iterable[AppRecord], invalid: Iterable[str] = ()):
        unique: dict[RecordKey, AppRecord] = {}
        dropped = 0
        for record in records:
            if record.key in unique:
                dropped += 1
            else:
                unique[record.key] = record
        self._records = tuple(unique.values())
        self._duplicates_dropped = dropped
        self._invalid = tuple(invalid)
        name_index: dict[str, list[AppRecord]] = {}
        for record in self._records:
            name_index.setdefault(record.name, []).append(record)
        self._name_index = {name: tuple(recs) for name, recs in name_index.items()}
        self._id_index = unique

    @property
    def records(self) -> tuple[AppRecord, ...]:
        return self._records

    @property
    def duplicates_dropped(self) -> int:
        return self._duplicates_dropped

    @property
    def invalid_records(self) -> tuple[str, ...]:
        """Per-record validation errors collected (and skipped) at load."""
        return self._invalid

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[AppRecord]:
        return iter(self._records)

    def by_name(self, name: str) -> tuple[AppRecord, ...]:
        """Records whose trimmed name equals ``name`` exactly (case-sensitive)."""
        return self._name_index.get(name.strip(), ())

    def get(self, platform: Union[Platform, str], id: str) -> Optional[AppRecord]:
        label = platform.label if isinstance(platform, Platform) else platform
        return self._id_index.get((label, id))

    @property
    def name_index(self) -> Mapping[str, tuple[AppRecord, ...]]:
        return self._name_index

    @property
    def id_index(self) -> Mapping[RecordKey, AppRecord]:
        return self._id_index


def load_corpus(source: Union[bytes, IO[bytes]], format: str = "jsonl") -> Corpus:
    """Build a Corpus from a byte stream of JSON records.

    ``format`` is ``jsonl`` (one record per line, blank lines skipped) or
    ``json`` (a single JSON array). Invalid records are collected on the
    returned corpus; the load fails only if the stream itself is malformed
    or every record is invalid.
    """
    if format not in ("jsonl", "json"):
        raise ValidationError(f"unknown corpus format {format!r} (expected jsonl or json)")
    data = source if isinstance(source, bytes) else source.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError("input is not valid UTF-8", exc.start) from exc

    raw_records: list[tuple[int, object]] = []
    errors: list[str] = []
    if format == "jsonl":
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                raw_records.append((lineno, json.loads(line)))
            except json.JSONDecodeError as exc:
                errors.append(f"line {lineno}: invalid JSON: {exc.msg}")
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"input is not valid JSON: {exc}") from exc
        if not isinstance(doc, list):
            raise ValidationError("json format requires a top-level array of records")
        raw_records = list(enumerate(doc, start=1))

    records: list[AppRecord] = []
    for position, obj in raw_records:
        try:
            records.append(parse_record(obj))
        except ValidationError as exc:
            errors.append(f"record {position}: {exc}")
    if not records and errors:
        raise ValidationError(
            f"no valid records in input ({len(errors)} invalid); first error: {errors[0]}"
        )
    return Corpus(records, invalid=errors)


def dump_corpus(corpus: Corpus) -> Iterator[str]:
    """Yield one JSON line per record in the external schema."""
    for record in corpus:
        yield json.dumps(record_to_dict(record), ensure_ascii=False)


class StopNameList:
    """Case-insensitive set of app names to treat as too common to protect."""

    def __init__(self, names: Iterable[str]):
        entries = []
        for name in names:
            trimmed = name.strip()
            if not trimmed:
                raise ValidationError("stoplist entries must be non-empty")
            entries.append(trimmed)
        self._names = tuple(entries)
        self._folded = frozenset(name.casefold() for name in entries)

    @classmethod
    def from_text(cls, text: str) -> "StopNameList":
        """Parse one name per line; ``#`` starts a comment, blanks ignored."""
        names = []
        for line in text.splitlines():
            entry = line.split("#", 1)[0].strip()
            if entry:
                names.append(entry)
        return cls(names)

    def __contains__(self, name: str) -> bool:
        return name.strip().casefold() in self._folded

    def __len__(self) -> int:
        return len(self._folded)

    @property
    def names(self) -> tuple[str, ...]:
        return self._names


def filter_common_names(corpus: Corpus, stoplist: StopNameList) -> Corpus:
    """New corpus without records whose name is on the stoplist."""
    return Corpus(record for record in corpus if record.name not in stoplist)


def top_ranked(corpus: Corpus, k: int) -> list[AppRecord]:
    """Up to ``k`` ranked records, ascending by rank, ties by (platform, id)."""
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    ranked = [record for record in corpus if record.rank is not None]
    ranked.sort(key=lambda record: (record.rank, record.key))
    return ranked[:k]
