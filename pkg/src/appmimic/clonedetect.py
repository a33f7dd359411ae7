"""Clone detection: exact matching, Levenshtein similarity and embedding
cosine similarity over app text fields, plus connected-component grouping.

The Levenshtein pair pipeline is pruning-accelerated but result-identical
to brute force: a pair is skipped only via the length-difference bound
(similarity >= t implies |len(a)-len(b)| <= (1-t)*max_len) or the banded
early exit inside the distance computation, both lossless. Threshold
boundaries are decided in exact rational arithmetic on 1 - d/L.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .corpus import AppRecord, Corpus, RecordKey
from .distance import as_fraction, bounded_levenshtein, max_edits_for
from .embedding import EmbeddingProvider, cosine_similarity
from .errors import PipelineError, ValidationError
from .unionfind import UnionFind


class TextField(enum.Enum):
    NAME = "name"
    DESCRIPTION = "description"
    INSTRUCTIONS = "instructions"


class DetectorMethod(enum.Enum):
    EXACT_MATCH = "exact"
    LEVENSHTEIN = "levenshtein"
    EMBEDDING = "embedding"


def field_text(record: AppRecord, field: TextField) -> Optional[str]:
    if field is TextField.NAME:
        return record.name
    if field is TextField.DESCRIPTION:
        return record.description
    return record.instructions


@dataclass(frozen=True)
class SimilarityEdge:
    """A scored unordered pair of records; ``a`` < ``b`` canonically."""

    a: RecordKey
    b: RecordKey
    field: TextField
    method: DetectorMethod
    score: float

    def __post_init__(self):
        if self.a >= self.b:
            raise ValidationError(f"edge endpoints must satisfy a < b, got {self.a} >= {self.b}")
        if not 0.0 <= self.score <= 1.0:
            raise ValidationError(f"edge score must be in [0, 1], got {self.score}")

    def sort_key(self):
        return (self.a, self.b)


def make_edge(
    key1: RecordKey, key2: RecordKey, field: TextField, method: DetectorMethod, score: float
) -> SimilarityEdge:
    if key1 == key2:
        raise ValidationError(f"self-edge on {key1}")
    a, b = (key1, key2) if key1 < key2 else (key2, key1)
    return SimilarityEdge(a=a, b=b, field=field, method=method, score=score)


@dataclass(frozen=True)
class CloneGroup:
    """A connected component of records under one detector and field."""

    members: tuple[RecordKey, ...]
    field: TextField
    method: DetectorMethod

    def __post_init__(self):
        if len(self.members) < 2:
            raise ValidationError("a clone group needs at least 2 members")
        if tuple(sorted(set(self.members))) != self.members:
            raise ValidationError("group members must be sorted and unique")


@dataclass(frozen=True)
class DetectorConfig:
    """Thresholds and length filters for the similarity detectors.

    ``threshold`` may be a float, decimal string or Fraction; floats are
    interpreted at their shortest decimal form (0.95 means exactly 19/20).
    ``max_chars`` applies to the embedding detector only. ``exclude_exact``
    drops identical-text pairs (the Levenshtein default); the embedding
    detector keeps them by default.
    """

    threshold: Union[float, str, Fraction] = 0.95
    min_chars: int = 50
    max_chars: int = 512
    exclude_exact: bool = True

    def __post_init__(self):
        t = self.threshold_fraction
        if not 0 < t <= 1:
            raise ValidationError(f"threshold must be in (0, 1], got {self.threshold}")
        if not 0 <= self.min_chars <= self.max_chars:
            raise ValidationError(
                f"need 0 <= min_chars <= max_chars, got {self.min_chars}..{self.max_chars}"
            )

    @property
    def threshold_fraction(self) -> Fraction:
        return as_fraction(self.threshold)


def exact_match_groups(corpus: Corpus, field: TextField) -> list[CloneGroup]:
    """Groups of >= 2 records whose chosen field is byte-identical."""
    buckets: dict[str, list[RecordKey]] = {}
    for record in corpus:
        text = field_text(record, field)
        if text:
            buckets.setdefault(text, []).append(record.key)
    groups = [
        CloneGroup(members=tuple(sorted(keys)), field=field, method=DetectorMethod.EXACT_MATCH)
        for keys in buckets.values()
        if len(keys) >= 2
    ]
    groups.sort(key=lambda group: group.members[0])
    return groups


def _eligible_texts(
    corpus: Corpus, field: TextField, min_chars: int, max_chars: Optional[int]
) -> list[tuple[int, str, RecordKey]]:
    eligible = []
    for record in corpus:
        text = field_text(record, field)
        if text is None:
            continue
        n = len(text)
        if n < min_chars or (max_chars is not None and n > max_chars):
            continue
        eligible.append((n, text, record.key))
    eligible.sort(key=lambda item: (item[0], item[2]))
    return eligible


def _lev_pairs_for_range(
    eligible: Sequence[tuple[int, str, RecordKey]],
    threshold: Fraction,
    exclude_exact: bool,
    start: int,
    step: int,
) -> list[tuple[RecordKey, RecordKey, int, int]]:
    """Score pairs (i, j) for j in range(start, len, step), j the longer side.

    Returns (key_i, key_j, distance, longer_len) for pairs at or above the
    threshold.
    """
    out = []
    for j in range(start, len(eligible), step):
        longer_len, text_j, key_j = eligible[j]
        max_dist = max_edits_for(threshold, longer_len)
        shortest_allowed = longer_len - max_dist
        for i in range(j - 1, -1, -1):
            len_i, text_i, key_i = eligible[i]
            if len_i < shortest_allowed:
                break  # sorted by length: everything earlier is shorter
            distance = bounded_levenshtein(text_i, text_j, max_dist)
            if distance is None:
                continue
            if distance == 0 and exclude_exact:
                continue
            out.append((key_i, key_j, distance, longer_len))
    return out


def levenshtein_clone_edges(
    corpus: Corpus, field: TextField, cfg: Optional[DetectorConfig] = None, jobs: int = 1
) -> list[SimilarityEdge]:
    """All unordered pairs with field length >= min_chars and Levenshtein
    similarity >= threshold (identical pairs only if not excluded)."""
    cfg = cfg or DetectorConfig()
    threshold = cfg.threshold_fraction
    eligible = _eligible_texts(corpus, field, cfg.min_chars, None)
    if jobs > 1 and len(eligible) > jobs:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(
                    _lev_pairs_for_range, eligible, threshold, cfg.exclude_exact, start, jobs
                )
                for start in range(jobs)
            ]
            raw = [pair for future in futures for pair in future.result()]
    else:
        raw = _lev_pairs_for_range(eligible, threshold, cfg.exclude_exact, 0, 1)
    edges = [
        make_edge(key_i, key_j, field, DetectorMethod.LEVENSHTEIN, 1.0 - distance / longer)
        for key_i, key_j, distance, longer in raw
    ]
    edges.sort(key=SimilarityEdge.sort_key)
    return edges


# Candidate margin for the blockwise cosine scan. Float drift between a
# blocked matrix product and a per-pair dot is ~1e-13 for unit vectors at
# these dimensions, so scanning with this slack then re-scoring each
# candidate pairwise is lossless against the per-pair decision.
_COSINE_SCAN_MARGIN = 1e-9


def semantic_clone_edges(
    corpus: Corpus,
    field: TextField,
    provider: EmbeddingProvider,
    cfg: Optional[DetectorConfig] = None,
    block_size: int = 512,
) -> list[SimilarityEdge]:
    """Pairs of eligible records whose field embeddings have cosine
    similarity >= threshold.

    Eligible records have min_chars <= field length <= max_chars. Each
    distinct text is embedded exactly once; identical texts are kept
    unless cfg.exclude_exact is set.
    """
    cfg = cfg or DetectorConfig(exclude_exact=False)
    threshold = float(cfg.threshold_fraction)
    eligible = _eligible_texts(corpus, field, cfg.min_chars, cfg.max_chars)
    text_keys: dict[str, list[RecordKey]] = {}
    for _, text, key in eligible:
        text_keys.setdefault(text, []).append(key)
    texts = sorted(text_keys)
    if not texts:
        return []
    try:
        vectors = provider.embed(texts)
    except (ValidationError, PipelineError):
        raise
    except Exception as exc:  # provider-specific failure
        raise PipelineError(f"embedding provider failed: {exc}") from exc
    matrix = np.asarray(vectors, dtype=np.float64)
    if matrix.shape[0] != len(texts):
        raise PipelineError(f"provider returned {matrix.shape[0]} vectors for {len(texts)} texts")

    edges = []
    # pairs of distinct texts: blockwise candidate scan, then exact re-score
    cutoff = threshold - _COSINE_SCAN_MARGIN
    for row_start in range(0, len(texts), block_size):
        block = matrix[row_start : row_start + block_size]
        scores = block @ matrix.T
        rows, cols = np.nonzero(scores >= cutoff)
        for r, c in zip(rows.tolist(), cols.tolist()):
            p, q = row_start + r, c
            if p >= q:
                continue
            score = cosine_similarity(matrix[p], matrix[q])
            if score < threshold:
                continue
            score = max(0.0, score)
            for key_p in text_keys[texts[p]]:
                for key_q in text_keys[texts[q]]:
                    edges.append(make_edge(key_p, key_q, field, DetectorMethod.EMBEDDING, score))
    # identical-text pairs: cosine of a vector with itself is 1 by
    # definition, so these always qualify when kept
    if not cfg.exclude_exact:
        for index, text in enumerate(texts):
            keys = text_keys[text]
            if len(keys) < 2:
                continue
            vector = matrix[index]
            score = min(1.0, max(0.0, cosine_similarity(vector, vector)))
            for x in range(len(keys)):
                for y in range(x + 1, len(keys)):
                    edges.append(make_edge(keys[x], keys[y], field, DetectorMethod.EMBEDDING, score))
    edges.sort(key=SimilarityEdge.sort_key)
    return edges


def group_edges(edges: Iterable[SimilarityEdge]) -> list[CloneGroup]:
    """Connected components of the similarity graph, as clone groups."""
    edges = list(edges)
    if not edges:
        return []
    methods = {edge.method for edge in edges}
    fields = {edge.field for edge in edges}
    if len(methods) > 1 or len(fields) > 1:
        raise ValidationError(
            f"edges mix methods/fields: {sorted(m.value for m in methods)}, "
            f"{sorted(f.value for f in fields)}"
        )
    uf = UnionFind()
    for edge in edges:
        uf.add(edge.a)
        uf.add(edge.b)
        uf.union(edge.a, edge.b)
    groups = [
        CloneGroup(members=tuple(sorted(component)), field=edges[0].field, method=edges[0].method)
        for component in uf.components()
    ]
    groups.sort(key=lambda group: group.members[0])
    return groups
