"""Aggregate statistics: cross-platform plagiarism matrices, same-author
cross-post flags, engagement histograms, rank targeting, and survey
sample sizing (Cochran with finite-population correction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .clonedetect import CloneGroup
from .corpus import AppRecord, Corpus
from .errors import ValidationError
from .squatgen import SquatHit


@dataclass
class CrossPlatformMatrix:
    """Symmetric platform-pair counts; keys are canonically ordered label
    pairs, the diagonal counts intra-platform groups."""

    counts: dict[tuple[str, str], int] = field(default_factory=dict)

    @staticmethod
    def _pair(a: str, b: str) -> tuple[str, str]:
        return (a, b) if a <= b else (b, a)

    def increment(self, a: str, b: str) -> None:
        self.counts[self._pair(a, b)] = self.counts.get(self._pair(a, b), 0) + 1

    def get(self, a: str, b: str) -> int:
        return self.counts.get(self._pair(a, b), 0)

    @property
    def platforms(self) -> list[str]:
        labels = {label for pair in self.counts for label in pair}
        return sorted(labels)

    def rows(self) -> list[tuple[str, str, int]]:
        """Long-form (platform_a, platform_b, count) rows, sorted."""
        return [(a, b, self.counts[(a, b)]) for a, b in sorted(self.counts)]


def cross_platform_matrix(groups: Iterable[CloneGroup], corpus: Corpus) -> CrossPlatformMatrix:
    """Count, per group, each unordered platform pair spanned by its
    members; single-platform groups count on the diagonal."""
    matrix = CrossPlatformMatrix()
    for group in groups:
        platforms = set()
        for platform_label, record_id in group.members:
            record = corpus.get(platform_label, record_id)
            if record is None:
                raise ValidationError(
                    f"group member ({platform_label}, {record_id}) not found in corpus"
                )
            platforms.add(record.platform.label)
        labels = sorted(platforms)
        if len(labels) == 1:
            matrix.increment(labels[0], labels[0])
        else:
            for i in range(len(labels)):
                for j in range(i + 1, len(labels)):
                    matrix.increment(labels[i], labels[j])
    return matrix


@dataclass(frozen=True)
class CrossPostFlag:
    """Annotation marking a group as a likely legitimate cross-post."""

    group: CloneGroup
    flagged: bool
    author: Optional[str] = None


def flag_same_author_cross_platform(
    groups: Iterable[CloneGroup], corpus: Corpus
) -> list[CrossPostFlag]:
    """Flag groups whose members all share one case-folded author name and
    span at least two platforms. Flags annotate; nothing is removed."""
    flags = []
    for group in groups:
        authors = set()
        platforms = set()
        resolvable = True
        for platform_label, record_id in group.members:
            record = corpus.get(platform_label, record_id)
            if record is None or record.author is None:
                resolvable = False
                break
            authors.add(record.author.casefold())
            platforms.add(record.platform.label)
        flagged = resolvable and len(authors) == 1 and len(platforms) >= 2
        author = authors.pop() if flagged else None
        flags.append(CrossPostFlag(group=group, flagged=flagged, author=author))
    return flags


@dataclass(frozen=True)
class HistogramSpec:
    """Integer bucket edges; the final bucket is open-ended.

    Edges (e0, e1, ..., em) define buckets [e0, e1], (e1, e2], ...,
    (e_{m-1}, e_m], (e_m, inf). Counts below e0 (possible only when
    e0 > 0) land in the first bucket.
    """

    edges: tuple[int, ...] = (0, 1000, 50000)

    def __post_init__(self):
        if len(self.edges) < 2:
            raise ValidationError("need at least two bucket edges")
        if any(edge < 0 for edge in self.edges):
            raise ValidationError("bucket edges must be non-negative")
        if any(a >= b for a, b in zip(self.edges, self.edges[1:])):
            raise ValidationError(f"bucket edges must be strictly increasing: {self.edges}")

    @property
    def labels(self) -> list[str]:
        labels = [f"{self.edges[0]}-{self.edges[1]}"]
        for lower, upper in zip(self.edges[1:], self.edges[2:]):
            labels.append(f"{lower + 1}-{upper}")
        labels.append(f">{self.edges[-1]}")
        return labels

    def bucket_for(self, count: int) -> int:
        for index, edge in enumerate(self.edges[1:]):
            if count <= edge:
                return index
        return len(self.edges) - 1


@dataclass(frozen=True)
class EngagementHistogram:
    spec: HistogramSpec
    bucket_counts: tuple[int, ...]
    unknown: int
    max_record: Optional[AppRecord]

    @property
    def total(self) -> int:
        return sum(self.bucket_counts) + self.unknown


def engagement_histogram(
    records: Iterable[AppRecord], spec: Optional[HistogramSpec] = None
) -> EngagementHistogram:
    """Bucket conversation counts; records without a count go to an
    "unknown" bucket. Also reports the maximum-engagement record."""
    spec = spec or HistogramSpec()
    buckets = [0] * len(spec.labels)
    unknown = 0
    max_record: Optional[AppRecord] = None
    for record in records:
        count = record.conversation_count
        if count is None:
            unknown += 1
            continue
        buckets[spec.bucket_for(count)] += 1
        if (
            max_record is None
            or count > max_record.conversation_count
            or (count == max_record.conversation_count and record.key < max_record.key)
        ):
            max_record = record
    return EngagementHistogram(
        spec=spec, bucket_counts=tuple(buckets), unknown=unknown, max_record=max_record
    )


def rank_targeting(hits: Iterable[SquatHit]) -> dict[Optional[int], int]:
    """Hit counts per target rank; key None collects unranked targets."""
    counts: dict[Optional[int], int] = {}
    for hit in hits:
        rank = hit.target.rank
        counts[rank] = counts.get(rank, 0) + 1
    ranked = sorted((rank for rank in counts if rank is not None))
    ordered: dict[Optional[int], int] = {rank: counts[rank] for rank in ranked}
    if None in counts:
        ordered[None] = counts[None]
    return ordered


# Acklam's rational approximation to the inverse normal CDF, refined with
# one Halley step against math.erfc; absolute error is far below 1e-8.
_ICDF_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_ICDF_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_ICDF_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_ICDF_D = (
    7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
    3.754408661907416e00,
)


def inverse_normal_cdf(p: float) -> float:
    """Quantile of the standard normal distribution."""
    if not 0.0 < p < 1.0:
        raise ValidationError(f"probability must be in (0, 1), got {p}")
    a, b, c, d = _ICDF_A, _ICDF_B, _ICDF_C, _ICDF_D
    p_low, p_high = 0.02425, 1 - 0.02425
    if p < p_low:
        q = math.sqrt(-2 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1
        )
    elif p <= p_high:
        q = p - 0.5
        r = q * q
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / (
            ((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1
        )
    else:
        q = math.sqrt(-2 * math.log(1 - p))
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / (
            (((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1
        )
    # Halley refinement
    error = 0.5 * math.erfc(-x / math.sqrt(2)) - p
    u = error * math.sqrt(2 * math.pi) * math.exp(x * x / 2)
    return x - u / (1 + x * u / 2)


def sample_size(
    population: int, confidence: float = 0.95, margin: float = 0.05, proportion: float = 0.5
) -> int:
    """Cochran sample size with finite-population correction, rounded up
    and capped at the population."""
    if population < 1:
        raise ValidationError(f"population must be >= 1, got {population}")
    if not 0.0 < confidence < 1.0:
        raise ValidationError(f"confidence must be in (0, 1), got {confidence}")
    if not 0.0 < margin < 1.0:
        raise ValidationError(f"margin must be in (0, 1), got {margin}")
    if not 0.0 < proportion < 1.0:
        raise ValidationError(f"proportion must be in (0, 1), got {proportion}")
    z = inverse_normal_cdf(1 - (1 - confidence) / 2)
    n0 = z * z * proportion * (1 - proportion) / (margin * margin)
    corrected = n0 / (1 + (n0 - 1) / population)
    return min(population, math.ceil(corrected))
