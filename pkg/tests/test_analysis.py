import itertools
import math
import random

import pytest
import scipy.stats

from appmimic import (
    CloneGroup,
    Corpus,
    DetectorMethod,
    HistogramSpec,
    TextField,
    ValidationError,
    cross_platform_matrix,
    engagement_histogram,
    flag_same_author_cross_platform,
    inverse_normal_cdf,
    rank_targeting,
    sample_size,
)
from appmimic.squatgen import SquatHit
from synth import PLATFORM_LABELS, record


def group_of(keys):
    return CloneGroup(
        members=tuple(sorted(keys)),
        field=TextField.INSTRUCTIONS,
        method=DetectorMethod.EXACT_MATCH,
    )


def corpus_for_groups(member_specs):
    """member_specs: list of (platform, id, author) triples."""
    return Corpus(
        record(id, f"App {id}", platform=platform, author=author)
        for platform, id, author in member_specs
    )


# --- cross-platform matrix ---------------------------------------------------


def test_matrix_single_cross_platform_pair():
    corpus = corpus_for_groups([("FlowGPT", "f1", None), ("Poe", "p1", None)])
    matrix = cross_platform_matrix([group_of([("FlowGPT", "f1"), ("Poe", "p1")])], corpus)
    assert matrix.get("FlowGPT", "Poe") == 1
    assert matrix.get("Poe", "FlowGPT") == 1  # symmetric by key canonicalization
    assert sum(matrix.counts.values()) == 1


def test_matrix_intra_platform_group_hits_diagonal():
    corpus = corpus_for_groups([("GPTStore", "a", None), ("GPTStore", "b", None)])
    matrix = cross_platform_matrix([group_of([("GPTStore", "a"), ("GPTStore", "b")])], corpus)
    assert matrix.get("GPTStore", "GPTStore") == 1
    assert len(matrix.counts) == 1


def test_matrix_three_platform_group_increments_three_cells():
    specs = [("FlowGPT", "f", None), ("Poe", "p", None), ("GPTStore", "g", None)]
    corpus = corpus_for_groups(specs)
    matrix = cross_platform_matrix([group_of([(p, i) for p, i, _ in specs])], corpus)
    assert matrix.get("FlowGPT", "Poe") == 1
    assert matrix.get("FlowGPT", "GPTStore") == 1
    assert matrix.get("GPTStore", "Poe") == 1
    assert matrix.get("GPTStore", "GPTStore") == 0


def test_matrix_unresolvable_member_rejected():
    corpus = corpus_for_groups([("Poe", "p", None)])
    with pytest.raises(ValidationError):
        cross_platform_matrix([group_of([("Poe", "p"), ("Poe", "ghost")])], corpus)


def test_matrix_thirty_synthetic_groups_vs_enumeration():
    rng = random.Random(30)
    specs = []
    groups = []
    next_id = 0
    spreads = []
    for _ in range(30):
        platforms = rng.sample(PLATFORM_LABELS, rng.randint(1, 4))
        members = []
        for platform in platforms:
            per_platform = rng.randint(1, 3) if len(platforms) > 1 else rng.randint(2, 4)
            for _ in range(per_platform):
                members.append((platform, f"m{next_id}"))
                specs.append((platform, f"m{next_id}", None))
                next_id += 1
        spreads.append(sorted(set(platforms)))
        groups.append(group_of(members))
    corpus = corpus_for_groups(specs)
    matrix = cross_platform_matrix(groups, corpus)

    expected = {}
    for spread in spreads:
        if len(spread) == 1:
            expected[(spread[0], spread[0])] = expected.get((spread[0], spread[0]), 0) + 1
        else:
            for a, b in itertools.combinations(spread, 2):
                expected[(a, b)] = expected.get((a, b), 0) + 1
    assert matrix.counts == expected
    # off-diagonal increments per group equal C(k, 2)
    total_off_diagonal = sum(
        count for (a, b), count in matrix.counts.items() if a != b
    )
    assert total_off_diagonal == sum(
        math.comb(len(spread), 2) for spread in spreads if len(spread) > 1
    )


# --- same-author cross-post flags ---------------------------------------------


def test_flag_same_author_two_platforms():
    corpus = corpus_for_groups([("FlowGPT", "f", "acme"), ("Poe", "p", "ACME")])
    flags = flag_same_author_cross_platform(
        [group_of([("FlowGPT", "f"), ("Poe", "p")])], corpus
    )
    assert flags[0].flagged
    assert flags[0].author == "acme"


def test_flag_requires_cross_platform_span():
    corpus = corpus_for_groups([("Poe", "a", "acme"), ("Poe", "b", "acme")])
    flags = flag_same_author_cross_platform([group_of([("Poe", "a"), ("Poe", "b")])], corpus)
    assert not flags[0].flagged


def test_flag_mixed_or_missing_authors_not_flagged():
    corpus = corpus_for_groups(
        [("FlowGPT", "f", "acme"), ("Poe", "p", "other"), ("Coze", "c", None), ("Cici", "i", "acme")]
    )
    mixed = group_of([("FlowGPT", "f"), ("Poe", "p")])
    missing = group_of([("Coze", "c"), ("Cici", "i")])
    flags = flag_same_author_cross_platform([mixed, missing], corpus)
    assert [f.flagged for f in flags] == [False, False]


# --- engagement histogram ------------------------------------------------------


def test_histogram_headline_counts():
    records = [
        record("top", "Top Squat", conversations=12_969_368),
        record("third", "Third", conversations=4_236_464),
        record("small", "Small", conversations=500),
    ]
    result = engagement_histogram(records, HistogramSpec(edges=(0, 1000, 50000)))
    assert result.spec.labels == ["0-1000", "1001-50000", ">50000"]
    assert result.bucket_counts == (1, 0, 2)
    assert result.unknown == 0
    assert result.max_record.id == "top"
    assert result.max_record.conversation_count == 12_969_368


def test_histogram_empty_input():
    result = engagement_histogram([], HistogramSpec(edges=(0, 1000, 50000)))
    assert result.bucket_counts == (0, 0, 0)
    assert result.unknown == 0
    assert result.max_record is None


def test_histogram_unknown_bucket_and_total():
    records = [record("a", "A"), record("b", "B", conversations=7)]
    result = engagement_histogram(records)
    assert result.unknown == 1
    assert result.total == 2


def test_histogram_random_matches_linear_scan():
    rng = random.Random(10)
    edges = (0, 100, 5000, 100000)
    records = []
    for i in range(10_000):
        count = None if rng.random() < 0.1 else rng.randrange(0, 200_000)
        records.append(record(f"r{i}", f"N{i}", conversations=count))
    result = engagement_histogram(records, HistogramSpec(edges=edges))
    # linear-scan oracle
    buckets = [0, 0, 0, 0]
    unknown = 0
    best = None
    for rec in records:
        c = rec.conversation_count
        if c is None:
            unknown += 1
        else:
            if c <= 100:
                buckets[0] += 1
            elif c <= 5000:
                buckets[1] += 1
            elif c <= 100000:
                buckets[2] += 1
            else:
                buckets[3] += 1
            if best is None or c > best.conversation_count:
                best = rec
    assert result.bucket_counts == tuple(buckets)
    assert result.unknown == unknown
    assert result.total == 10_000
    assert result.max_record.conversation_count == best.conversation_count


def test_histogram_spec_validation():
    with pytest.raises(ValidationError):
        HistogramSpec(edges=(1000, 10))
    with pytest.raises(ValidationError):
        HistogramSpec(edges=(5,))
    with pytest.raises(ValidationError):
        HistogramSpec(edges=(-1, 10))


# --- rank targeting -------------------------------------------------------------


def hit_on(target):
    return SquatHit(target=target, matched=record("m", "M", platform="Poe"),
                    variant="V", model=None, same_developer=False)


def test_rank_targeting_counts():
    rank1 = record("t1", "One", rank=1)
    rank7 = record("t7", "Seven", rank=7)
    counts = rank_targeting([hit_on(rank1), hit_on(rank1), hit_on(rank1), hit_on(rank7)])
    assert counts == {1: 3, 7: 1}
    assert list(counts) == [1, 7]  # ascending


def test_rank_targeting_empty():
    assert rank_targeting([]) == {}


def test_rank_targeting_unranked_bucket():
    unranked = record("u", "U")
    counts = rank_targeting([hit_on(unranked), hit_on(unranked)])
    assert counts == {None: 2}


def test_rank_targeting_planted_distribution():
    rng = random.Random(55)
    targets = {r: record(f"t{r}", f"T{r}", rank=r) for r in range(1, 21)}
    planted = {r: rng.randint(0, 9) for r in targets}
    hits = []
    for r, n in planted.items():
        hits.extend(hit_on(targets[r]) for _ in range(n))
    rng.shuffle(hits)
    assert rank_targeting(hits) == {r: n for r, n in planted.items() if n > 0}


# --- sample size ------------------------------------------------------------------


def test_sample_size_reference_populations():
    assert sample_size(3509, 0.95, 0.05) == 347
    assert sample_size(9575, 0.95, 0.05) == 370


def test_sample_size_small_population_capped():
    assert sample_size(10, 0.95, 0.05) == 10


def test_sample_size_huge_population():
    assert sample_size(10**9, 0.95, 0.05) == 385


def test_sample_size_argument_validation():
    for bad in [(0, 0.95, 0.05, 0.5), (100, 0.0, 0.05, 0.5), (100, 0.95, 1.0, 0.5), (100, 0.95, 0.05, 0.0)]:
        with pytest.raises(ValidationError):
            sample_size(*bad)


def test_sample_size_monotone_in_population():
    previous = 0
    for population in [1, 5, 50, 347, 1000, 3509, 9575, 10**6, 10**9]:
        current = sample_size(population)
        assert current >= previous
        assert current <= population
        previous = current
    # bounded above by ceil(n0)
    assert previous <= 385


def test_sample_size_maximized_at_half():
    rng = random.Random(14)
    for _ in range(100):
        population = rng.randint(2, 10**6)
        p = rng.uniform(0.01, 0.99)
        assert sample_size(population, proportion=p) <= sample_size(population, proportion=0.5)


def test_sample_size_matches_scipy_formula():
    rng = random.Random(15)
    for _ in range(200):
        population = rng.randint(1, 10**7)
        confidence = rng.uniform(0.5, 0.999)
        margin = rng.uniform(0.01, 0.2)
        p = rng.uniform(0.05, 0.95)
        z = scipy.stats.norm.ppf(1 - (1 - confidence) / 2)
        n0 = z * z * p * (1 - p) / (margin * margin)
        expected = min(population, math.ceil(n0 / (1 + (n0 - 1) / population)))
        assert sample_size(population, confidence, margin, p) == expected


def test_inverse_normal_accuracy_against_scipy():
    rng = random.Random(16)
    probabilities = [rng.random() for _ in range(500)]
    probabilities += [1e-12, 1e-6, 0.02425, 0.5, 0.975, 1 - 1e-6, 1 - 1e-12]
    for p in probabilities:
        if not 0 < p < 1:
            continue
        assert inverse_normal_cdf(p) == pytest.approx(scipy.stats.norm.ppf(p), abs=1e-8)
    assert inverse_normal_cdf(0.975) == pytest.approx(1.959963984540054, abs=1e-9)


def test_inverse_normal_domain():
    for bad in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(ValidationError):
            inverse_normal_cdf(bad)
