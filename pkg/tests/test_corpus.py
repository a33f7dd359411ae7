import io
import json
import random

import pytest

from appmimic import (
    Corpus,
    CorpusDecodeError,
    Platform,
    StopNameList,
    ValidationError,
    dump_corpus,
    filter_common_names,
    load_corpus,
    top_ranked,
)
from synth import PLATFORM_LABELS, record


def jsonl(rows) -> bytes:
    return "\n".join(json.dumps(row, ensure_ascii=False) for row in rows).encode("utf-8")


BASE_ROWS = [
    {"id": "g-1", "name": "DALL·E", "platform": "gptstore", "rank": 1},
    {"id": "f-1", "name": "Writer", "platform": "FlowGPT", "conversations": 12},
    {"id": "p-1", "name": "Helper", "platform": "poe", "author": "acme"},
]


def test_load_three_distinct_records():
    corpus = load_corpus(jsonl(BASE_ROWS))
    assert len(corpus) == 3
    assert corpus.duplicates_dropped == 0


def test_duplicate_platform_id_collapses_to_first():
    rows = [
        {"id": "g-123", "name": "First", "platform": "GPTStore"},
        {"id": "g-123", "name": "Second", "platform": "gptstore"},
        {"id": "g-456", "name": "Third", "platform": "GPTStore"},
    ]
    corpus = load_corpus(jsonl(rows))
    assert len(corpus) == 2
    assert corpus.duplicates_dropped == 1
    assert corpus.get("GPTStore", "g-123").name == "First"


def test_planted_duplicates_at_scale():
    # 10,000-record dump with 250 planted (platform, id) duplicates
    rng = random.Random(99)
    rows = [
        {"id": f"app-{i}", "name": f"Name {i}", "platform": rng.choice(PLATFORM_LABELS)}
        for i in range(9750)
    ]
    duplicated = rng.sample(rows, 250)
    for row in duplicated:
        copy = dict(row)
        copy["name"] = copy["name"] + " copy"
        rows.insert(rng.randrange(len(rows) + 1), copy)
    assert len(rows) == 10000
    corpus = load_corpus(jsonl(rows))
    assert len(corpus) == 9750
    assert corpus.duplicates_dropped == 250


def test_load_accepts_json_array_format():
    data = json.dumps(BASE_ROWS).encode("utf-8")
    corpus = load_corpus(data, format="json")
    assert len(corpus) == 3


def test_load_from_binary_stream():
    corpus = load_corpus(io.BytesIO(jsonl(BASE_ROWS)))
    assert len(corpus) == 3


def test_decode_error_reports_byte_offset():
    prefix = b'{"id": "a", "name": "ok", "platform": "poe"}\n'
    with pytest.raises(CorpusDecodeError) as err:
        load_corpus(prefix + b'\xff\xfe{"id"')
    assert err.value.byte_offset == len(prefix)


def test_invalid_records_collected_not_fatal():
    rows = [
        {"id": "a", "name": "Fine", "platform": "poe"},
        {"id": "b", "platform": "poe"},  # no name
        {"id": "c", "name": "   ", "platform": "poe"},  # blank name
        {"id": "d", "name": "Bad rank", "platform": "poe", "rank": 0},
        {"id": "e", "name": "Bad count", "platform": "poe", "conversations": -1},
    ]
    corpus = load_corpus(jsonl(rows))
    assert len(corpus) == 1
    assert len(corpus.invalid_records) == 4


def test_all_records_invalid_fails():
    rows = [{"id": "a", "platform": "poe"}, {"name": "x", "platform": "poe"}]
    with pytest.raises(ValidationError):
        load_corpus(jsonl(rows))


def test_unicode_composed_normalization():
    # decomposed e + combining acute must load as the composed form
    decomposed = "Café Bot"
    corpus = load_corpus(jsonl([{"id": "a", "name": decomposed, "platform": "poe"}]))
    assert corpus.records[0].name == "Café Bot"
    assert corpus.by_name("Café Bot")


def test_empty_optional_fields_become_absent():
    rows = [{"id": "a", "name": "X", "platform": "poe", "description": "", "instructions": "  "}]
    rec = load_corpus(jsonl(rows)).records[0]
    assert rec.description is None
    assert rec.instructions is None


def test_platform_parsing():
    assert Platform.parse("GPTSTORE") == Platform.GPTSTORE
    assert Platform.parse("characterai").label == "CharacterAI"
    other = Platform.parse("  MyStore ")
    assert other.label == "MyStore"
    assert not other.known


def test_roundtrip_preserves_record_multiset():
    rows = BASE_ROWS + [
        {
            "id": "c-9",
            "name": "Emoji \U0001f916",
            "platform": "SomeOther",
            "description": "d",
            "instructions": "i",
            "author": "a",
            "conversations": 0,
            "rank": 7,
        }
    ]
    first = load_corpus(jsonl(rows))
    dumped = "\n".join(dump_corpus(first)).encode("utf-8")
    second = load_corpus(dumped)
    assert sorted(first.records, key=lambda r: r.key) == sorted(second.records, key=lambda r: r.key)
    assert second.duplicates_dropped == 0  # dedup is idempotent


def test_filter_common_names_case_insensitive():
    corpus = Corpus([record("1", "Image Generator"), record("2", "DALL·E")])
    filtered = filter_common_names(corpus, StopNameList(["image generator"]))
    assert [r.name for r in filtered] == ["DALL·E"]
    assert len(corpus) == 2  # original unchanged


def test_filter_empty_stoplist_is_noop():
    corpus = Corpus([record(str(i), f"Name {i}") for i in range(10)])
    filtered = filter_common_names(corpus, StopNameList([]))
    assert [r.key for r in filtered] == [r.key for r in corpus]


def test_filter_counts_with_large_stoplist():
    names = [f"Name {i}" for i in range(1000)]
    corpus = Corpus([record(str(i), name) for i, name in enumerate(names)])
    stop = StopNameList(name.upper() for name in names[:654])  # case-insensitive
    filtered = filter_common_names(corpus, stop)
    assert len(filtered) == 346
    survivors = {r.name for r in filtered}
    assert all(name not in stop for name in survivors)


def test_stoplist_file_parsing():
    text = "# common names\nImage Generator\n\n  Logo Maker  # very generic\n"
    stop = StopNameList.from_text(text)
    assert "image generator" in stop
    assert "LOGO MAKER" in stop
    assert len(stop) == 2


def test_top_ranked_orders_by_rank():
    corpus = Corpus(
        [record("a", "A", rank=3), record("b", "B", rank=1), record("c", "C", rank=2)]
    )
    assert [r.rank for r in top_ranked(corpus, 3)] == [1, 2, 3]


def test_top_ranked_no_ranked_records():
    corpus = Corpus([record("a", "A"), record("b", "B")])
    assert top_ranked(corpus, 5) == []


def test_top_ranked_k_validation():
    with pytest.raises(ValidationError):
        top_ranked(Corpus([]), 0)


def test_top_ranked_against_sort_oracle():
    rng = random.Random(4)
    records = []
    for i in range(1500):
        records.append(
            record(f"r{i}", f"N{i}", platform=rng.choice(PLATFORM_LABELS), rank=rng.randint(1, 400))
        )
    for i in range(300):
        records.append(record(f"u{i}", f"U{i}"))  # unranked, never returned
    corpus = Corpus(records)
    top = top_ranked(corpus, 1000)
    assert len(top) == 1000
    oracle = sorted((r for r in records if r.rank), key=lambda r: (r.rank, r.key))
    assert [r.key for r in top] == [r.key for r in oracle[:1000]]
    excluded = oracle[1000:]
    assert max(r.rank for r in top) <= min(r.rank for r in excluded)


@pytest.mark.parametrize("size", [0, 1, 37, 1000, 10000])
def test_index_consistency_walk(size):
    rng = random.Random(size)
    records = [
        record(f"id-{i}", f"Name {rng.randrange(size or 1)}", platform=rng.choice(PLATFORM_LABELS))
        for i in range(size)
    ]
    corpus = Corpus(records)
    # every record reachable through both indices
    for rec in corpus:
        assert corpus.id_index[rec.key] is rec
        assert rec in corpus.by_name(rec.name)
    # no dangling index entries
    assert sum(len(recs) for recs in corpus.name_index.values()) == len(corpus)
    assert set(corpus.id_index) == {rec.key for rec in corpus}
