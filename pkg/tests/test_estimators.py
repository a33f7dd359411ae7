import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from appmimic import (
    DetectorConfig,
    ExactCloneDetector,
    HashingEmbedder,
    LevenshteinCloneDetector,
    SemanticCloneDetector,
    SquatDetector,
    SquatModel,
    StopNameList,
    ValidationError,
    VariantGenerator,
    exact_match_groups,
    filter_same_developer,
    generate_variants,
    group_edges,
    levenshtein_clone_edges,
    match_variants,
    semantic_clone_edges,
    top_ranked,
)
from appmimic.clonedetect import TextField
from synth import planted_squat_corpus, near_duplicate_corpus, record


@pytest.fixture(scope="module")
def planted():
    return planted_squat_corpus(seed=23, n_records=500, n_targets=6, n_planted=20)


def test_get_params_roundtrip_and_clone():
    detector = LevenshteinCloneDetector(field="description", threshold=0.9, min_chars=10)
    params = detector.get_params()
    assert params["field"] == "description"
    assert params["threshold"] == 0.9
    fresh = clone(detector)
    assert fresh.get_params() == params
    detector.set_params(threshold=0.8)
    assert detector.get_params()["threshold"] == 0.8


def test_variant_generator_transform():
    generator = VariantGenerator(models={SquatModel.CHARACTER_SWAP})
    variants = generator.fit_transform(["abc"])
    assert {v.variant for v in variants} == {"bac", "acb"}
    assert generator.transform("abc") == variants  # single string accepted


def test_squat_detector_matches_functional_pipeline(planted):
    detector = SquatDetector(top_k=6, drop_same_developer=True)
    hits = detector.fit(planted.corpus).predict(planted.corpus)

    targets = top_ranked(planted.corpus, 6)
    variants = []
    seen = set()
    for target in targets:
        if target.name in seen:
            continue
        seen.add(target.name)
        variants.extend(generate_variants(target.name))
    expected = filter_same_developer(
        match_variants(variants, planted.corpus, {t.name: t for t in targets})
    )
    assert hits == expected
    assert len(hits) == 20


def test_squat_detector_not_fitted():
    with pytest.raises(NotFittedError):
        SquatDetector().predict(planted_squat_corpus(1, 50, 2, 2).corpus)


def test_squat_detector_stoplist_filters_targets(planted):
    stop = StopNameList([planted.targets[0].name])
    detector = SquatDetector(top_k=6, stoplist=stop)
    detector.fit(planted.corpus)
    assert planted.targets[0].name not in {t.name for t in detector.targets_}


def test_exact_clone_detector(planted):
    corpus = near_duplicate_corpus(seed=2, n_records=200)
    detector = ExactCloneDetector(field="instructions")
    groups = detector.fit_predict(corpus)
    assert groups == exact_match_groups(corpus, TextField.INSTRUCTIONS)


def test_levenshtein_detector_equivalent_to_function():
    corpus = near_duplicate_corpus(seed=3, n_records=250)
    detector = LevenshteinCloneDetector(threshold="0.95", min_chars=50)
    detector.fit(corpus)
    cfg = DetectorConfig(threshold="0.95", min_chars=50, exclude_exact=True)
    assert detector.edges_ == levenshtein_clone_edges(corpus, TextField.INSTRUCTIONS, cfg)
    assert detector.groups_ == group_edges(detector.edges_)


def test_semantic_detector_equivalent_to_function():
    corpus = near_duplicate_corpus(seed=4, n_records=200)
    provider = HashingEmbedder()
    detector = SemanticCloneDetector(threshold=0.92, provider=provider)
    detector.fit(corpus)
    cfg = DetectorConfig(threshold=0.92, exclude_exact=False)
    assert detector.edges_ == semantic_clone_edges(corpus, TextField.INSTRUCTIONS, provider, cfg)


def test_detectors_reject_non_corpus():
    with pytest.raises(ValidationError):
        ExactCloneDetector().fit([record("a", "A")])


def test_unknown_field_rejected():
    corpus = near_duplicate_corpus(seed=5, n_records=30)
    with pytest.raises(ValidationError):
        ExactCloneDetector(field="title").fit(corpus)
