"""Squatting and cloning detection over LLM app-store metadata."""

__version__ = "0.1.0"

from .analysis import (
    CrossPlatformMatrix,
    CrossPostFlag,
    EngagementHistogram,
    HistogramSpec,
    cross_platform_matrix,
    engagement_histogram,
    flag_same_author_cross_platform,
    inverse_normal_cdf,
    rank_targeting,
    sample_size,
)
from .clonedetect import (
    CloneGroup,
    DetectorConfig,
    DetectorMethod,
    SimilarityEdge,
    TextField,
    exact_match_groups,
    group_edges,
    levenshtein_clone_edges,
    make_edge,
    semantic_clone_edges,
)
from .corpus import (
    AppRecord,
    Corpus,
    Platform,
    StopNameList,
    dump_corpus,
    filter_common_names,
    load_corpus,
    top_ranked,
)
from .distance import bounded_levenshtein, levenshtein_distance, levenshtein_similarity
from .embedding import HashingEmbedder, RemoteEmbedder, cosine_similarity
from .errors import (
    AppMimicError,
    CorpusDecodeError,
    PipelineError,
    ProtocolError,
    ValidationError,
)
from .estimators import (
    ExactCloneDetector,
    LevenshteinCloneDetector,
    SemanticCloneDetector,
    SquatDetector,
    VariantGenerator,
)
from .squatgen import (
    IDENTICAL_NAME,
    SquatGenConfig,
    SquatHit,
    SquatModel,
    Variant,
    filter_same_developer,
    find_identical_names,
    generate_variants,
    match_variants,
)

__all__ = [
    "__version__",
    "AppMimicError",
    "AppRecord",
    "CloneGroup",
    "Corpus",
    "CorpusDecodeError",
    "CrossPlatformMatrix",
    "CrossPostFlag",
    "DetectorConfig",
    "DetectorMethod",
    "EngagementHistogram",
    "ExactCloneDetector",
    "HashingEmbedder",
    "HistogramSpec",
    "IDENTICAL_NAME",
    "LevenshteinCloneDetector",
    "PipelineError",
    "Platform",
    "ProtocolError",
    "RemoteEmbedder",
    "SemanticCloneDetector",
    "SimilarityEdge",
    "SquatDetector",
    "SquatGenConfig",
    "SquatHit",
    "SquatModel",
    "StopNameList",
    "TextField",
    "ValidationError",
    "Variant",
    "VariantGenerator",
    "bounded_levenshtein",
    "cosine_similarity",
    "cross_platform_matrix",
    "dump_corpus",
    "engagement_histogram",
    "exact_match_groups",
    "filter_common_names",
    "filter_same_developer",
    "find_identical_names",
    "flag_same_author_cross_platform",
    "generate_variants",
    "group_edges",
    "inverse_normal_cdf",
    "levenshtein_clone_edges",
    "levenshtein_distance",
    "levenshtein_similarity",
    "load_corpus",
    "make_edge",
    "match_variants",
    "rank_targeting",
    "sample_size",
    "semantic_clone_edges",
    "top_ranked",
]
