"""Estimator-style wrappers over the detection pipelines.

These follow the scikit-learn conventions (constructor params stored
verbatim, work done in ``fit``, fitted state in trailing-underscore
attributes, ``get_params``/``set_params`` via BaseEstimator) so detectors
can be cloned, grid-searched over thresholds, or dropped into existing
tooling. ``X`` is a Corpus rather than an array.
"""

from __future__ import annotations

from typing import Iterable, Optional, Union

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .clonedetect import (
    DetectorConfig,
    TextField,
    exact_match_groups,
    group_edges,
    levenshtein_clone_edges,
    semantic_clone_edges,
)
from .corpus import Corpus, StopNameList, filter_common_names, top_ranked
from .embedding import EmbeddingProvider, HashingEmbedder
from .errors import ValidationError
from .squatgen import (
    SquatGenConfig,
    SquatModel,
    Variant,
    filter_same_developer,
    find_identical_names,
    generate_variants,
    match_variants,
    parse_models,
)


def check_corpus(X) -> Corpus:
    if not isinstance(X, Corpus):
        raise ValidationError(f"expected a Corpus, got {type(X).__name__}")
    return X


def _resolve_models(models) -> frozenset[SquatModel]:
    if models is None:
        return frozenset(SquatModel)
    if isinstance(models, str):
        return parse_models(models)
    return frozenset(models)


def _resolve_field(field) -> TextField:
    if isinstance(field, TextField):
        return field
    try:
        return TextField(field)
    except ValueError:
        valid = ", ".join(f.value for f in TextField)
        raise ValidationError(f"unknown field {field!r}; valid fields: {valid}") from None


class VariantGenerator(TransformerMixin, BaseEstimator):
    """Stateless transformer mapping app names to squatting variants."""

    def __init__(self, models: Union[str, Iterable[SquatModel], None] = "all",
                 config: Optional[SquatGenConfig] = None):
        self.models = models
        self.config = config

    def fit(self, X=None, y=None):
        return self

    def transform(self, X: Iterable[str]) -> list[Variant]:
        if isinstance(X, str):
            X = [X]
        models = _resolve_models(self.models)
        variants = []
        for name in X:
            variants.extend(generate_variants(name, models, self.config))
        return variants


class SquatDetector(BaseEstimator):
    """Fit on a reference corpus to pick targets and generate variants;
    predict on a corpus to find squatting hits."""

    def __init__(
        self,
        models: Union[str, Iterable[SquatModel], None] = "all",
        config: Optional[SquatGenConfig] = None,
        top_k: int = 1000,
        stoplist: Optional[StopNameList] = None,
        drop_same_developer: bool = True,
        include_identical: bool = False,
    ):
        self.models = models
        self.config = config
        self.top_k = top_k
        self.stoplist = stoplist
        self.drop_same_developer = drop_same_developer
        self.include_identical = include_identical

    def fit(self, X: Corpus, y=None):
        corpus = check_corpus(X)
        if self.stoplist is not None:
            corpus = filter_common_names(corpus, self.stoplist)
        self.targets_ = top_ranked(corpus, self.top_k)
        models = _resolve_models(self.models)
        self.variants_ = []
        seen_names = set()
        for target in self.targets_:
            if target.name in seen_names:
                continue
            seen_names.add(target.name)
            self.variants_.extend(generate_variants(target.name, models, self.config))
        # first ranked record wins when two targets share a name
        self.targets_by_name_ = {}
        for target in self.targets_:
            self.targets_by_name_.setdefault(target.name, target)
        return self

    def predict(self, X: Corpus):
        if not hasattr(self, "variants_"):
            raise NotFittedError("SquatDetector is not fitted; call fit first")
        corpus = check_corpus(X)
        hits = match_variants(self.variants_, corpus, self.targets_by_name_)
        if self.include_identical:
            hits = hits + find_identical_names(self.targets_, corpus)
            hits.sort(key=lambda hit: hit.sort_key())
        if self.drop_same_developer:
            hits = filter_same_developer(hits)
        return hits

    def fit_predict(self, X: Corpus, y=None):
        return self.fit(X).predict(X)


class ExactCloneDetector(BaseEstimator):
    """Group records with byte-identical text in one field."""

    def __init__(self, field: Union[str, TextField] = "instructions"):
        self.field = field

    def fit(self, X: Corpus, y=None):
        corpus = check_corpus(X)
        self.groups_ = exact_match_groups(corpus, _resolve_field(self.field))
        return self

    def fit_predict(self, X: Corpus, y=None):
        return self.fit(X).groups_


class LevenshteinCloneDetector(BaseEstimator):
    """Edge + group detection under normalized Levenshtein similarity."""

    def __init__(
        self,
        field: Union[str, TextField] = "instructions",
        threshold: float = 0.95,
        min_chars: int = 50,
        include_exact: bool = False,
        jobs: int = 1,
    ):
        self.field = field
        self.threshold = threshold
        self.min_chars = min_chars
        self.include_exact = include_exact
        self.jobs = jobs

    def fit(self, X: Corpus, y=None):
        corpus = check_corpus(X)
        cfg = DetectorConfig(
            threshold=self.threshold,
            min_chars=self.min_chars,
            exclude_exact=not self.include_exact,
        )
        self.edges_ = levenshtein_clone_edges(corpus, _resolve_field(self.field), cfg, jobs=self.jobs)
        self.groups_ = group_edges(self.edges_)
        return self

    def fit_predict(self, X: Corpus, y=None):
        return self.fit(X).groups_


class SemanticCloneDetector(BaseEstimator):
    """Edge + group detection under embedding cosine similarity."""

    def __init__(
        self,
        field: Union[str, TextField] = "instructions",
        threshold: float = 0.95,
        min_chars: int = 50,
        max_chars: int = 512,
        include_exact: bool = True,
        provider: Optional[EmbeddingProvider] = None,
    ):
        self.field = field
        self.threshold = threshold
        self.min_chars = min_chars
        self.max_chars = max_chars
        self.include_exact = include_exact
        self.provider = provider

    def fit(self, X: Corpus, y=None):
        corpus = check_corpus(X)
        provider = self.provider if self.provider is not None else HashingEmbedder()
        cfg = DetectorConfig(
            threshold=self.threshold,
            min_chars=self.min_chars,
            max_chars=self.max_chars,
            exclude_exact=not self.include_exact,
        )
        self.edges_ = semantic_clone_edges(corpus, _resolve_field(self.field), provider, cfg)
        self.groups_ = group_edges(self.edges_)
        return self

    def fit_predict(self, X: Corpus, y=None):
        return self.fit(X).groups_
