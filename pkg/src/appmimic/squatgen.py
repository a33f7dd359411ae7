"""Squatting-name generation (14 models) and corpus matching.

Six mutation models exploit typing errors (omission, doubling, adjacent
keys, swaps, vowels); eight more target the naming habits of LLM apps
(case changes, punctuation edits, string/symbol/word/emoji expansion and
token rearrangement). Matching against a corpus is exact and
case-sensitive: case variants are generated explicitly, so folding at
match time would double-count.
"""

from __future__ import annotations

import enum
import itertools
import json
import re
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

from .corpus import AppRecord, Corpus
from .errors import ValidationError


class SquatModel(enum.Enum):
    # typing-error mutations
    CHARACTER_OMISSION = "character_omission"
    CHARACTER_DOUBLING = "character_doubling"
    ADJACENT_KEY_INSERTION = "adjacent_key_insertion"
    ADJACENT_KEY_SUBSTITUTION = "adjacent_key_substitution"
    CHARACTER_SWAP = "character_swap"
    VOWEL_SUBSTITUTION = "vowel_substitution"
    # naming-convention tricks
    CASE_SUBSTITUTION = "case_substitution"
    PUNCTUATION_DELETION = "punctuation_deletion"
    PUNCTUATION_SUBSTITUTION = "punctuation_substitution"
    STRING_EXPANSION = "string_expansion"
    SYMBOL_EXPANSION = "symbol_expansion"
    WORD_EXPANSION = "word_expansion"
    EMOJI_EXPANSION = "emoji_expansion"
    STRING_REARRANGEMENT = "string_rearrangement"

    @classmethod
    def typo_models(cls) -> frozenset["SquatModel"]:
        """The six models that imitate typing errors."""
        return frozenset(
            {
                cls.CHARACTER_OMISSION,
                cls.CHARACTER_DOUBLING,
                cls.ADJACENT_KEY_INSERTION,
                cls.ADJACENT_KEY_SUBSTITUTION,
                cls.CHARACTER_SWAP,
                cls.VOWEL_SUBSTITUTION,
            }
        )

    @classmethod
    def branding_models(cls) -> frozenset["SquatModel"]:
        """The eight models that exploit app naming conventions."""
        return frozenset(cls) - cls.typo_models()


#: Report marker for exact-name duplicates; deliberately not a SquatModel.
IDENTICAL_NAME = "identical_name"

QWERTY_ADJACENT = {
    "a": "qwsz",
    "b": "vghn",
    "c": "xdfv",
    "d": "serfcx",
    "e": "wrds",
    "f": "drtgvc",
    "g": "ftyhbv",
    "h": "gyujnb",
    "i": "uokj",
    "j": "huikmn",
    "k": "jiolm",
    "l": "kop",
    "m": "njk",
    "n": "bhjm",
    "o": "iplk",
    "p": "ol",
    "q": "wa",
    "r": "etfd",
    "s": "awedxz",
    "t": "rygf",
    "u": "yijh",
    "v": "cfgb",
    "w": "qesa",
    "x": "zsdc",
    "y": "tuhg",
    "z": "asx",
}

DEFAULT_WORD_LEXICON = ("pro", "plus", "AI", "GPT", "official", "free", "premium", "new", "2")
DEFAULT_SYMBOL_SET = ("+", "#", "$", "!", "*")
DEFAULT_EMOJI_SET = ("\U0001f916", "✨", "\U0001f525", "⭐", "\U0001f680")
DEFAULT_EXPANSION_CHARS = tuple("0123456789")
DEFAULT_SUBSTITUTION_TARGETS = (" ", "-", "_", ".")

_VOWELS = "aeiou"
_REARRANGEMENT_SEPARATORS = " -_·."


@dataclass(frozen=True)
class SquatGenConfig:
    """Lexicons, character sets and limits driving variant generation."""

    word_lexicon: tuple[str, ...] = DEFAULT_WORD_LEXICON
    symbol_set: tuple[str, ...] = DEFAULT_SYMBOL_SET
    emoji_set: tuple[str, ...] = DEFAULT_EMOJI_SET
    expansion_chars: tuple[str, ...] = DEFAULT_EXPANSION_CHARS
    punctuation_chars: Optional[str] = None  # None: Unicode P category plus "·"
    substitution_targets: tuple[str, ...] = DEFAULT_SUBSTITUTION_TARGETS
    keyboard_map: Mapping[str, str] = field(default_factory=lambda: dict(QWERTY_ADJACENT))
    rearrangement_token_limit: int = 4

    def __post_init__(self):
        for attr in ("word_lexicon", "symbol_set", "emoji_set", "expansion_chars", "substitution_targets"):
            if not getattr(self, attr):
                raise ValidationError(f"{attr} must be non-empty")
        missing = [c for c in "abcdefghijklmnopqrstuvwxyz" if not self.keyboard_map.get(c)]
        if missing:
            raise ValidationError(f"keyboard_map must cover a-z, missing {''.join(missing)!r}")
        if self.rearrangement_token_limit < 1:
            raise ValidationError("rearrangement_token_limit must be >= 1")

    def is_punctuation(self, ch: str) -> bool:
        if self.punctuation_chars is not None:
            return ch in self.punctuation_chars
        return ch == "·" or unicodedata.category(ch).startswith("P")

    @classmethod
    def from_dict(cls, raw: Mapping) -> "SquatGenConfig":
        known = {
            "word_lexicon": tuple,
            "symbol_set": tuple,
            "emoji_set": tuple,
            "expansion_chars": tuple,
            "punctuation_chars": str,
            "substitution_targets": tuple,
            "keyboard_map": dict,
            "rearrangement_token_limit": int,
        }
        kwargs = {}
        for key, value in raw.items():
            if key not in known:
                raise ValidationError(f"unknown squat config key {key!r}")
            kwargs[key] = known[key](value) if known[key] in (tuple, dict) else value
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "SquatGenConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"squat config is not valid JSON: {exc}") from exc
        if not isinstance(raw, Mapping):
            raise ValidationError("squat config must be a JSON object")
        return cls.from_dict(raw)


@dataclass(frozen=True)
class Variant:
    """A generated squatting name, tagged with the model that produced it."""

    original: str
    variant: str
    model: SquatModel

    def __post_init__(self):
        if not self.variant.strip():
            raise ValidationError("variant is empty")
        if self.variant.strip() == self.original.strip():
            raise ValidationError(f"variant equals its original: {self.variant!r}")


@dataclass(frozen=True)
class SquatHit:
    """A corpus record whose name matched a generated variant (or, with
    model None, matched a target name exactly)."""

    target: AppRecord
    matched: AppRecord
    variant: str
    model: Optional[SquatModel]
    same_developer: bool

    @property
    def model_label(self) -> str:
        return self.model.value if self.model is not None else IDENTICAL_NAME

    def sort_key(self):
        return (self.target.name, self.model_label, self.variant, self.matched.platform.label, self.matched.id)


def _case_substitution(name: str, config: SquatGenConfig) -> Iterator[str]:
    yield name.lower()
    yield name.upper()
    yield name.swapcase()
    yield name.title()


def _punctuation_deletion(name: str, config: SquatGenConfig) -> Iterator[str]:
    yield "".join(ch for ch in name if not config.is_punctuation(ch))
    for i, ch in enumerate(name):
        if config.is_punctuation(ch):
            yield name[:i] + name[i + 1 :]


def _punctuation_substitution(name: str, config: SquatGenConfig) -> Iterator[str]:
    for i, ch in enumerate(name):
        if config.is_punctuation(ch):
            for target in config.substitution_targets:
                yield name[:i] + target + name[i + 1 :]


def _character_omission(name: str, config: SquatGenConfig) -> Iterator[str]:
    for i in range(len(name)):
        yield name[:i] + name[i + 1 :]


def _character_doubling(name: str, config: SquatGenConfig) -> Iterator[str]:
    for i in range(len(name)):
        yield name[: i + 1] + name[i] + name[i + 1 :]


def _adjacent_key_insertion(name: str, config: SquatGenConfig) -> Iterator[str]:
    for i, ch in enumerate(name):
        for adjacent in config.keyboard_map.get(ch.lower(), ""):
            yield name[: i + 1] + adjacent + name[i + 1 :]


def _adjacent_key_substitution(name: str, config: SquatGenConfig) -> Iterator[str]:
    for i, ch in enumerate(name):
        for adjacent in config.keyboard_map.get(ch.lower(), ""):
            replacement = adjacent.upper() if ch.isupper() else adjacent
            yield name[:i] + replacement + name[i + 1 :]


def _character_swap(name: str, config: SquatGenConfig) -> Iterator[str]:
    for i in range(len(name) - 1):
        yield name[:i] + name[i + 1] + name[i] + name[i + 2 :]


def _vowel_substitution(name: str, config: SquatGenConfig) -> Iterator[str]:
    for i, ch in enumerate(name):
        lower = ch.lower()
        if lower in _VOWELS:
            for vowel in _VOWELS:
                if vowel == lower:
                    continue
                replacement = vowel.upper() if ch.isupper() else vowel
                yield name[:i] + replacement + name[i + 1 :]


def _string_expansion(name: str, config: SquatGenConfig) -> Iterator[str]:
    for ch in config.expansion_chars:
        yield ch + name
        yield name + ch


def _symbol_expansion(name: str, config: SquatGenConfig) -> Iterator[str]:
    for symbol in config.symbol_set:
        yield symbol + name
        yield name + symbol


def _word_expansion(name: str, config: SquatGenConfig) -> Iterator[str]:
    for word in config.word_lexicon:
        yield word + " " + name
        yield name + " " + word


def _emoji_expansion(name: str, config: SquatGenConfig) -> Iterator[str]:
    for emoji in config.emoji_set:
        yield name + emoji
        yield name + " " + emoji


def _string_rearrangement(name: str, config: SquatGenConfig) -> Iterator[str]:
    tokens = [t for t in re.split(f"[{re.escape(_REARRANGEMENT_SEPARATORS)}]+", name) if t]
    if len(tokens) < 2:
        return
    counts = {sep: name.count(sep) for sep in _REARRANGEMENT_SEPARATORS}
    dominant = max(_REARRANGEMENT_SEPARATORS, key=lambda sep: counts[sep])
    if len(tokens) <= config.rearrangement_token_limit:
        for permutation in itertools.permutations(tokens):
            if list(permutation) != tokens:
                yield dominant.join(permutation)
    else:
        for k in range(1, len(tokens)):
            yield dominant.join(tokens[k:] + tokens[:k])
        yield dominant.join(reversed(tokens))


_GENERATORS = {
    SquatModel.CHARACTER_OMISSION: _character_omission,
    SquatModel.CHARACTER_DOUBLING: _character_doubling,
    SquatModel.ADJACENT_KEY_INSERTION: _adjacent_key_insertion,
    SquatModel.ADJACENT_KEY_SUBSTITUTION: _adjacent_key_substitution,
    SquatModel.CHARACTER_SWAP: _character_swap,
    SquatModel.VOWEL_SUBSTITUTION: _vowel_substitution,
    SquatModel.CASE_SUBSTITUTION: _case_substitution,
    SquatModel.PUNCTUATION_DELETION: _punctuation_deletion,
    SquatModel.PUNCTUATION_SUBSTITUTION: _punctuation_substitution,
    SquatModel.STRING_EXPANSION: _string_expansion,
    SquatModel.SYMBOL_EXPANSION: _symbol_expansion,
    SquatModel.WORD_EXPANSION: _word_expansion,
    SquatModel.EMOJI_EXPANSION: _emoji_expansion,
    SquatModel.STRING_REARRANGEMENT: _string_rearrangement,
}


def parse_models(spec: str) -> frozenset[SquatModel]:
    """Parse a CLI model list: ``all`` or comma-separated model names."""
    if spec.strip().lower() == "all":
        return frozenset(SquatModel)
    models = set()
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            models.add(SquatModel(part.lower()))
        except ValueError:
            valid = ", ".join(m.value for m in SquatModel)
            raise ValidationError(f"unknown model {part!r}; valid models: all, {valid}") from None
    if not models:
        raise ValidationError("no models selected")
    return frozenset(models)


def generate_variants(
    name: str,
    models: Optional[Iterable[SquatModel]] = None,
    config: Optional[SquatGenConfig] = None,
) -> list[Variant]:
    """All squatting variants of ``name`` under the requested models.

    Output is deterministic (models in enum order, rule order within a
    model), deduplicated on (variant, model), with identity and empty
    outputs dropped. The same string reached via two models is reported
    under both.
    """
    original = name.strip()
    if not original:
        raise ValidationError("name is empty")
    config = config or SquatGenConfig()
    requested = frozenset(SquatModel) if models is None else frozenset(models)
    variants = []
    seen = set()
    for model in SquatModel:
        if model not in requested:
            continue
        for candidate in _GENERATORS[model](original, config):
            candidate = candidate.strip()
            if not candidate or candidate == original:
                continue
            if (candidate, model) in seen:
                continue
            seen.add((candidate, model))
            variants.append(Variant(original=original, variant=candidate, model=model))
    return variants


def _same_developer(a: AppRecord, b: AppRecord) -> bool:
    if a.author is None or b.author is None:
        return False
    return a.author.strip().casefold() == b.author.strip().casefold()


def match_variants(
    variants: Iterable[Variant],
    corpus: Corpus,
    targets: Mapping[str, AppRecord],
) -> list[SquatHit]:
    """Corpus records whose trimmed name equals a variant, byte-for-byte."""
    hits = []
    for variant in variants:
        target = targets.get(variant.original)
        if target is None:
            raise ValidationError(f"no target record for variant original {variant.original!r}")
        for record in corpus.by_name(variant.variant):
            if record.key == target.key:
                continue
            hits.append(
                SquatHit(
                    target=target,
                    matched=record,
                    variant=variant.variant,
                    model=variant.model,
                    same_developer=_same_developer(record, target),
                )
            )
    hits.sort(key=SquatHit.sort_key)
    return hits


def filter_same_developer(hits: Iterable[SquatHit]) -> list[SquatHit]:
    """Drop hits where the matched app and the target share a developer."""
    return [hit for hit in hits if not hit.same_developer]


def find_identical_names(targets: Iterable[AppRecord], corpus: Corpus) -> list[SquatHit]:
    """Non-target corpus records sharing a target's exact trimmed name."""
    targets = list(targets)
    target_keys = {target.key for target in targets}
    hits = []
    for target in targets:
        for record in corpus.by_name(target.name):
            if record.key in target_keys:
                continue
            hits.append(
                SquatHit(
                    target=target,
                    matched=record,
                    variant=target.name,
                    model=None,
                    same_developer=_same_developer(record, target),
                )
            )
    hits.sort(key=SquatHit.sort_key)
    return hits
