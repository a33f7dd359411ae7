"""Embedding backends.

All backends produce mean-pooled, L2-normalized sentence vectors and are
deterministic within a process lifetime (inference mode, no dropout).
"""

from __future__ import annotations

import hashlib
import re
from typing import Protocol, Sequence

import numpy as np

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class EmptyTextError(ValueError):
    """A text produced no tokens; nothing to pool."""


class EmbeddingModel(Protocol):
    name: str
    dim: int

    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


class HashedTokenModel:
    """Offline stand-in for a sentence encoder.

    Each token maps to a fixed pseudo-random Gaussian vector (seeded from
    a stable hash of the token), the sentence vector is the mean of its
    token vectors, L2-normalized. No downloads, fully deterministic.
    """

    def __init__(self, dim: int = 384):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        self.dim = dim
        self.name = f"hashed-token-{dim}"
        self._token_cache: dict[str, np.ndarray] = {}

    def _token_vector(self, token: str) -> np.ndarray:
        cached = self._token_cache.get(token)
        if cached is None:
            digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
            seed = int.from_bytes(digest, "big")
            cached = np.random.default_rng(seed).standard_normal(self.dim)
            self._token_cache[token] = cached
        return cached

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        out = np.empty((len(texts), self.dim), dtype=np.float64)
        for row, text in enumerate(texts):
            tokens = _TOKEN_RE.findall(text.casefold())
            if not tokens:
                raise EmptyTextError(f"text {row} has no tokens: {text!r}")
            pooled = np.mean([self._token_vector(token) for token in tokens], axis=0)
            norm = np.linalg.norm(pooled)
            if norm == 0.0:
                raise EmptyTextError(f"text {row} pooled to a zero vector")
            out[row] = pooled / norm
        return out


class SentenceTransformerModel:
    """Wrapper over a sentence-transformers model, normalized output."""

    def __init__(self, model_name: str, device: str = "cpu"):
        from sentence_transformers import SentenceTransformer

        self._model = SentenceTransformer(model_name, device=None if device == "accelerator" else "cpu")
        self._model.eval()
        self.name = model_name
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        vectors = self._model.encode(
            list(texts),
            convert_to_numpy=True,
            normalize_embeddings=True,
            show_progress_bar=False,
        )
        return np.asarray(vectors, dtype=np.float64)


def load_model(model_name: str, device: str = "cpu") -> EmbeddingModel:
    if model_name == "hash":
        return HashedTokenModel()
    if model_name.startswith("hash:"):
        return HashedTokenModel(dim=int(model_name.split(":", 1)[1]))
    if model_name.startswith("st:"):
        return SentenceTransformerModel(model_name.split(":", 1)[1], device=device)
    return SentenceTransformerModel(model_name, device=device)
