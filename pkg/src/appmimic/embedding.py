"""Embedding providers: a deterministic local hashing embedder and an
HTTP client for the embedding sidecar.

Wire protocol (served by the sidecar, consumed here):
  POST {endpoint}/embed  {"texts": [...]}  ->  {"model","dim","embeddings"}
  GET  {endpoint}/health                   ->  {"status":"ok","model","dim"}

Providers are deterministic, order-preserving, and emit unit-L2-norm
vectors.
"""

from __future__ import annotations

import hashlib
import re
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Protocol, Sequence

import numpy as np
import requests

from .errors import PipelineError, ProtocolError, ValidationError

#: Norm drift the client silently re-normalizes away (float transport loss).
NORM_TOLERANCE = 1e-6
#: Norm drift treated as a protocol bug rather than rounding.
GROSS_NORM_TOLERANCE = 1e-2


class EmbeddingProvider(Protocol):
    dim: int

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        """Embed texts into a (len(texts), dim) array of unit vectors."""

    def health(self) -> bool: ...


_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)
_HASH_KEY = b"appmimic-embed-v1"


def _token_bucket(token: str, dim: int) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=_HASH_KEY).digest()
    return int.from_bytes(digest, "big") % dim


class HashingEmbedder:
    """Deterministic bag-of-tokens embedder; no model downloads needed.

    Texts are case-folded, tokenized on non-alphanumeric boundaries, and
    token counts are hashed into ``dim`` buckets; the count vector is
    L2-normalized. Token order never affects the result.
    """

    def __init__(self, dim: int = 256):
        if dim < 1:
            raise ValidationError(f"dim must be >= 1, got {dim}")
        self.dim = dim

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for row, text in enumerate(texts):
            tokens = _TOKEN_RE.findall(text.casefold())
            if not tokens:
                raise ValidationError(f"text {row} has no tokens to embed: {text!r}")
            for token in tokens:
                out[row, _token_bucket(token, self.dim)] += 1.0
            out[row] /= np.linalg.norm(out[row])
        return out

    def health(self) -> bool:
        return True

    def token_bucket(self, token: str) -> int:
        """Bucket index a token hashes to (exposed for collision checks)."""
        return _token_bucket(token, self.dim)


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """dot(u, v) / (|u| * |v|), clamped to [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValidationError(f"dimension mismatch: {u.shape} vs {v.shape}")
    norm_u = float(np.linalg.norm(u))
    norm_v = float(np.linalg.norm(v))
    if norm_u == 0.0 or norm_v == 0.0:
        raise ValidationError("cosine similarity is undefined for a zero vector")
    return max(-1.0, min(1.0, float(np.dot(u, v)) / (norm_u * norm_v)))


class RemoteEmbedder:
    """Client for the embedding sidecar's wire protocol.

    Texts are split into batches of at most ``batch_size``; up to
    ``max_in_flight`` batches run concurrently. Connection errors and
    timeouts are retried up to ``max_retries`` times with exponential
    backoff; contract violations (wrong vector count, inconsistent dim,
    grossly non-unit vectors) fail immediately.
    """

    def __init__(
        self,
        endpoint: str,
        batch_size: int = 64,
        timeout: float = 30.0,
        max_in_flight: int = 2,
        max_retries: int = 2,
        backoff: float = 0.5,
        session: requests.Session | None = None,
    ):
        if batch_size < 1:
            raise ValidationError(f"batch_size must be >= 1, got {batch_size}")
        if max_in_flight < 1:
            raise ValidationError(f"max_in_flight must be >= 1, got {max_in_flight}")
        self.endpoint = endpoint.rstrip("/")
        self.batch_size = batch_size
        self.timeout = timeout
        self.max_in_flight = max_in_flight
        self.max_retries = max_retries
        self.backoff = backoff
        self._session = session or requests.Session()
        self._dim: int | None = None

    @property
    def dim(self) -> int:
        if self._dim is None:
            if not self.health():
                raise PipelineError(f"embedding endpoint {self.endpoint} is not healthy")
        return self._dim

    def health(self) -> bool:
        try:
            response = self._session.get(f"{self.endpoint}/health", timeout=self.timeout)
        except requests.RequestException:
            return False
        if response.status_code != 200:
            return False
        try:
            body = response.json()
        except ValueError:
            return False
        if body.get("status") != "ok" or not isinstance(body.get("dim"), int):
            return False
        self._dim = body["dim"]
        return True

    def _post_batch(self, index: int, texts: list[str]) -> np.ndarray:
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                response = self._session.post(
                    f"{self.endpoint}/embed", json={"texts": texts}, timeout=self.timeout
                )
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_error = exc
                continue
            return self._validate_batch(index, texts, response)
        raise PipelineError(
            f"embed batch {index} failed after {self.max_retries + 1} attempts: {last_error}"
        )

    def _validate_batch(self, index: int, texts: list[str], response) -> np.ndarray:
        if response.status_code != 200:
            raise PipelineError(
                f"embed batch {index}: HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            body = response.json()
        except ValueError as exc:
            raise ProtocolError(f"embed batch {index}: response is not JSON") from exc
        embeddings = body.get("embeddings")
        if not isinstance(embeddings, list) or len(embeddings) != len(texts):
            got = len(embeddings) if isinstance(embeddings, list) else "no"
            raise ProtocolError(
                f"embed batch {index}: expected {len(texts)} vectors, got {got}"
            )
        matrix = np.asarray(embeddings, dtype=np.float64)
        if matrix.ndim != 2:
            raise ProtocolError(f"embed batch {index}: embeddings are not a rank-2 array")
        dim = body.get("dim") if isinstance(body.get("dim"), int) else matrix.shape[1]
        if matrix.shape[1] != dim:
            raise ProtocolError(
                f"embed batch {index}: vectors have dim {matrix.shape[1]}, header says {dim}"
            )
        if self._dim is None:
            self._dim = dim
        elif dim != self._dim:
            raise ProtocolError(
                f"embed batch {index}: dim {dim} does not match established dim {self._dim}"
            )
        if not np.all(np.isfinite(matrix)):
            raise ProtocolError(f"embed batch {index}: non-finite values in embeddings")
        norms = np.linalg.norm(matrix, axis=1)
        if np.any(np.abs(norms - 1.0) > GROSS_NORM_TOLERANCE):
            worst = float(np.max(np.abs(norms - 1.0)))
            raise ProtocolError(
                f"embed batch {index}: grossly non-unit vectors (max |norm-1| = {worst:.4g})"
            )
        drifted = np.abs(norms - 1.0) > NORM_TOLERANCE
        if np.any(drifted):
            matrix[drifted] /= norms[drifted, np.newaxis]
        return matrix

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        texts = list(texts)
        if not texts:
            dim = self._dim or 0
            return np.zeros((0, dim), dtype=np.float64)
        batches = [
            (index, texts[start : start + self.batch_size])
            for index, start in enumerate(range(0, len(texts), self.batch_size))
        ]
        if self.max_in_flight == 1 or len(batches) == 1:
            results = [self._post_batch(index, batch) for index, batch in batches]
        else:
            with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
                futures = [pool.submit(self._post_batch, index, batch) for index, batch in batches]
                results = [future.result() for future in futures]
        return np.concatenate(results, axis=0)


def unit_norm_check(matrix: np.ndarray, tolerance: float = NORM_TOLERANCE) -> bool:
    """True when every row of ``matrix`` has L2 norm 1 within tolerance."""
    norms = np.linalg.norm(np.asarray(matrix, dtype=np.float64), axis=1)
    return bool(np.all(np.abs(norms - 1.0) <= tolerance))
