"""Deterministic text embeddings and cosine similarity.

The default embedder hashes lowercased tokens into a fixed number of
buckets and L2-normalizes the resulting count vector, so identical text
always produces bitwise-identical vectors with no network access.  An
external-service mode is available for swapping in a real model.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, EmbeddingUnavailable

_TOKEN_RE = re.compile(r"[a-z0-9']+")

DEFAULT_DIMENSION = 256


@dataclass(frozen=True)
class EmbedderConfig:
    dimension: int = DEFAULT_DIMENSION
    mode: str = "deterministic-hash"  # or "external-service"
    endpoint: str | None = None

    def __post_init__(self):
        if self.dimension < 8:
            raise ValueError(f"embedding dimension must be >= 8, got {self.dimension}")
        if self.mode not in ("deterministic-hash", "external-service"):
            raise ValueError(f"unknown embedder mode: {self.mode}")


class Embedder:
    """Text-to-vector provider; pure and thread-safe after construction."""

    def __init__(self, config: EmbedderConfig | None = None):
        self.config = config or EmbedderConfig()
        self._cache: dict[str, np.ndarray] = {}

    @property
    def dimension(self) -> int:
        return self.config.dimension

    def embed(self, text: str) -> np.ndarray:
        cached = self._cache.get(text)
        if cached is not None:
            return cached
        if self.config.mode == "external-service":
            vec = self._embed_remote(text)
        else:
            vec = self._embed_hash(text)
        vec.setflags(write=False)
        self._cache[text] = vec
        return vec

    def _embed_hash(self, text: str) -> np.ndarray:
        counts = np.zeros(self.dimension, dtype=np.float64)
        for token in _TOKEN_RE.findall(text.lower()):
            bucket = zlib.crc32(token.encode("utf-8")) % self.dimension
            counts[bucket] += 1.0
        norm = np.linalg.norm(counts)
        if norm == 0.0:
            return counts  # empty text maps to the zero vector
        return counts / norm

    def _embed_remote(self, text: str) -> np.ndarray:
        import requests

        if not self.config.endpoint:
            raise EmbeddingUnavailable("no embedding service endpoint configured")
        try:
            resp = requests.post(self.config.endpoint, json={"input": text}, timeout=30)
            resp.raise_for_status()
            values = resp.json()["embedding"]
        except Exception as exc:
            raise EmbeddingUnavailable(str(exc)) from exc
        vec = np.asarray(values, dtype=np.float64)
        if vec.shape != (self.dimension,):
            raise EmbeddingUnavailable(
                f"service returned dimension {vec.shape}, expected {self.dimension}"
            )
        norm = np.linalg.norm(vec)
        return vec if norm == 0.0 else vec / norm


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity of two vectors; defined as 0 when either is zero."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


_default: Embedder | None = None


def default_embedder() -> Embedder:
    """Process-wide hash-mode embedder at the default dimension."""
    global _default
    if _default is None:
        _default = Embedder()
    return _default
