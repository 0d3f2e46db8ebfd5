"""Pluggable text embeddings: deterministic hashing, file-backed, HTTP.

Vectors are L2-normalized at construction so cosine similarity reduces to
a dot product everywhere downstream.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from . import kernels
from .chunking import tokenize


class EmbeddingError(Exception):
    pass


class DimMismatchError(EmbeddingError):
    pass


class KeyMissError(EmbeddingError):
    pass


class TransportError(EmbeddingError):
    pass


class BadResponseError(EmbeddingError):
    pass


class Mode(Enum):
    PASSAGE = "passage"
    QUERY = "query"

    @property
    def prefix(self) -> str:
        return f"{self.value}: "


class EmbeddingVector:
    """A unit-norm float64 vector; `flagged` marks zero-text guard vectors."""

    __slots__ = ("values", "flagged")

    def __init__(self, values, flagged: bool = False):
        arr = np.ascontiguousarray(values, dtype=np.float64)
        if arr.ndim != 1:
            raise EmbeddingError("embedding must be one-dimensional")
        norm = float(np.linalg.norm(arr))
        if norm == 0.0:
            raise EmbeddingError("cannot normalize a zero vector; use a guard vector")
        self.values = arr / norm
        self.flagged = flagged

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def __eq__(self, other) -> bool:
        return isinstance(other, EmbeddingVector) and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"EmbeddingVector(dim={self.dim}, flagged={self.flagged})"


def guard_vector(dim: int) -> EmbeddingVector:
    v = np.zeros(dim)
    v[0] = 1.0
    return EmbeddingVector(v, flagged=True)


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    if a.dim != b.dim:
        raise DimMismatchError(f"dim {a.dim} vs {b.dim}")
    return float(min(1.0, max(-1.0, float(a.values @ b.values))))


class EmbeddingProvider(ABC):
    """Same (text, mode) must always yield the same vector per instance."""

    @abstractmethod
    def embed(self, text: str, mode: Mode) -> EmbeddingVector: ...

    @abstractmethod
    def dim(self) -> int: ...

    @property
    def provider_id(self) -> str:
        return type(self).__name__


class HashEmbedder(EmbeddingProvider):
    """Seeded feature-hashing embedder for offline, reproducible runs.

    Token counts of the mode-prefixed text are hashed into `dim` buckets
    with a sign split, then L2-normalized. Not semantically meaningful,
    but deterministic and lexically sensitive, which is what the tests and
    fixtures rely on.
    """

    def __init__(self, dim: int = 256, seed: int = 42):
        if dim < 8:
            raise EmbeddingError("hash embedder needs dim >= 8")
        self._dim = dim
        self._key = seed.to_bytes(8, "little", signed=True)
        self._seed = seed

    def _bucket(self, token: str) -> tuple[int, float]:
        h = int.from_bytes(
            hashlib.blake2b(token.encode("utf-8"), digest_size=8, key=self._key).digest(),
            "little",
        )
        return h % self._dim, 1.0 if (h >> 63) & 1 else -1.0

    def embed(self, text: str, mode: Mode) -> EmbeddingVector:
        if not text.strip():
            return guard_vector(self._dim)
        acc = np.zeros(self._dim)
        for tok in tokenize(mode.prefix + text):
            i, sign = self._bucket(tok)
            acc[i] += sign
        if not acc.any():
            return guard_vector(self._dim)
        return EmbeddingVector(acc)

    def dim(self) -> int:
        return self._dim

    @property
    def provider_id(self) -> str:
        return f"hash:dim={self._dim}:seed={self._seed}"


def hash_embed(text: str, mode: Mode, dim: int, seed: int) -> EmbeddingVector:
    return HashEmbedder(dim=dim, seed=seed).embed(text, mode)


class FileProvider(EmbeddingProvider):
    """Precomputed vectors keyed by exact (mode, text); misses are errors."""

    def __init__(self, path: Path):
        self._path = Path(path)
        self._store: dict[tuple[str, str], EmbeddingVector] = {}
        dim = None
        with open(self._path, encoding="utf-8") as fh:
            for n, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                vec = EmbeddingVector(rec["vector"], flagged=bool(rec.get("flagged", False)))
                if dim is None:
                    dim = vec.dim
                elif vec.dim != dim:
                    raise DimMismatchError(f"{self._path}:{n}: dim {vec.dim} != {dim}")
                self._store[(rec.get("mode", Mode.PASSAGE.value), rec["text"])] = vec
        if dim is None:
            raise EmbeddingError(f"{self._path}: no vectors")
        self._dim = dim

    def embed(self, text: str, mode: Mode) -> EmbeddingVector:
        try:
            return self._store[(mode.value, text)]
        except KeyError:
            raise KeyMissError(f"no stored vector for mode={mode.value} text={text[:60]!r}") from None

    def dim(self) -> int:
        return self._dim

    @property
    def provider_id(self) -> str:
        return f"file:{self._path.name}"


def _cache_key(text: str, mode: Mode) -> str:
    return hashlib.sha256(f"{mode.value}\x00{text}".encode("utf-8")).hexdigest()


class HttpProvider(EmbeddingProvider):
    """Client for an external embedding service, with an on-disk cache.

    POSTs {"text", "mode"} and expects {"vector": [...]}. Failures retry a
    bounded number of times and then raise; there is no silent fallback.
    """

    def __init__(
        self,
        endpoint: str | None = None,
        auth_token: str | None = None,
        cache_path: Path | None = None,
        max_retries: int = 3,
        timeout: float = 30.0,
    ):
        self._endpoint = endpoint or os.environ.get("EMBED_ENDPOINT", "")
        if not self._endpoint:
            raise TransportError("no embedding endpoint configured (EMBED_ENDPOINT)")
        self._auth = auth_token if auth_token is not None else os.environ.get("EMBED_AUTH_TOKEN")
        self._cache_path = Path(cache_path) if cache_path else None
        self._max_retries = max_retries
        self._timeout = timeout
        self._cache: dict[str, EmbeddingVector] = {}
        self._dim: int | None = None
        self._lock = threading.Lock()
        if self._cache_path and self._cache_path.exists():
            with open(self._cache_path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    vec = EmbeddingVector(rec["vector"])
                    self._cache[rec["key_hash"]] = vec
                    self._dim = vec.dim

    def _persist(self, key: str, text: str, vec: EmbeddingVector) -> None:
        if not self._cache_path:
            return
        rec = {"key_hash": key, "text_prefix": text[:40], "vector": vec.values.tolist()}
        line = json.dumps(rec, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        with open(self._cache_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")

    def embed(self, text: str, mode: Mode) -> EmbeddingVector:
        import requests

        key = _cache_key(text, mode)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        headers = {"Content-Type": "application/json"}
        if self._auth:
            headers["Authorization"] = f"Bearer {self._auth}"
        last_exc: Exception | None = None
        for attempt in range(self._max_retries):
            try:
                resp = requests.post(
                    self._endpoint,
                    json={"text": text, "mode": mode.value},
                    headers=headers,
                    timeout=self._timeout,
                )
            except requests.RequestException as exc:
                last_exc = exc
                time.sleep(0.1 * (attempt + 1))
                continue
            if resp.status_code != 200:
                last_exc = TransportError(f"embedding service returned {resp.status_code}")
                time.sleep(0.1 * (attempt + 1))
                continue
            try:
                vector = resp.json()["vector"]
            except (ValueError, KeyError) as exc:
                raise BadResponseError(f"malformed embedding response: {exc}") from exc
            vec = EmbeddingVector(vector)
            with self._lock:
                if self._dim is None:
                    self._dim = vec.dim
                elif vec.dim != self._dim:
                    raise DimMismatchError(f"service dim changed: {vec.dim} != {self._dim}")
                self._cache[key] = vec
                self._persist(key, text, vec)
            return vec
        raise TransportError(f"embedding service unreachable after {self._max_retries} tries: {last_exc}")

    def dim(self) -> int:
        if self._dim is None:
            raise EmbeddingError("dimension unknown until the first embed() call")
        return self._dim

    @property
    def provider_id(self) -> str:
        return f"http:{self._endpoint}"


def file_provider(path: Path) -> FileProvider:
    return FileProvider(path)


def http_provider(endpoint: str, auth: str | None = None, **kwargs) -> HttpProvider:
    return HttpProvider(endpoint=endpoint, auth_token=auth, **kwargs)


@dataclass(frozen=True)
class ClusterAssignment:
    cluster_id: int
    member_ids: tuple[str, ...]
    centroid: EmbeddingVector


def cluster(
    items: Sequence[tuple[str, EmbeddingVector]], threshold: float
) -> list[ClusterAssignment]:
    """Greedy leader clustering over items in id order.

    An item joins the first cluster whose leader is within the cosine
    threshold, else founds its own. Deterministic for a given id set.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    ordered = sorted(items, key=lambda kv: kv[0])
    if not ordered:
        return []
    mat = np.ascontiguousarray(np.vstack([v.values for _, v in ordered]))
    labels = kernels.leader_cluster(mat, threshold)
    groups: dict[int, list[int]] = {}
    for idx, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(idx)
    out = []
    for cid in sorted(groups):
        members = groups[cid]
        centroid = EmbeddingVector(mat[members].mean(axis=0))
        out.append(
            ClusterAssignment(
                cluster_id=cid,
                member_ids=tuple(ordered[m][0] for m in members),
                centroid=centroid,
            )
        )
    return out
