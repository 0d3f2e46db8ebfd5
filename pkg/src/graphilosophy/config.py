"""Run configuration: key=value file, then flags, then environment.

Later sources override earlier ones, in exactly that order. Every output
file header embeds the effective configuration so a run can be replayed.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

ENV_BIND = "GRAPHILOSOPHY_BIND"
ENV_EMBED_ENDPOINT = "EMBED_ENDPOINT"
ENV_EMBED_AUTH = "EMBED_AUTH_TOKEN"

# regexes in the header_patterns value are separated by ';;'
PATTERN_SEP = ";;"


class ConfigError(Exception):
    pass


@dataclass
class Config:
    corpus_dir: str = "fixtures/mini"
    domain_name: str = "Philosophy"
    school_name: str = "Confucianism"
    embedder: str = "hash"  # hash | file:<path> | http
    embed_dim: int = 256
    embed_seed: int = 42
    chunk_window: int = 3
    chunk_theta: float = 0.3
    chunk_max_tokens: int = 512
    chunk_overlap: int = 100
    chunk_min_chars: int = 256
    chunk_coverage_min: float = 0.95
    sim_threshold: float = 0.75
    top_k: int = 5
    sim_min: float = 0.75
    cluster_threshold: float = 0.75
    seed: int = 42
    bind: str = "127.0.0.1:8750"
    cors_origins: str = "*"
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    rrf_k: int = 60
    contextualize_whole_corpus: bool = False
    header_patterns: str = ""

    def patterns(self) -> tuple[str, ...]:
        if not self.header_patterns:
            return ()
        return tuple(p for p in self.header_patterns.split(PATTERN_SEP) if p)

    def as_dict(self) -> dict:
        return asdict(self)


_FIELD_TYPES = {f.name: f.type for f in fields(Config)}


def _coerce(name: str, raw: str):
    typ = _FIELD_TYPES.get(name)
    if typ in ("int",):
        return int(raw)
    if typ in ("float",):
        return float(raw)
    if typ in ("bool",):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return raw


def load_config(path: Path | None = None) -> Config:
    """Parse a flat `key = value` text file; unknown keys are errors."""
    cfg = Config()
    if path is None:
        return cfg
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key = value")
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        try:
            setattr(cfg, key, _coerce(key, raw.strip()))
        except ValueError as exc:
            raise ConfigError(f"{path}:{n}: bad value for {key!r}: {exc}") from exc
    return cfg


def apply_env(cfg: Config) -> Config:
    """Environment wins last (it is the deploy-time override)."""
    bind = os.environ.get(ENV_BIND)
    if bind:
        cfg.bind = bind
    return cfg


def make_embedder(cfg: Config):
    from .embedding import FileProvider, HashEmbedder, HttpProvider

    spec = cfg.embedder
    if spec == "hash":
        return HashEmbedder(dim=cfg.embed_dim, seed=cfg.embed_seed)
    if spec.startswith("file:"):
        return FileProvider(Path(spec[len("file:") :]))
    if spec == "http":
        return HttpProvider(
            endpoint=os.environ.get(ENV_EMBED_ENDPOINT),
            auth_token=os.environ.get(ENV_EMBED_AUTH),
        )
    raise ConfigError(f"unknown embedder {spec!r} (expected hash | file:<path> | http)")
