import sys
from pathlib import Path

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
MINI_CORPUS = REPO_ROOT / "fixtures" / "mini"

sys.path.insert(0, str(REPO_ROOT / "src"))

from graphilosophy.config import Config, make_embedder  # noqa: E402
from graphilosophy.corpus import load_corpus  # noqa: E402
from graphilosophy.embedding import EmbeddingVector, HashEmbedder, Mode  # noqa: E402
from graphilosophy.graph import build_graph  # noqa: E402


class StubEmbedder:
    """Test embedder returning preassigned vectors by text, hash fallback."""

    def __init__(self, mapping=None, dim=8):
        self._dim = dim
        self._mapping = {}
        for text, vec in (mapping or {}).items():
            self._mapping[text] = EmbeddingVector(np.asarray(vec, dtype=float))
        self._fallback = HashEmbedder(dim=dim, seed=99)

    def embed(self, text, mode):
        if text in self._mapping:
            return self._mapping[text]
        return self._fallback.embed(text, mode)

    def dim(self):
        return self._dim

    @property
    def provider_id(self):
        return "stub"


def basis(dim, i):
    v = np.zeros(dim)
    v[i] = 1.0
    return v


@pytest.fixture(scope="session")
def mini_corpus():
    return load_corpus(MINI_CORPUS)


@pytest.fixture(scope="session")
def hash_embedder():
    return HashEmbedder(dim=256, seed=42)


@pytest.fixture(scope="session")
def mini_build(mini_corpus):
    return build_graph(mini_corpus, make_embedder(Config()))


@pytest.fixture(scope="session")
def mini_graph(mini_build):
    return mini_build.graph


@pytest.fixture
def passage():
    return Mode.PASSAGE


_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE_RESULTS.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{outcome}] {name}")
