from pathlib import Path

import pytest

from app.formats import parse_corpus, parse_kos
from app.models import KnowledgeBase
from app.retrieval import Corpus

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def songbird_kb() -> KnowledgeBase:
    return parse_kos((FIXTURES / "songbird.kos").read_text(encoding="utf-8"))


@pytest.fixture
def songbird_corpus() -> Corpus:
    return parse_corpus((FIXTURES / "songbird.docs").read_text(encoding="utf-8"))


@pytest.fixture
def redundant_kb() -> KnowledgeBase:
    """Songbirds with the migratory instinct attached to blackcap as well as warblers."""
    return parse_kos((FIXTURES / "songbird_redundant.kos").read_text(encoding="utf-8"))


@pytest.fixture
def leaf_attached_kb() -> KnowledgeBase:
    """Warblers carrying a relation that each of its species repeats, one level deeper included."""
    return parse_kos((FIXTURES / "songbird_leaves.kos").read_text(encoding="utf-8"))
