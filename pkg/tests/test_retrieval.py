import pytest

from app.errors import Ambiguous, BadRelType, InvalidKb, NotFound
from app.query import parse_query
from app.retrieval import Corpus, eval_query, rebuild_index, unresolved_terms
from app.schemas import Document
from kbgen import kos


@pytest.mark.parametrize("query,docs,matched", [
    ("songbirds", ("d1", "d2", "d3", "d4"), ("blackcap", "nightingale", "songbirds", "titmice")),
    ('"Singing birds"', ("d1", "d2", "d3", "d4"), ("blackcap", "nightingale", "songbirds", "titmice")),
    ("=songbirds", ("d4",), ("songbirds",)),
    ("songbirds AND europe", ("d3",), ("blackcap", "europe")),
    ("songbirds ANDNOT europe", ("d1", "d2", "d4"), ("nightingale", "songbirds", "titmice")),
    ("titmice OR nightingale", ("d1", "d2"), ("nightingale", "titmice")),
    ("warblers", ("d3",), ("blackcap",)),
    ("migration", (), ()),
    ("songbirds WITH [assoc: mig_instinct]", ("d2", "d3"), ("blackcap", "nightingale")),
    ("songbirds WITH [assoc: migration]", ("d2", "d3"), ("blackcap", "nightingale")),
    ("songbirds WITH [assoc: =migration]", (), ()),
    ("songbirds WITH [causality: mig_instinct]", (), ()),
    ("=songbirds WITH [assoc: mig_instinct]", ("d2", "d3"), ("blackcap", "nightingale")),
])
def test_songbird_queries(songbird_kb, songbird_corpus, query, docs, matched):
    result = eval_query(songbird_kb, songbird_corpus, query)
    assert result.doc_ids == docs
    assert result.matched_terms == matched


def test_constraint_concepts_are_never_search_terms(songbird_kb, songbird_corpus):
    assert "mig_instinct" not in songbird_corpus.index
    result = eval_query(songbird_kb, songbird_corpus, parse_query("songbirds WITH [assoc: mig_instinct]"))
    assert "d4" not in result.doc_ids


def test_query_errors(songbird_kb, songbird_corpus):
    with pytest.raises(NotFound):
        eval_query(songbird_kb, songbird_corpus, "penguins")
    with pytest.raises(BadRelType):
        eval_query(songbird_kb, songbird_corpus, "songbirds WITH [generic: migration]")


def test_ambiguous_label_in_query():
    kb = kos("""
        facet A "A"
        facet B "B"
        concept crane_bird A pref "Crane"
        concept crane_machine B pref "Crane"
    """)
    with pytest.raises(Ambiguous):
        eval_query(kb, Corpus(), '"Crane"')


def test_invalid_knowledge_base(songbird_corpus):
    kb = kos("""
        facet A "A"
        concept a A pref "a"
        concept b A pref "b"
        broader a b partitive
        broader b a partitive
    """)
    with pytest.raises(InvalidKb):
        eval_query(kb, songbird_corpus, "a")


def test_index_is_rebuilt_from_documents():
    corpus = Corpus.from_documents([
        Document(id="d1", title="One", terms=frozenset({"a", "b"})),
        Document(id="d2", title="Two", terms=frozenset({"b"})),
    ])
    assert corpus.index == {"a": frozenset({"d1"}), "b": frozenset({"d1", "d2"})}
    stale = Corpus(documents=corpus.documents, index={"a": frozenset({"d9"})})
    assert rebuild_index(stale).index == corpus.index
    assert rebuild_index(corpus) == corpus


def test_unknown_index_terms_are_refused(songbird_kb):
    corpus = Corpus.from_documents([
        Document(id="d1", title="Robins", terms=frozenset({"robins", "titmice"})),
    ])
    assert unresolved_terms(songbird_kb, corpus) == ["robins"]
    with pytest.raises(NotFound) as info:
        eval_query(songbird_kb, corpus, "songbirds")
    assert "robins" in info.value.detail
    assert unresolved_terms(songbird_kb, rebuild_index(Corpus())) == []


def test_empty_corpus():
    corpus = rebuild_index(Corpus())
    assert corpus.index == {}
    assert rebuild_index(corpus) == corpus


def test_rebuilt_fixture_index(songbird_corpus):
    assert songbird_corpus.index["titmice"] == {"d1"}
    assert rebuild_index(rebuild_index(songbird_corpus)) == songbird_corpus


def test_with_later_earlier_constraint():
    kb = kos("""
        facet H "History"
        concept ages H pref "Ages"
        concept bronze H pref "Bronze Age"
        concept iron H pref "Iron Age"
        broader bronze ages generic
        broader iron ages generic
        before bronze iron
    """)
    corpus = Corpus.from_documents([
        Document(id="d1", title="Bronze tools", terms=frozenset({"bronze"})),
        Document(id="d2", title="Iron smelting", terms=frozenset({"iron"})),
    ])
    assert eval_query(kb, corpus, "ages WITH [later_earlier: bronze]").doc_ids == ("d2",)
    assert eval_query(kb, corpus, "ages WITH [earlier_later: iron]").doc_ids == ("d1",)
