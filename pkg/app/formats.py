"""
Line-oriented text formats for knowledge bases (KOS files) and document corpora
Parsing with line-numbered errors and canonical, diff-friendly serialization
"""

import logging
import re
from typing import Iterator

from pydantic import ValidationError

from app.errors import DuplicateId, FormatError
from app.models import KnowledgeBase
from app.relations import RelationType
from app.retrieval import Corpus
from app.schemas import Concept, Document, Edge, Facet, HierKind

logger = logging.getLogger(__name__)

FACET_LINE = re.compile(r'^facet\s+(?P<id>\S+)\s+"(?P<label>[^"]*)"$')
CONCEPT_LINE = re.compile(
    r'^concept\s+(?P<id>\S+)\s+(?P<facet>\S+)\s+pref\s+"(?P<pref>[^"]*)"'
    r'(?:\s+alt\s+"(?P<alt>[^"]*)")?$'
)
BROADER_LINE = re.compile(r"^broader\s+(?P<child>\S+)\s+(?P<parent>\S+)\s+(?P<kind>\S+)$")
BEFORE_LINE = re.compile(r"^before\s+(?P<earlier>\S+)\s+(?P<later>\S+)$")
REL_LINE = re.compile(r"^rel\s+(?P<source>\S+)\s+(?P<target>\S+)\s+(?P<type>\S+)$")
DOC_LINE = re.compile(r'^doc\s+(?P<id>\S+)\s+title="(?P<title>[^"]*)"\s+terms=(?P<terms>\S*)$')


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _build(number: int, model, **fields):
    try:
        return model(**fields)
    except ValidationError as e:
        problems = "; ".join(err["msg"] for err in e.errors())
        raise FormatError(number, f"invalid {model.__name__.lower()}: {problems}") from None


def _parse_edge(number: int, line: str) -> Edge:
    if match := BROADER_LINE.match(line):
        try:
            kind = HierKind(match["kind"])
        except ValueError:
            raise FormatError(number, f"unknown hierarchy kind {match['kind']!r}") from None
        return _build(number, Edge, source=match["child"], target=match["parent"], rel_type=kind.relation)
    if match := BEFORE_LINE.match(line):
        return _build(number, Edge, source=match["earlier"], target=match["later"], rel_type=RelationType.EARLIER_LATER)
    if match := REL_LINE.match(line):
        try:
            rel_type = RelationType.parse(match["type"])
        except ValueError as e:
            raise FormatError(number, str(e)) from None
        if not rel_type.is_associative:
            raise FormatError(number, f"rel lines take an associative type, got {rel_type.token!r}")
        return _build(number, Edge, source=match["source"], target=match["target"], rel_type=rel_type)
    raise FormatError(number, f"unrecognized line: {line}")


def parse_kos(text: str) -> KnowledgeBase:
    """
    Parse a KOS file. Undeclared ids in edges are kept and reported by validate
    as E_DANGLING; malformed lines raise FormatError, repeated ids DuplicateId.
    """
    facets: dict[str, Facet] = {}
    concepts: dict[str, Concept] = {}
    edges: dict[Edge, int] = {}

    for number, line in _content_lines(text):
        keyword = line.split(None, 1)[0]
        if keyword == "facet":
            match = FACET_LINE.match(line)
            if not match:
                raise FormatError(number, 'expected: facet <id> "<label>"')
            if match["id"] in facets:
                raise DuplicateId(number, f"facet {match['id']} declared twice")
            facets[match["id"]] = _build(number, Facet, id=match["id"], label=match["label"])
        elif keyword == "concept":
            match = CONCEPT_LINE.match(line)
            if not match:
                raise FormatError(number, 'expected: concept <id> <facet-id> pref "<label>" [alt "<label>|..."]')
            if match["id"] in concepts:
                raise DuplicateId(number, f"concept {match['id']} declared twice")
            alt = frozenset(label for label in (match["alt"] or "").split("|") if label)
            concepts[match["id"]] = _build(
                number, Concept, id=match["id"], facet=match["facet"], pref_label=match["pref"], alt_labels=alt
            )
        elif keyword in ("broader", "before", "rel"):
            edge = _parse_edge(number, line)
            if edge in edges:
                raise DuplicateId(number, f"edge {edge} already declared on line {edges[edge]}")
            edges[edge] = number
        else:
            raise FormatError(number, f"unknown line keyword {keyword!r}")

    kb = KnowledgeBase(facets=facets, concepts=concepts, edges=frozenset(edges))
    logger.info("parsed knowledge base: %d facets, %d concepts, %d edges", len(facets), len(concepts), len(edges))
    return kb


def _edge_line(edge: Edge) -> str:
    if edge.rel_type.is_hierarchical:
        return f"broader {edge.source} {edge.target} {edge.rel_type.token}"
    if edge.rel_type is RelationType.EARLIER_LATER:
        return f"before {edge.source} {edge.target}"
    return f"rel {edge.source} {edge.target} {edge.rel_type.token}"


def serialize_kos(kb: KnowledgeBase) -> str:
    """Canonical text: facets by id, concepts by id, edges by (type token, source, target)."""
    lines = [f'facet {f.id} "{f.label}"' for f in sorted(kb.facets.values(), key=lambda f: f.id)]
    for concept in sorted(kb.concepts.values(), key=lambda c: c.id):
        line = f'concept {concept.id} {concept.facet} pref "{concept.pref_label}"'
        if concept.alt_labels:
            line += f' alt "{"|".join(sorted(concept.alt_labels))}"'
        lines.append(line)
    lines.extend(_edge_line(edge) for edge in kb.sorted_edges())
    return "".join(line + "\n" for line in lines)


def parse_corpus(text: str) -> Corpus:
    """Parse `doc <id> title="<string>" terms=<id>{,<id>}` lines and build the index."""
    documents: dict[str, Document] = {}
    for number, line in _content_lines(text):
        match = DOC_LINE.match(line)
        if not match:
            raise FormatError(number, 'expected: doc <id> title="<string>" terms=<id>{,<id>}')
        terms = match["terms"].split(",") if match["terms"] else []
        if not terms or any(not term for term in terms):
            raise FormatError(number, f"document {match['id']} needs at least one term and no empty terms")
        if match["id"] in documents:
            raise DuplicateId(number, f"document {match['id']} declared twice")
        documents[match["id"]] = _build(number, Document, id=match["id"], title=match["title"], terms=frozenset(terms))
    logger.info("parsed corpus: %d documents", len(documents))
    return Corpus.from_documents(documents.values())


def serialize_corpus(corpus: Corpus) -> str:
    lines = [
        f'doc {doc.id} title="{doc.title}" terms={",".join(sorted(doc.terms))}'
        for doc in sorted(corpus.documents.values(), key=lambda d: d.id)
    ]
    return "".join(line + "\n" for line in lines)
