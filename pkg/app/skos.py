"""
SKOS subset importer
Reads N-Triples statements and maps broader/narrower/related, labels and
scheme membership onto a faceted knowledge base
"""

import logging
import re
from collections import Counter, defaultdict
from typing import Optional

import networkx as nx
from pydantic import BaseModel, ConfigDict, ValidationError
from rdflib import Graph, Literal, URIRef
from rdflib.namespace import RDF, SKOS

from app import config
from app.errors import FormatError
from app.models import KnowledgeBase
from app.relations import RelationType
from app.schemas import ID_PATTERN, Concept, Edge, Facet

logger = logging.getLogger(__name__)

_ID = re.compile(ID_PATTERN)

RECOGNIZED = (SKOS.broader, SKOS.narrower, SKOS.related, SKOS.prefLabel, SKOS.altLabel, SKOS.inScheme, RDF.type)


class SkosImport(BaseModel):
    model_config = ConfigDict(frozen=True)

    kb: KnowledgeBase
    skipped: dict[str, int] = {}
    demoted: int = 0

    @property
    def skipped_total(self) -> int:
        return sum(self.skipped.values())


def _local_name(iri: URIRef, number: int) -> str:
    text = str(iri)
    name = re.split(r"[#/]", text.rstrip("#/"))[-1]
    if not _ID.match(name):
        raise FormatError(number, f"cannot derive an identifier from <{text}>")
    return name


def _parse_line(line: str, number: int) -> list[tuple]:
    graph = Graph()
    try:
        graph.parse(data=line, format="nt")
    except Exception as e:
        raise FormatError(number, f"not an N-Triples statement: {e}") from None
    return list(graph)


def _pick_pref(literals: list[Literal], language: str) -> Optional[str]:
    if not literals:
        return None
    for wanted in (language, None):
        matching = sorted(str(lit) for lit in literals if lit.language == wanted)
        if matching:
            return matching[0]
    return sorted(str(lit) for lit in literals)[0]


def _assign_facets(concept_ids: dict[str, URIRef], schemes_of: dict[str, set[str]], edges: set[Edge]) -> dict[str, str]:
    """
    A concept's facet is its smallest scheme. Concepts without a scheme join the
    smallest scheme found in their broader/narrower component, else the default facet.
    """
    hierarchy = nx.Graph()
    hierarchy.add_nodes_from(concept_ids)
    hierarchy.add_edges_from((e.source, e.target) for e in edges if e.rel_type.is_hierarchical)
    facet_of = {}
    for component in nx.connected_components(hierarchy):
        schemed = sorted(min(schemes_of[cid]) for cid in component if schemes_of[cid])
        fallback = schemed[0] if schemed else config.DEFAULT_FACET_ID
        for cid in component:
            schemes = sorted(schemes_of[cid])
            if len(schemes) > 1:
                logger.warning("concept %s is in several schemes (%s); using %s", cid, ", ".join(schemes), schemes[0])
            facet_of[cid] = schemes[0] if schemes else fallback
    return facet_of


def _demote_cross_facet(edges: set[Edge], facet_of: dict[str, str]) -> int:
    """Hierarchy edges between facets become unspecific associations; returns how many."""
    crossing = sorted(
        (e for e in edges if e.rel_type.is_hierarchical and facet_of[e.source] != facet_of[e.target]),
        key=lambda e: e.sort_key,
    )
    for edge in crossing:
        logger.warning(
            "broader %s -> %s crosses facets %s and %s; imported as an unspecific association",
            edge.source, edge.target, facet_of[edge.source], facet_of[edge.target],
        )
        edges.discard(edge)
        edges.add(Edge(source=edge.source, target=edge.target, rel_type=RelationType.UNSPECIFIC_ASSOCIATION))
    return len(crossing)


def import_skos_subset(text: str, *, language: Optional[str] = None) -> SkosImport:
    """
    Import the SKOS subset: broader/narrower become generic hierarchy edges
    (child -> parent, stored once), related becomes an unspecific association,
    prefLabel/altLabel become labels and inScheme picks the facet.
    Unrecognized predicates are counted, not rejected.
    """
    language = language or config.SKOS_LANGUAGE
    concept_ids: dict[str, URIRef] = {}
    scheme_ids: dict[str, URIRef] = {}
    pref: dict[str, list[Literal]] = defaultdict(list)
    alt: dict[str, set[str]] = defaultdict(set)
    schemes_of: dict[str, set[str]] = defaultdict(set)
    edges: set[Edge] = set()
    skipped: Counter = Counter()
    first_line: dict[str, int] = {}

    def register(table: dict[str, URIRef], iri, number: int) -> str:
        if not isinstance(iri, URIRef):
            raise FormatError(number, f"expected an IRI, got {iri!r}")
        name = _local_name(iri, number)
        if table.setdefault(name, iri) != iri:
            raise FormatError(number, f"<{iri}> and <{table[name]}> share the identifier {name}")
        if table is concept_ids:
            first_line.setdefault(name, number)
        return name

    statements = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        statements.extend((number, triple) for triple in _parse_line(line, number))

    # schemes first, so labels on them are not mistaken for concept labels
    for number, (subject, predicate, obj) in statements:
        if predicate == SKOS.inScheme or (predicate == RDF.type and obj == SKOS.ConceptScheme):
            register(scheme_ids, obj if predicate == SKOS.inScheme else subject, number)

    scheme_iris = set(scheme_ids.values())
    scheme_labels: dict[str, list[Literal]] = defaultdict(list)

    for number, (subject, predicate, obj) in statements:
        if predicate not in RECOGNIZED:
            skipped[str(predicate)] += 1
            continue
        if subject in scheme_iris:
            if predicate == SKOS.prefLabel and isinstance(obj, Literal):
                scheme_labels[_local_name(subject, number)].append(obj)
            elif predicate != RDF.type:
                skipped[str(predicate)] += 1
            continue
        if predicate == RDF.type:
            if obj == SKOS.Concept:
                register(concept_ids, subject, number)
            elif obj != SKOS.ConceptScheme:
                skipped[str(predicate)] += 1
            continue
        cid = register(concept_ids, subject, number)
        if predicate in (SKOS.prefLabel, SKOS.altLabel):
            if not isinstance(obj, Literal):
                raise FormatError(number, "labels must be literals")
            if predicate == SKOS.prefLabel:
                pref[cid].append(obj)
            elif obj.language in (language, None):
                if "|" in obj or '"' in obj:
                    logger.warning("dropping alt label %r of %s: it cannot be written to a KOS file", str(obj), cid)
                else:
                    alt[cid].add(str(obj))
        elif predicate == SKOS.inScheme:
            schemes_of[cid].add(_local_name(obj, number))
        else:
            other = register(concept_ids, obj, number)
            try:
                if predicate == SKOS.broader:
                    edges.add(Edge(source=cid, target=other, rel_type=RelationType.HIER_GENERIC))
                elif predicate == SKOS.narrower:
                    edges.add(Edge(source=other, target=cid, rel_type=RelationType.HIER_GENERIC))
                else:
                    edges.add(Edge(source=cid, target=other, rel_type=RelationType.UNSPECIFIC_ASSOCIATION))
            except ValidationError as e:
                raise FormatError(number, e.errors()[0]["msg"]) from None

    facets = {
        sid: Facet(id=sid, label=_pick_pref(scheme_labels[sid], language) or sid)
        for sid in scheme_ids
    }
    facet_of = _assign_facets(concept_ids, schemes_of, edges)
    demoted = _demote_cross_facet(edges, facet_of)

    concepts = {}
    taken: dict[str, set[str]] = defaultdict(set)
    for cid in sorted(concept_ids):
        facet = facet_of[cid]
        if facet not in facets:
            facets[facet] = Facet(id=facet, label="Default")
        pref_label = _pick_pref(pref[cid], language) or cid
        alt_labels = set(alt[cid])
        if pref_label in taken[facet]:
            logger.warning('prefLabel "%s" of %s is already used in facet %s; keeping it as an alt label', pref_label, cid, facet)
            alt_labels.add(pref_label)
            pref_label, suffix = cid, 2
            while pref_label in taken[facet]:
                pref_label, suffix = f"{cid} {suffix}", suffix + 1
        taken[facet].add(pref_label)
        try:
            concepts[cid] = Concept(
                id=cid, facet=facet, pref_label=pref_label, alt_labels=frozenset(alt_labels - {pref_label})
            )
        except ValidationError as e:
            raise FormatError(first_line[cid], f"concept {cid}: {e.errors()[0]['msg']}") from None

    for predicate, count in sorted(skipped.items()):
        logger.warning("skipped %d statements with predicate <%s>", count, predicate)
    kb = KnowledgeBase(facets=facets, concepts=concepts, edges=frozenset(edges))
    logger.info("imported SKOS subset: %d facets, %d concepts, %d edges", len(facets), len(concepts), len(edges))
    return SkosImport(kb=kb, skipped=dict(sorted(skipped.items())), demoted=demoted)
