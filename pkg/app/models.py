"""
Knowledge base model for faceted knowledge organization
Holds facets, concepts and typed edges; provides structural validation and lookups
"""

import logging
from collections import defaultdict
from typing import Iterable

import networkx as nx
from pydantic import BaseModel, ConfigDict, PrivateAttr

from app.errors import Ambiguous, NotFound
from app.schemas import BOTH_KINDS, Concept, Diagnostic, DiagnosticCode, Edge, Facet, HierKind, Severity

logger = logging.getLogger(__name__)


class KnowledgeBase(BaseModel):
    """
    Immutable faceted knowledge base.
    Endpoints may dangle (validate reports them); lookup indexes skip such edges.
    """
    model_config = ConfigDict(frozen=True)

    facets: dict[str, Facet] = {}
    concepts: dict[str, Concept] = {}
    edges: frozenset[Edge] = frozenset()

    # child -> parent graphs over every concept, one per non-empty set of kinds
    _hierarchy: dict[frozenset[HierKind], nx.DiGraph] = PrivateAttr(default_factory=dict)
    _outgoing: dict[str, tuple[Edge, ...]] = PrivateAttr(default_factory=dict)
    _incoming: dict[str, tuple[Edge, ...]] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        graphs = {kind: nx.DiGraph() for kind in HierKind}
        for graph in graphs.values():
            graph.add_nodes_from(self.concepts)
        outgoing: dict[str, list[Edge]] = defaultdict(list)
        incoming: dict[str, list[Edge]] = defaultdict(list)
        for edge in self.edges:
            if edge.source not in self.concepts or edge.target not in self.concepts:
                continue
            outgoing[edge.source].append(edge)
            incoming[edge.target].append(edge)
            if edge.rel_type.is_hierarchical:
                graphs[HierKind.of(edge.rel_type)].add_edge(edge.source, edge.target)
        self._hierarchy = {frozenset({kind}): graph for kind, graph in graphs.items()}
        self._hierarchy[BOTH_KINDS] = nx.compose_all(graphs.values())
        self._outgoing = {
            cid: tuple(sorted(edges, key=lambda e: (e.target, e.rel_type.token)))
            for cid, edges in outgoing.items()
        }
        self._incoming = {
            cid: tuple(sorted(edges, key=lambda e: (e.source, e.rel_type.token)))
            for cid, edges in incoming.items()
        }

    @classmethod
    def build(
        cls,
        facets: Iterable[Facet] = (),
        concepts: Iterable[Concept] = (),
        edges: Iterable[Edge] = (),
    ) -> "KnowledgeBase":
        return cls(
            facets={f.id: f for f in facets},
            concepts={c.id: c for c in concepts},
            edges=frozenset(edges),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return (self.facets, self.concepts, self.edges) == (other.facets, other.concepts, other.edges)

    def concept(self, cid: str) -> Concept:
        try:
            return self.concepts[cid]
        except KeyError:
            raise NotFound(f"unknown concept {cid!r}") from None

    def require(self, cid: str) -> str:
        self.concept(cid)
        return cid

    def hierarchy(self, kinds: Iterable[HierKind] = BOTH_KINDS) -> nx.DiGraph:
        """Child -> parent graph over all concepts along the given hierarchy kinds."""
        kinds = frozenset(kinds)
        if not kinds:
            raise ValueError("at least one hierarchy kind is required")
        return self._hierarchy[kinds]

    def parents(self, cid: str, kind: HierKind) -> frozenset[str]:
        graph = self._hierarchy[frozenset({kind})]
        return frozenset(graph.successors(cid)) if cid in graph else frozenset()

    def children(self, cid: str, kind: HierKind) -> frozenset[str]:
        graph = self._hierarchy[frozenset({kind})]
        return frozenset(graph.predecessors(cid)) if cid in graph else frozenset()

    def outgoing(self, cid: str) -> tuple[Edge, ...]:
        """Resolved edges leaving cid, ordered by (target, type token)."""
        return self._outgoing.get(cid, ())

    def incoming(self, cid: str) -> tuple[Edge, ...]:
        """Resolved edges arriving at cid, ordered by (source, type token)."""
        return self._incoming.get(cid, ())

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: e.sort_key)


def parents_of(kb: KnowledgeBase, c: str, kind: HierKind) -> frozenset[str]:
    """Direct parents of c along hierarchical edges of one kind."""
    return kb.parents(kb.require(c), kind)


def children_of(kb: KnowledgeBase, c: str, kind: HierKind) -> frozenset[str]:
    """Direct children of c along hierarchical edges of one kind."""
    return kb.children(kb.require(c), kind)


def resolve_ref(kb: KnowledgeBase, ref: str) -> str:
    """
    Resolve a concept reference: an id, or a (quoted) preferred/alternative label.
    Raises NotFound or Ambiguous.
    """
    if ref in kb.concepts:
        return ref
    label = ref[1:-1] if len(ref) >= 2 and ref.startswith('"') and ref.endswith('"') else ref
    matches = sorted(c.id for c in kb.concepts.values() if label in c.labels)
    if not matches:
        raise NotFound(f"no concept with id or label {ref}")
    if len(matches) > 1:
        raise Ambiguous(ref, matches)
    return matches[0]


def validate(kb: KnowledgeBase) -> list[Diagnostic]:
    """
    Structural checks. Errors: E_CYCLE, E_DANGLING, E_XFACET_HIER, E_DUP_PREF.
    Warnings: W_POLYHIER, W_MIXED_DIM. Empty list means valid.
    """
    diagnostics: list[Diagnostic] = []

    for concept in kb.concepts.values():
        if concept.facet not in kb.facets:
            diagnostics.append(Diagnostic.of(
                DiagnosticCode.E_DANGLING,
                f"concept {concept.id} refers to undeclared facet {concept.facet}",
                concept.id, concept.facet,
            ))

    resolved: list[Edge] = []
    for edge in kb.edges:
        missing = [cid for cid in (edge.source, edge.target) if cid not in kb.concepts]
        for cid in dict.fromkeys(missing):
            diagnostics.append(Diagnostic.of(
                DiagnosticCode.E_DANGLING,
                f"edge {edge} refers to undeclared concept {cid}",
                edge.source, edge.target,
            ))
        if not missing:
            resolved.append(edge)

    hierarchies = {kind: nx.DiGraph() for kind in HierKind}
    for edge in resolved:
        if not edge.rel_type.is_hierarchical:
            continue
        source_facet = kb.concepts[edge.source].facet
        target_facet = kb.concepts[edge.target].facet
        if source_facet != target_facet:
            diagnostics.append(Diagnostic.of(
                DiagnosticCode.E_XFACET_HIER,
                f"{edge.rel_type.token} edge crosses facets {source_facet} -> {target_facet}",
                edge.source, edge.target,
            ))
            continue
        hierarchies[HierKind.of(edge.rel_type)].add_edge(edge.source, edge.target)

    for kind, graph in hierarchies.items():
        for component in nx.strongly_connected_components(graph):
            if len(component) < 2:
                continue
            members = sorted(component)
            facet = kb.concepts[members[0]].facet
            diagnostics.append(Diagnostic.of(
                DiagnosticCode.E_CYCLE,
                f"{kind.value} hierarchy cycle in facet {facet}",
                *members,
            ))

    by_label: dict[tuple[str, str], list[str]] = defaultdict(list)
    for concept in kb.concepts.values():
        by_label[(concept.facet, concept.pref_label)].append(concept.id)
    for (facet, label), ids in by_label.items():
        if len(ids) > 1:
            diagnostics.append(Diagnostic.of(
                DiagnosticCode.E_DUP_PREF,
                f'prefLabel "{label}" repeated in facet {facet}',
                *sorted(ids),
            ))

    for cid in kb.concepts:
        kinds_with_parents = []
        for kind in HierKind:
            parents = kb.parents(cid, kind)
            if parents:
                kinds_with_parents.append(kind)
            if len(parents) > 1:
                diagnostics.append(Diagnostic.of(
                    DiagnosticCode.W_POLYHIER,
                    f"{len(parents)} {kind.value} parents",
                    cid, *sorted(parents),
                ))
        if len(kinds_with_parents) == len(HierKind):
            diagnostics.append(Diagnostic.of(
                DiagnosticCode.W_MIXED_DIM,
                "both generic and partitive parents",
                cid,
            ))

    diagnostics.sort(key=lambda d: d.sort_key)
    logger.debug("validated knowledge base: %d diagnostics", len(diagnostics))
    return diagnostics


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)

