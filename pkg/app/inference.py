"""
Inference over faceted knowledge bases
Hierarchical closures, downward inheritance of typed relations, constrained
selection across facets, materialized inferences and the redundant-edge lint
"""

import logging
from collections import deque
from typing import Callable, Hashable, Iterable, Iterator, Optional

import networkx as nx

from app import config
from app.errors import BadRelType, InvalidKb
from app.models import KnowledgeBase, has_errors, validate
from app.relations import RelationType, TransitivityStatus, compose
from app.schemas import (
    BOTH_KINDS,
    ConceptSet,
    Diagnostic,
    DiagnosticCode,
    Edge,
    HierKind,
    InferredEdge,
    Severity,
    concept_set,
)

logger = logging.getLogger(__name__)

Step = Callable[[Hashable], Iterator[tuple[Edge, Hashable]]]

# phases of an inheritance walk
_HIERARCHY, _LINKED, _LINKED_HIERARCHY = 0, 1, 2


def inheritance_kinds(inherit_partitive: Optional[bool] = None) -> frozenset[HierKind]:
    """Hierarchy kinds that typed relations are inherited through."""
    if inherit_partitive is None:
        inherit_partitive = config.INHERIT_PARTITIVE
    return BOTH_KINDS if inherit_partitive else frozenset({HierKind.GENERIC})


def _shortest_walks(start: Hashable, step: Step) -> dict[Hashable, tuple[Edge, ...]]:
    """Breadth-first search; each state keeps the first (shortest) walk that reached it."""
    walks: dict[Hashable, tuple[Edge, ...]] = {start: ()}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for edge, nxt in step(state):
            if nxt not in walks:
                walks[nxt] = walks[state] + (edge,)
                queue.append(nxt)
    return walks


def _closure(kb: KnowledgeBase, c: str, kinds: Iterable[HierKind], upward: bool, include_self: bool) -> ConceptSet:
    graph = kb.hierarchy(kinds)
    kb.require(c)
    # edges point from child to parent
    reached = nx.descendants(graph, c) if upward else nx.ancestors(graph, c)
    if include_self:
        reached.add(c)
    return concept_set(reached)


def descendants(kb: KnowledgeBase, c: str, kinds: Iterable[HierKind] = BOTH_KINDS, include_self: bool = True) -> ConceptSet:
    """Reflexive-transitive closure below c along the given hierarchy kinds."""
    return _closure(kb, c, kinds, upward=False, include_self=include_self)


def ancestors(kb: KnowledgeBase, c: str, kinds: Iterable[HierKind] = BOTH_KINDS, include_self: bool = True) -> ConceptSet:
    """Reflexive-transitive closure above c along the given hierarchy kinds."""
    return _closure(kb, c, kinds, upward=True, include_self=include_self)


def _check_constraint_type(rel_type: RelationType) -> None:
    if not (rel_type.is_associative or rel_type.is_chronological):
        raise BadRelType(f"{rel_type.token} cannot constrain a selection; use an associative or chronological type")


def related_via(
    kb: KnowledgeBase,
    c: str,
    rel_type: RelationType,
    expand_target: bool = False,
    *,
    inherit_partitive: Optional[bool] = None,
) -> ConceptSet:
    """
    Targets of rel_type edges held by c or inherited from any of its ancestors.
    Inheritance runs downward only: an edge on a child never reaches its parent.
    later_earlier is answered from stored earlier_later edges read backwards.
    """
    _check_constraint_type(rel_type)
    holders = ancestors(kb, c, inheritance_kinds(inherit_partitive), include_self=True)
    if rel_type is RelationType.LATER_EARLIER:
        targets = {
            edge.source
            for holder in holders
            for edge in kb.incoming(holder)
            if edge.rel_type is RelationType.EARLIER_LATER
        }
    else:
        targets = {
            edge.target
            for holder in holders
            for edge in kb.outgoing(holder)
            if edge.rel_type is rel_type
        }
    if expand_target:
        targets = {d for t in targets for d in descendants(kb, t, BOTH_KINDS, include_self=True)}
    return concept_set(targets)


def select_constrained(
    kb: KnowledgeBase,
    under: str,
    rel_type: RelationType,
    target: str,
    *,
    exact_target: bool = False,
    inherit_partitive: Optional[bool] = None,
) -> ConceptSet:
    """
    Concepts strictly below `under` that are related (directly or by inheritance)
    to `target` or to anything below it. Neither `under` nor `target` is returned
    for its own sake.
    """
    _check_constraint_type(rel_type)
    kb.require(target)
    wanted = {target} if exact_target else set(descendants(kb, target, BOTH_KINDS, include_self=True))
    selected = [
        candidate
        for candidate in descendants(kb, under, BOTH_KINDS, include_self=False)
        if wanted.intersection(related_via(kb, candidate, rel_type, inherit_partitive=inherit_partitive))
    ]
    logger.debug("selected %d concepts under %s via %s", len(selected), under, rel_type.token)
    return concept_set(selected)


def require_valid(kb: KnowledgeBase) -> None:
    diagnostics = validate(kb)
    if has_errors(diagnostics):
        first = next(d for d in diagnostics if d.severity is Severity.ERROR)
        raise InvalidKb(f"knowledge base has structural errors, first: {first.format_line()}")


def _hierarchy_step(kb: KnowledgeBase, relation: RelationType) -> Step:
    def step(node):
        for edge in kb.outgoing(node):
            if edge.rel_type is relation:
                yield edge, edge.target
    return step


def _typed_step(kb: KnowledgeBase, rel_type: RelationType, kinds: frozenset[HierKind], max_links: int) -> Step:
    """
    Walks of the form (hierarchy* rel)+ starting at a concept: climb to an
    ancestor, take its rel edge, and, for chainable types, continue from there.
    """
    structural = {kind.relation for kind in kinds}
    chainable = compose(rel_type, rel_type).status is TransitivityStatus.GIVEN

    def step(state):
        node, phase, links = state
        if phase != _HIERARCHY and not chainable:
            return
        for edge in kb.outgoing(node):
            if edge.rel_type in structural:
                yield edge, (edge.target, _HIERARCHY if phase == _HIERARCHY else _LINKED_HIERARCHY, links)
            elif edge.rel_type is rel_type:
                if links >= max_links:
                    logger.debug("chain cap %d reached at %s", max_links, node)
                    continue
                yield edge, (edge.target, _LINKED, links + 1)
    return step


def materialize_inferences(
    kb: KnowledgeBase,
    *,
    inherit_partitive: Optional[bool] = None,
    max_chain_length: Optional[int] = None,
) -> list[InferredEdge]:
    """
    All inferred edges, direct edges included as their own witness:
    hierarchical closure per kind, chronological closure, downward inheritance of
    every typed relation, and same-type chaining where the composition is transitive.
    """
    require_valid(kb)
    kinds = inheritance_kinds(inherit_partitive)
    max_links = config.MAX_CHAIN_LENGTH if max_chain_length is None else max_chain_length
    present = {edge.rel_type for edge in kb.edges}
    inferred: list[InferredEdge] = []

    for source in sorted(kb.concepts):
        for relation in (RelationType.HIER_GENERIC, RelationType.HIER_PARTITIVE, RelationType.EARLIER_LATER):
            if relation not in present:
                continue
            walks = _shortest_walks(source, _hierarchy_step(kb, relation))
            for target, walk in walks.items():
                if target != source:
                    inferred.append(InferredEdge(source=source, target=target, rel_type=relation, via_path=walk))

        for rel_type in sorted(present, key=lambda r: r.token):
            if not rel_type.is_associative:
                continue
            walks = _shortest_walks((source, _HIERARCHY, 0), _typed_step(kb, rel_type, kinds, max_links))
            reached: dict[str, tuple[Edge, ...]] = {}
            for (target, phase, _), walk in walks.items():
                if phase != _LINKED or target == source:
                    continue
                if target not in reached or len(walk) < len(reached[target]):
                    reached[target] = walk
            for target, walk in reached.items():
                inferred.append(InferredEdge(source=source, target=target, rel_type=rel_type, via_path=walk))

    inferred.sort(key=lambda e: e.sort_key)
    logger.info("materialized %d inferred edges from %d stored edges", len(inferred), len(kb.edges))
    return inferred


def lint_redundant(kb: KnowledgeBase, *, inherit_partitive: Optional[bool] = None) -> list[Diagnostic]:
    """
    Flag typed edges that an ancestor of their source already carries: the
    edge is derivable by inheritance, so it only adds clutter to the structure.
    """
    require_valid(kb)
    kinds = inheritance_kinds(inherit_partitive)
    triples = {(e.source, e.rel_type, e.target) for e in kb.edges}
    diagnostics = []
    for edge in kb.sorted_edges():
        if not edge.rel_type.is_associative:
            continue
        carriers = [
            holder
            for holder in ancestors(kb, edge.source, kinds, include_self=False)
            if (holder, edge.rel_type, edge.target) in triples
        ]
        if carriers:
            diagnostics.append(Diagnostic.of(
                DiagnosticCode.W_REDUNDANT_EDGE,
                f"{edge.rel_type.token} edge is inherited from {', '.join(carriers)}",
                edge.source, edge.target,
            ))
    diagnostics.sort(key=lambda d: d.sort_key)
    return diagnostics
