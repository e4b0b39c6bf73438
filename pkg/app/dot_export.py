"""
DOT rendering of a faceted knowledge base
One cluster per facet, solid hierarchy edges, dashed labelled typed relations
"""

import logging
from collections import defaultdict

from graphviz import Digraph

from app.inference import materialize_inferences
from app.models import KnowledgeBase
from app.relations import RelationType

logger = logging.getLogger(__name__)

HIERARCHY_ARROWS = {
    RelationType.HIER_GENERIC: "empty",
    RelationType.HIER_PARTITIVE: "odiamond",
}


def export_dot(kb: KnowledgeBase, *, inferred: bool = False) -> str:
    """
    DOT source for the stored structure. With inferred=True the typed relations
    a concept inherits from its ancestors are overlaid as dotted edges.
    """
    dot = Digraph(name="kos", comment="faceted knowledge base")
    dot.attr(rankdir="BT")
    dot.attr("node", shape="box")

    members: dict[str, list[str]] = defaultdict(list)
    for cid in sorted(kb.concepts):
        members[kb.concepts[cid].facet].append(cid)

    for facet_id in sorted(members):
        facet = kb.facets.get(facet_id)
        with dot.subgraph(name=f"cluster_{facet_id}") as cluster:
            cluster.attr(label=facet.label if facet else facet_id)
            for cid in members[facet_id]:
                cluster.node(cid, label=kb.concepts[cid].pref_label)

    for cid in sorted(kb.concepts):
        for edge in kb.outgoing(cid):
            if edge.rel_type.is_hierarchical:
                dot.edge(edge.source, edge.target, arrowhead=HIERARCHY_ARROWS[edge.rel_type])
            else:
                dot.edge(edge.source, edge.target, label=edge.rel_type.token, style="dashed")

    if inferred:
        stored = {(e.source, e.rel_type, e.target) for e in kb.edges}
        overlay = [
            e for e in materialize_inferences(kb)
            if e.rel_type.is_associative and e.triple not in stored
        ]
        for edge in overlay:
            dot.edge(edge.source, edge.target, label=edge.rel_type.token, style="dotted")
        logger.info("overlaid %d inherited relations", len(overlay))

    return dot.source
