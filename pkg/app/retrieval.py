"""
Post-coordinate document retrieval over a faceted knowledge base
Inverted index maintenance and evaluation of parsed queries to result sets
"""

import logging
from collections import defaultdict
from typing import Iterable, Union

from pydantic import BaseModel, ConfigDict

from app.errors import BadRelType, NotFound
from app.inference import descendants, require_valid, select_constrained
from app.models import KnowledgeBase, resolve_ref
from app.query import AndNode, AndNotNode, OrNode, QueryAst, TermNode, WithNode, parse_query
from app.schemas import BOTH_KINDS, Document, ResultSet, concept_set

logger = logging.getLogger(__name__)


class Corpus(BaseModel):
    model_config = ConfigDict(frozen=True)

    documents: dict[str, Document] = {}
    index: dict[str, frozenset[str]] = {}

    @classmethod
    def from_documents(cls, documents: Iterable[Document]) -> "Corpus":
        return rebuild_index(cls(documents={doc.id: doc for doc in documents}))

    def docs_for(self, terms: Iterable[str]) -> set[str]:
        found: set[str] = set()
        for term in terms:
            found |= self.index.get(term, frozenset())
        return found


def rebuild_index(corpus: Corpus) -> Corpus:
    """Recompute the concept -> documents index from the documents alone."""
    index: dict[str, set[str]] = defaultdict(set)
    for doc in corpus.documents.values():
        for term in doc.terms:
            index[term].add(doc.id)
    return Corpus(
        documents=dict(corpus.documents),
        index={term: frozenset(ids) for term, ids in sorted(index.items())},
    )


def unresolved_terms(kb: KnowledgeBase, corpus: Corpus) -> list[str]:
    return sorted(term for term in corpus.index if term not in kb.concepts)


def _evaluate(kb: KnowledgeBase, corpus: Corpus, node: QueryAst) -> tuple[set[str], set[str]]:
    """Documents matched by node, and the index terms that can account for them."""
    if isinstance(node, TermNode):
        concept = resolve_ref(kb, node.ref)
        terms = {concept} if node.exact else set(descendants(kb, concept, BOTH_KINDS, include_self=True))
        return corpus.docs_for(terms), terms
    if isinstance(node, WithNode):
        if not (node.rel_type.is_associative or node.rel_type.is_chronological):
            raise BadRelType(f"{node.rel_type.token} cannot be used as a WITH constraint")
        under = resolve_ref(kb, node.base.ref)
        target = resolve_ref(kb, node.target.ref)
        terms = set(select_constrained(kb, under, node.rel_type, target, exact_target=node.target.exact))
        return corpus.docs_for(terms), terms

    left_docs, left_terms = _evaluate(kb, corpus, node.left)
    right_docs, right_terms = _evaluate(kb, corpus, node.right)
    if isinstance(node, AndNode):
        return left_docs & right_docs, left_terms | right_terms
    if isinstance(node, OrNode):
        return left_docs | right_docs, left_terms | right_terms
    if isinstance(node, AndNotNode):
        return left_docs - right_docs, left_terms
    raise TypeError(f"unknown query node {type(node).__name__}")


def eval_query(kb: KnowledgeBase, corpus: Corpus, ast: Union[QueryAst, str]) -> ResultSet:
    """
    Evaluate a query. Plain terms expand downward over both hierarchy kinds;
    '=' terms match only themselves; WITH selects constrained concepts strictly
    below the base and never looks for the base or the target in documents.
    Every index term must name a concept of kb, otherwise NotFound is raised.
    """
    require_valid(kb)
    if isinstance(ast, str):
        ast = parse_query(ast)
    missing = unresolved_terms(kb, corpus)
    if missing:
        raise NotFound(f"corpus indexes terms unknown to the knowledge base: {', '.join(missing)}")
    docs, candidates = _evaluate(kb, corpus, ast)
    matched = {
        term
        for doc_id in docs
        for term in corpus.documents[doc_id].terms
        if term in candidates
    }
    logger.debug("query matched %d of %d documents", len(docs), len(corpus.documents))
    return ResultSet(doc_ids=tuple(sorted(docs)), matched_terms=concept_set(matched))
