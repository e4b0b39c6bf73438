"""
Data models using Pydantic for the faceted knowledge base
Facets, concepts, typed edges, diagnostics, documents and result sets
"""

from enum import Enum
from typing import Annotated, Iterable

from pydantic import AfterValidator, BaseModel, ConfigDict, Field, StringConstraints, field_validator, model_validator

from app.relations import RelationType

ID_PATTERN = r"^[A-Za-z0-9_.-]+$"

Identifier = Annotated[str, StringConstraints(pattern=ID_PATTERN)]
FacetId = Identifier
ConceptId = Identifier
DocId = Identifier

# Ordered set of concept ids, lexicographic by id
ConceptSet = tuple[str, ...]


def concept_set(ids: Iterable[str]) -> ConceptSet:
    return tuple(sorted(set(ids)))


class HierKind(str, Enum):
    GENERIC = "generic"
    PARTITIVE = "partitive"

    @property
    def relation(self) -> RelationType:
        return RelationType(self.value)

    @classmethod
    def of(cls, rel_type: RelationType) -> "HierKind":
        return cls(rel_type.value)


BOTH_KINDS = frozenset(HierKind)


def _check_label(value: str) -> str:
    if '"' in value or "\n" in value:
        raise ValueError("labels may not contain double quotes or line breaks")
    return value


Label = Annotated[str, AfterValidator(_check_label)]


class Facet(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: FacetId
    label: Label


class Concept(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: ConceptId
    facet: FacetId
    pref_label: Annotated[str, StringConstraints(min_length=1), AfterValidator(_check_label)]
    alt_labels: frozenset[str] = frozenset()

    @field_validator("alt_labels")
    @classmethod
    def _alt_labels_plain(cls, labels: frozenset[str]) -> frozenset[str]:
        for label in labels:
            _check_label(label)
            if not label or "|" in label:
                raise ValueError("alternative labels must be non-empty and may not contain '|'")
        return labels

    @model_validator(mode="after")
    def _pref_not_alt(self):
        if self.pref_label in self.alt_labels:
            raise ValueError(f"alt labels of {self.id} repeat the preferred label")
        return self

    @property
    def labels(self) -> frozenset[str]:
        return self.alt_labels | {self.pref_label}


class Edge(BaseModel):
    """
    Directed typed edge. Hierarchical edges point child -> parent,
    chronological edges earlier -> later, associative edges as named by the type.
    """
    model_config = ConfigDict(frozen=True)

    source: ConceptId
    target: ConceptId
    rel_type: RelationType

    @model_validator(mode="after")
    def _well_formed(self):
        if self.source == self.target:
            raise ValueError(f"edge {self.source} -> {self.target} is a self loop")
        if self.rel_type is RelationType.SYNONYM:
            raise ValueError("synonymy is stored as labels, not as edges")
        if self.rel_type is RelationType.LATER_EARLIER:
            raise ValueError("chronological edges are stored as earlier_later only")
        return self

    @property
    def sort_key(self) -> tuple[str, str, str]:
        return (self.rel_type.token, self.source, self.target)

    def __str__(self) -> str:
        return f"{self.source} -{self.rel_type.token}-> {self.target}"


class Severity(str, Enum):
    ERROR = "Error"
    WARNING = "Warning"


class DiagnosticCode(str, Enum):
    E_CYCLE = "E_CYCLE"
    E_DANGLING = "E_DANGLING"
    E_DUP_PREF = "E_DUP_PREF"
    E_XFACET_HIER = "E_XFACET_HIER"
    W_MIXED_DIM = "W_MIXED_DIM"
    W_POLYHIER = "W_POLYHIER"
    W_REDUNDANT_EDGE = "W_REDUNDANT_EDGE"

    @property
    def severity(self) -> Severity:
        return Severity.ERROR if self.value.startswith("E_") else Severity.WARNING


class Diagnostic(BaseModel):
    model_config = ConfigDict(frozen=True)

    severity: Severity
    code: DiagnosticCode
    message: str
    subjects: tuple[str, ...] = ()

    @classmethod
    def of(cls, code: DiagnosticCode, message: str, *subjects: str) -> "Diagnostic":
        return cls(severity=code.severity, code=code, message=message, subjects=subjects)

    @property
    def sort_key(self) -> tuple[str, tuple[str, ...], str]:
        return (self.code.value, self.subjects, self.message)

    def format_line(self) -> str:
        return " ".join([self.severity.value.upper(), self.code.value, *self.subjects, self.message])


class InferredEdge(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: ConceptId
    target: ConceptId
    rel_type: RelationType
    via_path: tuple[Edge, ...] = Field(min_length=1)

    @property
    def triple(self) -> tuple[str, RelationType, str]:
        return (self.source, self.rel_type, self.target)

    @property
    def sort_key(self) -> tuple[str, str, str]:
        return (self.source, self.rel_type.token, self.target)

    def format_path(self) -> str:
        """Witness walk, e.g. 'blackcap -generic-> warblers -assoc-> mig_instinct'."""
        parts = [self.via_path[0].source]
        for edge in self.via_path:
            parts.append(f"-{edge.rel_type.token}-> {edge.target}")
        return " ".join(parts)


class Document(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: DocId
    title: Label
    terms: frozenset[ConceptId] = Field(min_length=1)


class ResultSet(BaseModel):
    model_config = ConfigDict(frozen=True)

    doc_ids: tuple[str, ...] = ()
    matched_terms: ConceptSet = ()
