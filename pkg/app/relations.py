"""
Relation type inventory and composition algebra
Encodes the transitivity statements for pairs of typed relations as a total lookup table
"""

from enum import Enum
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, model_validator


class RelationType(str, Enum):
    SYNONYM = "synonym"
    HIER_GENERIC = "generic"
    HIER_PARTITIVE = "partitive"
    EARLIER_LATER = "earlier_later"
    LATER_EARLIER = "later_earlier"
    UNSPECIFIC_ASSOCIATION = "assoc"
    RAW_MATERIAL_PRODUCT = "raw_material_product"
    CAUSALITY = "causality"
    PERSON_ACTOR_ACTION = "person_action"
    INSTITUTION_ACTOR_ACTION = "institution_action"
    PERSON_ACTOR_PRODUCT = "person_product"
    INSTITUTION_ACTOR_PRODUCT = "institution_product"
    ACTION_PRODUCT = "action_product"

    @property
    def token(self) -> str:
        return self.value

    @property
    def is_hierarchical(self) -> bool:
        return self in HIERARCHICAL

    @property
    def is_chronological(self) -> bool:
        return self in CHRONOLOGICAL

    @property
    def is_associative(self) -> bool:
        return self in ASSOCIATIVE

    @classmethod
    def parse(cls, token: str) -> "RelationType":
        try:
            return cls(token)
        except ValueError:
            raise ValueError(f"unknown relation type {token!r}") from None


R = RelationType

HIERARCHICAL = frozenset({R.HIER_GENERIC, R.HIER_PARTITIVE})
CHRONOLOGICAL = frozenset({R.EARLIER_LATER, R.LATER_EARLIER})
ASSOCIATIVE = frozenset({
    R.UNSPECIFIC_ASSOCIATION,
    R.RAW_MATERIAL_PRODUCT,
    R.CAUSALITY,
    R.PERSON_ACTOR_ACTION,
    R.INSTITUTION_ACTOR_ACTION,
    R.PERSON_ACTOR_PRODUCT,
    R.INSTITUTION_ACTOR_PRODUCT,
    R.ACTION_PRODUCT,
})

assert len(RelationType) == 13


class TransitivityStatus(str, Enum):
    GIVEN = "+"
    NOT_EXPECTED = "-"
    NOT_ALLOWED = "O"
    UNSPECIFIED = "?"

    @property
    def token(self) -> str:
        return self.value


class TableSource(str, Enum):
    TABLE1 = "table1"
    TABLE2 = "table2"
    TABLE3 = "table3"
    DEFAULT = "default"


class CompositionEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    r1: RelationType
    r2: RelationType
    status: TransitivityStatus
    result_type: Optional[RelationType] = None
    source: TableSource

    @model_validator(mode="after")
    def _result_iff_given(self):
        if (self.status is TransitivityStatus.GIVEN) != (self.result_type is not None):
            raise ValueError("result_type must be present exactly when status is Given")
        return self


G = TransitivityStatus.GIVEN
N = TransitivityStatus.NOT_EXPECTED
O = TransitivityStatus.NOT_ALLOWED

# Same type of relationship on both sides
TABLE_1 = [
    (R.SYNONYM, R.SYNONYM, O),
    (R.HIER_GENERIC, R.HIER_GENERIC, G),
    (R.HIER_PARTITIVE, R.HIER_PARTITIVE, G),
    (R.HIER_GENERIC, R.HIER_PARTITIVE, N),
    (R.HIER_PARTITIVE, R.HIER_GENERIC, N),
    (R.EARLIER_LATER, R.EARLIER_LATER, G),
    (R.LATER_EARLIER, R.LATER_EARLIER, G),
    (R.EARLIER_LATER, R.LATER_EARLIER, N),
    (R.LATER_EARLIER, R.EARLIER_LATER, N),
    (R.UNSPECIFIC_ASSOCIATION, R.UNSPECIFIC_ASSOCIATION, N),
    (R.RAW_MATERIAL_PRODUCT, R.RAW_MATERIAL_PRODUCT, G),
    (R.CAUSALITY, R.CAUSALITY, G),
    (R.PERSON_ACTOR_ACTION, R.PERSON_ACTOR_ACTION, N),
    (R.INSTITUTION_ACTOR_ACTION, R.INSTITUTION_ACTOR_ACTION, N),
    (R.PERSON_ACTOR_PRODUCT, R.PERSON_ACTOR_PRODUCT, N),
    (R.INSTITUTION_ACTOR_PRODUCT, R.INSTITUTION_ACTOR_PRODUCT, N),
    (R.ACTION_PRODUCT, R.ACTION_PRODUCT, N),
]

# Synonymy, hierarchy and chronology mixed; the printed duplicates are collapsed
# and the Synonym x chronological block reads as below.
TABLE_2 = [
    (R.SYNONYM, R.HIER_GENERIC, G),
    (R.SYNONYM, R.HIER_PARTITIVE, G),
    (R.HIER_GENERIC, R.SYNONYM, O),
    (R.HIER_PARTITIVE, R.SYNONYM, O),
    (R.SYNONYM, R.EARLIER_LATER, G),
    (R.SYNONYM, R.LATER_EARLIER, G),
    (R.EARLIER_LATER, R.SYNONYM, O),
    (R.LATER_EARLIER, R.SYNONYM, O),
    (R.HIER_GENERIC, R.EARLIER_LATER, G),
    (R.HIER_GENERIC, R.LATER_EARLIER, G),
    (R.EARLIER_LATER, R.HIER_GENERIC, G),
    (R.LATER_EARLIER, R.HIER_GENERIC, G),
    (R.HIER_PARTITIVE, R.EARLIER_LATER, G),
    (R.HIER_PARTITIVE, R.LATER_EARLIER, G),
    (R.EARLIER_LATER, R.HIER_PARTITIVE, G),
    (R.LATER_EARLIER, R.HIER_PARTITIVE, G),
]

# Every typed association followed by either hierarchy kind or either
# chronological direction is transitive.
TABLE_3 = [
    (assoc, structural, G)
    for assoc in (
        R.UNSPECIFIC_ASSOCIATION,
        R.RAW_MATERIAL_PRODUCT,
        R.ACTION_PRODUCT,
        R.PERSON_ACTOR_ACTION,
        R.INSTITUTION_ACTOR_ACTION,
        R.CAUSALITY,
        R.PERSON_ACTOR_PRODUCT,
        R.INSTITUTION_ACTOR_PRODUCT,
    )
    for structural in (R.HIER_GENERIC, R.HIER_PARTITIVE, R.EARLIER_LATER, R.LATER_EARLIER)
]


def _result_type(r1: RelationType, r2: RelationType) -> RelationType:
    """Type carried by a transitive composition: the non-structural side survives."""
    if r1 == r2:
        return r1
    if r1 is R.SYNONYM:
        return r2
    if r1.is_associative:
        return r1
    if r2.is_chronological:
        return r2
    if r1.is_chronological:
        return r1
    raise AssertionError(f"no result typing for {r1.token} o {r2.token}")


def _build_table() -> dict[tuple[RelationType, RelationType], CompositionEntry]:
    table: dict[tuple[RelationType, RelationType], CompositionEntry] = {}
    for source, rows in (
        (TableSource.TABLE1, TABLE_1),
        (TableSource.TABLE2, TABLE_2),
        (TableSource.TABLE3, TABLE_3),
    ):
        for r1, r2, status in rows:
            if (r1, r2) in table:
                raise AssertionError(f"duplicate composition row {r1.token} o {r2.token}")
            table[(r1, r2)] = CompositionEntry(
                r1=r1,
                r2=r2,
                status=status,
                result_type=_result_type(r1, r2) if status is G else None,
                source=source,
            )
    for r1 in RelationType:
        for r2 in RelationType:
            table.setdefault((r1, r2), CompositionEntry(
                r1=r1, r2=r2, status=TransitivityStatus.UNSPECIFIED, source=TableSource.DEFAULT
            ))
    assert len(table) == len(RelationType) ** 2
    return table


_TABLE = _build_table()


def compose(r1: RelationType, r2: RelationType) -> CompositionEntry:
    return _TABLE[(r1, r2)]


def composition_table() -> list[CompositionEntry]:
    """All 169 entries, ordered by declaration order of r1 then r2."""
    return [_TABLE[(r1, r2)] for r1 in RelationType for r2 in RelationType]


def invert(r: RelationType) -> Optional[RelationType]:
    if r is R.EARLIER_LATER:
        return R.LATER_EARLIER
    if r is R.LATER_EARLIER:
        return R.EARLIER_LATER
    if r.is_hierarchical:
        # direction is a traversal concern, the type stays the same
        return r
    return None


def path_status(path: Sequence[RelationType]) -> tuple[TransitivityStatus, Optional[RelationType]]:
    """Left fold of compose over a relational path."""
    if not path:
        raise ValueError("path must contain at least one relation type")
    current = path[0]
    for step in path[1:]:
        entry = compose(current, step)
        if entry.status is not TransitivityStatus.GIVEN:
            return entry.status, None
        current = entry.result_type
    return TransitivityStatus.GIVEN, current
