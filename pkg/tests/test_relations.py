import pytest
from pydantic import ValidationError

from app.relations import (
    CompositionEntry,
    RelationType,
    TableSource,
    TransitivityStatus,
    compose,
    composition_table,
    invert,
    path_status,
)

R = RelationType
GIVEN, NOT_EXPECTED, NOT_ALLOWED, UNSPECIFIED = "+", "-", "O", "?"

SAME_TYPE_ROWS = [
    ("synonym", "synonym", NOT_ALLOWED),
    ("generic", "generic", GIVEN),
    ("partitive", "partitive", GIVEN),
    ("generic", "partitive", NOT_EXPECTED),
    ("partitive", "generic", NOT_EXPECTED),
    ("earlier_later", "earlier_later", GIVEN),
    ("later_earlier", "later_earlier", GIVEN),
    ("earlier_later", "later_earlier", NOT_EXPECTED),
    ("later_earlier", "earlier_later", NOT_EXPECTED),
    ("assoc", "assoc", NOT_EXPECTED),
    ("raw_material_product", "raw_material_product", GIVEN),
    ("causality", "causality", GIVEN),
    ("person_action", "person_action", NOT_EXPECTED),
    ("institution_action", "institution_action", NOT_EXPECTED),
    ("person_product", "person_product", NOT_EXPECTED),
    ("institution_product", "institution_product", NOT_EXPECTED),
    ("action_product", "action_product", NOT_EXPECTED),
]

MIXED_STRUCTURAL_ROWS = [
    ("synonym", "generic", GIVEN, "generic"),
    ("synonym", "partitive", GIVEN, "partitive"),
    ("generic", "synonym", NOT_ALLOWED, None),
    ("partitive", "synonym", NOT_ALLOWED, None),
    ("synonym", "earlier_later", GIVEN, "earlier_later"),
    ("synonym", "later_earlier", GIVEN, "later_earlier"),
    ("earlier_later", "synonym", NOT_ALLOWED, None),
    ("later_earlier", "synonym", NOT_ALLOWED, None),
    ("generic", "earlier_later", GIVEN, "earlier_later"),
    ("generic", "later_earlier", GIVEN, "later_earlier"),
    ("earlier_later", "generic", GIVEN, "earlier_later"),
    ("later_earlier", "generic", GIVEN, "later_earlier"),
    ("partitive", "earlier_later", GIVEN, "earlier_later"),
    ("partitive", "later_earlier", GIVEN, "later_earlier"),
    ("earlier_later", "partitive", GIVEN, "earlier_later"),
    ("later_earlier", "partitive", GIVEN, "later_earlier"),
]

ASSOCIATIVE_TOKENS = [
    "assoc",
    "raw_material_product",
    "action_product",
    "person_action",
    "institution_action",
    "causality",
    "person_product",
    "institution_product",
]
ASSOCIATION_OVER_STRUCTURE_ROWS = [
    (assoc, structural)
    for assoc in ASSOCIATIVE_TOKENS
    for structural in ("generic", "partitive", "earlier_later", "later_earlier")
]


@pytest.mark.parametrize("r1,r2,status", SAME_TYPE_ROWS)
def test_same_type_rows(r1, r2, status):
    entry = compose(R.parse(r1), R.parse(r2))
    assert entry.status.token == status
    assert entry.source is TableSource.TABLE1
    if status == GIVEN:
        assert entry.result_type is R.parse(r1)
    else:
        assert entry.result_type is None


@pytest.mark.parametrize("r1,r2,status,result", MIXED_STRUCTURAL_ROWS)
def test_mixed_structural_rows(r1, r2, status, result):
    entry = compose(R.parse(r1), R.parse(r2))
    assert entry.status.token == status
    assert entry.source is TableSource.TABLE2
    assert (entry.result_type.token if entry.result_type else None) == result


@pytest.mark.parametrize("assoc,structural", ASSOCIATION_OVER_STRUCTURE_ROWS)
def test_association_over_structure_rows(assoc, structural):
    entry = compose(R.parse(assoc), R.parse(structural))
    assert entry.status is TransitivityStatus.GIVEN
    assert entry.result_type is R.parse(assoc)
    assert entry.source is TableSource.TABLE3


def test_row_counts():
    assert len(SAME_TYPE_ROWS) == 17
    assert len(MIXED_STRUCTURAL_ROWS) == 16
    assert len(ASSOCIATION_OVER_STRUCTURE_ROWS) == 32


def test_table_is_total():
    table = composition_table()
    assert len(table) == 169
    assert {(e.r1, e.r2) for e in table} == {(a, b) for a in RelationType for b in RelationType}
    listed = {(r1, r2) for r1, r2, _ in SAME_TYPE_ROWS}
    listed |= {(r1, r2) for r1, r2, _, _ in MIXED_STRUCTURAL_ROWS}
    listed |= set(ASSOCIATION_OVER_STRUCTURE_ROWS)
    for entry in table:
        if (entry.r1.token, entry.r2.token) not in listed:
            assert entry.status is TransitivityStatus.UNSPECIFIED
            assert entry.source is TableSource.DEFAULT
            assert entry.result_type is None


@pytest.mark.parametrize("r1,r2", [
    ("generic", "assoc"),
    ("partitive", "causality"),
    ("assoc", "synonym"),
    ("assoc", "causality"),
    ("causality", "raw_material_product"),
])
def test_unlisted_pairs_are_unspecified(r1, r2):
    assert compose(R.parse(r1), R.parse(r2)).status is TransitivityStatus.UNSPECIFIED


def test_entry_result_only_when_given():
    with pytest.raises(ValidationError):
        CompositionEntry(
            r1=R.CAUSALITY, r2=R.CAUSALITY, status=TransitivityStatus.NOT_EXPECTED,
            result_type=R.CAUSALITY, source=TableSource.TABLE1,
        )
    with pytest.raises(ValidationError):
        CompositionEntry(r1=R.CAUSALITY, r2=R.CAUSALITY, status=TransitivityStatus.GIVEN, source=TableSource.TABLE1)


def test_invert():
    assert invert(R.EARLIER_LATER) is R.LATER_EARLIER
    assert invert(R.LATER_EARLIER) is R.EARLIER_LATER
    assert invert(R.HIER_GENERIC) is R.HIER_GENERIC
    assert invert(R.HIER_PARTITIVE) is R.HIER_PARTITIVE
    assert invert(R.CAUSALITY) is None
    assert invert(R.SYNONYM) is None


def test_parse_tokens():
    assert R.parse("assoc") is R.UNSPECIFIC_ASSOCIATION
    assert R.parse("person_product") is R.PERSON_ACTOR_PRODUCT
    assert [r.token for r in RelationType] == [
        "synonym", "generic", "partitive", "earlier_later", "later_earlier", "assoc",
        "raw_material_product", "causality", "person_action", "institution_action",
        "person_product", "institution_product", "action_product",
    ]
    with pytest.raises(ValueError):
        R.parse("bogus")


@pytest.mark.parametrize("path,status,result", [
    (["generic"], GIVEN, "generic"),
    (["generic", "generic", "generic"], GIVEN, "generic"),
    (["assoc", "generic", "generic"], GIVEN, "assoc"),
    (["causality", "causality", "partitive"], GIVEN, "causality"),
    (["synonym", "generic", "earlier_later"], GIVEN, "earlier_later"),
    (["person_action", "person_action"], NOT_EXPECTED, None),
    (["generic", "partitive"], NOT_EXPECTED, None),
    (["generic", "synonym", "generic"], NOT_ALLOWED, None),
    (["generic", "assoc"], UNSPECIFIED, None),
])
def test_path_status(path, status, result):
    got_status, got_result = path_status([R.parse(t) for t in path])
    assert got_status.token == status
    assert (got_result.token if got_result else None) == result


def test_path_status_stops_at_first_failure():
    # the trailing pair would be transitive on its own
    status, result = path_status([R.UNSPECIFIC_ASSOCIATION, R.CAUSALITY, R.CAUSALITY])
    assert status is TransitivityStatus.UNSPECIFIED
    assert result is None


def test_path_status_rejects_empty_path():
    with pytest.raises(ValueError):
        path_status([])
