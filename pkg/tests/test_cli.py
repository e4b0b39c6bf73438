import json

import pytest
from click.testing import CliRunner

from app.formats import parse_kos
from app.main import cli, run


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def kos_file(fixtures_dir) -> str:
    return str(fixtures_dir / "songbird.kos")


@pytest.fixture
def docs_file(fixtures_dir) -> str:
    return str(fixtures_dir / "songbird.docs")


@pytest.fixture
def cyclic_file(tmp_path) -> str:
    path = tmp_path / "cyclic.kos"
    path.write_text(
        'facet A "A"\nconcept a A pref "a"\nconcept b A pref "b"\n'
        "broader a b generic\nbroader b a generic\n",
        encoding="utf-8",
    )
    return str(path)


def test_compose(runner):
    result = runner.invoke(cli, ["compose", "--r1", "generic", "--r2", "generic"])
    assert result.exit_code == 0
    assert result.output == "+ generic\n"
    result = runner.invoke(cli, ["compose", "--r1", "person_action", "--r2", "person_action"])
    assert result.output == "-\n"


def test_compose_unknown_token_is_a_usage_error(runner):
    result = runner.invoke(cli, ["compose", "--r1", "generic", "--r2", "bogus"])
    assert result.exit_code == 2
    assert "Usage:" in result.output


def test_unknown_subcommand(runner):
    assert runner.invoke(cli, ["frobnicate"]).exit_code == 2


def test_select(runner, kos_file):
    result = runner.invoke(cli, [
        "select", kos_file, "--under", "songbirds", "--rel", "assoc", "--target", "mig_instinct",
    ])
    assert result.exit_code == 0
    assert result.output == "blackcap\nnightingale\nwarblers\n"


def test_select_rejects_hierarchical_constraint(runner, kos_file):
    result = runner.invoke(cli, [
        "select", kos_file, "--under", "songbirds", "--rel", "generic", "--target", "mig_instinct",
    ])
    assert result.exit_code == 1
    assert "ERROR BAD_REL_TYPE:" in result.output


def test_query(runner, kos_file, docs_file):
    result = runner.invoke(cli, ["query", kos_file, docs_file, "--q", "songbirds WITH [assoc: mig_instinct]"])
    assert result.exit_code == 0
    assert result.output == "d2\nd3\nmatched-terms: blackcap,nightingale\n"


def test_query_errors(runner, kos_file, docs_file):
    result = runner.invoke(cli, ["query", kos_file, docs_file, "--q", "songbirds AND"])
    assert result.exit_code == 2
    assert "ERROR PARSE_ERROR: at byte 14" in result.output
    result = runner.invoke(cli, ["query", kos_file, docs_file, "--q", "penguins"])
    assert result.exit_code == 1
    assert "ERROR NOT_FOUND:" in result.output


def test_validate(runner, kos_file, cyclic_file):
    result = runner.invoke(cli, ["validate", kos_file])
    assert result.exit_code == 0
    assert result.output == ""
    result = runner.invoke(cli, ["validate", cyclic_file])
    assert result.exit_code == 1
    assert result.output == "ERROR E_CYCLE a b generic hierarchy cycle in facet A\n"


def test_validate_malformed_file(runner, tmp_path):
    path = tmp_path / "broken.kos"
    path.write_text('facet A "A"\nconcept a\n', encoding="utf-8")
    result = runner.invoke(cli, ["validate", str(path)])
    assert result.exit_code == 2
    assert "ERROR FORMAT_ERROR: line 2:" in result.output


def test_lint(runner, kos_file, fixtures_dir, cyclic_file):
    assert runner.invoke(cli, ["lint", kos_file]).output == ""
    result = runner.invoke(cli, ["lint", str(fixtures_dir / "songbird_redundant.kos")])
    assert result.exit_code == 0
    assert result.output == "WARNING W_REDUNDANT_EDGE blackcap mig_instinct assoc edge is inherited from warblers\n"
    result = runner.invoke(cli, ["lint", cyclic_file])
    assert result.exit_code == 1
    assert "ERROR INVALID_KB:" in result.output


def test_closure(runner, kos_file):
    result = runner.invoke(cli, ["closure", kos_file, "--concept", '"Singing birds"'])
    assert result.output.split() == ["blackcap", "nightingale", "songbirds", "titmice", "warblers"]
    result = runner.invoke(cli, ["closure", kos_file, "--concept", "blackcap", "--dir", "up", "--kinds", "generic", "--no-self"])
    assert result.output == "songbirds\nwarblers\n"
    result = runner.invoke(cli, ["closure", kos_file, "--concept", "songbirds", "--kinds", "partitive", "--no-self"])
    assert result.output == ""
    assert runner.invoke(cli, ["closure", kos_file, "--concept", "songbirds", "--kinds", "lateral"]).exit_code == 2


def test_infer(runner, kos_file):
    result = runner.invoke(cli, ["infer", kos_file])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert len(lines) == 9
    assert lines[0] == "blackcap assoc mig_instinct  via: blackcap -generic-> warblers -assoc-> mig_instinct"
    assert lines[-1] == "warblers generic songbirds  via: warblers -generic-> songbirds"


def test_table_and_path(runner):
    lines = runner.invoke(cli, ["table"]).output.splitlines()
    assert len(lines) == 169
    assert "generic generic + generic table1" in lines
    assert "assoc generic + assoc table3" in lines
    assert "generic assoc ? default" in lines
    assert runner.invoke(cli, ["path", "generic", "generic", "earlier_later"]).output == "+ earlier_later\n"
    assert runner.invoke(cli, ["path", "generic", "synonym"]).output == "O\n"


def test_import_skos(runner, fixtures_dir, tmp_path):
    out = tmp_path / "imported.kos"
    result = runner.invoke(cli, ["import-skos", str(fixtures_dir / "songbird.nt"), "--out", str(out), "--language", "en"])
    assert result.exit_code == 0
    assert "skipped-predicates: 2" in result.output
    kb = parse_kos(out.read_text(encoding="utf-8"))
    assert sorted(kb.concepts) == ["europe", "mig_instinct", "songbirds", "warblers"]


def test_export_dot(runner, kos_file):
    result = runner.invoke(cli, ["export-dot", kos_file, "--inferred"])
    assert result.exit_code == 0
    assert "subgraph cluster_TAX" in result.output
    assert "style=dotted" in result.output


def test_json_mirror(runner, kos_file):
    result = runner.invoke(cli, ["--json", "compose", "--r1", "generic", "--r2", "generic"])
    assert json.loads(result.output) == {"r1": "generic", "r2": "generic", "result": "generic", "status": "+"}
    assert result.output.index('"r1"') < result.output.index('"status"')
    result = runner.invoke(cli, ["--json", "select", kos_file, "--under", "songbirds", "--rel", "assoc", "--target", "migration"])
    assert [json.loads(line) for line in result.output.splitlines()] == [
        {"concept": "blackcap"}, {"concept": "nightingale"}, {"concept": "warblers"},
    ]


def test_run_returns_exit_status(kos_file):
    assert run(["compose", "--r1", "causality", "--r2", "causality"]) == 0
    assert run(["compose", "--r1", "generic", "--r2", "bogus"]) == 2
    assert run(["closure", kos_file, "--concept", "penguins"]) == 1
