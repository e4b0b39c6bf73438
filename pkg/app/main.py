"""
Command line interface for the faceted knowledge base engine
Validation, inference, selection, query evaluation, table lookup and DOT export
"""

import json
import logging
from pathlib import Path
from typing import Optional, Sequence

import click

from app.config import configure_logging
from app.dot_export import export_dot
from app.errors import KosError
from app.formats import parse_corpus, parse_kos, serialize_kos
from app.inference import (
    ancestors,
    descendants,
    lint_redundant,
    materialize_inferences,
    require_valid,
    select_constrained,
)
from app.models import KnowledgeBase, has_errors, resolve_ref, validate
from app.relations import RelationType, TransitivityStatus, compose, composition_table, path_status
from app.retrieval import eval_query
from app.schemas import Diagnostic, HierKind
from app.skos import import_skos_subset

REL_TOKENS = [r.token for r in RelationType]
KosPath = click.Path(exists=True, dir_okay=False, path_type=Path)


class KosGroup(click.Group):
    """Maps domain errors to `ERROR <code>: <detail>` on stderr and their exit status."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except KosError as exc:
            click.echo(f"ERROR {exc.code}: {exc.detail}", err=True)
            ctx.exit(exc.exit_status)


class Output:
    """One record per line, as text or as a JSON object with sorted keys."""

    def __init__(self, as_json: bool = False):
        self.as_json = as_json

    def record(self, text: str, **fields) -> None:
        click.echo(json.dumps(fields, sort_keys=True) if self.as_json else text)

    def diagnostic(self, diagnostic: Diagnostic) -> None:
        self.record(
            diagnostic.format_line(),
            severity=diagnostic.severity.value,
            code=diagnostic.code.value,
            subjects=list(diagnostic.subjects),
            message=diagnostic.message,
        )


def _load_kb(path: Path) -> KnowledgeBase:
    return parse_kos(path.read_text(encoding="utf-8"))


def _status_text(status: TransitivityStatus, result: Optional[RelationType]) -> str:
    return f"{status.token} {result.token}" if result is not None else status.token


def _parse_kinds(ctx, param, value: str) -> frozenset[HierKind]:
    try:
        kinds = frozenset(HierKind(part.strip()) for part in value.split(",") if part.strip())
    except ValueError:
        raise click.BadParameter("use generic, partitive or generic,partitive") from None
    if not kinds:
        raise click.BadParameter("at least one hierarchy kind is required")
    return kinds


@click.group(cls=KosGroup)
@click.option("--json", "as_json", is_flag=True, help="Mirror every record as one JSON object per line.")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Override KOS_LOG_LEVEL for this run.",
)
@click.pass_context
def cli(ctx: click.Context, as_json: bool, log_level: Optional[str]):
    """Faceted knowledge base engine."""
    if log_level:
        logging.getLogger().setLevel(log_level.upper())
    ctx.obj = Output(as_json)


@cli.command("validate")
@click.argument("kos", type=KosPath)
@click.pass_obj
def validate_command(out: Output, kos: Path):
    """Print structural diagnostics; exit 1 if any is an error."""
    diagnostics = validate(_load_kb(kos))
    for diagnostic in diagnostics:
        out.diagnostic(diagnostic)
    if has_errors(diagnostics):
        click.get_current_context().exit(1)


@cli.command("lint")
@click.argument("kos", type=KosPath)
@click.pass_obj
def lint_command(out: Output, kos: Path):
    """Print relations already inherited from an ancestor."""
    for diagnostic in lint_redundant(_load_kb(kos)):
        out.diagnostic(diagnostic)


@cli.command("closure")
@click.argument("kos", type=KosPath)
@click.option("--concept", "ref", required=True, help="Concept id or label.")
@click.option("--dir", "direction", type=click.Choice(["down", "up"]), default="down", show_default=True)
@click.option("--kinds", default="generic,partitive", show_default=True, callback=_parse_kinds)
@click.option("--no-self", is_flag=True, help="Leave the concept itself out.")
@click.pass_obj
def closure_command(out: Output, kos: Path, ref: str, direction: str, kinds: frozenset[HierKind], no_self: bool):
    """Print the hierarchical closure of a concept, sorted."""
    kb = _load_kb(kos)
    closure = descendants if direction == "down" else ancestors
    for cid in closure(kb, resolve_ref(kb, ref), kinds, include_self=not no_self):
        out.record(cid, concept=cid)


@cli.command("select")
@click.argument("kos", type=KosPath)
@click.option("--under", required=True, help="Concept whose subtree is searched.")
@click.option("--rel", "rel_token", type=click.Choice(REL_TOKENS), required=True)
@click.option("--target", required=True, help="Constraining concept; prefix '=' to skip its narrower concepts.")
@click.pass_obj
def select_command(out: Output, kos: Path, under: str, rel_token: str, target: str):
    """Print concepts below --under related to --target, sorted."""
    kb = _load_kb(kos)
    require_valid(kb)
    exact = target.startswith("=")
    selected = select_constrained(
        kb,
        resolve_ref(kb, under.lstrip("=")),
        RelationType.parse(rel_token),
        resolve_ref(kb, target[1:] if exact else target),
        exact_target=exact,
    )
    for cid in selected:
        out.record(cid, concept=cid)


@cli.command("infer")
@click.argument("kos", type=KosPath)
@click.option("--max-chain", type=click.IntRange(min=1), default=None, help="Cap on associative links per chain.")
@click.pass_obj
def infer_command(out: Output, kos: Path, max_chain: Optional[int]):
    """Print every inferred edge with one witness path."""
    for edge in materialize_inferences(_load_kb(kos), max_chain_length=max_chain):
        out.record(
            f"{edge.source} {edge.rel_type.token} {edge.target}  via: {edge.format_path()}",
            source=edge.source,
            rel_type=edge.rel_type.token,
            target=edge.target,
            via=[[e.source, e.rel_type.token, e.target] for e in edge.via_path],
        )


@cli.command("compose")
@click.option("--r1", type=click.Choice(REL_TOKENS), required=True)
@click.option("--r2", type=click.Choice(REL_TOKENS), required=True)
@click.pass_obj
def compose_command(out: Output, r1: str, r2: str):
    """Look up one cell of the composition table."""
    entry = compose(RelationType.parse(r1), RelationType.parse(r2))
    out.record(
        _status_text(entry.status, entry.result_type),
        r1=r1,
        r2=r2,
        status=entry.status.token,
        result=entry.result_type.token if entry.result_type else None,
    )


@cli.command("path")
@click.argument("tokens", nargs=-1, required=True, type=click.Choice(REL_TOKENS))
@click.pass_obj
def path_command(out: Output, tokens: tuple[str, ...]):
    """Fold the composition table over a relational path."""
    status, result = path_status([RelationType.parse(token) for token in tokens])
    out.record(
        _status_text(status, result),
        path=list(tokens),
        status=status.token,
        result=result.token if result else None,
    )


@cli.command("table")
@click.pass_obj
def table_command(out: Output):
    """Print all 169 cells of the composition table."""
    for entry in composition_table():
        fields = [entry.r1.token, entry.r2.token, entry.status.token]
        if entry.result_type is not None:
            fields.append(entry.result_type.token)
        fields.append(entry.source.value)
        out.record(
            " ".join(fields),
            r1=entry.r1.token,
            r2=entry.r2.token,
            status=entry.status.token,
            result=entry.result_type.token if entry.result_type else None,
            source=entry.source.value,
        )


@cli.command("query")
@click.argument("kos", type=KosPath)
@click.argument("corpus", type=KosPath)
@click.option("--q", "text", required=True, help='Query, e.g. "songbirds WITH [assoc: mig_instinct]".')
@click.pass_obj
def query_command(out: Output, kos: Path, corpus: Path, text: str):
    """Print matching document ids, then the index terms that matched."""
    result = eval_query(_load_kb(kos), parse_corpus(corpus.read_text(encoding="utf-8")), text)
    for doc_id in result.doc_ids:
        out.record(doc_id, doc=doc_id)
    out.record(f"matched-terms: {','.join(result.matched_terms)}", matched_terms=list(result.matched_terms))


@cli.command("import-skos")
@click.argument("ntriples", type=KosPath)
@click.option("--out", "out_path", type=click.Path(dir_okay=False, writable=True, path_type=Path), required=True)
@click.option("--language", default=None, help="Preferred label language (default KOS_SKOS_LANGUAGE).")
@click.pass_obj
def import_skos_command(out: Output, ntriples: Path, out_path: Path, language: Optional[str]):
    """Convert an N-Triples SKOS subset into a canonical KOS file."""
    imported = import_skos_subset(ntriples.read_text(encoding="utf-8"), language=language)
    out_path.write_text(serialize_kos(imported.kb), encoding="utf-8")
    out.record(f"skipped-predicates: {imported.skipped_total}", skipped_predicates=imported.skipped_total)


@cli.command("export-dot")
@click.argument("kos", type=KosPath)
@click.option("--inferred", is_flag=True, help="Overlay inherited relations as dotted edges.")
@click.pass_obj
def export_dot_command(out: Output, kos: Path, inferred: bool):
    """Emit a DOT graph with one cluster per facet."""
    source = export_dot(_load_kb(kos), inferred=inferred)
    if out.as_json:
        out.record(source, dot=source)
    else:
        click.echo(source, nl=False)


def run(args: Sequence[str]) -> int:
    """Run one command line and return its exit status."""
    try:
        status = cli.main(args=list(args), prog_name="kos", standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        return 1
    return status if isinstance(status, int) else 0


def main():
    configure_logging()
    cli(prog_name="kos")


if __name__ == "__main__":
    main()
