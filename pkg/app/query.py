"""
Lark grammar and syntax tree for the boolean retrieval query language

    songbirds
    =songbirds
    migration_behavior AND songbirds
    songbirds WITH [assoc: mig_instinct]
    ("Singing birds" OR titmice) ANDNOT =europe
"""

from typing import Union

from lark import Lark, Token, Transformer, UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken
from pydantic import BaseModel, ConfigDict

from app.errors import ParseError
from app.relations import RelationType

_RELTYPES = "|".join(sorted((r.token for r in RelationType), key=len, reverse=True))

# Keywords are upper-case and case-sensitive; LALR with the contextual lexer
QUERY_GRAMMAR = r"""
    ?start: or_expr

    ?or_expr: and_expr
            | or_expr _OR and_expr        -> or_op

    ?and_expr: diff_expr
             | and_expr _AND diff_expr    -> and_op

    ?diff_expr: primary
              | diff_expr _ANDNOT primary -> andnot_op

    ?primary: termref
            | termref _WITH "[" RELTYPE ":" termref "]" -> with_op
            | "(" or_expr ")"

    termref: EXACT? (IDENT | QUOTED)

    _ANDNOT.3: /ANDNOT(?![A-Za-z0-9_.-])/
    _AND.2: /AND(?![A-Za-z0-9_.-])/
    _OR.2: /OR(?![A-Za-z0-9_.-])/
    _WITH.2: /WITH(?![A-Za-z0-9_.-])/

    RELTYPE: /(%s)(?![A-Za-z0-9_.-])/
    EXACT: "="
    IDENT: /[A-Za-z0-9_.-]+/
    QUOTED: /"[^"\n]*"/

    %%import common.WS
    %%ignore WS
""" % _RELTYPES


class TermNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    ref: str
    exact: bool = False


class WithNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: TermNode
    rel_type: RelationType
    target: TermNode


class AndNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: "QueryAst"
    right: "QueryAst"


class OrNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: "QueryAst"
    right: "QueryAst"


class AndNotNode(BaseModel):
    model_config = ConfigDict(frozen=True)

    left: "QueryAst"
    right: "QueryAst"


QueryAst = Union[TermNode, WithNode, AndNode, OrNode, AndNotNode]

for _node in (AndNode, OrNode, AndNotNode):
    _node.model_rebuild()


class _ToAst(Transformer):
    def termref(self, children):
        exact = len(children) == 2
        return TermNode(ref=str(children[-1]), exact=exact)

    def with_op(self, children):
        base, rel_token, target = children
        return WithNode(base=base, rel_type=RelationType(str(rel_token)), target=target)

    def and_op(self, children):
        return AndNode(left=children[0], right=children[1])

    def or_op(self, children):
        return OrNode(left=children[0], right=children[1])

    def andnot_op(self, children):
        return AndNotNode(left=children[0], right=children[1])


# shared by every parse_query call
_PARSER = Lark(QUERY_GRAMMAR, parser="lalr")


def get_parser() -> Lark:
    return _PARSER


def _byte_offset(text: str, char_pos: int) -> int:
    return len(text[:char_pos].encode("utf-8")) + 1


def _describe(error: UnexpectedInput, text: str) -> ParseError:
    if isinstance(error, UnexpectedEOF):
        return ParseError(_byte_offset(text, len(text)), list(error.expected))
    if isinstance(error, UnexpectedToken):
        token: Token = error.token
        if token.type == "$END":
            return ParseError(_byte_offset(text, len(text)), list(error.expected))
        return ParseError(_byte_offset(text, token.start_pos), list(error.expected), str(token))
    if isinstance(error, UnexpectedCharacters):
        return ParseError(_byte_offset(text, error.pos_in_stream), list(error.allowed or ()), text[error.pos_in_stream])
    return ParseError(_byte_offset(text, getattr(error, "pos_in_stream", 0) or 0), [])


def parse_query(text: str) -> QueryAst:
    """Parse a query into its syntax tree; raises ParseError with a 1-based byte offset."""
    try:
        tree = get_parser().parse(text)
    except UnexpectedInput as error:
        raise _describe(error, text) from None
    return _ToAst().transform(tree)


def format_query(node: QueryAst) -> str:
    """Canonical, fully parenthesised rendering of a syntax tree."""
    if isinstance(node, TermNode):
        return ("=" if node.exact else "") + node.ref
    if isinstance(node, WithNode):
        return f"{format_query(node.base)} WITH [{node.rel_type.token}: {format_query(node.target)}]"
    op = {AndNode: "AND", OrNode: "OR", AndNotNode: "ANDNOT"}[type(node)]
    return f"({format_query(node.left)} {op} {format_query(node.right)})"
