"""
Exceptions raised by the knowledge base engine
Each error carries a stable code, a human-readable detail and the CLI exit status it maps to
"""

from typing import Optional


class KosError(Exception):
    code = "KOS_ERROR"
    exit_status = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def __str__(self) -> str:
        return f"{self.code}: {self.detail}"


class NotFound(KosError):
    code = "NOT_FOUND"


class Ambiguous(KosError):
    code = "AMBIGUOUS"

    def __init__(self, ref: str, candidates: list[str]):
        self.candidates = sorted(candidates)
        super().__init__(f"{ref} matches several concepts: {', '.join(self.candidates)}")


class BadRelType(KosError):
    code = "BAD_REL_TYPE"


class InvalidKb(KosError):
    code = "INVALID_KB"


class ParseError(KosError):
    """Query syntax error; offset is a 1-based byte offset into the query text"""
    code = "PARSE_ERROR"
    exit_status = 2

    def __init__(self, offset: int, expected: list[str], found: Optional[str] = None):
        self.offset = offset
        self.expected = sorted(expected)
        got = f"found {found!r}" if found is not None else "found end of input"
        super().__init__(f"at byte {offset}: expected one of {', '.join(self.expected) or '?'}, {got}")


class FormatError(KosError):
    code = "FORMAT_ERROR"
    exit_status = 2

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DuplicateId(FormatError):
    code = "DUPLICATE_ID"
