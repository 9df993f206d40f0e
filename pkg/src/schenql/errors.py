"""Diagnostic types shared across the pipeline.

Every user-facing failure is one of these; each carries a machine-readable
code and, when it points at query text, a byte span into the UTF-8 input.
"""

from __future__ import annotations

Span = tuple[int, int]


class SchenqlError(Exception):
    """Base class for all diagnostics."""

    code = "error"

    def __init__(self, message: str, span: Span | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.span = span

    def to_dict(self) -> dict:
        out: dict = {"code": self.code, "message": self.message}
        if self.span is not None:
            out["span"] = list(self.span)
        return out


class LexError(SchenqlError):
    code = "lexical_error"


class ParseError(SchenqlError):
    code = "syntax_error"

    def __init__(self, message: str, span: Span, expected: tuple[str, ...] = ()) -> None:
        super().__init__(message, span)
        self.expected = expected

    def to_dict(self) -> dict:
        out = super().to_dict()
        if self.expected:
            out["expected"] = list(self.expected)
        return out


class SemanticError(SchenqlError):
    code = "semantic_error"


class CorpusError(SchenqlError):
    """Raised while loading a corpus directory (bad file, bad record)."""

    code = "corpus_error"


class Warning_:
    """Non-fatal diagnostic attached to a plan (e.g. a literal that resolves to nothing)."""

    __slots__ = ("message", "span")

    def __init__(self, message: str, span: Span | None = None) -> None:
        self.message = message
        self.span = span

    def to_dict(self) -> dict:
        out: dict = {"code": "warning", "message": self.message}
        if self.span is not None:
            out["span"] = list(self.span)
        return out

    def __repr__(self) -> str:  # pragma: no cover
        return f"Warning_({self.message!r})"
