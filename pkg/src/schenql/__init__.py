"""Query language for bibliographic metadata: parser, evaluator, SQL backend."""

from .ast import render
from .errors import (
    CorpusError,
    LexError,
    ParseError,
    SchenqlError,
    SemanticError,
)
from .parser import Suggestion, SuggestResult, parse, parse_all, suggest

__version__ = "0.1.0"

__all__ = [
    "CorpusError",
    "LexError",
    "ParseError",
    "SchenqlError",
    "SemanticError",
    "Suggestion",
    "SuggestResult",
    "parse",
    "parse_all",
    "render",
    "suggest",
    "__version__",
]
