"""Parsing and next-token suggestion on top of the shared grammar.

parse() returns the single syntax tree for a query. suggest() reports, for
any prefix, every unit a user could type next: single words, the two-word
comparator/operator units (AT LEAST, AND NOT, ...), and the placeholders
NUMBER and "STRING". Both views come from the same recognizer run, so they
cannot disagree about what the language accepts.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ast as A
from .engine import ParseRun, _term_template, tokens_to_text
from .errors import LexError, ParseError, SchenqlError
from .grammar import CATEGORY_ORDER, COMPOUND_HEADS, EXTENDABLE_OPS, GRAMMAR
from .lexer import Token, tokenize

# When one unit string is reachable through terminals of several categories,
# the listing keeps the most distinctive one.
_CATEGORY_PRIORITY = {
    "base_concept": 0,
    "function": 1,
    "filter": 2,
    "operator": 3,
    "restriction": 4,
    "literal_placeholder": 5,
}


@dataclass(frozen=True)
class Suggestion:
    token: str
    category: str


@dataclass
class SuggestResult:
    suggestions: list[Suggestion]
    complete: bool
    diagnostic: SchenqlError | None = None


def parse(text: str) -> A.Query:
    """Parse a full query; raises LexError or ParseError."""
    tokens = tokenize(text)
    run = GRAMMAR.run(tokens)
    if run.results:
        return run.results[0]
    raise error_from_run(text, tokens, run)


def parse_all(text: str) -> list[A.Query]:
    """Every derivation of the text; a healthy grammar yields at most one."""
    tokens = tokenize(text)
    return GRAMMAR.run(tokens, exhaustive=True).results


def suggest(text: str) -> SuggestResult:
    try:
        tokens = tokenize(text)
    except LexError as e:
        return SuggestResult([], complete=False, diagnostic=e)
    run = GRAMMAR.run(tokens, exhaustive=True)
    complete = bool(run.results)
    items = _fold_expected(run, len(tokens))
    if not items and not complete:
        return SuggestResult([], False, error_from_run(text, tokens, run))
    return SuggestResult(items, complete, None)


def _fold_expected(run: ParseRun, pos: int) -> list[Suggestion]:
    best: dict[str, str] = {}

    def add(token: str, category: str) -> None:
        cur = best.get(token)
        if cur is None or _CATEGORY_PRIORITY[category] < _CATEGORY_PRIORITY[cur]:
            best[token] = category

    for label, (term, _cont) in run.expected.get(pos, {}).items():
        if not term.suggestible:
            continue
        if label in COMPOUND_HEADS:
            for unit in COMPOUND_HEADS[label]:
                add(unit, term.category)
            continue
        add(label, term.category)
        if label in EXTENDABLE_OPS:
            add(EXTENDABLE_OPS[label], term.category)
    items = [Suggestion(tok, cat) for tok, cat in best.items()]
    items.sort(key=lambda s: (CATEGORY_ORDER.index(s.category), s.token))
    return items


def error_from_run(text: str, tokens: list[Token], run: ParseRun) -> ParseError:
    pos = max(run.expected) if run.expected else 0
    expected = sorted(_fold_labels(run, pos))
    listing = ", ".join(expected)
    if pos < len(tokens):
        tok = tokens[pos]
        msg = f"unexpected {tok.lexeme!r}"
        span = tok.span
    else:
        msg = "unexpected end of query"
        end = len(text.encode("utf-8"))
        span = (end, end)
    if listing:
        msg += f", expected one of: {listing}"
    return ParseError(msg, span, tuple(expected))


def _fold_labels(run: ParseRun, pos: int) -> set[str]:
    out: set[str] = set()
    for label, (term, _cont) in run.expected.get(pos, {}).items():
        if not term.suggestible:
            continue
        if label in COMPOUND_HEADS:
            out.update(COMPOUND_HEADS[label])
        else:
            out.add(label)
    return out


def complete_prefix(text: str) -> str | None:
    """Some full query starting with the given prefix, or None.

    Used as an existence witness: a prefix is useful exactly when it can be
    finished, and the returned text is checkable by parse().
    """
    try:
        tokens = tokenize(text)
    except LexError:
        return None
    run = GRAMMAR.run(tokens, exhaustive=True)
    if run.results:
        return text
    end = run.expected.get(len(tokens))
    if not end:
        return None
    term, cont = next(iter(end.values()))
    suffix = [_term_template(term)] + run.completion(cont)
    rest = tokens_to_text(suffix)
    return (text + " " + rest).strip() if text.strip() else rest


def prefix_state(text: str) -> tuple[bool, bool]:
    """(parses as a full query, can still be extended)."""
    try:
        tokens = tokenize(text)
    except LexError:
        return (False, False)
    run = GRAMMAR.run(tokens, exhaustive=True)
    return (bool(run.results), bool(run.expected.get(len(tokens))))


def vocabulary() -> dict[str, str]:
    """Every unit the suggester can emit, mapped to the text that applies it."""
    units: dict[str, str] = {}
    for term in GRAMMAR.terminals():
        if not term.suggestible or term.label in COMPOUND_HEADS:
            continue
        units[term.label] = _apply_text(term.label)
    for heads in COMPOUND_HEADS.values():
        for unit in heads:
            units[unit] = unit
    for unit in EXTENDABLE_OPS.values():
        units[unit] = unit
    return units


def _apply_text(label: str) -> str:
    if label == "NUMBER":
        return "2"
    if label == '"STRING"':
        return '"x"'
    return label
