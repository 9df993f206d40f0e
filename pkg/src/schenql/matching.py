"""Text matching shared by the evaluator and its reference twin.

Only value-level primitives live here (name modes, term expressions); set
semantics stay separate in each evaluator so the two routes cannot share a
logic bug.
"""

from __future__ import annotations

import re

from .ast import MODE_EXACT, MODE_FUZZY

# Trailing dblp-style disambiguator: "Wei Wang 0042" names the same string
# as "Wei Wang" for default-mode matching.
_DISAMBIGUATOR = re.compile(r"\s\d{4}$")
_NON_ALNUM = re.compile(r"[^0-9a-z]+")


def strip_disambiguator(name: str) -> str:
    return _DISAMBIGUATOR.sub("", name)


def tokens(text: str) -> list[str]:
    """Lowercased alphanumeric runs."""
    return [t for t in _NON_ALNUM.split(text.lower()) if t]


def name_matches(pattern: str, mode: str, name: str, aliases: tuple[str, ...] = ()) -> bool:
    """Does a pattern in the given mode match an entity name (or alias)?

    default: case-insensitive equality, ignoring a trailing 4-digit
    disambiguator on the candidate. fuzzy (~): every pattern token occurs
    among the candidate's tokens. exact (=): case-sensitive equality.
    """
    candidates = (name, *aliases)
    if mode == MODE_EXACT:
        return pattern in candidates
    if mode == MODE_FUZZY:
        want = tokens(pattern)
        if not want:
            return False
        for cand in candidates:
            have = set(tokens(cand))
            if all(t in have for t in want):
                return True
        return False
    low = pattern.lower()
    for cand in candidates:
        c = cand.lower()
        if c == low or strip_disambiguator(c) == low:
            return True
    return False


# -- term expressions ---------------------------------------------------------
#
# ABOUT TERMS takes a tiny boolean expression over words: ':' is AND, '|' is
# OR, ':' binds tighter, parentheses group. A word is matched whole-token
# against a publication's title and abstract. Multi-word atoms require all
# their tokens.

TermsExpr = tuple  # ("or"|"and", [children]) or ("word", [tokens])


def parse_terms(text: str) -> TermsExpr:
    """Parse a term expression; raises ValueError on malformed input."""
    pos = 0

    def peek() -> str | None:
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1
        return text[pos] if pos < len(text) else None

    def parse_or() -> TermsExpr:
        nonlocal pos
        parts = [parse_and()]
        while peek() == "|":
            pos += 1
            parts.append(parse_and())
        return parts[0] if len(parts) == 1 else ("or", parts)

    def parse_and() -> TermsExpr:
        nonlocal pos
        parts = [parse_atom()]
        while peek() == ":":
            pos += 1
            parts.append(parse_atom())
        return parts[0] if len(parts) == 1 else ("and", parts)

    def parse_atom() -> TermsExpr:
        nonlocal pos
        c = peek()
        if c == "(":
            pos += 1
            inner = parse_or()
            if peek() != ")":
                raise ValueError("unclosed '(' in term expression")
            pos += 1
            return inner
        start = pos
        while pos < len(text) and text[pos] not in ":|()":
            pos += 1
        word = text[start:pos].strip()
        toks = tokens(word)
        if not toks:
            raise ValueError("empty word in term expression")
        return ("word", toks)

    expr = parse_or()
    if peek() is not None:
        raise ValueError(f"unexpected {text[pos]!r} in term expression")
    return expr


def terms_match(expr: TermsExpr, have: set[str]) -> bool:
    op, parts = expr
    if op == "word":
        return all(t in have for t in parts)
    if op == "and":
        return all(terms_match(p, have) for p in parts)
    return any(terms_match(p, have) for p in parts)
