"""Tokenizer for query text.

Keywords are upper-case words (hyphens allowed, e.g. H-AVG); everything
user-supplied travels in double-quoted strings. Spans are byte offsets into
the UTF-8 encoding of the input so diagnostics stay stable regardless of
how the text is sliced upstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LexError

KEYWORD = "keyword"
STRING = "string_literal"
NUMBER = "number"
TILDE = "tilde"
EQUALS = "equals"
LBRACKET = "lbracket"
RBRACKET = "rbracket"
LPAREN = "lparen"
RPAREN = "rparen"
COMMA = "comma"

_PUNCT = {
    "~": TILDE,
    "=": EQUALS,
    "[": LBRACKET,
    "]": RBRACKET,
    "(": LPAREN,
    ")": RPAREN,
    ",": COMMA,
}


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str  # for string_literal this is the unquoted, unescaped text
    span: tuple[int, int]


def _blen(ch: str) -> int:
    return len(ch.encode("utf-8"))


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    byte = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            byte += _blen(ch)
            pos += 1
            continue
        start = byte
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, (start, start + 1)))
            pos += 1
            byte += 1
            continue
        if ch == '"':
            pos += 1
            byte += 1
            buf: list[str] = []
            closed = False
            while pos < n:
                c = text[pos]
                if c == '"':
                    pos += 1
                    byte += 1
                    closed = True
                    break
                if c == "\\" and pos + 1 < n:
                    nxt = text[pos + 1]
                    buf.append(nxt)
                    byte += 1 + _blen(nxt)
                    pos += 2
                    continue
                buf.append(c)
                byte += _blen(c)
                pos += 1
            if not closed:
                raise LexError("unterminated string literal", (start, byte))
            tokens.append(Token(STRING, "".join(buf), (start, byte)))
            continue
        if ch.isdigit():
            j = pos
            while j < n and text[j].isdigit():
                j += 1
            lexeme = text[pos:j]
            byte += len(lexeme)  # digits are one byte each
            tokens.append(Token(NUMBER, lexeme, (start, byte)))
            pos = j
            continue
        if "A" <= ch <= "Z":
            j = pos
            while j < n and ("A" <= text[j] <= "Z" or text[j] == "-"):
                j += 1
            lexeme = text[pos:j]
            byte += len(lexeme)
            tokens.append(Token(KEYWORD, lexeme, (start, byte)))
            pos = j
            continue
        raise LexError(f"illegal character {ch!r}", (start, start + _blen(ch)))
    return tokens
