import pytest

from schenql.errors import LexError
from schenql.lexer import KEYWORD, NUMBER, STRING, Token, tokenize


def kinds(text):
    return [t.kind for t in tokenize(text)]


def lexemes(text):
    return [t.lexeme for t in tokenize(text)]


def test_basic_query_tokens():
    toks = tokenize('PERSONS NAMED ~"wei wang"')
    assert [(t.kind, t.lexeme) for t in toks] == [
        (KEYWORD, "PERSONS"),
        (KEYWORD, "NAMED"),
        ("tilde", "~"),
        (STRING, "wei wang"),
    ]


def test_punctuation_and_numbers():
    assert kinds("~3 ( ) [ ] , 2021") == [
        "tilde",
        NUMBER,
        "lparen",
        "rparen",
        "lbracket",
        "rbracket",
        "comma",
        NUMBER,
    ]
    assert lexemes("007") == ["007"]


def test_hyphenated_keyword():
    assert tokenize("H-AVG") == [Token(KEYWORD, "H-AVG", (0, 5))]


def test_string_escapes():
    assert lexemes(r'"a \"quoted\" name"') == ['a "quoted" name']
    assert lexemes(r'"back\\slash"') == ["back\\slash"]


def test_spans_are_byte_offsets():
    # the two-byte character before the string shifts byte spans, not
    # character positions
    toks = tokenize('"é" PERSONS')
    assert toks[0].span == (0, 4)
    assert toks[1].span == (5, 12)


def test_whitespace_changes_spans_only():
    a = tokenize("COUNT(PERSONS)")
    b = tokenize("COUNT ( PERSONS )")
    assert [(t.kind, t.lexeme) for t in a] == [(t.kind, t.lexeme) for t in b]


def test_unterminated_string():
    with pytest.raises(LexError) as err:
        tokenize('PERSONS NAMED "wei')
    assert err.value.span == (14, 18)
    assert "unterminated" in err.value.message


def test_illegal_character():
    with pytest.raises(LexError) as err:
        tokenize("persons")
    assert err.value.span == (0, 1)


def test_lowercase_only_inside_strings():
    with pytest.raises(LexError):
        tokenize("PERSONS named")
    assert lexemes('"named"') == ["named"]


def test_empty_input():
    assert tokenize("") == []
    assert tokenize("   \t\n") == []
