import pytest
from hypothesis import given
from hypothesis import strategies as st

from schenql.matching import name_matches, parse_terms, terms_match, tokens


def test_tokens_lowercase_alnum_runs():
    assert tokens("Anna-Lena Arndt") == ["anna", "lena", "arndt"]
    assert tokens("  Wei   Wang 0042 ") == ["wei", "wang", "0042"]
    assert tokens("") == []
    assert tokens("...") == []


def test_fuzzy_matches_token_subsets_in_any_order():
    assert name_matches("wang wei", "fuzzy", "Wang Wei Lee")
    assert name_matches("wang wei", "fuzzy", "Wei-Bo Wang")
    assert name_matches("wang wei", "fuzzy", "Wei Wang")
    assert not name_matches("wang wei", "fuzzy", "Wei Wong")
    assert not name_matches("", "fuzzy", "Wei Wang")


def test_exact_is_case_sensitive_and_suffix_sensitive():
    assert name_matches("Wei Wang", "exact", "Wei Wang")
    assert not name_matches("Wei Wang", "exact", "Wei Wang 0042")
    assert not name_matches("wei wang", "exact", "Wei Wang")


def test_default_ignores_case_and_homonym_suffix():
    assert name_matches("wei wang", "default", "Wei Wang")
    assert name_matches("Wei Wang", "default", "Wei Wang 0042")
    assert not name_matches("Wei Wang", "default", "Wang Wei")
    # only the four-digit trailing disambiguator is stripped
    assert not name_matches("Wei Wang", "default", "Wei Wang 42")
    assert name_matches("Wei Wang 0042", "default", "Wei Wang 0042")


def test_exact_mode_consults_every_stored_name():
    assert name_matches("W. Wang", "exact", "Wei Wang", ("W. Wang",))
    assert name_matches("w. wang", "default", "Wei Wang", ("W. Wang",))
    assert not name_matches("W. Wang", "exact", "Wei Wang", ())


def test_terms_parse_and_match():
    expr = parse_terms("digital:libraries|dsql")
    assert terms_match(expr, {"digital", "libraries"})
    assert terms_match(expr, {"dsql"})
    assert not terms_match(expr, {"digital"})
    expr = parse_terms("(search:interfaces)|ranking")
    assert terms_match(expr, {"ranking"})
    assert not terms_match(expr, {"search"})


@pytest.mark.parametrize("bad", ["", "a:", "|b", "a||b", "(a", "a)b", "()"])
def test_malformed_term_expressions_rejected(bad):
    with pytest.raises(ValueError):
        parse_terms(bad)


@given(st.lists(st.text(alphabet="abc xyz-", min_size=1, max_size=12), min_size=1, max_size=4))
def test_fuzzy_is_order_insensitive(parts):
    pattern = " ".join(parts)
    candidate = " ".join(reversed(parts))
    assert name_matches(pattern, "fuzzy", candidate) == bool(tokens(pattern))


@given(st.text(alphabet="abcABC -0129", max_size=20))
def test_default_mode_is_reflexive(name):
    assert name_matches(name, "default", name)
