import pytest

from schenql import parse, parse_all, render
from schenql.ast import (
    AggregationQuery,
    EntityQuery,
    FilterBinary,
    FilterLeaf,
    FunctionQuery,
    Limit,
    RankLimit,
    StrLit,
)
from schenql.errors import LexError, ParseError

from support import showcase_queries


def test_showcase_queries_parse():
    for text in showcase_queries():
        parse(text)


def test_showcase_queries_have_one_derivation():
    for text in showcase_queries():
        trees = parse_all(text)
        assert len(trees) == 1, f"{len(trees)} derivations: {text}"


def test_render_is_a_fixed_point():
    for text in showcase_queries():
        tree = parse(text)
        canon = render(tree)
        assert parse(canon) == tree, text
        assert render(parse(canon)) == canon, text


def test_plain_scan():
    q = parse("PERSONS")
    assert q == EntityQuery(concept="person")
    assert parse("PERSON") == q


def test_specialisations():
    assert parse("ARTICLES") == EntityQuery(concept="publication", specialisation="article")
    assert parse("AUTHORS") == EntityQuery(concept="person", specialisation="author")
    assert parse("PHDTHESISS") == EntityQuery(concept="publication", specialisation="phdthesis")


def test_limit_and_rank_restriction():
    assert parse("3 PERSONS") == EntityQuery(concept="person", restriction=Limit(3))
    q = parse("~2 MOST CITED (PUBLICATIONS)")
    assert isinstance(q, AggregationQuery)
    assert q.kind == "most_cited" and q.rank == RankLimit(2) and q.limit is None
    q = parse("3 ~5 MOST CITED (PUBLICATIONS)")
    assert q.rank == RankLimit(5) and q.limit == Limit(3)


def test_filter_chain_is_left_associative():
    q = parse('PUBLICATIONS ABOUT "a" AND ABOUT "b" OR ABOUT "c"')
    assert isinstance(q.filter, FilterBinary)
    assert q.filter.op == "or"
    assert q.filter.lhs.op == "and"
    assert isinstance(q.filter.rhs, FilterLeaf)


def test_implicit_and_equals_explicit():
    a = parse('PUBLICATIONS ABOUT "x" WITH YEAR 2020')
    b = parse('PUBLICATIONS ABOUT "x" AND WITH YEAR 2020')
    assert a == b


def test_and_not_or_not():
    q = parse('PUBLICATIONS ABOUT "x" AND NOT ABOUT "y"')
    assert q.filter.op == "and_not"
    q = parse('PUBLICATIONS ABOUT "x" OR NOT ABOUT "y"')
    assert q.filter.op == "or_not"


def test_match_mode_prefixes():
    leaf = parse('PERSONS NAMED ~"wang"').filter
    assert leaf.args[0] == StrLit(kinds=frozenset({"person"}), text="wang", mode="fuzzy")
    leaf = parse('PERSONS NAMED ="Wei Wang"').filter
    assert leaf.args[0].mode == "exact"
    leaf = parse('PERSONS NAMED "Wei Wang"').filter
    assert leaf.args[0].mode == "default"


def test_comparator_defaults_to_equality():
    a = parse("PUBLICATIONS WITH YEAR 2020").filter
    assert a.args[0] == "eq"
    assert parse("PUBLICATIONS WITH YEAR AT LEAST 2020").filter.args[0] == "at_least"
    assert parse("PUBLICATIONS WITH YEAR AT MOST 2020").filter.args[0] == "at_most"
    assert parse("PUBLICATIONS WITH YEAR MORE THAN 2020").filter.args[0] == "more_than"
    assert parse("PUBLICATIONS WITH YEAR LESS THAN 2020").filter.args[0] == "less_than"


def test_keyword_marker_is_optional_after_about():
    assert parse('PUBLICATIONS ABOUT "x"') == parse('PUBLICATIONS ABOUT KEYWORD "x"')
    assert parse('PUBLICATIONS ABOUT KEYWORDS "x"') == parse('PUBLICATIONS ABOUT KEYWORD "x"')


def test_function_queries():
    q = parse("COUNT (PERSONS)")
    assert isinstance(q, FunctionQuery) and q.kind == "count"
    q = parse('CORE RANKS FOR "Wei Wang" IN (JOURNALS)')
    assert q.kind == "core_ranks_for" and len(q.args) == 2
    q = parse("[TITLES, YEARS] OF (PUBLICATIONS)")
    assert q.kind == "attributes_of" and q.args[0] == ("title", "year")


def test_nested_queries():
    q = parse("PUBLICATIONS CITED BY (PUBLICATIONS WRITTEN BY (COAUTHORS OF (PERSONS)))")
    inner = q.filter.args[0]
    assert isinstance(inner, EntityQuery)
    assert isinstance(inner.filter.args[0], AggregationQuery)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "PERSONS WITH",
        "PUBLICATIONS WITH YEAR",
        "WITH YEAR 2020",
        "PERSONS NAMED",
        'NAMED "x"',
        "PUBLICATIONS ABOUT",
        "COUNT PERSONS",
        "COUNT (PERSONS",
        "COUNT (PERSONS))",
        "MOST CITED",
        'PERSONS AND "x"',
        'PERSONS NAMED "a" AND',
        'PERSONS NAMED "a" NOT NAMED "b"',
        "PERSONS 3",
        "~ PERSONS",
        "[TITLES YEARS] OF (PUBLICATIONS)",
        "PUBLICATIONS WITH 3 YEAR",
        'PUBLICATIONS WRITTEN BY ANY OF [(PERSONS)]',
    ],
)
def test_malformed_queries_rejected(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_reports_position_and_expectations():
    with pytest.raises(ParseError) as err:
        parse("PERSONS WITH")
    assert err.value.span == (12, 12)
    assert "~" in err.value.expected
    with pytest.raises(ParseError) as err:
        parse('PUBLICATIONS NAMED "x"')
    assert err.value.span == (13, 18)
    assert "TITLED" in err.value.expected


def test_lex_error_propagates():
    with pytest.raises(LexError):
        parse('PERSONS NAMED "unclosed')


def test_singular_and_plural_forms_agree():
    assert parse("CONFERENCES") == parse("CONFERENCE")
    assert parse("PHDTHESISS") == parse("PHDTHESIS")
    assert parse("[TITLE, YEAR] OF (PUBLICATIONS)") == parse("[TITLES, YEARS] OF (PUBLICATIONS)")
