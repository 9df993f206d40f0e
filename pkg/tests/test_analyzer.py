import pytest

from schenql import parse
from schenql.analyzer import entity_kinds, lower, validate
from schenql.errors import SemanticError

from support import showcase_queries


def plan_of(text, corpus=None):
    return lower(parse(text), corpus)


def test_showcase_plans_validate():
    for text in showcase_queries():
        plan = plan_of(text)
        assert validate(plan) == [], text


def test_result_shapes():
    assert plan_of("PERSONS").result_kind == "entities"
    assert plan_of("PERSONS").entity_kind == "person"
    assert plan_of("COUNT (PERSONS)").result_kind == "scalar"
    p = plan_of('CORE RANKS FOR "x"')
    assert p.result_kind == "table" and p.columns == ("rank", "count")
    p = plan_of("[TITLES, YEARS] OF (PUBLICATIONS)")
    assert p.columns == ("title", "year")
    p = plan_of('ALTERNATIVE NAMES FOR "x"')
    assert p.result_kind == "table"


def test_aggregation_result_kinds():
    assert plan_of('COAUTHORS OF "x"').entity_kind == "person"
    assert plan_of("MOST CITED (PUBLICATIONS)").entity_kind == "publication"
    assert plan_of('RELATED KEYWORDS TO "x"').entity_kind == "keyword"
    assert plan_of('MOST RESEARCHING (INSTITUTIONS) ABOUT "x"').entity_kind == "institution"


def test_rank_restriction_requires_aggregation():
    with pytest.raises(SemanticError) as err:
        plan_of("~3 PERSONS")
    assert "aggregat" in err.value.message
    assert err.value.span is not None
    # the same shape with a plain limit is fine
    plan_of("3 PERSONS")


def test_zero_restrictions_rejected():
    with pytest.raises(SemanticError):
        plan_of("0 PERSONS")
    with pytest.raises(SemanticError):
        plan_of("~0 MOST CITED (PUBLICATIONS)")


def test_unknown_literals_warn_with_span(corpus):
    plan = plan_of('PUBLICATIONS WRITTEN BY "nobody at all"', corpus)
    assert len(plan.warnings) == 1
    w = plan.warnings[0]
    assert "nobody at all" in w.message and w.span is not None
    assert plan_of('PUBLICATIONS WRITTEN BY "Wei Wang"', corpus).warnings == []


def test_lowering_is_corpus_free_by_default():
    # without a corpus no resolution warnings are possible, but plans
    # still build and validate
    plan = plan_of('PUBLICATIONS WRITTEN BY "nobody at all"')
    assert plan.warnings == []


def test_entity_kinds_tracks_node_kinds():
    plan = plan_of('PUBLICATIONS WRITTEN BY (COAUTHORS OF "x")')
    kinds = entity_kinds(plan)
    assert "publication" in kinds and "person" in kinds


def test_plans_are_deterministic():
    a = plan_of('PUBLICATIONS ABOUT "x" OR NOT WITH YEAR 2020')
    b = plan_of('PUBLICATIONS ABOUT "x" OR NOT WITH YEAR 2020')
    assert a.explain() == b.explain()


def test_or_not_lowering_uses_set_algebra():
    text = plan_of('PUBLICATIONS ABOUT "x" OR NOT ABOUT "y"').explain()
    assert "minus" in text and "union" in text
