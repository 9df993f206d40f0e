"""Frozen evaluation expectations over the checked-in fixture.

Every expected list below was derived by hand from fixtures/mini (six
publications, five persons) and cross-checked against the independent
AST-walking oracle before freezing. Ordering is part of the contract:
plain sets are key-ascending, ranked sets follow score direction with
key-ascending tie-break.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schenql import parse
from schenql.analyzer import lower
from schenql.evaluator import Evaluator, compare, evaluate, h_index, rank_restrict

from support import (
    ANNA,
    CNR,
    JCDL,
    JODL,
    LOTTE,
    MARCO,
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    TRIER,
    WEI,
    WW42,
)

ENTITY_CHECKS = [
    # plain scans and filters
    ("PUBLICATIONS", [P3, P4, P1, P2, P5, P6]),
    ("PUBLICATIONS WITH YEAR 2021", [P4, P5]),
    ('PUBLICATIONS WITH YEAR AT LEAST 2020 AND NOT ABOUT KEYWORD "search"', [P3, P4]),
    ("ARTICLES", [P2, P5]),
    ("PHDTHESISS", [P6]),
    ("AUTHORS", [ANNA, MARCO, WEI, WW42]),
    ("EDITORS", [LOTTE]),
    # literals and matching modes
    ('PUBLICATIONS WRITTEN BY "Wei Wang"', [P1, P2, P5]),
    ('PUBLICATIONS WRITTEN BY ="Wei Wang"', [P1, P2, P5]),
    ('PUBLICATIONS WRITTEN BY ~"arndt"', [P3, P1, P6]),
    ('PUBLICATIONS ABOUT "digital libraries"', [P1, P2]),
    ('PUBLICATIONS ABOUT ["digital libraries", "ranking"]', [P4, P1, P2]),
    ('PUBLICATIONS ABOUT TERMS "digital:libraries|dsql"', [P3, P1, P2, P5, P6]),
    ('PUBLICATIONS TITLED ~"digital libraries"', [P1, P2, P5, P6]),
    ('PUBLICATIONS WITH DOI "10.1000/JODL.2019.2"', [P2]),
    ('PUBLICATIONS WITH ISBN "978-3-16-148410-0"', [P3]),
    ('PUBLICATIONS APPEARED IN "JCDL"', [P3, P4, P1]),
    ('PUBLICATIONS CITED BY (PUBLICATIONS WITH DBLPKEY "phd/de/Arndt22")', [P3, P4, P2, P5]),
    ("PUBLICATIONS REFERENCES (PUBLICATIONS WITH YEAR 2018)", [P3, P2, P5]),
    ('PUBLICATIONS PUBLISHED WITH "CNR"', [P3, P4, P5]),
    ('PUBLICATIONS EDITED BY "Lotte Weber"', [P5]),
    # citation and reference counting
    ("PUBLICATIONS WITH MORE THAN 2 CITATIONS", [P3, P1, P2]),
    ("PUBLICATIONS WITH 0 CITATIONS", [P6]),
    ("PUBLICATIONS WITH AT LEAST 2 REFERENCES", [P3, P5, P6]),
    ("PUBLICATIONS WITH 1 CITATIONS FROM (PHDTHESISS)", [P3, P4, P2, P5]),
    ("PUBLICATIONS WITH MOST CITATIONS", [P3, P1, P2]),
    ("PUBLICATIONS WITH ~2 MOST CITATIONS", [P3, P1, P2]),
    ("PUBLICATIONS WITH ~4 MOST CITATIONS", [P3, P1, P2, P4, P5]),
    ("PUBLICATIONS WITH LEAST CITATIONS", [P6]),
    # aggregations
    ("MOST CITED (PUBLICATIONS)", [P3, P1, P2]),
    ('MOST CITED (PUBLICATIONS APPEARED IN "JODL")', [P2]),
    ("~2 MOST CITED (PUBLICATIONS)", [P3, P1, P2]),
    ("~4 MOST CITED (PUBLICATIONS)", [P3, P1, P2, P4, P5]),
    ("2 MOST CITED (PUBLICATIONS)", [P3, P1]),
    ("NEWEST (PUBLICATIONS)", [P6]),
    ("OLDEST (PUBLICATIONS)", [P1]),
    ('COAUTHORS OF "Wei Wang"', [ANNA]),
    ('COAUTHORS OF ="Wei Wang"', [ANNA, WW42]),
    ('MOST PUBLISHING (PERSONS) IN "JCDL"', [ANNA, MARCO]),
    ('MOST RESEARCHING (PERSONS) ABOUT "search"', [ANNA, WEI]),
    ('MOST RESEARCHING (INSTITUTIONS) ABOUT "dsql"', [TRIER]),
    ('RELATED KEYWORDS TO "digital libraries"', ["citation analysis", "search"]),
    (
        'RELATED KEYWORDS TO (KEYWORDS OF "conf/jcdl/WangArndt18") IN (ARTICLES)',
        ["citation analysis", "user interfaces"],
    ),
    ("MOST FREQUENT KEYWORDS OF (KEYWORDS)", ["search"]),
    ("~2 MOST FREQUENT KEYWORDS OF (KEYWORDS)", ["search", "digital libraries", "dsql"]),
    ('MOST FREQUENT KEYWORDS OF "Wei Wang"', ["digital libraries", "search"]),
    # person filters
    ('PERSONS AUTHORED ONLY (PUBLICATIONS APPEARED IN "JODL")', [WW42]),
    ('PERSONS AUTHORED NO (PUBLICATIONS APPEARED IN "JODL")', [ANNA, LOTTE, MARCO]),
    ('PERSONS WORKS FOR "Trier University"', [ANNA, LOTTE, WEI]),
    ('PERSONS PUBLISHED IN "JODL"', [WEI, WW42]),
    ("PERSONS WITH 2 COAUTHORS", [ANNA, WEI]),
    ("PERSONS WITH MOST COAUTHORS", [ANNA, WEI]),
    ("PERSONS EDITED (ARTICLES)", [LOTTE]),
    ('PERSONS COAUTHORS OF "Marco Rossi"', [ANNA]),
    # metric filters
    ("PERSONS WITH H-AVG METRIC 1", [MARCO, WEI, WW42]),
    ("PERSONS WITH HIGHEST H-AVG METRIC", [MARCO, WEI, WW42]),
    ('CONFERENCES WITH CORERANK METRIC "A*"', [JCDL]),
    ('PUBLICATIONS WITH CORERANK METRIC "A*"', [P3, P4, P1]),
    ("INSTITUTIONS WITH HIGHEST H-AVG METRIC", [CNR]),
    # venues
    ("CONFERENCES OF (PUBLICATIONS WITH YEAR 2021)", [JCDL]),
    ('JOURNALS OF (PUBLICATIONS WRITTEN BY "Wei Wang")', [JODL]),
    ('JOURNALS WITH VOLUME "20"', [JODL]),
    ("CONFERENCES WITH YEAR 2018", [JCDL]),
    ('CONFERENCES NAMED ~"joint conference"', [JCDL]),
    ('JOURNALS WITH ACRONYM "jodl"', [JODL]),
    # institutions
    ('INSTITUTIONS WITH CITY "pisa"', [CNR]),
    ('INSTITUTIONS WITH COUNTRY "DE"', [TRIER]),
    ('INSTITUTIONS WITH MEMBERS "Marco Rossi"', [CNR]),
    ('INSTITUTIONS NAMED "CNR"', [CNR]),
    # keywords
    ('KEYWORDS OF "Anna-Lena Arndt"', ["digital libraries", "dsql", "metadata", "search"]),
    (
        "KEYWORDS OF (ARTICLES)",
        ["citation analysis", "digital libraries", "search", "user interfaces"],
    ),
    # author-count filters over grouped argument lists
    (
        'PUBLICATIONS WRITTEN BY ANY DISTINCT 2 OF'
        ' [(PERSONS WORKS FOR "Trier University"), (PERSONS WORKS FOR "CNR")]',
        [P3, P5],
    ),
    (
        'PUBLICATIONS WRITTEN BY ANY 2 OF'
        ' [(PERSONS WORKS FOR "Trier University"), (PERSONS WORKS FOR "CNR")]',
        [P3, P1, P5],
    ),
    # boolean combinations
    ('PUBLICATIONS ABOUT "ranking" OR ABOUT "metadata"', [P3, P4]),
    ('PUBLICATIONS WITH YEAR 2021 OR NOT APPEARED IN "JCDL"', [P4, P2, P5, P6]),
    # length filters ("Anna-Lena Arndt" 15, "Wei Wang 0042" 13, "Marco
    # Rossi" and "Lotte Weber" 11, "Wei Wang" 8)
    ("PERSONS WITH NAME LENGTH MORE THAN 11", [ANNA, WW42]),
    ("PERSONS WITH LONGEST NAME", [ANNA]),
    ("PERSONS WITH SHORTEST NAME", [WEI]),
    ("PERSONS WITH ~2 LONGEST NAME", [ANNA, WW42]),
    # location is "City, Country": "Trier, DE" 9 beats "Pisa, IT" 8
    ("INSTITUTIONS WITH LONGEST LOCATION", [TRIER]),
    # limits truncate after ordering
    ("5 PERSONS", [ANNA, LOTTE, MARCO, WEI, WW42]),
    ("2 PUBLICATIONS WITH YEAR AT LEAST 2019", [P3, P4]),
    ('PERSON NAMED ~"wang"', [WEI, WW42]),
]

SCALAR_CHECKS = [
    ("COUNT (PUBLICATIONS)", 6),
    ("COUNT (PERSONS)", 5),
    ('COUNT (COAUTHORS OF "Wei Wang")', 1),
    ('COUNT (CORE RANKS FOR "Anna-Lena Arndt")', 1),
    ("COUNT (COUNT (PERSONS))", 1),
    ('COUNT (PUBLICATIONS WRITTEN BY "nobody")', 0),
]


def run(text, corpus):
    return evaluate(lower(parse(text), corpus), corpus)


@pytest.mark.parametrize("text,want", ENTITY_CHECKS, ids=lambda v: v if isinstance(v, str) else "")
def test_entity_expectations(corpus, text, want):
    r = run(text, corpus)
    assert r.kind == "entities"
    assert r.entities == want


@pytest.mark.parametrize("text,want", SCALAR_CHECKS, ids=lambda v: v if isinstance(v, str) else "")
def test_scalar_expectations(corpus, text, want):
    r = run(text, corpus)
    assert r.kind == "scalar" and r.value == want


def test_table_expectations(corpus):
    r = run('CORE RANKS FOR "Wei Wang"', corpus)
    assert r.kind == "table" and r.columns == ("rank", "count")
    assert r.rows == [("A*", 1)]
    assert run('CORE RANKS FOR "Anna-Lena Arndt"', corpus).rows == [("A*", 2)]
    assert run('CORE RANKS FOR "Anna-Lena Arndt" IN (JOURNALS)', corpus).rows == []
    r = run('ALTERNATIVE NAMES FOR "Wei Wang"', corpus)
    assert r.rows == [(WEI, "W. Wang")]
    r = run('ALTERNATIVE NAMES FOR "National Research Council, Italy"', corpus)
    assert r.rows == [(CNR, "CNR")]
    assert run("MOST FREQUENT YEAR OF (PUBLICATIONS)", corpus).rows == [(2021, 2)]
    r = run("[TITLES, YEARS] OF (2 ARTICLES)", corpus)
    assert r.columns == ("title", "year")
    assert r.rows == [
        ("A Survey of Digital Libraries", 2019),
        ("Search Interfaces for Digital Libraries", 2021),
    ]
    assert run('[NAMES] OF (COAUTHORS OF "Wei Wang")', corpus).rows == [("Anna-Lena Arndt",)]


def test_metric_values(corpus):
    ev = Evaluator(corpus)
    assert ev.metric_value("person", WEI, "h_avg") == 1
    assert ev.metric_value("person", ANNA, "h_avg") == Fraction(2, 3)
    assert ev.metric_value("person", LOTTE, "h_avg") == 0
    assert ev.metric_value("conference", JCDL, "h_avg") == 1
    assert ev.metric_value("institution", TRIER, "h_avg") == Fraction(4, 5)
    assert ev.metric_value("institution", CNR, "h_avg") == 1
    assert ev.metric_value("person", WEI, "core_rank") == 4
    assert ev.metric_value("person", LOTTE, "core_rank") == 0


def test_evaluation_is_deterministic(corpus):
    text = '~2 MOST CITED (PUBLICATIONS WRITTEN BY (COAUTHORS OF ="Wei Wang"))'
    assert run(text, corpus) == run(text, corpus)


# -- metric primitives --------------------------------------------------------


def test_h_index_examples():
    assert h_index([]) == 0
    assert h_index([0]) == 0
    assert h_index([3, 3, 1]) == 2
    assert h_index([5, 5, 5, 5, 5]) == 5
    assert h_index([10]) == 1


def brute_h(counts):
    best = 0
    for h in range(len(counts) + 1):
        if sum(1 for c in counts if c >= h) >= h:
            best = h
    return best


@given(st.lists(st.integers(min_value=0, max_value=40), max_size=25))
def test_h_index_matches_brute_force(counts):
    assert h_index(counts) == brute_h(counts)


def test_rank_restrict_competition_ranking():
    scored = [("a", 1), ("b", 2), ("c", 2), ("d", 0)]
    assert rank_restrict(scored, 1, True) == ["b", "c"]  # ties over-return
    assert rank_restrict(scored, 3, True) == ["b", "c", "a"]
    assert rank_restrict(scored, 1, False) == ["d"]
    assert rank_restrict(scored, 2, False) == ["d", "a"]
    assert rank_restrict([], 3, True) == []


@given(
    st.lists(
        st.tuples(st.integers(min_value=0, max_value=999999), st.integers(min_value=0, max_value=6)),
        max_size=30,
    ),
    st.integers(min_value=1, max_value=8),
    st.booleans(),
)
def test_rank_restrict_is_competition_ranking(pairs, n, reverse):
    scored = [(f"k{i}-{kid}", score) for i, (kid, score) in enumerate(pairs)]
    kept = rank_restrict(scored, n, reverse)
    scores = {k: s for k, s in scored}

    def rank(key):
        better = sum(
            1
            for _, s in scored
            if ((s > scores[key]) if reverse else (s < scores[key]))
        )
        return 1 + better

    want = sorted(
        (k for k, _ in scored if rank(k) <= n),
        key=lambda k: ((-scores[k] if reverse else scores[k]), k),
    )
    assert kept == want


def test_compare_variants():
    assert compare("eq", 3, 3)
    assert compare("at_least", 3, 3) and not compare("at_least", 2, 3)
    assert compare("at_most", 3, 3) and not compare("at_most", 4, 3)
    assert compare("more_than", 4, 3) and not compare("more_than", 3, 3)
    assert compare("less_than", 2, 3) and not compare("less_than", 3, 3)
