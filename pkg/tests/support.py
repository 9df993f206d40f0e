"""Shared test helpers: fixture paths, lexeme pools, random query generation."""

from __future__ import annotations

import pathlib
import random

from schenql.engine import tokens_to_text
from schenql.grammar import GRAMMAR

TESTS = pathlib.Path(__file__).parent
FIXTURE = TESTS.parent / "fixtures" / "mini"
SHOWCASE_FILE = TESTS / "data" / "showcase_queries.txt"
SQL_SNAPSHOT_DIR = TESTS / "data" / "sql"

# Lexeme pools for grammar-driven generation. Values mix corpus hits,
# misses, case variants, and id-shaped strings so literal resolution
# precedence gets exercised, not just the happy path.
POOLS = {
    "venue": ["JCDL", "JODL", "jodl", "Journal of Digital Libraries", "conf/jcdl", "xyz"],
    "title": [
        "Digital Libraries for Search",
        "a survey of digital libraries",
        "digital libraries",
        "search",
        "10.1000/jodl.2019.2",
        "Ranking Scholarly Output",
        "nothing here",
    ],
    "name": [
        "Wei Wang",
        "wei wang",
        "Anna-Lena Arndt",
        "arndt",
        "Marco Rossi",
        "W. Wang",
        "CNR",
        "Trier University",
        "Lotte Weber",
        "nobody",
        "0000-0002-1825-0097",
        "National Research Council, Italy",
    ],
    "literal": [
        "Wei Wang",
        "JCDL",
        "jodl",
        "A Survey of Digital Libraries",
        "conf/jcdl/Rossi21",
        "Trier University",
        "Anna-Lena Arndt",
        "wang",
        "nope",
    ],
    "keyword": [
        "digital libraries",
        "search",
        "dsql",
        "ranking",
        "metadata",
        "citation analysis",
        "user interfaces",
        "unknown topic",
        "DSQL",
    ],
    "terms": [
        "digital:libraries|dsql",
        "search",
        "digital | dsql",
        "(search:interfaces)|ranking",
        "libraries",
        "query language",
    ],
    "rank_value": ["A*", "A", "B", "C"],
    "key": ["conf/jcdl/WangArndt18", "journals/jodl/Wang19", "phd/de/Arndt22", "nokey"],
    "doi": ["10.1000/jcdl.2018.1", "10.1000/JODL.2019.2", "10.9999/none"],
    "isbn": ["978-3-16-148410-0", "none"],
    "acronym": ["JCDL", "jodl", "XX"],
    "volume": ["20", "22", "7"],
    "orcid": ["0000-0002-1825-0097", "0000-0000-0000-0000"],
    "city": ["Pisa", "Trier", "Rome"],
    "country": ["IT", "DE", "FR"],
    "limit": ["1", "2", "3", "5"],
    "rank": ["1", "2", "3"],
    "metric_num": ["0", "1", "2"],
    "year": ["2018", "2019", "2020", "2021", "2022", "1999"],
    "length": ["5", "10", "15", "40"],
    "count": ["0", "1", "2", "3"],
    "n": ["1", "2", "3"],
}


def showcase_queries() -> list[str]:
    return SHOWCASE_FILE.read_text().splitlines()


def random_query(rng: random.Random, max_depth: int = 6, coverage: dict | None = None) -> str:
    return tokens_to_text(GRAMMAR.generate(rng, POOLS, max_depth=max_depth, coverage=coverage))


# Fixture entity keys, named for readability in expectations.
P1 = "conf/jcdl/WangArndt18"
P2 = "journals/jodl/Wang19"
P3 = "conf/jcdl/ArndtRossi20"
P4 = "conf/jcdl/Rossi21"
P5 = "journals/jodl/WangWang21"
P6 = "phd/de/Arndt22"
WEI = "homepages/w/WeiWang"
WW42 = "homepages/w/WeiWang-0042"
ANNA = "homepages/a/AnnaArndt"
MARCO = "homepages/m/MarcoRossi"
LOTTE = "homepages/l/LotteWeber"
JCDL = "conf/jcdl"
JODL = "journals/jodl"
TRIER = "inst/trier"
CNR = "inst/cnr"
