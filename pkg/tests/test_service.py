"""End-to-end checks of the HTTP API over the small checked-in corpus.

Expected payloads were derived by hand from the fixture files (authors,
years, and reference edges) and frozen here; the service must reproduce
them exactly, including ordering and pagination totals.
"""

import pytest
from fastapi.testclient import TestClient

from schenql.parser import suggest as suggest_direct
from schenql.service import create_app

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
    showcase_queries,
)


@pytest.fixture(scope="module")
def client(corpus):
    with TestClient(create_app(corpus)) as c:
        yield c


def run(client, query, **extra):
    resp = client.post("/api/query", json={"query": query, **extra})
    assert resp.status_code == 200, resp.text
    return resp.json()


# -- /api/query -------------------------------------------------------------


def test_entity_query_payload(client):
    body = run(client, 'PUBLICATIONS APPEARED IN "JCDL"')
    result = body["result"]
    assert result["kind"] == "entities"
    assert result["entity_kind"] == "publication"
    assert result["total"] == 3
    assert result["page"] == 1 and result["page_size"] == 50
    assert [item["key"] for item in result["items"]] == [P3, P4, P1]
    assert all(item["label"] for item in result["items"])
    assert body["diagnostics"] == []


def test_scalar_query_payload(client):
    body = run(client, "COUNT (PERSONS)")
    assert body["result"] == {"kind": "scalar", "value": 5}


def test_table_query_payload(client):
    body = run(client, 'CORE RANKS FOR "Anna-Lena Arndt"')
    result = body["result"]
    assert result["kind"] == "table"
    assert result["columns"] == ["rank", "count"]
    assert result["rows"] == [["A*", 2]]
    assert result["total"] == 1


def test_timing_fields(client):
    timing = run(client, "PUBLICATIONS")["timing"]
    assert set(timing) == {"parse_ms", "lower_ms", "evaluate_ms"}
    assert all(isinstance(v, float) and v >= 0 for v in timing.values())


def test_pagination_totals_are_page_independent(client):
    pages = [
        run(client, "PUBLICATIONS", page=n, page_size=2)["result"] for n in (1, 2, 3, 4)
    ]
    assert [p["total"] for p in pages] == [6, 6, 6, 6]
    keys = [item["key"] for p in pages for item in p["items"]]
    assert len(keys[:6]) == len(set(keys[:6])) == 6
    assert pages[3]["items"] == []


def test_query_syntax_error_is_422(client):
    resp = client.post("/api/query", json={"query": "PERSONS NAMED"})
    assert resp.status_code == 422
    body = resp.json()
    assert body["code"] == "syntax_error"
    assert body["span"] == [13, 13]
    assert '"STRING"' in body["expected"]


def test_rank_without_aggregation_is_422(client):
    resp = client.post("/api/query", json={"query": "~3 PERSONS"})
    assert resp.status_code == 422
    body = resp.json()
    assert body["code"] == "semantic_error"
    assert "aggregat" in body["message"]


@pytest.mark.parametrize(
    "payload",
    [
        {"page": 1},
        {"query": "PERSONS", "page": 0},
        {"query": "PERSONS", "page_size": 0},
        {"query": "PERSONS", "page_size": 501},
        {"query": 7},
    ],
)
def test_malformed_body_is_400(client, payload):
    resp = client.post("/api/query", json=payload)
    assert resp.status_code == 400
    body = resp.json()
    assert body["code"] == "bad_request"
    assert body["message"]


def test_unknown_name_warning_is_reported(client):
    body = run(client, 'PUBLICATIONS WRITTEN BY "nobody at all"')
    assert body["result"]["total"] == 0
    (diag,) = body["diagnostics"]
    assert diag["code"] == "warning"
    assert diag["span"] == [24, 39]


# -- /api/suggest -----------------------------------------------------------

PREFIXES = [
    "",
    "PERSONS",
    "PERSONS ",
    "PERSONS NAMED ",
    'PUBLICATIONS WRITTEN BY "x" ',
    "COUNT (PUB",
    'PERSONS NAMED "unterminated',
    "PERSONS PERSONS",
]


@pytest.mark.parametrize("prefix", PREFIXES)
def test_suggest_mirrors_library_output(client, prefix):
    resp = client.get("/api/suggest", params={"q": prefix})
    assert resp.status_code == 200
    res = suggest_direct(prefix)
    assert resp.json() == {
        "suggestions": [
            {"token": s.token, "category": s.category} for s in res.suggestions
        ],
        "complete": res.complete,
        "diagnostic": res.diagnostic.to_dict() if res.diagnostic else None,
    }


def test_suggest_over_showcase_prefixes(client):
    for query in showcase_queries()[:8]:
        prefix = query[: len(query) // 2]
        got = client.get("/api/suggest", params={"q": prefix}).json()
        want = suggest_direct(prefix)
        assert [s["token"] for s in got["suggestions"]] == [
            s.token for s in want.suggestions
        ]


# -- /api/entity ------------------------------------------------------------


def test_publication_detail(client):
    body = client.get(f"/api/entity/publication/{P3}").json()
    assert body["kind"] == "publication"
    assert body["year"] == 2020
    assert body["venue"] == {
        "key": JCDL,
        "kind": "conference",
        "label": "Joint Conference on Digital Libraries",
    }
    assert [a["key"] for a in body["authors"]] == [ANNA, MARCO]
    assert body["references"] == {"total": 2, "items": [P1, P2]}
    assert body["citations"] == {"total": 3, "items": [P4, P5, P6]}


def test_person_detail(client):
    body = client.get(f"/api/entity/person/{ANNA}").json()
    assert body["name"] == "Anna-Lena Arndt"
    assert body["affiliations"] == [{"key": TRIER, "label": "Trier University"}]
    pubs = body["publications"]
    assert pubs["total"] == 3
    assert [row["key"] for row in pubs["items"]] == [P6, P3, P1]
    assert all(row["title"] for row in pubs["items"])
    hist = {row["keyword"]: row["count"] for row in body["keywords"]}
    assert hist == dict(body_counts(client, ANNA))


def body_counts(client, person_key):
    # recompute the keyword histogram straight from publication details
    detail = client.get(f"/api/entity/person/{person_key}").json()
    counts: dict[str, int] = {}
    for row in detail["publications"]["items"]:
        pub = client.get(f"/api/entity/publication/{row['key']}").json()
        for kw in pub["keywords"]:
            counts[kw] = counts.get(kw, 0) + 1
    return counts


def test_venue_detail_requires_matching_kind(client):
    conf = client.get(f"/api/entity/conference/{JCDL}")
    assert conf.status_code == 200
    assert conf.json()["core_rank"] == "A*"
    assert [r["key"] for r in conf.json()["publications"]["items"]] == [P4, P3, P1]

    jour = client.get(f"/api/entity/journal/{JODL}")
    assert jour.status_code == 200
    assert jour.json()["core_rank"] is None

    assert client.get(f"/api/entity/journal/{JCDL}").status_code == 404
    assert client.get(f"/api/entity/conference/{JODL}").status_code == 404


def test_institution_detail(client):
    body = client.get(f"/api/entity/institution/{CNR}").json()
    assert body["name"] == "National Research Council, Italy"
    assert body["members"]["items"] == [
        {"key": MARCO, "label": "Marco Rossi"},
        {"key": WW42, "label": "Wei Wang 0042"},
    ]


def test_entity_errors(client):
    missing = client.get("/api/entity/person/homepages/x/Nobody")
    assert missing.status_code == 404
    assert missing.json()["code"] == "not_found"
    assert client.get("/api/entity/venue/conf/jcdl").status_code == 404


# -- /api/ego ---------------------------------------------------------------


def test_ego_neighbors_ranked_by_shared_publications(client):
    body = client.get(f"/api/ego/{WEI}").json()
    assert body["center"] == {"key": WEI, "name": "Wei Wang"}
    assert body["neighbors"] == [
        {"key": ANNA, "name": "Anna-Lena Arndt", "count": 1},
        {"key": WW42, "name": "Wei Wang 0042", "count": 1},
    ]


def test_ego_k_truncates(client):
    body = client.get(f"/api/ego/{ANNA}", params={"k": 1}).json()
    assert [n["key"] for n in body["neighbors"]] == [MARCO]


def test_ego_without_coauthors_is_empty(client):
    assert client.get(f"/api/ego/{LOTTE}").json()["neighbors"] == []


def test_ego_errors(client):
    assert client.get("/api/ego/homepages/x/Nobody").status_code == 404
    assert client.get(f"/api/ego/{WEI}", params={"k": 0}).status_code == 400
    assert client.get(f"/api/ego/{WEI}", params={"k": 501}).status_code == 400


# -- /api/bowtie ------------------------------------------------------------


def test_bowtie_for_one_publication(client):
    body = client.get(f"/api/bowtie/publication/{P3}").json()
    assert body["subject"]["anchor_year"] == 2020
    assert body["reference_buckets"] == [
        {"offset": 1, "count": 1},
        {"offset": 2, "count": 1},
    ]
    assert body["citation_buckets"] == [
        {"offset": 1, "count": 2},
        {"offset": 2, "count": 1},
    ]
    assert body["totals"] == {"references": 2, "citations": 3}


def test_bowtie_totals_match_count_queries(client):
    body = client.get(f"/api/bowtie/publication/{P3}").json()
    refs = run(client, f'COUNT (PUBLICATIONS CITED BY "{P3}")')["result"]["value"]
    cites = run(client, f'COUNT (PUBLICATIONS REFERENCES "{P3}")')["result"]["value"]
    assert body["totals"] == {"references": refs, "citations": cites}


@pytest.mark.parametrize(
    "kind,key",
    [("person", WEI), ("person", ANNA), ("conference", JCDL), ("journal", JODL)],
)
def test_bowtie_bucket_sums_equal_totals(client, kind, key):
    body = client.get(f"/api/bowtie/{kind}/{key}").json()
    assert sum(b["count"] for b in body["reference_buckets"]) == body["totals"]["references"]
    assert sum(b["count"] for b in body["citation_buckets"]) == body["totals"]["citations"]


def test_bowtie_rejects_institutions(client):
    resp = client.get(f"/api/bowtie/institution/{TRIER}")
    assert resp.status_code == 422
    assert resp.json()["code"] == "semantic_error"


def test_bowtie_errors(client):
    assert client.get("/api/bowtie/person/homepages/x/Nobody").status_code == 404
    assert client.get(f"/api/bowtie/journal/{JCDL}").status_code == 404
