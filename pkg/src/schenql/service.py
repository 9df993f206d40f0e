"""HTTP API over one loaded corpus: queries, suggestions, details, chart data.

Handlers are stateless and share a single immutable Corpus plus the
prebuilt adjacency Indexes, so any number of requests can run
concurrently; changing the data means restarting the process.

Response conventions:

* every error body is {code, message} plus optional span/expected, the
  same shape SchenqlError.to_dict produces;
* query diagnostics (bad syntax, unknown names) come back as 422 with a
  span, while malformed request bodies are 400;
* /api/suggest returns the suggester's output unfiltered, so a client
  can rely on it matching the library byte for byte;
* list payloads carry page-independent totals, and detail sublists are
  capped at DETAIL_CAP rows with the full count alongside.
"""

from __future__ import annotations

import time

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .analyzer import lower
from .corpus import Corpus, Publication
from .errors import SchenqlError
from .evaluator import Indexes, evaluate
from .parser import parse, suggest
from .results import Result

DETAIL_CAP = 200

ENTITY_KINDS = ("publication", "person", "conference", "journal", "institution")


class QueryBody(BaseModel):
    query: str
    page: int = Field(default=1, ge=1)
    page_size: int = Field(default=50, ge=1, le=500)


def create_app(corpus: Corpus) -> FastAPI:
    app = FastAPI(title="schenql", docs_url=None, redoc_url=None)
    indexes = Indexes(corpus)

    @app.exception_handler(RequestValidationError)
    async def bad_request(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        msg = first.get("msg", "invalid request")
        return JSONResponse(
            status_code=400,
            content={"code": "bad_request", "message": f"{where}: {msg}" if where else msg},
        )

    @app.post("/api/query")
    def run_query(body: QueryBody):
        try:
            t0 = time.perf_counter()
            query = parse(body.query)
            t1 = time.perf_counter()
            plan = lower(query, corpus)
            t2 = time.perf_counter()
            result = evaluate(plan, corpus)
            t3 = time.perf_counter()
        except SchenqlError as err:
            return JSONResponse(status_code=422, content=err.to_dict())
        return {
            "result": _page_result(corpus, result, body.page, body.page_size),
            "diagnostics": [w.to_dict() for w in plan.warnings],
            "timing": {
                "parse_ms": (t1 - t0) * 1000.0,
                "lower_ms": (t2 - t1) * 1000.0,
                "evaluate_ms": (t3 - t2) * 1000.0,
            },
        }

    @app.get("/api/suggest")
    def suggest_tokens(q: str = ""):
        res = suggest(q)
        return {
            "suggestions": [
                {"token": s.token, "category": s.category} for s in res.suggestions
            ],
            "complete": res.complete,
            "diagnostic": res.diagnostic.to_dict() if res.diagnostic else None,
        }

    @app.get("/api/entity/{kind}/{key:path}")
    def entity_detail(kind: str, key: str):
        if kind not in ENTITY_KINDS:
            return _not_found(f"unknown entity kind {kind!r}")
        detail = _entity_detail(corpus, indexes, kind, key)
        if detail is None:
            return _not_found(f"no {kind} with key {key!r}")
        return detail

    @app.get("/api/ego/{key:path}")
    def ego_graph(key: str, k: int = Query(default=10, ge=1, le=500)):
        person = corpus.persons.get(key)
        if person is None:
            return _not_found(f"no person with key {key!r}")
        counts: dict[str, int] = {}
        for pub_key in indexes.authored[key]:
            for author in corpus.publications[pub_key].authors:
                if author != key and author in corpus.persons:
                    counts[author] = counts.get(author, 0) + 1
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:k]
        return {
            "center": {"key": key, "name": person.name},
            "neighbors": [
                {"key": p, "name": corpus.persons[p].name, "count": n}
                for p, n in ranked
            ],
        }

    @app.get("/api/bowtie/{kind}/{key:path}")
    def bowtie(kind: str, key: str):
        if kind not in ENTITY_KINDS:
            return _not_found(f"unknown entity kind {kind!r}")
        if kind == "institution":
            return JSONResponse(
                status_code=422,
                content={
                    "code": "semantic_error",
                    "message": "institutions have no citation structure to chart",
                },
            )
        subject = _subject_pubs(corpus, indexes, kind, key)
        if subject is None:
            return _not_found(f"no {kind} with key {key!r}")
        label, pubs = subject
        years = [p.year for p in pubs if p.year is not None]
        anchor = pubs[0].year if kind == "publication" else (max(years) if years else None)
        ref_buckets: dict[int, int] = {}
        cite_buckets: dict[int, int] = {}
        for pub in pubs:
            if pub.year is None:
                continue
            for ref in pub.references:
                tgt = corpus.publications.get(ref)
                if tgt is not None and tgt.year is not None:
                    off = pub.year - tgt.year
                    ref_buckets[off] = ref_buckets.get(off, 0) + 1
            for citer in indexes.citers[pub.key]:
                src = corpus.publications[citer]
                if src.year is not None:
                    off = src.year - pub.year
                    cite_buckets[off] = cite_buckets.get(off, 0) + 1
        return {
            "subject": {"kind": kind, "key": key, "label": label, "anchor_year": anchor},
            "reference_buckets": _buckets(ref_buckets),
            "citation_buckets": _buckets(cite_buckets),
            "totals": {
                "references": sum(ref_buckets.values()),
                "citations": sum(cite_buckets.values()),
            },
        }

    return app


def _not_found(message: str) -> JSONResponse:
    return JSONResponse(status_code=404, content={"code": "not_found", "message": message})


def _buckets(counts: dict[int, int]) -> list[dict]:
    return [{"offset": off, "count": counts[off]} for off in sorted(counts)]


def label_for(corpus: Corpus, entity_kind: str | None, key: str) -> str:
    if entity_kind == "publication":
        pub = corpus.publications.get(key)
        return pub.title if pub else key
    if entity_kind == "person":
        person = corpus.persons.get(key)
        return person.name if person else key
    if entity_kind in ("conference", "journal"):
        venue = corpus.venues.get(key)
        return venue.name if venue else key
    if entity_kind == "institution":
        inst = corpus.institutions.get(key)
        return inst.name if inst else key
    return key


def _page_result(corpus: Corpus, result: Result, page: int, page_size: int) -> dict:
    if result.kind == "scalar":
        return {"kind": "scalar", "value": result.value}
    start = (page - 1) * page_size
    if result.kind == "entities":
        keys = result.entities or []
        return {
            "kind": "entities",
            "entity_kind": result.entity_kind,
            "total": len(keys),
            "page": page,
            "page_size": page_size,
            "items": [
                {"key": k, "label": label_for(corpus, result.entity_kind, k)}
                for k in keys[start : start + page_size]
            ],
        }
    rows = result.rows or []
    return {
        "kind": "table",
        "columns": list(result.columns or ()),
        "total": len(rows),
        "page": page,
        "page_size": page_size,
        "rows": [list(r) for r in rows[start : start + page_size]],
    }


def _capped(items: list) -> dict:
    return {"total": len(items), "items": items[:DETAIL_CAP]}


def _pub_row(pub: Publication) -> dict:
    return {"key": pub.key, "title": pub.title, "year": pub.year, "type": pub.type}


def _pub_rows(corpus: Corpus, keys: list[str]) -> dict:
    ordered = sorted(
        (corpus.publications[k] for k in keys),
        key=lambda p: (-(p.year if p.year is not None else -1), p.key),
    )
    return _capped([_pub_row(p) for p in ordered])


def _keyword_histogram(corpus: Corpus, keys: list[str]) -> list[dict]:
    counts: dict[str, int] = {}
    for k in keys:
        for kw in corpus.publications[k].keywords:
            counts[kw] = counts.get(kw, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [{"keyword": kw, "count": n} for kw, n in ranked]


def _person_refs(corpus: Corpus, names: tuple[str, ...]) -> list[dict]:
    # author/editor slots may hold names that are not corpus keys
    out = []
    for name in names:
        person = corpus.persons.get(name)
        if person is not None:
            out.append({"key": name, "label": person.name})
        else:
            out.append({"key": None, "label": name})
    return out


def _entity_detail(corpus: Corpus, indexes: Indexes, kind: str, key: str) -> dict | None:
    if kind == "publication":
        pub = corpus.publications.get(key)
        if pub is None:
            return None
        refs = sorted(r for r in pub.references if r in corpus.publications)
        return {
            "kind": "publication",
            "key": key,
            "title": pub.title,
            "type": pub.type,
            "year": pub.year,
            "venue": (
                {
                    "key": pub.venue,
                    "kind": _venue_kind(corpus, pub.venue),
                    "label": label_for(corpus, _venue_kind(corpus, pub.venue), pub.venue),
                }
                if pub.venue in corpus.venues
                else None
            ),
            "authors": _person_refs(corpus, pub.authors),
            "editors": _person_refs(corpus, pub.editors),
            "keywords": list(pub.keywords),
            "abstract": pub.abstract,
            "doi": pub.doi,
            "isbn": pub.isbn,
            "volume": pub.volume,
            "references": _capped(refs),
            "citations": _capped(sorted(indexes.citers[key])),
        }
    if kind == "person":
        person = corpus.persons.get(key)
        if person is None:
            return None
        authored = indexes.authored[key]
        return {
            "kind": "person",
            "key": key,
            "name": person.name,
            "orcid": person.orcid,
            "aliases": list(person.aliases),
            "affiliations": [
                {"key": a, "label": label_for(corpus, "institution", a)}
                for a in person.affiliations
                if a in corpus.institutions
            ],
            "publications": _pub_rows(corpus, authored),
            "edited": _pub_rows(corpus, indexes.edited[key]),
            "keywords": _keyword_histogram(corpus, authored),
        }
    if kind in ("conference", "journal"):
        venue = corpus.venues.get(key)
        if venue is None or venue.type != kind:
            return None
        return {
            "kind": kind,
            "key": key,
            "name": venue.name,
            "acronym": venue.acronym,
            "aliases": list(venue.aliases),
            "core_rank": corpus.core_ranks.get(key),
            "publications": _pub_rows(corpus, indexes.hosted[key]),
        }
    inst = corpus.institutions.get(key)
    if inst is None:
        return None
    members = sorted(indexes.members.get(key, []))
    return {
        "kind": "institution",
        "key": key,
        "name": inst.name,
        "city": inst.city,
        "country": inst.country,
        "aliases": list(inst.aliases),
        "members": _capped(
            [{"key": m, "label": corpus.persons[m].name} for m in members]
        ),
    }


def _venue_kind(corpus: Corpus, key: str | None) -> str | None:
    venue = corpus.venues.get(key) if key else None
    return venue.type if venue else None


def _subject_pubs(
    corpus: Corpus, indexes: Indexes, kind: str, key: str
) -> tuple[str, list[Publication]] | None:
    if kind == "publication":
        pub = corpus.publications.get(key)
        if pub is None:
            return None
        return pub.title, [pub]
    if kind == "person":
        person = corpus.persons.get(key)
        if person is None:
            return None
        return person.name, [corpus.publications[k] for k in indexes.authored[key]]
    venue = corpus.venues.get(key)
    if venue is None or venue.type != kind:
        return None
    return venue.name, [corpus.publications[k] for k in indexes.hosted[key]]
