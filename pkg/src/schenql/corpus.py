"""Corpus loading and entity resolution.

A corpus directory holds four JSONL files (publications, persons, venues,
institutions; one record per line) and an optional core_ranks.csv mapping
venue acronyms to CORE ranks. Loading validates shapes eagerly: structural
problems (bad JSON, missing fields, duplicate keys, self-citations) raise
CorpusError with file and line; referential gaps (a reference to an unknown
key) are collected as warnings so partial corpora stay usable.

The Corpus object itself is plain validated data plus literal resolution;
query evaluation builds its own indexes elsewhere.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .ast import MODE_EXACT, MODE_FUZZY, PUBLICATION_TYPES
from .errors import CorpusError
from .matching import name_matches

CORE_RANKS = ("A*", "A", "B", "C")

VENUE_KINDS = ("conference", "journal")


@dataclass(frozen=True)
class Publication:
    key: str
    title: str
    type: str | None = None
    year: int | None = None
    venue: str | None = None
    authors: tuple[str, ...] = ()
    editors: tuple[str, ...] = ()
    references: tuple[str, ...] = ()
    keywords: tuple[str, ...] = ()
    abstract: str | None = None
    doi: str | None = None
    isbn: str | None = None
    volume: str | None = None


@dataclass(frozen=True)
class Person:
    key: str
    name: str
    orcid: str | None = None
    aliases: tuple[str, ...] = ()
    affiliations: tuple[str, ...] = ()


@dataclass(frozen=True)
class Venue:
    key: str
    name: str
    type: str = "conference"
    acronym: str | None = None
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class Institution:
    key: str
    name: str
    city: str | None = None
    country: str | None = None
    aliases: tuple[str, ...] = ()


@dataclass
class Corpus:
    publications: dict[str, Publication] = field(default_factory=dict)
    persons: dict[str, Person] = field(default_factory=dict)
    venues: dict[str, Venue] = field(default_factory=dict)
    institutions: dict[str, Institution] = field(default_factory=dict)
    core_ranks: dict[str, str] = field(default_factory=dict)  # venue key -> rank
    warnings: list[str] = field(default_factory=list)

    def keywords(self) -> list[str]:
        seen: set[str] = set()
        for pub in self.publications.values():
            seen.update(pub.keywords)
        return sorted(seen)

    def entity_count(self) -> int:
        return (
            len(self.publications)
            + len(self.persons)
            + len(self.venues)
            + len(self.institutions)
        )

    # -- literal resolution -------------------------------------------------

    def resolve(self, kinds: frozenset[str] | set[str], text: str, mode: str) -> list[tuple[str, str]]:
        """Resolve a quoted literal to (kind, key) pairs, sorted.

        A leading ~ or = on the text overrides the mode (lets stored or
        API-supplied literals carry their own mode marker).
        """
        if text.startswith("~"):
            mode, text = MODE_FUZZY, text[1:]
        elif text.startswith("="):
            mode, text = MODE_EXACT, text[1:]
        out: list[tuple[str, str]] = []
        for kind in sorted(kinds):
            if kind == "publication":
                out.extend(("publication", k) for k in self._resolve_publication(text, mode))
            elif kind == "person":
                out.extend(("person", k) for k in self._resolve_person(text, mode))
            elif kind in VENUE_KINDS:
                out.extend((kind, k) for k in self._resolve_venue(kind, text, mode))
            elif kind == "institution":
                out.extend(("institution", k) for k in self._resolve_institution(text, mode))
            elif kind == "keyword":
                kw = text.lower().strip()
                if any(kw in p.keywords for p in self.publications.values()):
                    out.append(("keyword", kw))
        return out

    def _resolve_publication(self, text: str, mode: str) -> list[str]:
        if text in self.publications:
            return [text]
        low = text.lower()
        by_id = [
            p.key
            for p in self.publications.values()
            if (p.doi is not None and p.doi.lower() == low)
            or (p.isbn is not None and p.isbn.lower() == low)
        ]
        if by_id:
            return sorted(by_id)
        return sorted(
            p.key for p in self.publications.values() if name_matches(text, mode, p.title)
        )

    def _resolve_person(self, text: str, mode: str) -> list[str]:
        if text in self.persons:
            return [text]
        by_orcid = [p.key for p in self.persons.values() if p.orcid == text]
        if by_orcid:
            return sorted(by_orcid)
        return sorted(
            p.key for p in self.persons.values() if name_matches(text, mode, p.name, p.aliases)
        )

    def _resolve_venue(self, kind: str, text: str, mode: str) -> list[str]:
        pool = [v for v in self.venues.values() if v.type == kind]
        if text in self.venues and self.venues[text].type == kind:
            return [text]
        low = text.lower()
        by_acronym = [v.key for v in pool if v.acronym is not None and v.acronym.lower() == low]
        if by_acronym:
            return sorted(by_acronym)
        return sorted(v.key for v in pool if name_matches(text, mode, v.name, v.aliases))

    def _resolve_institution(self, text: str, mode: str) -> list[str]:
        if text in self.institutions:
            return [text]
        return sorted(
            i.key
            for i in self.institutions.values()
            if name_matches(text, mode, i.name, i.aliases)
        )


# -- loading ----------------------------------------------------------------


def load_corpus(path: str | Path) -> Corpus:
    root = Path(path)
    if not root.is_dir():
        raise CorpusError(f"corpus directory not found: {root}")
    corpus = Corpus()
    _load_publications(root / "publications.jsonl", corpus)
    _load_persons(root / "persons.jsonl", corpus)
    _load_venues(root / "venues.jsonl", corpus)
    _load_institutions(root / "institutions.jsonl", corpus)
    _load_core_ranks(root / "core_ranks.csv", corpus)
    _sort_maps(corpus)
    _check_links(corpus)
    return corpus


def _records(path: Path) -> Iterator[tuple[int, dict]]:
    if not path.is_file():
        raise CorpusError(f"missing corpus file: {path.name}")
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{path.name}:{lineno}: invalid JSON: {e.msg}")
            if not isinstance(rec, dict):
                raise CorpusError(f"{path.name}:{lineno}: record is not an object")
            yield lineno, rec


class _Field:
    """Typed field access with file:line error context."""

    def __init__(self, where: str, rec: dict) -> None:
        self.where = where
        self.rec = rec

    def fail(self, msg: str) -> CorpusError:
        return CorpusError(f"{self.where}: {msg}")

    def req_str(self, name: str) -> str:
        v = self.rec.get(name)
        if not isinstance(v, str) or not v:
            raise self.fail(f"missing or empty field {name!r}")
        return v

    def opt_str(self, name: str) -> str | None:
        v = self.rec.get(name)
        if v is None:
            return None
        if not isinstance(v, str):
            raise self.fail(f"field {name!r} must be a string")
        return v

    def opt_int(self, name: str) -> int | None:
        v = self.rec.get(name)
        if v is None:
            return None
        if not isinstance(v, int) or isinstance(v, bool):
            raise self.fail(f"field {name!r} must be an integer")
        return v

    def str_list(self, name: str) -> tuple[str, ...]:
        v = self.rec.get(name, [])
        if not isinstance(v, list) or any(not isinstance(x, str) or not x for x in v):
            raise self.fail(f"field {name!r} must be a list of non-empty strings")
        return tuple(v)


def _no_duplicates(f: _Field, name: str, items: tuple[str, ...]) -> None:
    seen: set[str] = set()
    for x in items:
        if x in seen:
            raise f.fail(f"duplicate entry {x!r} in {name}")
        seen.add(x)


def _load_publications(path: Path, corpus: Corpus) -> None:
    lines: dict[str, int] = {}
    for lineno, rec in _records(path):
        f = _Field(f"{path.name}:{lineno}", rec)
        key = f.req_str("key")
        if key in corpus.publications:
            raise f.fail(f"duplicate publication key {key!r} (first seen on line {lines[key]})")
        ptype = f.opt_str("type")
        if ptype is not None and ptype not in PUBLICATION_TYPES:
            raise f.fail(f"unknown publication type {ptype!r}")
        authors = f.str_list("authors")
        editors = f.str_list("editors")
        references = f.str_list("references")
        _no_duplicates(f, "authors", authors)
        _no_duplicates(f, "editors", editors)
        _no_duplicates(f, "references", references)
        if key in references:
            raise f.fail("publication references itself")
        pub = Publication(
            key=key,
            title=f.req_str("title"),
            type=ptype,
            year=f.opt_int("year"),
            venue=f.opt_str("venue"),
            authors=authors,
            editors=editors,
            references=references,
            keywords=tuple(dict.fromkeys(k.strip().lower() for k in f.str_list("keywords"))),
            abstract=f.opt_str("abstract"),
            doi=f.opt_str("doi"),
            isbn=f.opt_str("isbn"),
            volume=f.opt_str("volume"),
        )
        if any(not k for k in pub.keywords):
            raise f.fail("blank keyword")
        corpus.publications[key] = pub
        lines[key] = lineno


def _load_persons(path: Path, corpus: Corpus) -> None:
    lines: dict[str, int] = {}
    for lineno, rec in _records(path):
        f = _Field(f"{path.name}:{lineno}", rec)
        key = f.req_str("key")
        if key in corpus.persons:
            raise f.fail(f"duplicate person key {key!r} (first seen on line {lines[key]})")
        affiliations = f.str_list("affiliations")
        _no_duplicates(f, "affiliations", affiliations)
        corpus.persons[key] = Person(
            key=key,
            name=f.req_str("name"),
            orcid=f.opt_str("orcid"),
            aliases=f.str_list("aliases"),
            affiliations=affiliations,
        )
        lines[key] = lineno


def _load_venues(path: Path, corpus: Corpus) -> None:
    lines: dict[str, int] = {}
    for lineno, rec in _records(path):
        f = _Field(f"{path.name}:{lineno}", rec)
        key = f.req_str("key")
        if key in corpus.venues:
            raise f.fail(f"duplicate venue key {key!r} (first seen on line {lines[key]})")
        vtype = f.req_str("type")
        if vtype not in VENUE_KINDS:
            raise f.fail(f"venue type must be conference or journal, got {vtype!r}")
        corpus.venues[key] = Venue(
            key=key,
            name=f.req_str("name"),
            type=vtype,
            acronym=f.opt_str("acronym"),
            aliases=f.str_list("aliases"),
        )
        lines[key] = lineno


def _load_institutions(path: Path, corpus: Corpus) -> None:
    lines: dict[str, int] = {}
    for lineno, rec in _records(path):
        f = _Field(f"{path.name}:{lineno}", rec)
        key = f.req_str("key")
        if key in corpus.institutions:
            raise f.fail(f"duplicate institution key {key!r} (first seen on line {lines[key]})")
        corpus.institutions[key] = Institution(
            key=key,
            name=f.req_str("name"),
            city=f.opt_str("city"),
            country=f.opt_str("country"),
            aliases=f.str_list("aliases"),
        )
        lines[key] = lineno


def _load_core_ranks(path: Path, corpus: Corpus) -> None:
    if not path.is_file():
        return
    by_acronym = {
        v.acronym.lower(): v.key for v in corpus.venues.values() if v.acronym is not None
    }
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) < {"acronym", "rank"}:
            raise CorpusError(f"{path.name}: header must name acronym and rank columns")
        for lineno, row in enumerate(reader, 2):
            acronym = (row.get("acronym") or "").strip()
            rank = (row.get("rank") or "").strip()
            if not acronym:
                raise CorpusError(f"{path.name}:{lineno}: empty acronym")
            if rank not in CORE_RANKS:
                raise CorpusError(f"{path.name}:{lineno}: unknown rank {rank!r}")
            venue_key = by_acronym.get(acronym.lower())
            if venue_key is not None:
                corpus.core_ranks[venue_key] = rank
    # Rows whose acronym matches no venue are dropped on purpose: rank lists
    # cover far more venues than any one corpus.


def _sort_maps(corpus: Corpus) -> None:
    corpus.publications = dict(sorted(corpus.publications.items()))
    corpus.persons = dict(sorted(corpus.persons.items()))
    corpus.venues = dict(sorted(corpus.venues.items()))
    corpus.institutions = dict(sorted(corpus.institutions.items()))


def _check_links(corpus: Corpus) -> None:
    warn = corpus.warnings.append
    for pub in corpus.publications.values():
        if pub.venue is not None and pub.venue not in corpus.venues:
            warn(f"publication {pub.key}: unknown venue {pub.venue}")
        for a in pub.authors:
            if a not in corpus.persons:
                warn(f"publication {pub.key}: unknown author {a}")
        for e in pub.editors:
            if e not in corpus.persons:
                warn(f"publication {pub.key}: unknown editor {e}")
        for r in pub.references:
            if r not in corpus.publications:
                warn(f"publication {pub.key}: reference to unknown publication {r}")
    for person in corpus.persons.values():
        for aff in person.affiliations:
            if aff not in corpus.institutions:
                warn(f"person {person.key}: unknown institution {aff}")
