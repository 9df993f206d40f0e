"""Reference evaluator: a deliberately naive twin of the main route.

Walks the syntax tree directly (no plans, no indexes) and recomputes
everything with per-entity scans, so a bug in lowering or in the indexed
evaluator cannot hide here. Shares only the value-level matching primitives
and the result shape with the main route.

Slow by construction; refuses corpora above a safety bound.
"""

from __future__ import annotations

from fractions import Fraction

from . import ast as A
from .corpus import Corpus
from .matching import name_matches, parse_terms, terms_match, tokens
from .results import Result, entities_result, scalar_result, table_result

MAX_ENTITIES = 1000

_ORDINAL = {"A*": 4, "A": 3, "B": 2, "C": 1}


def oracle_evaluate(query: A.Query, corpus: Corpus) -> Result:
    if corpus.entity_count() > MAX_ENTITIES:
        raise ValueError(
            f"reference evaluator is limited to {MAX_ENTITIES} entities; "
            f"corpus has {corpus.entity_count()}"
        )
    return _Oracle(corpus).query(query)


def _cmp(comp: str, left, right) -> bool:
    return {
        "eq": left == right,
        "at_least": left >= right,
        "at_most": left <= right,
        "more_than": left > right,
        "less_than": left < right,
    }[comp]


class _Oracle:
    def __init__(self, corpus: Corpus) -> None:
        self.c = corpus

    # -- entry points ---------------------------------------------------------

    def query(self, q: A.Query) -> Result:
        if isinstance(q, A.EntityQuery):
            keys = self.entity_query(q)
            return entities_result(q.concept, keys)
        if isinstance(q, A.AggregationQuery):
            kind, keys = self.aggregation(q)
            return entities_result(kind, keys)
        return self.function(q)

    def entity_query(self, q: A.EntityQuery) -> list[str]:
        universe = self.scan(q.concept, q.specialisation)
        out = universe
        if q.filter is not None:
            out = self.filter_expr(q.filter, out, universe, q.concept)
        if isinstance(q.restriction, A.Limit):
            out = out[: q.restriction.n]
        return out

    def scan(self, concept: str, specialisation: str | None) -> list[str]:
        c = self.c
        if concept == "publication":
            keys = [
                k
                for k, p in c.publications.items()
                if specialisation is None or p.type == specialisation
            ]
        elif concept == "person":
            keys = []
            for k in c.persons:
                if specialisation == "author":
                    if not any(k in p.authors for p in c.publications.values()):
                        continue
                elif specialisation == "editor":
                    if not any(k in p.editors for p in c.publications.values()):
                        continue
                keys.append(k)
        elif concept in ("conference", "journal"):
            keys = [k for k, v in c.venues.items() if v.type == concept]
        elif concept == "institution":
            keys = list(c.institutions)
        else:
            keys = self.all_keywords()
        return sorted(keys)

    def all_keywords(self) -> list[str]:
        seen = set()
        for p in self.c.publications.values():
            seen.update(p.keywords)
        return sorted(seen)

    # -- filters ----------------------------------------------------------------

    def filter_expr(self, f, incoming: list[str], universe: list[str], kind: str) -> list[str]:
        if isinstance(f, A.FilterLeaf):
            return self.leaf(f, incoming, kind)
        lhs = self.filter_expr(f.lhs, incoming, universe, kind)
        if f.op == "and":
            return self.filter_expr(f.rhs, lhs, universe, kind)
        rhs = self.filter_expr(f.rhs, incoming, universe, kind)
        if f.op == "or":
            return sorted(set(lhs) | set(rhs))
        if f.op == "and_not":
            return sorted(set(lhs) - set(rhs))
        return sorted(set(lhs) | (set(incoming) - set(rhs)))

    def leaf(self, f: A.FilterLeaf, incoming: list[str], kind: str) -> list[str]:
        k = f.kind
        a = f.args
        if k == "agg_count":
            dim, direction, scope, rank = a
            scope_set = self.pub_arg(scope) if scope is not None else None
            score = {key: self.count_dim(kind, key, dim, scope_set) for key in incoming}
            return self.keep_ranked(incoming, score, rank.n if rank else 1, direction == "most")
        if k == "agg_metric":
            metric, direction, rank = a
            score = {key: self.metric(kind, key, metric) for key in incoming}
            return self.keep_ranked(incoming, score, rank.n if rank else 1, direction == "highest")
        if k == "agg_length":
            attr, direction, rank = a
            score = {key: len(self.text_attr(kind, key, attr)) for key in incoming}
            return self.keep_ranked(incoming, score, rank.n if rank else 1, direction == "longest")
        if k == "in_aggregation":
            _, keys = self.aggregation(a[0])
            return sorted(set(incoming) & set(keys))
        keep = self.leaf_test(f, kind)
        return [key for key in incoming if keep(key)]

    def keep_ranked(self, incoming, score, n, reverse) -> list[str]:
        def better(x, y):
            return x > y if reverse else x < y

        kept = [
            key
            for key in incoming
            if 1 + sum(1 for other in incoming if better(score[other], score[key])) <= n
        ]
        kept.sort()
        kept.sort(key=lambda key: score[key], reverse=reverse)
        return kept

    def leaf_test(self, f: A.FilterLeaf, kind: str):
        c = self.c
        k = f.kind
        a = f.args

        if k == "key_is":
            return lambda key: key == a[0]
        if k == "orcid_is":
            return lambda key: c.persons[key].orcid == a[0]
        if k == "doi_is":
            return lambda key: (c.publications[key].doi or "").lower() == a[0].lower()
        if k == "isbn_is":
            return lambda key: (c.publications[key].isbn or "").lower() == a[0].lower()
        if k == "acronym_is":
            return lambda key: (c.venues[key].acronym or "").lower() == a[0].lower()
        if k == "city_is":
            return lambda key: (c.institutions[key].city or "").lower() == a[0].lower()
        if k == "country_is":
            return lambda key: (c.institutions[key].country or "").lower() == a[0].lower()
        if k == "volume_is":
            return lambda key: any(
                p.volume == a[0] for p in c.publications.values() if p.venue == key
            )
        if k == "named":
            lit = a[0]
            if kind == "person":
                return lambda key: name_matches(
                    lit.text, lit.mode, c.persons[key].name, c.persons[key].aliases
                )
            if kind == "institution":
                return lambda key: name_matches(
                    lit.text, lit.mode, c.institutions[key].name, c.institutions[key].aliases
                )
            return lambda key: name_matches(
                lit.text, lit.mode, c.venues[key].name, c.venues[key].aliases
            )
        if k == "titled":
            lit = a[0]
            return lambda key: name_matches(lit.text, lit.mode, c.publications[key].title)
        if k == "year_cmp":
            comp, value = a
            if kind == "publication":
                return lambda key: c.publications[key].year is not None and _cmp(
                    comp, c.publications[key].year, value
                )
            return lambda key: any(
                p.venue == key and p.year is not None and _cmp(comp, p.year, value)
                for p in c.publications.values()
            )
        if k == "about_keyword":
            kws = self.kw_arg(a[0])
            if kind == "publication":
                return lambda key: bool(set(c.publications[key].keywords) & kws)
            return lambda key: any(
                p.venue == key and set(p.keywords) & kws for p in c.publications.values()
            )
        if k == "about_terms":
            expr = parse_terms(a[0])

            def pub_hit(p) -> bool:
                return terms_match(
                    expr, set(tokens(p.title)) | set(tokens(p.abstract or ""))
                )

            if kind == "publication":
                return lambda key: pub_hit(c.publications[key])
            return lambda key: any(
                p.venue == key and pub_hit(p) for p in c.publications.values()
            )
        if k == "hosts":
            pubs = self.pub_arg(a[0])
            return lambda key: any(c.publications[q].venue == key for q in pubs)
        if k == "appeared_in":
            venues = self.venue_arg(a[0])
            return lambda key: c.publications[key].venue in venues
        if k == "cited_by":
            citing = self.pub_arg(a[0])
            if kind == "publication":
                return lambda key: any(key in c.publications[q].references for q in citing)
            return lambda key: any(
                key in c.publications[q].authors
                and any(q in c.publications[q2].references for q2 in citing)
                for q in c.publications
            )
        if k == "references":
            cited = self.pub_arg(a[0])
            if kind == "publication":
                return lambda key: bool(set(c.publications[key].references) & cited)
            return lambda key: any(
                key in p.authors and set(p.references) & cited for p in c.publications.values()
            )
        if k == "written_by":
            persons = self.person_arg(a[0])
            return lambda key: bool(set(c.publications[key].authors) & persons)
        if k == "edited_by":
            persons = self.person_arg(a[0])
            return lambda key: bool(set(c.publications[key].editors) & persons)
        if k == "written_by_any":
            n, distinct, groups = a
            sets = [self.person_arg(g) for g in groups]
            if distinct:
                return lambda key: (
                    sum(1 for g in sets if set(c.publications[key].authors) & g) >= n
                )
            union = set().union(*sets) if sets else set()
            return lambda key: len(set(c.publications[key].authors) & union) >= n
        if k == "published_with":
            insts = self.inst_arg(a[0])
            return lambda key: any(
                a2 in c.persons and set(c.persons[a2].affiliations) & insts
                for a2 in c.publications[key].authors
            )
        if k == "authored":
            pubs = self.pub_arg(a[0])
            qual = a[1]

            def test(key: str) -> bool:
                mine = {q for q, p in c.publications.items() if key in p.authors}
                if qual == "only":
                    return bool(mine) and mine <= pubs
                if qual == "no":
                    return not mine & pubs
                return bool(mine & pubs)

            return test
        if k == "edited":
            pubs = self.pub_arg(a[0])
            return lambda key: any(key in c.publications[q].editors for q in pubs)
        if k == "works_for":
            insts = self.inst_arg(a[0])
            return lambda key: bool(set(c.persons[key].affiliations) & insts)
        if k == "published_in":
            venues = self.venue_arg(a[0])
            return lambda key: any(
                key in p.authors and p.venue in venues for p in c.publications.values()
            )
        if k == "with_members":
            persons = self.person_arg(a[0])
            return lambda key: any(key in c.persons[m].affiliations for m in persons)
        if k == "keywords_of":
            pubs = self.pubs_of_mixed(self.mixed_arg(a[0], {"conference", "journal", "publication", "person"}))
            kws = {kw for q in pubs for kw in c.publications[q].keywords}
            return lambda key: key in kws
        if k == "count_cmp":
            dim, comp, n, scope = a
            scope_set = self.pub_arg(scope) if scope is not None else None
            return lambda key: _cmp(comp, self.count_dim(kind, key, dim, scope_set), n)
        if k == "metric_cmp":
            metric, comp, value = a
            target = _ORDINAL[value] if metric == "core_rank" else value
            return lambda key: _cmp(comp, self.metric(kind, key, metric), target)
        if k == "length_cmp":
            attr, comp, n = a
            return lambda key: _cmp(comp, len(self.text_attr(kind, key, attr)), n)
        raise AssertionError(f"unknown filter {k}")

    # -- arguments ----------------------------------------------------------------

    def mixed_arg(self, arg, kinds: set[str]) -> list[tuple[str, str]]:
        """Resolve an argument to (kind, key) pairs within the allowed kinds."""
        if isinstance(arg, A.StrLit):
            out = []
            for kind in sorted(set(arg.kinds) & kinds):
                out.extend((kind, key) for key in self.resolve(kind, arg.text, arg.mode))
            return out
        if isinstance(arg, A.StrListLit):
            known = set(self.all_keywords())
            return [("keyword", t.lower()) for t in arg.texts if t.lower() in known]
        if isinstance(arg, A.EntityQuery):
            return [(arg.concept, key) for key in self.entity_query(arg)]
        kind, keys = self.aggregation(arg)
        return [(kind, key) for key in keys]

    def _flat(self, arg, kinds: set[str]) -> set[str]:
        return {key for _, key in self.mixed_arg(arg, kinds)}

    def pub_arg(self, arg) -> set[str]:
        return self._flat(arg, {"publication"})

    def person_arg(self, arg) -> set[str]:
        return self._flat(arg, {"person"})

    def venue_arg(self, arg) -> set[str]:
        return self._flat(arg, {"conference", "journal"})

    def inst_arg(self, arg) -> set[str]:
        return self._flat(arg, {"institution"})

    def kw_arg(self, arg) -> set[str]:
        return self._flat(arg, {"keyword"})

    def pubs_of_mixed(self, pairs: list[tuple[str, str]]) -> set[str]:
        c = self.c
        pubs: set[str] = set()
        for kind, key in pairs:
            if kind == "publication":
                pubs.add(key)
            elif kind == "person":
                pubs.update(q for q, p in c.publications.items() if key in p.authors)
            elif kind in ("conference", "journal"):
                pubs.update(q for q, p in c.publications.items() if p.venue == key)
        return pubs

    def resolve(self, kind: str, text: str, mode: str) -> list[str]:
        c = self.c
        if text.startswith("~"):
            mode, text = A.MODE_FUZZY, text[1:]
        elif text.startswith("="):
            mode, text = A.MODE_EXACT, text[1:]
        low = text.lower()
        if kind == "publication":
            if text in c.publications:
                return [text]
            hits = [
                k
                for k, p in c.publications.items()
                if (p.doi or "").lower() == low or (p.isbn or "").lower() == low
            ]
            if hits:
                return sorted(hits)
            return sorted(
                k for k, p in c.publications.items() if name_matches(text, mode, p.title)
            )
        if kind == "person":
            if text in c.persons:
                return [text]
            hits = [k for k, p in c.persons.items() if p.orcid == text]
            if hits:
                return sorted(hits)
            return sorted(
                k for k, p in c.persons.items() if name_matches(text, mode, p.name, p.aliases)
            )
        if kind in ("conference", "journal"):
            if text in c.venues and c.venues[text].type == kind:
                return [text]
            pool = {k: v for k, v in c.venues.items() if v.type == kind}
            hits = [k for k, v in pool.items() if (v.acronym or "").lower() == low]
            if hits:
                return sorted(hits)
            return sorted(
                k for k, v in pool.items() if name_matches(text, mode, v.name, v.aliases)
            )
        if kind == "institution":
            if text in c.institutions:
                return [text]
            return sorted(
                k
                for k, i in c.institutions.items()
                if name_matches(text, mode, i.name, i.aliases)
            )
        kw = text.lower().strip()
        return [kw] if kw in self.all_keywords() else []

    # -- measures ----------------------------------------------------------------

    def citers(self, pub: str) -> list[str]:
        return [q for q, p in self.c.publications.items() if pub in p.references]

    def authored_by(self, person: str) -> list[str]:
        return [q for q, p in self.c.publications.items() if person in p.authors]

    def count_dim(self, kind: str, key: str, dim: str, scope: set[str] | None) -> int:
        c = self.c
        if kind == "publication":
            if dim == "references":
                return sum(
                    1
                    for r in c.publications[key].references
                    if r in c.publications and (scope is None or r in scope)
                )
            return sum(1 for q in self.citers(key) if scope is None or q in scope)
        if dim == "coauthors":
            partners = set()
            for q in self.authored_by(key):
                if scope is not None and q not in scope:
                    continue
                partners.update(x for x in c.publications[q].authors if x != key)
            return len(partners)
        return sum(
            self.count_dim("publication", q, dim, scope) for q in self.authored_by(key)
        )

    def venue_rank_ordinal(self, venue: str | None) -> int:
        if venue is None:
            return 0
        return _ORDINAL.get(self.c.core_ranks.get(venue, ""), 0)

    def metric(self, kind: str, key: str, metric: str):
        c = self.c
        if metric == "core_rank":
            if kind in ("conference", "journal"):
                return self.venue_rank_ordinal(key)
            if kind == "publication":
                return self.venue_rank_ordinal(c.publications[key].venue)
            if kind == "person":
                vals = [
                    self.venue_rank_ordinal(c.publications[q].venue)
                    for q in self.authored_by(key)
                ]
                return max(vals, default=0)
            members = [p for p, pe in c.persons.items() if key in pe.affiliations]
            return max((self.metric("person", m, metric) for m in members), default=0)
        if kind in ("conference", "journal"):
            pubs = [q for q, p in c.publications.items() if p.venue == key]
            return self.h_avg(pubs)
        if kind == "publication":
            venue = c.publications[key].venue
            if venue not in c.venues:
                return Fraction(0)
            return self.metric("conference", venue, metric)
        if kind == "person":
            return self.h_avg(self.authored_by(key))
        members = [p for p, pe in c.persons.items() if key in pe.affiliations]
        pubs = {q for m in members for q in self.authored_by(m)}
        return self.h_avg(sorted(pubs))

    def h_avg(self, pubs) -> Fraction:
        by_year: dict[int, list[int]] = {}
        for q in pubs:
            year = self.c.publications[q].year
            if year is None:
                continue
            by_year.setdefault(year, []).append(len(self.citers(q)))
        if not by_year:
            return Fraction(0)
        total = Fraction(0)
        for counts in by_year.values():
            h = 0
            for cand in range(len(counts), 0, -1):
                if sum(1 for x in counts if x >= cand) >= cand:
                    h = cand
                    break
            total += h
        return total / len(by_year)

    def text_attr(self, kind: str, key: str, attr: str) -> str:
        if attr == "location":
            inst = self.c.institutions[key]
            return ", ".join(x for x in (inst.city, inst.country) if x)
        v = self.attr(kind, key, attr)
        return v if isinstance(v, str) else str(v)

    def attr(self, kind: str, key: str, attr: str):
        if attr == "dblp_key" or kind == "keyword":
            return key
        if kind == "publication":
            p = self.c.publications[key]
            if attr == "year":
                return p.year if p.year is not None else ""
            return getattr(p, attr) or ""
        if kind == "person":
            return getattr(self.c.persons[key], attr) or ""
        if kind == "institution":
            return getattr(self.c.institutions[key], attr) or ""
        return getattr(self.c.venues[key], attr) or ""

    # -- aggregations ---------------------------------------------------------------

    def aggregation(self, q: A.AggregationQuery) -> tuple[str, list[str]]:
        c = self.c
        k = q.kind
        n = q.rank.n if q.rank is not None else 1
        if k in ("most_cited", "newest", "oldest"):
            pubs = sorted(self.pub_arg(q.args[0]))
            if k == "most_cited":
                score = {p: len(self.citers(p)) for p in pubs}
                keys = self.keep_ranked(pubs, score, n, True)
            else:
                pubs = [p for p in pubs if c.publications[p].year is not None]
                score = {p: c.publications[p].year for p in pubs}
                keys = self.keep_ranked(pubs, score, n, k == "newest")
            kind = "publication"
        elif k == "coauthors_of":
            subjects = self.person_arg(q.args[0])
            partners = set()
            for p in c.publications.values():
                for x in p.authors:
                    if x in subjects:
                        partners.update(y for y in p.authors if y in c.persons)
            keys = sorted(partners - subjects)
            kind = "person"
        elif k == "most_publishing_in":
            persons = sorted(self.person_arg(q.args[0]))
            venues = self.venue_arg(q.args[1])
            score = {
                pe: sum(1 for q2 in self.authored_by(pe) if c.publications[q2].venue in venues)
                for pe in persons
            }
            pool = [pe for pe in persons if score[pe] > 0]
            keys = self.keep_ranked(pool, score, n, True)
            kind = "person"
        elif k == "most_researching_about":
            persons = sorted(self.person_arg(q.args[0]))
            kws = self.kw_arg(q.args[1])
            score = {
                pe: sum(
                    1
                    for q2 in self.authored_by(pe)
                    if set(c.publications[q2].keywords) & kws
                )
                for pe in persons
            }
            pool = [pe for pe in persons if score[pe] > 0]
            keys = self.keep_ranked(pool, score, n, True)
            kind = "person"
        elif k == "most_researching_institution":
            insts = sorted(self.inst_arg(q.args[0]))
            kws = self.kw_arg(q.args[1])
            score = {}
            for inst in insts:
                members = {p for p, pe in c.persons.items() if inst in pe.affiliations}
                score[inst] = sum(
                    1
                    for p in c.publications.values()
                    if set(p.keywords) & kws and set(p.authors) & members
                )
            pool = [i for i in insts if score[i] > 0]
            keys = self.keep_ranked(pool, score, n, True)
            kind = "institution"
        elif k == "related_keywords_to":
            seeds = self.kw_arg(q.args[0])
            scope = self.pub_arg(q.args[1]) if q.args[1] is not None else None
            counts: dict[str, int] = {}
            for key2, p in c.publications.items():
                if scope is not None and key2 not in scope:
                    continue
                kws = set(p.keywords)
                if kws & seeds:
                    for kw in kws - seeds:
                        counts[kw] = counts.get(kw, 0) + 1
            keys = sorted(counts)
            keys.sort(key=lambda kw: counts[kw], reverse=True)
            kind = "keyword"
        elif k == "most_frequent_keywords_of":
            pairs = self.mixed_arg(
                q.args[0], {"conference", "journal", "publication", "person", "keyword"}
            )
            if any(kind2 == "keyword" for kind2, _ in pairs):
                kws = sorted({key2 for _, key2 in pairs})
                score = {
                    kw: sum(1 for p in c.publications.values() if kw in p.keywords)
                    for kw in kws
                }
            else:
                pubs = self.pubs_of_mixed(pairs)
                score = {}
                for q2 in pubs:
                    for kw in c.publications[q2].keywords:
                        score[kw] = score.get(kw, 0) + 1
                kws = sorted(score)
            pool = [kw for kw in kws if score[kw] > 0]
            keys = self.keep_ranked(pool, score, n, True)
            kind = "keyword"
        else:
            raise AssertionError(f"unknown aggregation {k}")
        if q.limit is not None:
            keys = keys[: q.limit.n]
        return kind, keys

    # -- functions -------------------------------------------------------------------

    def function(self, q: A.FunctionQuery) -> Result:
        c = self.c
        k = q.kind
        if k == "count":
            inner = self.query(q.args[0])
            return scalar_result(inner.total())
        if k == "core_ranks_for":
            persons = self.person_arg(q.args[0])
            pubs = {q2 for pe in persons for q2 in self.authored_by(pe)}
            if q.args[1] is not None:
                pairs = self.mixed_arg(q.args[1], {"conference", "journal", "publication"})
                venues = {key for kind, key in pairs if kind != "publication"}
                scoped_pubs = {key for kind, key in pairs if kind == "publication"}
                pubs = {
                    q2
                    for q2 in pubs
                    if c.publications[q2].venue in venues or q2 in scoped_pubs
                }
            counts: dict[str, int] = {}
            for q2 in pubs:
                venue = c.publications[q2].venue
                rank = c.core_ranks.get(venue) if venue else None
                if rank:
                    counts[rank] = counts.get(rank, 0) + 1
            rows = [
                (rank, counts[rank])
                for rank in sorted(counts, key=lambda r: -_ORDINAL[r])
            ]
            return table_result(("rank", "count"), rows)
        if k == "alternative_names_for":
            pairs = self.mixed_arg(
                q.args[0], {"conference", "journal", "institution", "person"}
            )
            aliases: dict[str, tuple[str, ...]] = {}
            for kind, key in pairs:
                if kind == "person":
                    aliases[key] = c.persons[key].aliases
                elif kind == "institution":
                    aliases[key] = c.institutions[key].aliases
                else:
                    aliases[key] = c.venues[key].aliases
            rows = [(key, name) for key in sorted(aliases) for name in aliases[key]]
            return table_result(("key", "name"), self._capped(rows, q.limit))
        if k == "most_frequent_attribute_of":
            attr, inner = q.args
            kind, keys = self.entity_keys(inner)
            counts: dict = {}
            for key in keys:
                v = self.attr(kind, key, attr)
                if v != "":
                    counts[v] = counts.get(v, 0) + 1
            rows = []
            if counts:
                top = max(counts.values())
                rows = [(v, top) for v in sorted(v for v, n2 in counts.items() if n2 == top)]
            return table_result(("value", "count"), self._capped(rows, q.limit))
        if k == "attributes_of":
            attrs, inner = q.args
            kind, keys = self.entity_keys(inner)
            rows = [tuple(self.attr(kind, key, attr) for attr in attrs) for key in keys]
            return table_result(tuple(attrs), self._capped(rows, q.limit))
        raise AssertionError(f"unknown function {k}")

    def entity_keys(self, q: A.Query) -> tuple[str, list[str]]:
        if isinstance(q, A.EntityQuery):
            return q.concept, self.entity_query(q)
        return self.aggregation(q)

    @staticmethod
    def _capped(rows: list, limit: A.Limit | None) -> list:
        return rows if limit is None else rows[: limit.n]
