"""Plan evaluation over an in-memory corpus.

Entity sets are ordered lists of keys. The ordering contract:

  scan         keys ascending
  predicate    keeps the input order (a filter is a subsequence)
  setop        result sorted ascending (plain set semantics)
  rank_filter  score direction first, then key ascending
  aggregate    score direction then key, except COAUTHORS OF (plain
               ascending) and RELATED KEYWORDS TO (count desc, keyword asc)
  truncate     prefix of the input

Ranked operators use competition ranking: an entity's rank is one plus the
number of strictly better scores, and every entity within the requested rank
is kept, so ties can return more entities than the rank number.

Counting aggregations (MOST PUBLISHING, MOST RESEARCHING, MOST FREQUENT
KEYWORDS) skip zero counts: an entity with nothing on the topic is not
ranked at all. MOST CITED / NEWEST / OLDEST rank the whole argument set;
NEWEST and OLDEST skip publications without a year.

H-AVG is the mean of yearly h-indexes, kept exact as a Fraction. A
publication's metrics are those of its venue.
"""

from __future__ import annotations

from fractions import Fraction

from .analyzer import Plan, entity_kinds
from .corpus import Corpus
from .matching import name_matches, parse_terms, terms_match, tokens
from .results import Result, entities_result, scalar_result, table_result

CORE_ORDINAL = {"A*": 4, "A": 3, "B": 2, "C": 1}


def compare(comp: str, left, right) -> bool:
    if comp == "eq":
        return left == right
    if comp == "at_least":
        return left >= right
    if comp == "at_most":
        return left <= right
    if comp == "more_than":
        return left > right
    return left < right


def h_index(counts: list[int]) -> int:
    ordered = sorted(counts, reverse=True)
    h = 0
    for i, c in enumerate(ordered):
        if c >= i + 1:
            h = i + 1
        else:
            break
    return h


def rank_restrict(scored: list[tuple[str, object]], n: int, reverse: bool) -> list[str]:
    """Keep entities whose competition rank by score is at most n."""
    items = sorted(scored, key=lambda kv: kv[0])
    items.sort(key=lambda kv: kv[1], reverse=reverse)
    out: list[str] = []
    i = 0
    while i < len(items):
        if i + 1 > n:
            break
        j = i
        while j < len(items) and items[j][1] == items[i][1]:
            j += 1
        out.extend(key for key, _ in items[i:j])
        i = j
    return out


def evaluate(plan: Plan, corpus: Corpus) -> Result:
    return Evaluator(corpus).run(plan)


class Evaluator:
    def __init__(self, corpus: Corpus) -> None:
        self.corpus = corpus
        self.ix = Indexes(corpus)

    def run(self, plan: Plan) -> Result:
        kinds = entity_kinds(plan)
        values: list = []
        for node in plan.nodes:
            ins = [values[i] for i in node.inputs]
            in_kinds = [kinds[i] for i in node.inputs]
            values.append(self.eval_node(node, ins, in_kinds))
        root = values[plan.root]
        if plan.result_kind == "entities":
            return entities_result(plan.entity_kind, root)
        if plan.result_kind == "scalar":
            return scalar_result(root)
        return table_result(plan.columns, root)

    def eval_node(self, node, ins: list, in_kinds: list):
        op = node.op
        if op == "scan":
            return self.scan(node.kind)
        if op == "predicate":
            return self.predicate(node, ins, in_kinds)
        if op == "setop":
            a, b = set(ins[0]), set(ins[1])
            if node.kind == "union":
                return sorted(a | b)
            if node.kind == "intersect":
                return sorted(a & b)
            return sorted(a - b)
        if op == "rank_filter":
            return self.rank_filter(node, ins, in_kinds)
        if op == "aggregate":
            return self.aggregate(node, ins, in_kinds)
        if op == "truncate":
            return ins[0][: node.params["n"]]
        if op == "count":
            return len(ins[0]) if isinstance(ins[0], list) else 1
        if op == "core_ranks":
            return self.core_ranks(node, ins, in_kinds)
        if op == "alt_names":
            return self.alt_names(ins, node.params["arg_kinds"])
        if op == "most_frequent_attr":
            return self.most_frequent_attr(node.params["attr"], ins[0], in_kinds[0])
        if op == "project":
            attrs = node.params["attrs"]
            return [tuple(self.attr_value(in_kinds[0], k, a) for a in attrs) for k in ins[0]]
        raise AssertionError(f"unknown op {op}")

    # -- scans and predicates -------------------------------------------------

    def scan(self, kind: str) -> list[str]:
        c = self.corpus
        if kind == "publication":
            return sorted(c.publications)
        if kind == "person":
            return sorted(c.persons)
        if kind in ("conference", "journal"):
            return sorted(k for k, v in c.venues.items() if v.type == kind)
        if kind == "institution":
            return sorted(c.institutions)
        return c.keywords()

    def predicate(self, node, ins: list, in_kinds: list) -> list[str]:
        keep = self.build_predicate(node, ins, in_kinds)
        return [k for k in ins[0] if keep(k)]

    def build_predicate(self, node, ins, in_kinds):
        """Returns key -> bool for the incoming entity kind."""
        c = self.corpus
        ix = self.ix
        ek = in_kinds[0]
        k = node.kind
        p = node.params
        argsets = [set(v) for v in ins[1:]]
        arg_kinds = list(p.get("arg_kinds", ()))

        if k == "type_is":
            return lambda key: c.publications[key].type == p["type"]
        if k == "role_is":
            pubs_of = ix.authored if p["role"] == "author" else ix.edited
            return lambda key: bool(pubs_of[key])
        if k == "matches_literal":
            if p["mode"] == "list":
                wanted = set(p["texts"])
            else:
                wanted = {key for _, key in c.resolve({ek}, p["text"], p["mode"])}
            return lambda key: key in wanted
        if k == "named":
            if ek == "person":
                pool = c.persons
            elif ek == "institution":
                pool = c.institutions
            else:
                pool = c.venues
            matched = {
                e.key
                for e in pool.values()
                if name_matches(p["text"], p["mode"], e.name, e.aliases)
            }
            return lambda key: key in matched
        if k == "titled":
            matched = {
                pub.key
                for pub in c.publications.values()
                if name_matches(p["text"], p["mode"], pub.title)
            }
            return lambda key: key in matched
        if k == "key_is":
            return lambda key: key == p["text"]
        if k == "orcid_is":
            return lambda key: c.persons[key].orcid == p["text"]
        if k == "doi_is":
            return lambda key: (c.publications[key].doi or "").lower() == p["text"]
        if k == "isbn_is":
            return lambda key: (c.publications[key].isbn or "").lower() == p["text"]
        if k == "acronym_is":
            return lambda key: (c.venues[key].acronym or "").lower() == p["text"]
        if k == "city_is":
            return lambda key: (c.institutions[key].city or "").lower() == p["text"]
        if k == "country_is":
            return lambda key: (c.institutions[key].country or "").lower() == p["text"]
        if k == "volume_is":
            # journal filter: some hosted publication carries the volume
            return lambda key: any(
                c.publications[q].volume == p["text"] for q in ix.hosted[key]
            )
        if k == "year_cmp":
            if ek == "publication":
                return lambda key: c.publications[key].year is not None and compare(
                    p["comp"], c.publications[key].year, p["value"]
                )
            # venue: hosts at least one publication from a matching year
            return lambda key: any(
                c.publications[q].year is not None
                and compare(p["comp"], c.publications[q].year, p["value"])
                for q in ix.hosted[key]
            )
        if k == "about_keyword":
            kws = set().union(*argsets) if argsets else set()
            if ek == "publication":
                return lambda key: bool(set(c.publications[key].keywords) & kws)
            # venue: hosts at least one publication on the topic
            return lambda key: any(
                set(c.publications[q].keywords) & kws for q in ix.hosted[key]
            )
        if k == "about_terms":
            expr = parse_terms(p["text"])
            if ek == "publication":
                return lambda key: terms_match(expr, ix.pub_tokens(key))
            return lambda key: any(terms_match(expr, ix.pub_tokens(q)) for q in ix.hosted[key])
        if k == "hosts":
            wanted = {c.publications[q].venue for s in argsets for q in s}
            return lambda key: key in wanted
        if k == "appeared_in":
            venues = set().union(*argsets) if argsets else set()
            return lambda key: c.publications[key].venue in venues
        if k == "cited_by":
            citing = set().union(*argsets) if argsets else set()
            if ek == "publication":
                return lambda key: bool(set(ix.citers[key]) & citing)
            return lambda key: any(set(ix.citers[q]) & citing for q in ix.authored[key])
        if k == "references":
            cited = set().union(*argsets) if argsets else set()
            if ek == "publication":
                return lambda key: bool(set(c.publications[key].references) & cited)
            return lambda key: any(
                set(c.publications[q].references) & cited for q in ix.authored[key]
            )
        if k == "written_by":
            persons = argsets[0]
            return lambda key: bool(set(c.publications[key].authors) & persons)
        if k == "edited_by":
            persons = argsets[0]
            return lambda key: bool(set(c.publications[key].editors) & persons)
        if k == "written_by_any":
            n = p["n"]
            if p["distinct"]:
                return lambda key: (
                    sum(1 for g in argsets if set(c.publications[key].authors) & g) >= n
                )
            union = set().union(*argsets) if argsets else set()
            return lambda key: len(set(c.publications[key].authors) & union) >= n
        if k == "published_with":
            insts = argsets[0]
            return lambda key: any(
                set(c.persons[a].affiliations) & insts
                for a in c.publications[key].authors
                if a in c.persons
            )
        if k == "authored":
            pubs = argsets[0]
            qual = p["qual"]
            if qual == "only":
                return lambda key: bool(ix.authored[key]) and set(ix.authored[key]) <= pubs
            if qual == "no":
                return lambda key: not set(ix.authored[key]) & pubs
            return lambda key: bool(set(ix.authored[key]) & pubs)
        if k == "edited":
            pubs = argsets[0]
            return lambda key: bool(set(ix.edited[key]) & pubs)
        if k == "works_for":
            insts = argsets[0]
            return lambda key: bool(set(c.persons[key].affiliations) & insts)
        if k == "published_in":
            venues = set().union(*argsets) if argsets else set()
            return lambda key: any(c.publications[q].venue in venues for q in ix.authored[key])
        if k == "with_members":
            wanted = {
                aff for person in argsets[0] for aff in c.persons[person].affiliations
            }
            return lambda key: key in wanted
        if k == "keywords_of":
            pubs = self.pubs_of_args(argsets, arg_kinds)
            kws = {kw for q in pubs for kw in c.publications[q].keywords}
            return lambda key: key in kws
        if k == "count_cmp":
            scope = argsets[0] if argsets else None
            return lambda key: compare(
                p["comp"], self.count_dim(ek, key, p["dim"], scope), p["value"]
            )
        if k == "metric_cmp":
            target = CORE_ORDINAL[p["value"]] if p["metric"] == "core_rank" else p["value"]
            return lambda key: compare(p["comp"], self.metric_value(ek, key, p["metric"]), target)
        if k == "length_cmp":
            return lambda key: compare(
                p["comp"], len(self.attr_text(ek, key, p["attr"])), p["value"]
            )
        raise AssertionError(f"unknown predicate {k}")

    def pubs_of_args(self, argsets: list[set[str]], arg_kinds: list[str]) -> set[str]:
        """Publication set associated with heterogeneous argument sets."""
        ix = self.ix
        pubs: set[str] = set()
        for s, kind in zip(argsets, arg_kinds):
            if kind == "publication":
                pubs |= s
            elif kind == "person":
                for key in s:
                    pubs.update(ix.authored[key])
            elif kind in ("conference", "journal"):
                for key in s:
                    pubs.update(ix.hosted[key])
        return pubs

    # -- scores -----------------------------------------------------------------

    def count_dim(self, ek: str, key: str, dim: str, scope: set[str] | None) -> int:
        c = self.corpus
        ix = self.ix
        if ek == "publication":
            if dim == "references":
                refs = [r for r in c.publications[key].references if r in c.publications]
                return len([r for r in refs if scope is None or r in scope])
            return len([q for q in ix.citers[key] if scope is None or q in scope])
        # person: reference and citation edges are summed over authored
        # publications; coauthors are distinct partners
        if dim == "coauthors":
            partners: set[str] = set()
            for q in ix.authored[key]:
                if scope is not None and q not in scope:
                    continue
                partners.update(a for a in c.publications[q].authors if a != key)
            return len(partners)
        total = 0
        for q in ix.authored[key]:
            total += self.count_dim("publication", q, dim, scope)
        return total

    def metric_value(self, ek: str, key: str, metric: str):
        ix = self.ix
        if metric == "core_rank":
            if ek in ("conference", "journal"):
                return CORE_ORDINAL.get(self.corpus.core_ranks.get(key, ""), 0)
            if ek == "publication":
                venue = self.corpus.publications[key].venue
                return self.metric_value("conference", venue, metric) if venue else 0
            if ek == "person":
                vals = [
                    self.metric_value("conference", v, metric)
                    for v in ix.venues_of_person(key)
                ]
            else:  # institution
                vals = [
                    self.metric_value("person", m, metric) for m in ix.members.get(key, ())
                ]
            return max(vals, default=0)
        # h_avg
        if ek in ("conference", "journal"):
            return self.h_avg(ix.hosted[key])
        if ek == "publication":
            venue = self.corpus.publications[key].venue
            return self.h_avg(ix.hosted[venue]) if venue in self.corpus.venues else Fraction(0)
        if ek == "person":
            return self.h_avg(ix.authored[key])
        pubs: set[str] = set()
        for m in ix.members.get(key, ()):
            pubs.update(ix.authored[m])
        return self.h_avg(sorted(pubs))

    def h_avg(self, pubs) -> Fraction:
        by_year: dict[int, list[int]] = {}
        for q in pubs:
            pub = self.corpus.publications[q]
            if pub.year is None:
                continue
            by_year.setdefault(pub.year, []).append(len(self.ix.citers[q]))
        if not by_year:
            return Fraction(0)
        return Fraction(sum(h_index(v) for v in by_year.values()), len(by_year))

    def attr_text(self, ek: str, key: str, attr: str) -> str:
        if attr == "location":
            inst = self.corpus.institutions[key]
            return ", ".join(x for x in (inst.city, inst.country) if x)
        v = self.attr_value(ek, key, attr)
        return v if isinstance(v, str) else str(v)

    def attr_value(self, ek: str, key: str, attr: str):
        if attr == "dblp_key":
            return key
        if ek == "keyword":
            return key
        if ek == "publication":
            pub = self.corpus.publications[key]
            if attr == "year":
                return pub.year if pub.year is not None else ""
            return getattr(pub, attr) or ""
        if ek == "person":
            return getattr(self.corpus.persons[key], attr) or ""
        if ek == "institution":
            return getattr(self.corpus.institutions[key], attr) or ""
        return getattr(self.corpus.venues[key], attr) or ""

    # -- ranked operators ---------------------------------------------------------

    def rank_filter(self, node, ins: list, in_kinds: list) -> list[str]:
        ek = in_kinds[0]
        p = node.params
        reverse = p["direction"] in ("most", "highest", "longest")
        if node.kind == "count":
            scope = set(ins[1]) if len(ins) > 1 else None
            scored = [(k, self.count_dim(ek, k, p["dim"], scope)) for k in ins[0]]
        elif node.kind == "metric":
            scored = [(k, self.metric_value(ek, k, p["metric"])) for k in ins[0]]
        else:
            scored = [(k, len(self.attr_text(ek, k, p["attr"]))) for k in ins[0]]
        return rank_restrict(scored, p["n"], reverse)

    def aggregate(self, node, ins: list, in_kinds: list) -> list[str]:
        c = self.corpus
        ix = self.ix
        k = node.kind
        p = node.params
        if k == "most_cited":
            scored = [(q, len(ix.citers[q])) for q in ins[0]]
            return rank_restrict(scored, p["rank"], reverse=True)
        if k in ("newest", "oldest"):
            scored = [
                (q, c.publications[q].year) for q in ins[0] if c.publications[q].year is not None
            ]
            return rank_restrict(scored, p["rank"], reverse=(k == "newest"))
        if k == "coauthors_of":
            subjects = set(ins[0])
            partners: set[str] = set()
            for person in subjects:
                partners.update(ix.coauthors.get(person, ()))
            return sorted(partners - subjects)
        if k == "most_publishing_in":
            venues = set().union(*(set(v) for v in ins[1:])) if len(ins) > 1 else set()
            scored = []
            for person in ins[0]:
                n = sum(1 for q in ix.authored[person] if c.publications[q].venue in venues)
                if n:
                    scored.append((person, n))
            return rank_restrict(scored, p["rank"], reverse=True)
        if k == "most_researching_about":
            kws = set(ins[1])
            scored = []
            for person in ins[0]:
                n = sum(1 for q in ix.authored[person] if set(c.publications[q].keywords) & kws)
                if n:
                    scored.append((person, n))
            return rank_restrict(scored, p["rank"], reverse=True)
        if k == "most_researching_institution":
            kws = set(ins[1])
            scored = []
            for inst in ins[0]:
                members = set(ix.members.get(inst, ()))
                n = sum(
                    1
                    for q, pub in c.publications.items()
                    if set(pub.keywords) & kws and set(pub.authors) & members
                )
                if n:
                    scored.append((inst, n))
            return rank_restrict(scored, p["rank"], reverse=True)
        if k == "related_keywords_to":
            seeds = set(ins[0])
            scope = set(ins[1]) if p["scoped"] else None
            counts: dict[str, int] = {}
            for q, pub in c.publications.items():
                if scope is not None and q not in scope:
                    continue
                kws = set(pub.keywords)
                if not kws & seeds:
                    continue
                for kw in kws - seeds:
                    counts[kw] = counts.get(kw, 0) + 1
            return sorted(counts, key=lambda kw: (-counts[kw], kw))
        if k == "most_frequent_keywords_of":
            arg_kinds = list(p["arg_kinds"])
            if "keyword" in arg_kinds:
                kws = {kw for s in ins for kw in s}
                scored = [(kw, len(ix.by_keyword.get(kw, ()))) for kw in kws]
            else:
                pubs = self.pubs_of_args([set(v) for v in ins], arg_kinds)
                counts: dict[str, int] = {}
                for q in pubs:
                    for kw in c.publications[q].keywords:
                        counts[kw] = counts.get(kw, 0) + 1
                scored = list(counts.items())
            scored = [(kw, n) for kw, n in scored if n]
            return rank_restrict(scored, p["rank"], reverse=True)
        raise AssertionError(f"unknown aggregation {k}")

    # -- table builders -------------------------------------------------------------

    def core_ranks(self, node, ins: list, in_kinds: list) -> list[tuple]:
        c = self.corpus
        ix = self.ix
        pubs: set[str] = set()
        for person in ins[0]:
            pubs.update(ix.authored[person])
        if node.params["scoped"]:
            scope_venues: set[str] = set()
            scope_pubs: set[str] = set()
            for v, kind in zip(ins[1:], node.params["arg_kinds"]):
                if kind == "publication":
                    scope_pubs.update(v)
                else:
                    scope_venues.update(v)
            pubs = {
                q
                for q in pubs
                if c.publications[q].venue in scope_venues or q in scope_pubs
            }
        counts: dict[str, int] = {}
        for q in pubs:
            venue = c.publications[q].venue
            rank = c.core_ranks.get(venue) if venue else None
            if rank is not None:
                counts[rank] = counts.get(rank, 0) + 1
        ordered = sorted(counts, key=lambda r: -CORE_ORDINAL[r])
        return [(r, counts[r]) for r in ordered]

    def alt_names(self, ins: list, arg_kinds: tuple[str, ...]) -> list[tuple]:
        pools = {
            "person": self.corpus.persons,
            "institution": self.corpus.institutions,
            "conference": self.corpus.venues,
            "journal": self.corpus.venues,
        }
        entities: dict[str, tuple[str, ...]] = {}
        for v, kind in zip(ins, arg_kinds):
            pool = pools[kind]
            for key in v:
                entities[key] = pool[key].aliases
        return [(key, alias) for key in sorted(entities) for alias in entities[key]]

    def most_frequent_attr(self, attr: str, keys: list[str], ek: str) -> list[tuple]:
        counts: dict = {}
        for key in keys:
            v = self.attr_value(ek, key, attr)
            if v == "":
                continue
            counts[v] = counts.get(v, 0) + 1
        if not counts:
            return []
        top = max(counts.values())
        return [(v, top) for v in sorted(k for k, n in counts.items() if n == top)]


class Indexes:
    """Adjacency maps the evaluator needs; built once per corpus."""

    def __init__(self, corpus: Corpus) -> None:
        c = corpus
        self.citers: dict[str, list[str]] = {k: [] for k in c.publications}
        self.authored: dict[str, list[str]] = {k: [] for k in c.persons}
        self.edited: dict[str, list[str]] = {k: [] for k in c.persons}
        self.hosted: dict[str, list[str]] = {k: [] for k in c.venues}
        self.by_keyword: dict[str, list[str]] = {}
        self.members: dict[str, list[str]] = {}
        self.coauthors: dict[str, set[str]] = {k: set() for k in c.persons}
        for key, pub in c.publications.items():
            for r in pub.references:
                if r in c.publications:
                    self.citers[r].append(key)
            for a in pub.authors:
                if a in c.persons:
                    self.authored[a].append(key)
            for e in pub.editors:
                if e in c.persons:
                    self.edited[e].append(key)
            if pub.venue in c.venues:
                self.hosted[pub.venue].append(key)
            for kw in pub.keywords:
                self.by_keyword.setdefault(kw, []).append(key)
            known = [a for a in pub.authors if a in c.persons]
            for a in known:
                for b in known:
                    if a != b:
                        self.coauthors[a].add(b)
        for person in c.persons.values():
            for aff in person.affiliations:
                if aff in c.institutions:
                    self.members.setdefault(aff, []).append(person.key)
        self._tokens: dict[str, set[str]] = {}
        self._corpus = c

    def venues_of_person(self, key: str) -> set[str]:
        c = self._corpus
        return {
            c.publications[q].venue
            for q in self.authored[key]
            if c.publications[q].venue in c.venues
        }

    def pub_tokens(self, key: str) -> set[str]:
        cached = self._tokens.get(key)
        if cached is None:
            pub = self._corpus.publications[key]
            cached = set(tokens(pub.title)) | set(tokens(pub.abstract or ""))
            self._tokens[key] = cached
        return cached
