"""Lowering from syntax trees to evaluation plans.

A plan is a flat list of nodes in topological order (a node's inputs always
have smaller ids). Kinds of node:

  scan        universe of one entity kind
  predicate   keep the input entities satisfying a condition; extra inputs
              are argument sets (params["arg_kinds"] names their kinds)
  setop       union | intersect | minus
  rank_filter keep input entities whose competition rank by some score is
              within the top n (direction decides the score sign)
  aggregate   aggregation queries (most_cited, coauthors_of, ...)
  truncate    first n rows/entities of the input
  count       scalar row/entity count
  core_ranks / alt_names / most_frequent_attr / project   table builders

Lowering also does all semantic checking: rank restrictions outside
aggregations, attribute/concept mismatches, metric value types, malformed
term expressions, and non-positive restrictions. With a corpus at hand it
adds resolution warnings for literals that match nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import ast as A
from .corpus import Corpus
from .errors import SemanticError, Warning_
from .matching import parse_terms

# Attributes each entity kind exposes for projections and MOST FREQUENT.
ATTRS_BY_KIND = {
    "publication": ("title", "abstract", "year", "doi", "isbn", "dblp_key", "volume"),
    "person": ("name", "orcid", "dblp_key"),
    "conference": ("name", "acronym", "dblp_key"),
    "journal": ("name", "acronym", "dblp_key"),
    "institution": ("name", "city", "country", "dblp_key"),
    "keyword": ("name",),
}

# Result kind of an aggregation.
AGG_RESULT_KIND = {
    "most_cited": "publication",
    "newest": "publication",
    "oldest": "publication",
    "coauthors_of": "person",
    "most_publishing_in": "person",
    "most_researching_about": "person",
    "most_researching_institution": "institution",
    "related_keywords_to": "keyword",
    "most_frequent_keywords_of": "keyword",
}


@dataclass
class Node:
    id: int
    op: str
    kind: str | None = None
    params: dict = field(default_factory=dict)
    inputs: tuple[int, ...] = ()

    def describe(self) -> str:
        bits = [f"n{self.id}", self.op]
        if self.kind is not None:
            bits.append(f"kind={self.kind}")
        for k in sorted(self.params):
            bits.append(f"{k}={self.params[k]!r}")
        if self.inputs:
            bits.append("<- " + ", ".join(f"n{i}" for i in self.inputs))
        return " ".join(bits)


@dataclass
class Plan:
    nodes: list[Node]
    root: int
    result_kind: str  # entities | scalar | table
    entity_kind: str | None = None
    columns: tuple[str, ...] | None = None
    warnings: list[Warning_] = field(default_factory=list)

    def explain(self) -> str:
        return "\n".join(n.describe() for n in self.nodes)


def validate(plan: Plan) -> list[str]:
    """Structural sanity check; returns problem descriptions (empty = fine)."""
    problems = []
    for i, node in enumerate(plan.nodes):
        if node.id != i:
            problems.append(f"node {i} has id {node.id}")
        for inp in node.inputs:
            if not 0 <= inp < i:
                problems.append(f"n{i} input n{inp} is not an earlier node")
    if not 0 <= plan.root < len(plan.nodes):
        problems.append(f"root n{plan.root} out of range")
    if plan.result_kind == "entities" and plan.entity_kind is None:
        problems.append("entity result without entity kind")
    if plan.result_kind == "table" and not plan.columns:
        problems.append("table result without columns")
    return problems


def lower(query: A.Query, corpus: Corpus | None = None) -> Plan:
    return _Lowering(corpus).lower(query)


def entity_kinds(plan: Plan) -> list[str | None]:
    """Entity kind of each node's value (None for scalars and tables)."""
    kinds: list[str | None] = []
    for node in plan.nodes:
        if node.op == "scan":
            kinds.append(node.kind)
        elif node.op in ("predicate", "setop", "rank_filter", "truncate"):
            kinds.append(kinds[node.inputs[0]])
        elif node.op == "aggregate":
            kinds.append(AGG_RESULT_KIND[node.kind])
        else:
            kinds.append(None)
    return kinds


@dataclass
class _Set:
    """An entity set under construction: node id plus its entity kind."""

    id: int
    kind: str


class _Lowering:
    def __init__(self, corpus: Corpus | None) -> None:
        self.corpus = corpus
        self.nodes: list[Node] = []
        self.warnings: list[Warning_] = []

    def lower(self, query: A.Query) -> Plan:
        if isinstance(query, A.EntityQuery):
            s = self.entity_query(query)
            return self._finish(s.id, "entities", entity_kind=s.kind)
        if isinstance(query, A.AggregationQuery):
            s = self.aggregation(query, allow_limit=True)
            return self._finish(s.id, "entities", entity_kind=s.kind)
        return self.function(query)

    def _finish(self, root: int, result_kind: str, entity_kind=None, columns=None) -> Plan:
        return Plan(
            nodes=self.nodes,
            root=root,
            result_kind=result_kind,
            entity_kind=entity_kind,
            columns=columns,
            warnings=self.warnings,
        )

    def add(self, op: str, kind: str | None = None, params: dict | None = None, inputs: tuple[int, ...] = ()) -> int:
        node = Node(id=len(self.nodes), op=op, kind=kind, params=params or {}, inputs=inputs)
        self.nodes.append(node)
        return node.id

    # -- queries -------------------------------------------------------------

    def entity_query(self, q: A.EntityQuery) -> _Set:
        if isinstance(q.restriction, A.RankLimit):
            raise SemanticError(
                "a ~rank restriction needs an aggregation to rank by; use a plain number to limit results",
                q.restriction.span,
            )
        out = self.add("scan", q.concept)
        if q.specialisation is not None:
            if q.concept == "person":
                out = self.add("predicate", "role_is", {"role": q.specialisation}, (out,))
            else:
                out = self.add("predicate", "type_is", {"type": q.specialisation}, (out,))
        cur = _Set(out, q.concept)
        if q.filter is not None:
            cur = self.filter(q.filter, cur, _Set(out, q.concept))
        if q.restriction is not None:
            self._positive(q.restriction)
            cur = _Set(self.add("truncate", params={"n": q.restriction.n}, inputs=(cur.id,)), cur.kind)
        return cur

    def aggregation(self, agg: A.AggregationQuery, allow_limit: bool) -> _Set:
        if agg.rank is not None:
            self._positive(agg.rank)
        rank = agg.rank.n if agg.rank is not None else 1
        k = agg.kind
        if k in ("most_cited", "newest", "oldest"):
            arg = self.pub_set(agg.args[0])
            out = self.add("aggregate", k, {"rank": rank}, (arg.id,))
        elif k == "coauthors_of":
            arg = self.person_set(agg.args[0])
            out = self.add("aggregate", k, {}, (arg.id,))
        elif k == "most_publishing_in":
            pe = self.person_set(agg.args[0])
            venues = self.arg_sets(agg.args[1])
            out = self.add(
                "aggregate",
                k,
                {"rank": rank, "arg_kinds": tuple(s.kind for s in venues)},
                (pe.id, *(s.id for s in venues)),
            )
        elif k == "most_researching_about":
            pe = self.person_set(agg.args[0])
            kw = self.keyword_set(agg.args[1])
            out = self.add("aggregate", k, {"rank": rank}, (pe.id, kw.id))
        elif k == "most_researching_institution":
            inst = self.institution_set(agg.args[0])
            kw = self.keyword_set(agg.args[1])
            out = self.add("aggregate", k, {"rank": rank}, (inst.id, kw.id))
        elif k == "related_keywords_to":
            kw = self.keyword_set(agg.args[0])
            inputs = [kw.id]
            if agg.args[1] is not None:
                inputs.append(self.pub_set(agg.args[1]).id)
            out = self.add("aggregate", k, {"scoped": agg.args[1] is not None}, tuple(inputs))
        elif k == "most_frequent_keywords_of":
            args = self.arg_sets(agg.args[0])
            out = self.add(
                "aggregate",
                k,
                {"rank": rank, "arg_kinds": tuple(s.kind for s in args)},
                tuple(s.id for s in args),
            )
        else:
            raise SemanticError(f"unknown aggregation {k}", agg.span)
        cur = _Set(out, AGG_RESULT_KIND[k])
        if agg.limit is not None:
            if not allow_limit:
                raise SemanticError("limit is not allowed here", agg.limit.span)
            self._positive(agg.limit)
            cur = _Set(self.add("truncate", params={"n": agg.limit.n}, inputs=(cur.id,)), cur.kind)
        return cur

    def function(self, q: A.FunctionQuery) -> Plan:
        k = q.kind
        if q.limit is not None:
            self._positive(q.limit)
        if k == "count":
            inner = self.any_query(q.args[0])
            out = self.add("count", inputs=(inner,))
            return self._finish(out, "scalar")
        if k == "core_ranks_for":
            pe = self.person_set(q.args[0])
            inputs = [pe.id]
            params: dict = {"scoped": q.args[1] is not None}
            if q.args[1] is not None:
                scopes = self.arg_sets(q.args[1])
                params["arg_kinds"] = tuple(s.kind for s in scopes)
                inputs.extend(s.id for s in scopes)
            out = self.add("core_ranks", params=params, inputs=tuple(inputs))
            return self._finish(out, "table", columns=("rank", "count"))
        if k == "alternative_names_for":
            args = self.arg_sets(q.args[0])
            out = self.add(
                "alt_names",
                params={"arg_kinds": tuple(s.kind for s in args)},
                inputs=tuple(s.id for s in args),
            )
            out = self._maybe_truncate(out, q.limit)
            return self._finish(out, "table", columns=("key", "name"))
        if k == "most_frequent_attribute_of":
            attr, inner_q = q.args
            inner = self.entity_input(inner_q, attr_context=attr)
            out = self.add("most_frequent_attr", params={"attr": attr}, inputs=(inner.id,))
            out = self._maybe_truncate(out, q.limit)
            return self._finish(out, "table", columns=("value", "count"))
        if k == "attributes_of":
            attrs, inner_q = q.args
            inner = self.entity_input(inner_q)
            allowed = ATTRS_BY_KIND[inner.kind]
            for attr in attrs:
                if attr not in allowed:
                    raise SemanticError(
                        f"{inner.kind} entities have no {attr} attribute", inner_q.span
                    )
            out = self.add("project", params={"attrs": tuple(attrs)}, inputs=(inner.id,))
            out = self._maybe_truncate(out, q.limit)
            return self._finish(out, "table", columns=tuple(attrs))
        raise SemanticError(f"unknown function {k}", q.span)

    def _maybe_truncate(self, out: int, limit: A.Limit | None) -> int:
        if limit is None:
            return out
        return self.add("truncate", params={"n": limit.n}, inputs=(out,))

    def any_query(self, q: A.Query) -> int:
        """Inner query of COUNT: any shape goes."""
        if isinstance(q, A.FunctionQuery):
            plan_root_before = len(self.nodes)
            sub = self.function(q)
            assert sub.nodes is self.nodes and plan_root_before <= sub.root
            return sub.root
        if isinstance(q, A.EntityQuery):
            return self.entity_query(q).id
        return self.aggregation(q, allow_limit=True).id

    def entity_input(self, q: A.Query, attr_context: str | None = None) -> _Set:
        if isinstance(q, A.EntityQuery):
            s = self.entity_query(q)
        elif isinstance(q, A.AggregationQuery):
            s = self.aggregation(q, allow_limit=True)
        else:
            raise SemanticError("attribute projection needs an entity query", q.span)
        if attr_context is not None and attr_context not in ATTRS_BY_KIND[s.kind]:
            raise SemanticError(
                f"{s.kind} entities have no {attr_context} attribute", q.span
            )
        return s

    # -- argument sets ----------------------------------------------------------

    def arg_sets(self, arg: A.Argument) -> list[_Set]:
        """Lower an argument to one entity set per possible kind."""
        if isinstance(arg, (A.StrLit, A.StrListLit)):
            self._warn_unresolved(arg, sorted(arg.kinds))
            return [self.literal_set(arg, kind) for kind in sorted(arg.kinds)]
        if isinstance(arg, A.EntityQuery):
            return [self.entity_query(arg)]
        if isinstance(arg, A.AggregationQuery):
            return [self.aggregation(arg, allow_limit=True)]
        raise SemanticError("unsupported argument", getattr(arg, "span", None))

    def literal_set(self, lit: A.StrLit | A.StrListLit, kind: str) -> _Set:
        scan = self.add("scan", kind)
        if isinstance(lit, A.StrLit):
            params = {"text": lit.text, "mode": lit.mode}
        else:
            params = {"texts": tuple(t.lower() for t in lit.texts), "mode": "list"}
        out = self.add("predicate", "matches_literal", params, (scan,))
        return _Set(out, kind)

    def _warn_unresolved(self, lit: A.StrLit | A.StrListLit, kinds: list[str]) -> None:
        """Warn when a literal matches nothing under any kind it may name."""
        if self.corpus is None:
            return
        if isinstance(lit, A.StrLit):
            if not any(self.corpus.resolve({k}, lit.text, lit.mode) for k in kinds):
                what = " or ".join(kinds)
                self.warnings.append(
                    Warning_(f'"{lit.text}" does not name any {what} in the corpus', lit.span)
                )
        else:
            known = self.corpus.keywords()
            for t in lit.texts:
                if t.lower() not in known:
                    self.warnings.append(
                        Warning_(f'"{t}" does not name any keyword in the corpus', lit.span)
                    )

    def _single(self, arg: A.Argument, kind: str) -> _Set:
        sets = self.arg_sets(arg)
        assert len(sets) == 1 and sets[0].kind == kind, f"expected a {kind} argument"
        return sets[0]

    def pub_set(self, arg: A.Argument) -> _Set:
        return self._single(arg, "publication")

    def person_set(self, arg: A.Argument) -> _Set:
        return self._single(arg, "person")

    def institution_set(self, arg: A.Argument) -> _Set:
        return self._single(arg, "institution")

    def keyword_set(self, arg: A.Argument) -> _Set:
        return self._single(arg, "keyword")

    # -- filters ---------------------------------------------------------------

    def filter(self, f: A.FilterExpr, incoming: _Set, universe: _Set) -> _Set:
        if isinstance(f, A.FilterBinary):
            lhs = self.filter(f.lhs, incoming, universe)
            if f.op == "and":
                return self.filter(f.rhs, lhs, universe)
            rhs = self.filter(f.rhs, incoming, universe)
            if f.op == "or":
                out = self.add("setop", "union", inputs=(lhs.id, rhs.id))
            elif f.op == "and_not":
                out = self.add("setop", "minus", inputs=(lhs.id, rhs.id))
            else:  # or_not: keep lhs plus everything the rhs rules out
                neg = self.add("setop", "minus", inputs=(incoming.id, rhs.id))
                out = self.add("setop", "union", inputs=(lhs.id, neg))
            return _Set(out, incoming.kind)
        return self.leaf(f, incoming)

    def leaf(self, f: A.FilterLeaf, incoming: _Set) -> _Set:
        k = f.kind
        a = f.args
        kind = incoming.kind

        def pred(params: dict, extra: tuple[_Set, ...] | list[_Set] = ()) -> _Set:
            inputs = (incoming.id, *(s.id for s in extra))
            if extra:
                params = dict(params)
                params["arg_kinds"] = tuple(s.kind for s in extra)
            return _Set(self.add("predicate", k, params, inputs), kind)

        if k in ("key_is", "orcid_is", "volume_is"):
            return pred({"text": a[0]})
        if k in ("doi_is", "isbn_is", "acronym_is", "city_is", "country_is"):
            return pred({"text": a[0].lower()})
        if k in ("named", "titled"):
            lit: A.StrLit = a[0]
            return pred({"text": lit.text, "mode": lit.mode})
        if k == "about_keyword":
            return pred({}, self.arg_sets(a[0]))
        if k == "about_terms":
            try:
                parse_terms(a[0])
            except ValueError as e:
                raise SemanticError(f"bad term expression: {e}", f.span)
            return pred({"text": a[0]})
        if k == "year_cmp":
            return pred({"comp": a[0], "value": a[1]})
        if k in ("hosts", "cited_by", "references", "edited", "keywords_of"):
            return pred({}, self.arg_sets(a[0]))
        if k == "authored":
            return pred({"qual": a[1]}, [self.pub_set(a[0])])
        if k in ("appeared_in", "published_in"):
            return pred({}, self.arg_sets(a[0]))
        if k in ("written_by", "edited_by"):
            return pred({}, [self.person_set(a[0])])
        if k == "written_by_any":
            n, distinct, groups = a
            if n < 1:
                raise SemanticError("the author count must be at least 1", f.span)
            sets = [self.person_set(g) for g in groups]
            return pred({"n": n, "distinct": distinct}, sets)
        if k == "published_with" or k == "works_for":
            return pred({}, [self.institution_set(a[0])])
        if k == "with_members":
            return pred({}, [self.person_set(a[0])])
        if k == "count_cmp":
            dim, comp, n, scope = a
            extra = [self.pub_set(scope)] if scope is not None else []
            return pred({"dim": dim, "comp": comp, "value": n}, extra)
        if k == "metric_cmp":
            metric, comp, value = a
            self._check_metric_value(metric, value, f)
            return pred({"metric": metric, "comp": comp, "value": value})
        if k == "length_cmp":
            attr, comp, n = a
            self._check_length_attr(kind, attr, f)
            return pred({"attr": attr, "comp": comp, "value": n})
        if k == "agg_count":
            dim, direction, scope, rank = a
            n = self._rank_n(rank)
            extra = [self.pub_set(scope)] if scope is not None else []
            inputs = (incoming.id, *(s.id for s in extra))
            return _Set(
                self.add(
                    "rank_filter", "count", {"dim": dim, "direction": direction, "n": n}, inputs
                ),
                kind,
            )
        if k == "agg_metric":
            metric, direction, rank = a
            n = self._rank_n(rank)
            return _Set(
                self.add(
                    "rank_filter",
                    "metric",
                    {"metric": metric, "direction": direction, "n": n},
                    (incoming.id,),
                ),
                kind,
            )
        if k == "agg_length":
            attr, direction, rank = a
            self._check_length_attr(kind, attr, f)
            n = self._rank_n(rank)
            return _Set(
                self.add(
                    "rank_filter",
                    "length",
                    {"attr": attr, "direction": direction, "n": n},
                    (incoming.id,),
                ),
                kind,
            )
        if k == "in_aggregation":
            agg = self.aggregation(a[0], allow_limit=False)
            if agg.kind != kind:
                raise SemanticError(
                    f"this aggregation yields {agg.kind}s, not {kind}s", f.span
                )
            return _Set(self.add("setop", "intersect", inputs=(incoming.id, agg.id)), kind)
        raise SemanticError(f"unknown filter {k}", f.span)

    # -- checks -----------------------------------------------------------------

    def _positive(self, r: A.Limit | A.RankLimit) -> None:
        if r.n < 1:
            raise SemanticError("restriction must be at least 1", r.span)

    def _rank_n(self, rank: A.RankLimit | None) -> int:
        if rank is None:
            return 1
        self._positive(rank)
        return rank.n

    def _check_metric_value(self, metric: str, value, f: A.FilterLeaf) -> None:
        if metric == "core_rank":
            if not isinstance(value, str) or value not in ("A*", "A", "B", "C"):
                raise SemanticError(
                    'CORERANK METRIC compares against a rank string ("A*", "A", "B" or "C")',
                    f.span,
                )
        else:  # h_avg
            if not isinstance(value, int):
                raise SemanticError("H-AVG METRIC compares against a number", f.span)

    _LENGTH_ATTRS = {
        "publication": ("title", "abstract"),
        "person": ("name",),
        "conference": ("name", "acronym"),
        "journal": ("name", "acronym"),
        "institution": ("name", "location"),
    }

    def _check_length_attr(self, kind: str, attr: str, f: A.FilterLeaf) -> None:
        if attr not in self._LENGTH_ATTRS.get(kind, ()):
            raise SemanticError(f"{kind}s have no {attr} to measure", f.span)
