"""Syntax tree for bibliographic queries, plus the canonical renderer.

All nodes are frozen dataclasses; structural equality ignores source spans.
The renderer produces the canonical surface form (plural concept words,
explicit AND, keyword marker spelled out) and parsing its output yields a
structurally identical tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import Span

# String-literal match modes.
MODE_DEFAULT = "default"
MODE_FUZZY = "fuzzy"
MODE_EXACT = "exact"

CONCEPTS = ("conference", "journal", "keyword", "publication", "person", "institution")

PUBLICATION_TYPES = (
    "book",
    "article",
    "phdthesis",
    "masterthesis",
    "inproceeding",
    "incollection",
    "proceeding",
)
PERSON_ROLES = ("author", "editor")

COMPARATORS = ("eq", "at_least", "at_most", "more_than", "less_than")

_NO_SPAN: Span = (0, 0)


@dataclass(frozen=True)
class Limit:
    n: int
    span: Span = field(compare=False, default=_NO_SPAN)


@dataclass(frozen=True)
class RankLimit:
    n: int
    span: Span = field(compare=False, default=_NO_SPAN)


Restriction = Union[Limit, RankLimit]


@dataclass(frozen=True)
class StrLit:
    """A quoted literal naming one or more entities.

    `kinds` lists the entity kinds the grammar position admits; resolution
    tries each. `mode` is the match mode selected by a ~ or = prefix.
    """

    kinds: frozenset[str]
    text: str
    mode: str = MODE_DEFAULT
    span: Span = field(compare=False, default=_NO_SPAN)


@dataclass(frozen=True)
class StrListLit:
    """A bracketed list of quoted literals; matches the union of its items."""

    kinds: frozenset[str]
    texts: tuple[str, ...]
    span: Span = field(compare=False, default=_NO_SPAN)


@dataclass(frozen=True)
class FilterLeaf:
    kind: str
    args: tuple = ()
    span: Span = field(compare=False, default=_NO_SPAN)


@dataclass(frozen=True)
class FilterBinary:
    op: str  # and | or | and_not | or_not
    lhs: "FilterExpr"
    rhs: "FilterExpr"
    span: Span = field(compare=False, default=_NO_SPAN)


FilterExpr = Union[FilterLeaf, FilterBinary]


@dataclass(frozen=True)
class EntityQuery:
    concept: str
    specialisation: str | None = None
    restriction: Restriction | None = None
    filter: FilterExpr | None = None
    span: Span = field(compare=False, default=_NO_SPAN)


@dataclass(frozen=True)
class AggregationQuery:
    kind: str
    args: tuple = ()
    rank: RankLimit | None = None
    limit: Limit | None = None
    span: Span = field(compare=False, default=_NO_SPAN)


@dataclass(frozen=True)
class FunctionQuery:
    kind: str
    args: tuple = ()
    limit: Limit | None = None
    span: Span = field(compare=False, default=_NO_SPAN)


Query = Union[EntityQuery, AggregationQuery, FunctionQuery]

Argument = Union[Query, StrLit, StrListLit]


def span_of(*parts) -> Span:
    """Merge the spans of tokens and nodes, skipping None and plain values."""
    start = None
    end = None
    for p in parts:
        s = getattr(p, "span", None)
        if s is None or s == _NO_SPAN:
            continue
        if start is None or s[0] < start:
            start = s[0]
        if end is None or s[1] > end:
            end = s[1]
    if start is None:
        return _NO_SPAN
    return (start, end)


# ---------------------------------------------------------------------------
# Canonical rendering

_NO_SPACE_AFTER = "([~="
_NO_SPACE_BEFORE = ")],"

_COMP_WORDS = {
    "at_least": "AT LEAST",
    "at_most": "AT MOST",
    "more_than": "MORE THAN",
    "less_than": "LESS THAN",
}

_METRIC_WORDS = {"core_rank": "CORERANK METRIC", "h_avg": "H-AVG METRIC"}

_AGG_HEAD = {"most_cited": "MOST CITED", "newest": "NEWEST", "oldest": "OLDEST"}

_COUNT_DIM = {
    "references": ("REFERENCES", "TO"),
    "citations": ("CITATIONS", "FROM"),
    "coauthors": ("COAUTHORS", "IN"),
}

_ATTR_WORDS = {"dblp_key": "DBLPKEY"}


class _Writer:
    def __init__(self) -> None:
        self.parts: list[str] = []

    def add(self, text: str) -> None:
        if self.parts and self.parts[-1][-1] not in _NO_SPACE_AFTER and text[0] not in _NO_SPACE_BEFORE:
            self.parts.append(" ")
        self.parts.append(text)

    def text(self) -> str:
        return "".join(self.parts)


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _attr_word(name: str, plural: bool = False) -> str:
    word = _ATTR_WORDS.get(name, name.upper())
    return word + "S" if plural else word


def render(query: Query) -> str:
    w = _Writer()
    _render_query(w, query)
    return w.text()


def _render_query(w: _Writer, q: Query) -> None:
    if isinstance(q, EntityQuery):
        if q.restriction is not None:
            _render_restriction(w, q.restriction)
        word = (q.specialisation or q.concept).upper().replace("_", "") + "S"
        w.add(word)
        if q.filter is not None:
            _render_filter(w, q.filter)
    elif isinstance(q, AggregationQuery):
        if q.limit is not None:
            w.add(str(q.limit.n))
        _render_aggregation(w, q)
    else:
        _render_function(w, q)


def _render_restriction(w: _Writer, r: Restriction) -> None:
    if isinstance(r, RankLimit):
        w.add("~")
        w.add(str(r.n))
    else:
        w.add(str(r.n))


def _render_aggregation(w: _Writer, q: AggregationQuery) -> None:
    k = q.kind
    if k in _AGG_HEAD:
        if q.rank is not None:
            _render_restriction(w, q.rank)
        w.add(_AGG_HEAD[k])
        _render_arg(w, q.args[0])
    elif k == "coauthors_of":
        w.add("COAUTHORS OF")
        _render_arg(w, q.args[0])
    elif k == "most_publishing_in":
        if q.rank is not None:
            _render_restriction(w, q.rank)
        w.add("MOST PUBLISHING")
        _render_arg(w, q.args[0])
        w.add("IN")
        _render_arg(w, q.args[1])
    elif k in ("most_researching_about", "most_researching_institution"):
        if q.rank is not None:
            _render_restriction(w, q.rank)
        w.add("MOST RESEARCHING")
        _render_arg(w, q.args[0])
        w.add("ABOUT")
        _render_arg(w, q.args[1])
    elif k == "related_keywords_to":
        w.add("RELATED KEYWORDS TO")
        _render_arg(w, q.args[0])
        if q.args[1] is not None:
            w.add("IN")
            _render_arg(w, q.args[1])
    elif k == "most_frequent_keywords_of":
        if q.rank is not None:
            _render_restriction(w, q.rank)
        w.add("MOST FREQUENT KEYWORDS OF")
        _render_arg(w, q.args[0])
    else:
        raise ValueError(f"unknown aggregation kind {k}")


def _render_function(w: _Writer, q: FunctionQuery) -> None:
    k = q.kind
    if k == "count":
        w.add("COUNT")
        w.add("(")
        _render_query(w, q.args[0])
        w.add(")")
    elif k == "core_ranks_for":
        w.add("CORE RANKS FOR")
        _render_arg(w, q.args[0])
        if q.args[1] is not None:
            w.add("IN")
            _render_arg(w, q.args[1])
    elif k == "alternative_names_for":
        if q.limit is not None:
            w.add(str(q.limit.n))
        w.add("ALTERNATIVE NAMES FOR")
        _render_arg(w, q.args[0])
    elif k == "most_frequent_attribute_of":
        if q.limit is not None:
            w.add(str(q.limit.n))
        w.add("MOST FREQUENT")
        w.add(_attr_word(q.args[0]))
        w.add("OF")
        w.add("(")
        _render_query(w, q.args[1])
        w.add(")")
    elif k == "attributes_of":
        if q.limit is not None:
            w.add(str(q.limit.n))
        w.add("[")
        for i, attr in enumerate(q.args[0]):
            if i:
                w.add(",")
            w.add(_attr_word(attr, plural=True))
        w.add("]")
        w.add("OF")
        w.add("(")
        _render_query(w, q.args[1])
        w.add(")")
    else:
        raise ValueError(f"unknown function kind {k}")


def _render_arg(w: _Writer, arg: Argument) -> None:
    if isinstance(arg, StrLit):
        if arg.mode == MODE_FUZZY:
            w.add("~")
        elif arg.mode == MODE_EXACT:
            w.add("=")
        w.add(_quote(arg.text))
    elif isinstance(arg, StrListLit):
        w.add("[")
        for i, t in enumerate(arg.texts):
            if i:
                w.add(",")
            w.add(_quote(t))
        w.add("]")
    else:
        w.add("(")
        _render_query(w, arg)
        w.add(")")


def _render_comp(w: _Writer, comp: str) -> None:
    if comp != "eq":
        w.add(_COMP_WORDS[comp])


def _render_filter(w: _Writer, f: FilterExpr) -> None:
    if isinstance(f, FilterBinary):
        _render_filter(w, f.lhs)
        w.add(f.op.upper().replace("_", " "))
        _render_filter(w, f.rhs)
        return
    k = f.kind
    a = f.args
    if k == "key_is":
        w.add("WITH DBLPKEY")
        w.add(_quote(a[0]))
    elif k == "doi_is":
        w.add("WITH DOI")
        w.add(_quote(a[0]))
    elif k == "isbn_is":
        w.add("WITH ISBN")
        w.add(_quote(a[0]))
    elif k == "orcid_is":
        w.add("WITH ORCID")
        w.add(_quote(a[0]))
    elif k == "acronym_is":
        w.add("WITH ACRONYM")
        w.add(_quote(a[0]))
    elif k == "volume_is":
        w.add("WITH VOLUME")
        w.add(_quote(a[0]))
    elif k == "city_is":
        w.add("WITH CITY")
        w.add(_quote(a[0]))
    elif k == "country_is":
        w.add("WITH COUNTRY")
        w.add(_quote(a[0]))
    elif k == "named":
        w.add("NAMED")
        _render_arg(w, a[0])
    elif k == "titled":
        w.add("TITLED")
        _render_arg(w, a[0])
    elif k == "about_keyword":
        w.add("ABOUT KEYWORD")
        _render_arg(w, a[0])
    elif k == "about_terms":
        w.add("ABOUT TERMS")
        w.add(_quote(a[0]))
    elif k == "year_cmp":
        w.add("WITH YEAR")
        _render_comp(w, a[0])
        w.add(str(a[1]))
    elif k in ("hosts", "keywords_of"):
        w.add("OF")
        _render_arg(w, a[0])
    elif k == "appeared_in":
        w.add("APPEARED IN")
        _render_arg(w, a[0])
    elif k == "cited_by":
        w.add("CITED BY")
        _render_arg(w, a[0])
    elif k == "references":
        w.add("REFERENCES")
        _render_arg(w, a[0])
    elif k == "written_by":
        w.add("WRITTEN BY")
        _render_arg(w, a[0])
    elif k == "edited_by":
        w.add("EDITED BY")
        _render_arg(w, a[0])
    elif k == "written_by_any":
        w.add("WRITTEN BY ANY")
        if a[1]:
            w.add("DISTINCT")
        w.add(str(a[0]))
        w.add("OF")
        w.add("[")
        for i, item in enumerate(a[2]):
            if i:
                w.add(",")
            _render_arg(w, item)
        w.add("]")
    elif k == "published_with":
        w.add("PUBLISHED WITH")
        _render_arg(w, a[0])
    elif k == "authored":
        w.add("AUTHORED")
        if a[1] == "only":
            w.add("ONLY")
        elif a[1] == "no":
            w.add("NO")
        _render_arg(w, a[0])
    elif k == "edited":
        w.add("EDITED")
        _render_arg(w, a[0])
    elif k == "works_for":
        w.add("WORKS FOR")
        _render_arg(w, a[0])
    elif k == "published_in":
        w.add("PUBLISHED IN")
        _render_arg(w, a[0])
    elif k == "with_members":
        w.add("WITH MEMBERS")
        _render_arg(w, a[0])
    elif k == "count_cmp":
        dim, comp, n, scope = a
        w.add("WITH")
        _render_comp(w, comp)
        w.add(str(n))
        word, scope_word = _COUNT_DIM[dim]
        w.add(word)
        if scope is not None:
            w.add(scope_word)
            _render_arg(w, scope)
    elif k == "agg_count":
        dim, direction, scope, rank = a
        w.add("WITH")
        if rank is not None:
            _render_restriction(w, rank)
        w.add(direction.upper())
        word, scope_word = _COUNT_DIM[dim]
        w.add(word)
        if scope is not None:
            w.add(scope_word)
            _render_arg(w, scope)
    elif k == "metric_cmp":
        metric, comp, value = a
        w.add("WITH")
        w.add(_METRIC_WORDS[metric])
        _render_comp(w, comp)
        w.add(_quote(value) if isinstance(value, str) else str(value))
    elif k == "agg_metric":
        metric, direction, rank = a
        w.add("WITH")
        if rank is not None:
            _render_restriction(w, rank)
        w.add(direction.upper())
        w.add(_METRIC_WORDS[metric])
    elif k == "length_cmp":
        attr, comp, n = a
        w.add("WITH")
        w.add(_attr_word(attr))
        w.add("LENGTH")
        _render_comp(w, comp)
        w.add(str(n))
    elif k == "agg_length":
        attr, direction, rank = a
        w.add("WITH")
        if rank is not None:
            _render_restriction(w, rank)
        w.add(direction.upper())
        w.add(_attr_word(attr))
    elif k == "in_aggregation":
        _render_aggregation(w, a[0])
    else:
        raise ValueError(f"unknown filter kind {k}")
