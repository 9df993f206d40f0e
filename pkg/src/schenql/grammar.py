"""The query grammar: one shared Grammar object with AST-building actions.

Rule names follow the concept families: c_/j_/k_/pu_/pe_/i_ prefixes for
conference, journal, keyword, publication, person and institution rules,
f_query for the general functions. Each filter family has an atom rule and
a chain rule that folds operator tails left-associatively; a missing
operator between two filter atoms means AND.

Terminal categories drive suggestion colours: base_concept, filter,
literal_placeholder, restriction, operator, function. Specialisation words
(BOOK, AUTHOR, ...) parse everywhere their base concept does but carry
suggestible=False so the suggester leaves them out.
"""

from __future__ import annotations

from . import ast as A
from .ast import span_of
from .engine import Alt, Eps, Grammar, Map, Rule, Seq, Term
from .lexer import KEYWORD, NUMBER, STRING

CAT_BASE = "base_concept"
CAT_FILTER = "filter"
CAT_LIT = "literal_placeholder"
CAT_RESTR = "restriction"
CAT_OP = "operator"
CAT_FUNC = "function"

CATEGORY_ORDER = (CAT_BASE, CAT_FILTER, CAT_LIT, CAT_RESTR, CAT_OP, CAT_FUNC)

# Words that are only ever the head of a two-word unit (AT LEAST, MORE THAN,
# LESS THAN): never offered alone, folded into compounds by the suggester.
COMPOUND_HEADS = {
    "AT": ("AT LEAST", "AT MOST"),
    "MORE": ("MORE THAN",),
    "LESS": ("LESS THAN",),
}
# AND/OR are valid alone and as AND NOT / OR NOT.
EXTENDABLE_OPS = {"AND": "AND NOT", "OR": "OR NOT"}


def kw(word: str, category: str = CAT_FILTER, suggestible: bool = True) -> Term:
    return Term(KEYWORD, word, category=category, suggestible=suggestible)


def string(slot: str) -> Term:
    return Term(STRING, slot=slot, category=CAT_LIT)


def number(slot: str, category: str = CAT_LIT) -> Term:
    return Term(NUMBER, slot=slot, category=category)


def lparen() -> Term:
    return Term("lparen", category=CAT_OP)


def rparen() -> Term:
    return Term("rparen", category=CAT_OP)


def lbracket() -> Term:
    return Term("lbracket", category=CAT_OP)


def rbracket() -> Term:
    return Term("rbracket", category=CAT_OP)


def comma() -> Term:
    return Term("comma", category=CAT_OP)


def tilde_op() -> Term:
    return Term("tilde", category=CAT_OP)


def equals_op() -> Term:
    return Term("equals", category=CAT_OP)


def opt(node, w: float = 0.4):
    return Alt([node, Eps(None)], gweights=[w, 1.0 - w])


def _build_grammar() -> Grammar:
    g = Grammar("query")

    # -- restrictions -------------------------------------------------------

    g.rule("limit", Map(number("limit", CAT_RESTR), lambda t: A.Limit(int(t.lexeme), t.span)))
    g.rule(
        "rank",
        Seq(
            [Term("tilde", category=CAT_RESTR), number("rank", CAT_RESTR)],
            build=lambda v: A.RankLimit(int(v[1].lexeme), span_of(v[0], v[1])),
        ),
    )
    # Anchor restriction: a rank here is accepted by the parser and rejected
    # during analysis, which gives a better message than a syntax error.
    g.rule(
        "restriction",
        Alt([Rule("limit"), Rule("rank"), Eps(None)], gweights=[0.15, 0.05, 0.8]),
    )

    def opt_limit():
        return Alt([Rule("limit"), Eps(None)], gweights=[0.2, 0.8])

    def opt_rank():
        return Alt([Rule("rank"), Eps(None)], gweights=[0.25, 0.75])

    # -- shared small rules ---------------------------------------------------

    g.rule(
        "comp",
        Alt(
            [
                Seq([kw("AT", CAT_OP), kw("LEAST", CAT_OP)], build=lambda v: "at_least"),
                Seq([kw("AT", CAT_OP), kw("MOST", CAT_OP)], build=lambda v: "at_most"),
                Seq([kw("MORE", CAT_OP), kw("THAN", CAT_OP)], build=lambda v: "more_than"),
                Seq([kw("LESS", CAT_OP), kw("THAN", CAT_OP)], build=lambda v: "less_than"),
                Eps("eq"),
            ],
            gweights=[1, 1, 1, 1, 2],
        ),
    )
    g.rule(
        "metric",
        Alt(
            [
                Seq([kw("CORERANK"), kw("METRIC")], build=lambda v: ("core_rank", v[0])),
                Seq([kw("H-AVG"), kw("METRIC")], build=lambda v: ("h_avg", v[0])),
            ]
        ),
    )
    g.rule(
        "metric_value",
        Alt(
            [
                Map(number("metric_num"), lambda t: int(t.lexeme)),
                Map(string("rank_value"), lambda t: t.lexeme),
            ]
        ),
    )
    g.rule(
        "ops",
        Alt(
            [
                Seq([kw("AND", CAT_OP), kw("NOT", CAT_OP)], build=lambda v: "and_not"),
                Seq([kw("OR", CAT_OP), kw("NOT", CAT_OP)], build=lambda v: "or_not"),
                Map(kw("AND", CAT_OP), lambda t: "and"),
                Map(kw("OR", CAT_OP), lambda t: "or"),
                Eps("and"),
            ],
            gweights=[1, 1, 2, 2, 3],
        ),
    )

    # -- literals -------------------------------------------------------------

    def str_lit(default_kinds, slot, fuzzy_kinds=None, exact_kinds=None):
        branches = []
        if fuzzy_kinds:
            fk = frozenset(fuzzy_kinds)
            branches.append(
                Seq(
                    [tilde_op(), string(slot)],
                    build=lambda v, fk=fk: A.StrLit(fk, v[1].lexeme, A.MODE_FUZZY, span_of(v[0], v[1])),
                )
            )
        if exact_kinds:
            ek = frozenset(exact_kinds)
            branches.append(
                Seq(
                    [equals_op(), string(slot)],
                    build=lambda v, ek=ek: A.StrLit(ek, v[1].lexeme, A.MODE_EXACT, span_of(v[0], v[1])),
                )
            )
        dk = frozenset(default_kinds)
        branches.append(
            Map(string(slot), lambda t, dk=dk: A.StrLit(dk, t.lexeme, A.MODE_DEFAULT, t.span))
        )
        if len(branches) == 1:
            return branches[0]
        return Alt(branches, gweights=[1.0] * (len(branches) - 1) + [2.0])

    g.rule("lit_venue", str_lit({"conference", "journal"}, "venue"))
    g.rule("lit_publication", str_lit({"publication"}, "title", fuzzy_kinds={"publication"}))
    g.rule(
        "lit_person",
        str_lit({"person"}, "name", fuzzy_kinds={"person"}, exact_kinds={"person"}),
    )
    g.rule("lit_institution", str_lit({"institution"}, "name", fuzzy_kinds={"institution"}))
    g.rule(
        "lit_entity4",
        str_lit(
            {"conference", "journal", "publication", "person"},
            "literal",
            fuzzy_kinds={"publication", "person"},
            exact_kinds={"person"},
        ),
    )
    g.rule(
        "lit_names4",
        str_lit(
            {"conference", "journal", "institution", "person"},
            "literal",
            fuzzy_kinds={"institution", "person"},
            exact_kinds={"person"},
        ),
    )
    g.rule(
        "lit_core_scope",
        str_lit(
            {"conference", "journal", "publication"},
            "literal",
            fuzzy_kinds={"publication"},
        ),
    )

    kw_kinds = frozenset({"keyword"})
    g.rule(
        "lit_keyword",
        Alt(
            [
                Map(string("keyword"), lambda t: A.StrLit(kw_kinds, t.lexeme, A.MODE_DEFAULT, t.span)),
                Seq(
                    [lbracket(), g.rep1sep(string("keyword"), comma()), rbracket()],
                    build=lambda v: A.StrListLit(
                        kw_kinds, tuple(t.lexeme for t in v[1]), span_of(v[0], v[2])
                    ),
                ),
            ],
            gweights=[3, 1],
        ),
    )

    # -- argument positions ----------------------------------------------------

    def paren(rule_name: str):
        return Seq([lparen(), Rule(rule_name), rparen()], build=lambda v: v[1])

    g.rule("venue_arg", Alt([paren("c_query"), paren("j_query"), Rule("lit_venue")], gweights=[1, 1, 3]))
    g.rule("pu_arg", Alt([paren("pu_query"), Rule("lit_publication")], gweights=[1, 2]))
    g.rule("pe_arg", Alt([paren("pe_query"), Rule("lit_person")], gweights=[1, 2]))
    g.rule("i_arg", Alt([paren("i_query"), Rule("lit_institution")], gweights=[1, 2]))
    g.rule("k_arg", Alt([paren("k_query"), Rule("lit_keyword")], gweights=[1, 3]))
    g.rule(
        "k_arg_marked",
        Seq(
            [Alt([kw("KEYWORD"), kw("KEYWORDS"), Eps(None)], gweights=[2, 1, 2]), Rule("k_arg")],
            build=lambda v: v[1],
        ),
    )
    g.rule(
        "kf_arg",
        Alt(
            [paren("c_query"), paren("j_query"), paren("pu_query"), paren("pe_query"), Rule("lit_entity4")],
            gweights=[1, 1, 1, 1, 3],
        ),
    )
    g.rule(
        "mfk_arg",
        Alt(
            [
                paren("c_query"),
                paren("j_query"),
                paren("pu_query"),
                paren("pe_query"),
                paren("k_query"),
                Rule("lit_entity4"),
            ],
            gweights=[1, 1, 1, 1, 1, 3],
        ),
    )
    g.rule(
        "anf_arg",
        Alt(
            [paren("c_query"), paren("j_query"), paren("i_query"), paren("pe_query"), Rule("lit_names4")],
            gweights=[1, 1, 1, 1, 3],
        ),
    )
    g.rule(
        "core_scope_arg",
        Alt([paren("c_query"), paren("j_query"), paren("pu_query"), Rule("lit_core_scope")], gweights=[1, 1, 1, 3]),
    )

    # -- attribute words -------------------------------------------------------

    def attr_alt(names: list[str], category: str) -> Alt:
        branches = []
        for name in names:
            word = "DBLPKEY" if name == "dblp_key" else name.upper()
            for lexeme in (word, word + "S"):
                branches.append(
                    Map(kw(lexeme, category), lambda t, name=name: (name, t))
                )
        return Alt(branches)

    g.rule("cj_len_attr", attr_alt(["name", "acronym"], CAT_FILTER))
    g.rule("pu_len_attr", attr_alt(["title", "abstract"], CAT_FILTER))
    g.rule("pe_len_attr", attr_alt(["name"], CAT_FILTER))
    g.rule("i_len_attr", attr_alt(["name", "location"], CAT_FILTER))
    g.rule(
        "attr_any",
        attr_alt(
            [
                "title",
                "abstract",
                "year",
                "doi",
                "isbn",
                "dblp_key",
                "volume",
                "name",
                "orcid",
                "acronym",
                "city",
                "country",
            ],
            CAT_FUNC,
        ),
    )

    # -- filter leaf builders ----------------------------------------------------

    def with_key(word: str, kind: str, slot: str):
        return Seq(
            [kw("WITH"), kw(word), string(slot)],
            build=lambda v: A.FilterLeaf(kind, (v[2].lexeme,), span_of(v[0], v[2])),
        )

    def name_lit(slot: str, kinds, exact: bool):
        return str_lit(kinds, slot, fuzzy_kinds=kinds, exact_kinds=kinds if exact else None)

    def named_filter(kinds, exact: bool):
        return Seq(
            [kw("NAMED"), name_lit("name", kinds, exact)],
            build=lambda v: A.FilterLeaf("named", (v[1],), span_of(*v)),
        )

    def about_filter():
        return Alt(
            [
                Seq(
                    [kw("ABOUT"), kw("TERMS"), string("terms")],
                    build=lambda v: A.FilterLeaf("about_terms", (v[2].lexeme,), span_of(v[0], v[2])),
                ),
                Seq(
                    [kw("ABOUT"), Rule("k_arg_marked")],
                    build=lambda v: A.FilterLeaf("about_keyword", (v[1],), span_of(*v)),
                ),
            ],
            gweights=[1, 3],
        )

    def year_filter():
        return Seq(
            [kw("WITH"), kw("YEAR"), Rule("comp"), number("year")],
            build=lambda v: A.FilterLeaf("year_cmp", (v[2], int(v[3].lexeme)), span_of(v[0], v[3])),
        )

    def arg_filter(words: list[str], kind: str, arg_rule: str):
        terms = [kw(w) for w in words]
        return Seq(
            terms + [Rule(arg_rule)],
            build=lambda v: A.FilterLeaf(kind, (v[-1],), span_of(*v)),
        )

    def metric_cmp_filter():
        return Seq(
            [kw("WITH"), Rule("metric"), Rule("comp"), Rule("metric_value")],
            build=lambda v: A.FilterLeaf("metric_cmp", (v[1][0], v[2], v[3]), span_of(v[0], v[1][1])),
        )

    def agg_metric_filter():
        return Seq(
            [kw("WITH"), opt_rank(), Alt([kw("HIGHEST"), kw("LOWEST")]), Rule("metric")],
            build=lambda v: A.FilterLeaf(
                "agg_metric", (v[3][0], v[2].lexeme.lower(), v[1]), span_of(v[0], v[3][1])
            ),
        )

    def agg_length_filter(attr_rule: str):
        return Seq(
            [kw("WITH"), opt_rank(), Alt([kw("LONGEST"), kw("SHORTEST")]), Rule(attr_rule)],
            build=lambda v: A.FilterLeaf(
                "agg_length", (v[3][0], v[2].lexeme.lower(), v[1]), span_of(v[0], v[3][1])
            ),
        )

    def length_cmp_filter(attr_rule: str):
        return Seq(
            [kw("WITH"), Rule(attr_rule), kw("LENGTH"), Rule("comp"), number("length")],
            build=lambda v: A.FilterLeaf(
                "length_cmp", (v[1][0], v[3], int(v[4].lexeme)), span_of(v[0], v[4])
            ),
        )

    # Count dimensions for publications/persons: REFERENCES (TO x)? and
    # CITATIONS (FROM x)?; persons additionally COAUTHORS (IN x)?.
    def count_dim(with_coauthors: bool):
        branches = [
            Seq(
                [kw("REFERENCES"), opt(Seq([kw("TO"), Rule("pu_arg")], build=lambda v: v[1]))],
                build=lambda v: ("references", v[1], v[0]),
            ),
            Seq(
                [kw("CITATIONS"), opt(Seq([kw("FROM"), Rule("pu_arg")], build=lambda v: v[1]))],
                build=lambda v: ("citations", v[1], v[0]),
            ),
        ]
        if with_coauthors:
            branches.append(
                Seq(
                    [kw("COAUTHORS"), opt(Seq([kw("IN"), Rule("pu_arg")], build=lambda v: v[1]))],
                    build=lambda v: ("coauthors", v[1], v[0]),
                )
            )
        return Alt(branches)

    def agg_count_filter(with_coauthors: bool):
        return Seq(
            [kw("WITH"), opt_rank(), Alt([kw("MOST"), kw("LEAST")]), count_dim(with_coauthors)],
            build=lambda v: A.FilterLeaf(
                "agg_count", (v[3][0], v[2].lexeme.lower(), v[3][1], v[1]), span_of(v[0], v[3][2])
            ),
        )

    def count_cmp_filter(dim_node):
        return Seq(
            [kw("WITH"), Rule("comp"), number("count"), dim_node],
            build=lambda v: A.FilterLeaf(
                "count_cmp", (v[3][0], v[1], int(v[2].lexeme), v[3][1]), span_of(v[0], v[3][2])
            ),
        )

    # -- conference / journal filters ---------------------------------------------

    def cj_atoms(concept: str, with_volume: bool):
        kinds = frozenset({concept})
        atoms = [
            with_key("DBLPKEY", "key_is", "key"),
            named_filter(kinds, exact=False),
            about_filter(),
            with_key("ACRONYM", "acronym_is", "acronym"),
            year_filter(),
            arg_filter(["OF"], "hosts", "pu_arg"),
            agg_metric_filter(),
            agg_length_filter("cj_len_attr"),
            metric_cmp_filter(),
            length_cmp_filter("cj_len_attr"),
        ]
        if with_volume:
            atoms.insert(4, with_key("VOLUME", "volume_is", "volume"))
        return Alt(atoms)

    g.rule("c_atom", cj_atoms("conference", with_volume=False))
    g.rule("j_atom", cj_atoms("journal", with_volume=True))

    # -- publication filters ---------------------------------------------------

    pu_agg_head = Alt(
        [
            Seq([kw("MOST"), kw("CITED")], build=lambda v: ("most_cited", v[0])),
            Map(kw("NEWEST"), lambda t: ("newest", t)),
            Map(kw("OLDEST"), lambda t: ("oldest", t)),
        ]
    )

    def pu_a_build(v):
        rank, (kind, head_tok), arg = v
        agg = A.AggregationQuery(kind, (arg,), rank, None, span_of(rank, head_tok, arg))
        return A.FilterLeaf("in_aggregation", (agg,), agg.span)

    g.rule(
        "pu_atom",
        Alt(
            [
                Seq([opt_rank(), pu_agg_head, Rule("pu_arg")], build=pu_a_build),
                with_key("DBLPKEY", "key_is", "key"),
                with_key("DOI", "doi_is", "doi"),
                with_key("ISBN", "isbn_is", "isbn"),
                Seq(
                    [kw("TITLED"), str_lit({"publication"}, "title", fuzzy_kinds={"publication"})],
                    build=lambda v: A.FilterLeaf("titled", (v[1],), span_of(*v)),
                ),
                about_filter(),
                year_filter(),
                arg_filter(["APPEARED", "IN"], "appeared_in", "venue_arg"),
                arg_filter(["CITED", "BY"], "cited_by", "pu_arg"),
                arg_filter(["REFERENCES"], "references", "pu_arg"),
                Seq(
                    [
                        kw("WRITTEN"),
                        kw("BY"),
                        kw("ANY"),
                        opt(Map(kw("DISTINCT"), lambda t: True)),
                        number("n"),
                        kw("OF"),
                        lbracket(),
                        g.rep1sep(Rule("pe_arg"), comma()),
                        rbracket(),
                    ],
                    build=lambda v: A.FilterLeaf(
                        "written_by_any",
                        (int(v[4].lexeme), bool(v[3]), tuple(v[7])),
                        span_of(v[0], v[8]),
                    ),
                ),
                arg_filter(["WRITTEN", "BY"], "written_by", "pe_arg"),
                arg_filter(["EDITED", "BY"], "edited_by", "pe_arg"),
                arg_filter(["PUBLISHED", "WITH"], "published_with", "i_arg"),
                agg_count_filter(with_coauthors=False),
                agg_metric_filter(),
                agg_length_filter("pu_len_attr"),
                metric_cmp_filter(),
                length_cmp_filter("pu_len_attr"),
                count_cmp_filter(count_dim(with_coauthors=False)),
            ]
        ),
    )

    # -- person filters -----------------------------------------------------------

    def pe_a_build_coauthors(v):
        agg = A.AggregationQuery("coauthors_of", (v[2],), None, None, span_of(v[0], v[2]))
        return A.FilterLeaf("in_aggregation", (agg,), agg.span)

    def pe_a_build_most(v):
        rank, most_tok, (kind, args, last) = v
        agg = A.AggregationQuery(kind, args, rank, None, span_of(rank, most_tok, last))
        return A.FilterLeaf("in_aggregation", (agg,), agg.span)

    pe_most_tail = Alt(
        [
            Seq(
                [kw("PUBLISHING"), Rule("pe_arg"), kw("IN"), Rule("venue_arg")],
                build=lambda v: ("most_publishing_in", (v[1], v[3]), v[3]),
            ),
            Seq(
                [kw("RESEARCHING"), Rule("pe_arg"), kw("ABOUT"), Rule("k_arg_marked")],
                build=lambda v: ("most_researching_about", (v[1], v[3]), v[3]),
            ),
        ]
    )

    g.rule(
        "pe_atom",
        Alt(
            [
                Seq([kw("COAUTHORS"), kw("OF"), Rule("pe_arg")], build=pe_a_build_coauthors),
                Seq([opt_rank(), kw("MOST"), pe_most_tail], build=pe_a_build_most),
                with_key("DBLPKEY", "key_is", "key"),
                named_filter(frozenset({"person"}), exact=True),
                with_key("ORCID", "orcid_is", "orcid"),
                Seq(
                    [
                        kw("AUTHORED"),
                        Alt(
                            [
                                Map(kw("ONLY"), lambda t: "only"),
                                Map(kw("NO"), lambda t: "no"),
                                Eps("any"),
                            ],
                            gweights=[1, 1, 4],
                        ),
                        Rule("pu_arg"),
                    ],
                    build=lambda v: A.FilterLeaf("authored", (v[2], v[1]), span_of(v[0], v[2])),
                ),
                arg_filter(["EDITED"], "edited", "pu_arg"),
                arg_filter(["CITED", "BY"], "cited_by", "pu_arg"),
                arg_filter(["REFERENCES"], "references", "pu_arg"),
                arg_filter(["WORKS", "FOR"], "works_for", "i_arg"),
                arg_filter(["PUBLISHED", "IN"], "published_in", "venue_arg"),
                agg_count_filter(with_coauthors=True),
                agg_metric_filter(),
                agg_length_filter("pe_len_attr"),
                metric_cmp_filter(),
                length_cmp_filter("pe_len_attr"),
                count_cmp_filter(
                    Seq(
                        [kw("COAUTHORS"), opt(Seq([kw("IN"), Rule("pu_arg")], build=lambda v: v[1]))],
                        build=lambda v: ("coauthors", v[1], v[0]),
                    )
                ),
            ]
        ),
    )

    # -- institution filters ---------------------------------------------------------

    g.rule(
        "i_atom",
        Alt(
            [
                with_key("DBLPKEY", "key_is", "key"),
                named_filter(frozenset({"institution"}), exact=False),
                with_key("CITY", "city_is", "city"),
                with_key("COUNTRY", "country_is", "country"),
                Seq(
                    [kw("WITH"), kw("MEMBERS"), Rule("pe_arg")],
                    build=lambda v: A.FilterLeaf("with_members", (v[2],), span_of(v[0], v[2])),
                ),
                agg_metric_filter(),
                agg_length_filter("i_len_attr"),
                metric_cmp_filter(),
                length_cmp_filter("i_len_attr"),
            ]
        ),
    )

    # -- filter chains ------------------------------------------------------------

    def chain(name: str, atom_rule: str):
        tail = g.rep0(Seq([Rule("ops"), Rule(atom_rule)], build=lambda v: (v[0], v[1])))

        def build(v):
            f = v[0]
            for op, atom in v[1]:
                f = A.FilterBinary(op, f, atom, span_of(f, atom))
            return f

        g.rule(name, Seq([Rule(atom_rule), tail], build=build))

    chain("c_filter", "c_atom")
    chain("j_filter", "j_atom")
    chain("pu_filter", "pu_atom")
    chain("pe_filter", "pe_atom")
    chain("i_filter", "i_atom")
    g.rule(
        "k_filter",
        Seq(
            [kw("OF"), Rule("kf_arg")],
            build=lambda v: A.FilterLeaf("keywords_of", (v[1],), span_of(*v)),
        ),
    )

    # -- concept words -----------------------------------------------------------

    def word_alt(pairs: list[tuple[str, str | None]]) -> Alt:
        branches = []
        for word, spec in pairs:
            suggestible = spec is None
            for lexeme in (word, word + "S"):
                branches.append(
                    Map(
                        kw(lexeme, CAT_BASE, suggestible=suggestible),
                        lambda t, spec=spec: (spec, t),
                    )
                )
        return Alt(branches)

    g.rule("c_word", word_alt([("CONFERENCE", None)]))
    g.rule("j_word", word_alt([("JOURNAL", None)]))
    g.rule("k_word", word_alt([("KEYWORD", None)]))
    g.rule("i_word", word_alt([("INSTITUTION", None)]))
    g.rule(
        "pu_word",
        word_alt(
            [
                ("PUBLICATION", None),
                ("BOOK", "book"),
                ("ARTICLE", "article"),
                ("PHDTHESIS", "phdthesis"),
                ("MASTERTHESIS", "masterthesis"),
                ("INPROCEEDING", "inproceeding"),
                ("INCOLLECTION", "incollection"),
                ("PROCEEDING", "proceeding"),
            ]
        ),
    )
    g.rule("pe_word", word_alt([("PERSON", None), ("AUTHOR", "author"), ("EDITOR", "editor")]))

    # -- anchors -----------------------------------------------------------------

    def entity_build(concept: str):
        def b(v):
            restriction, (spec, tok), filt = v
            return A.EntityQuery(concept, spec, restriction, filt, span_of(restriction, tok, filt))

        return b

    def entity_anchor(word_rule: str, filter_rule: str | None, concept: str):
        filt = (
            Alt([Rule(filter_rule), Eps(None)], gweights=[0.75, 0.25])
            if filter_rule
            else Eps(None)
        )
        return Seq([Rule("restriction"), Rule(word_rule), filt], build=entity_build(concept))

    g.rule("c_query", entity_anchor("c_word", "c_filter", "conference"))
    g.rule("j_query", entity_anchor("j_word", "j_filter", "journal"))

    def related_build(v):
        karg, scope = v[3]
        return A.AggregationQuery(
            "related_keywords_to", (karg, scope), None, None, span_of(v[0], karg, scope)
        )

    def mfk_build(v):
        return A.AggregationQuery(
            "most_frequent_keywords_of", (v[5],), v[0], None, span_of(v[0], v[1], v[5])
        )

    g.rule(
        "k_query",
        Alt(
            [
                Seq(
                    [
                        Rule("restriction"),
                        Rule("k_word"),
                        Alt([Rule("k_filter"), Eps(None)], gweights=[0.6, 0.4]),
                    ],
                    build=entity_build("keyword"),
                ),
                Seq(
                    [
                        kw("RELATED", CAT_FUNC),
                        kw("KEYWORDS", CAT_FUNC),
                        kw("TO", CAT_FUNC),
                        Alt(
                            [
                                Seq(
                                    [
                                        paren("k_query"),
                                        opt(Seq([kw("IN", CAT_FUNC), Rule("pu_arg")], build=lambda v: v[1])),
                                    ],
                                    build=lambda v: (v[0], v[1]),
                                ),
                                Map(Rule("lit_keyword"), lambda lit: (lit, None)),
                            ],
                            gweights=[1, 2],
                        ),
                    ],
                    build=related_build,
                ),
                Seq(
                    [
                        opt_rank(),
                        kw("MOST", CAT_FUNC),
                        kw("FREQUENT", CAT_FUNC),
                        kw("KEYWORDS", CAT_FUNC),
                        kw("OF", CAT_FUNC),
                        Rule("mfk_arg"),
                    ],
                    build=mfk_build,
                ),
            ],
            gweights=[2, 1, 1],
        ),
    )

    pu_anchor_head = Alt(
        [
            Seq([kw("MOST", CAT_FUNC), kw("CITED", CAT_FUNC)], build=lambda v: ("most_cited", v[0])),
            Map(kw("NEWEST", CAT_FUNC), lambda t: ("newest", t)),
            Map(kw("OLDEST", CAT_FUNC), lambda t: ("oldest", t)),
        ]
    )

    def pu_agg_build(v):
        lim, rank, (kind, tok), arg = v
        return A.AggregationQuery(kind, (arg,), rank, lim, span_of(lim, rank, tok, arg))

    g.rule(
        "pu_query",
        Alt(
            [
                entity_anchor("pu_word", "pu_filter", "publication"),
                Seq([opt_limit(), opt_rank(), pu_anchor_head, Rule("pu_arg")], build=pu_agg_build),
            ],
            gweights=[3, 1],
        ),
    )

    def coauthors_build(v):
        return A.AggregationQuery("coauthors_of", (v[3],), None, v[0], span_of(v[0], v[1], v[3]))

    def pe_agg_build(v):
        lim, rank, most_tok, (kind, args, last) = v
        return A.AggregationQuery(kind, args, rank, lim, span_of(lim, rank, most_tok, last))

    pe_anchor_tail = Alt(
        [
            Seq(
                [kw("PUBLISHING", CAT_FUNC), Rule("pe_arg"), kw("IN", CAT_FUNC), Rule("venue_arg")],
                build=lambda v: ("most_publishing_in", (v[1], v[3]), v[3]),
            ),
            Seq(
                [kw("RESEARCHING", CAT_FUNC), Rule("pe_arg"), kw("ABOUT", CAT_FUNC), Rule("k_arg_marked")],
                build=lambda v: ("most_researching_about", (v[1], v[3]), v[3]),
            ),
        ]
    )

    g.rule(
        "pe_query",
        Alt(
            [
                entity_anchor("pe_word", "pe_filter", "person"),
                Seq(
                    [opt_limit(), kw("COAUTHORS", CAT_FUNC), kw("OF", CAT_FUNC), Rule("pe_arg")],
                    build=coauthors_build,
                ),
                Seq([opt_limit(), opt_rank(), kw("MOST", CAT_FUNC), pe_anchor_tail], build=pe_agg_build),
            ],
            gweights=[3, 1, 1],
        ),
    )

    def i_agg_build(v):
        lim, rank, most_tok, _res, iq, _about, karg = v
        return A.AggregationQuery(
            "most_researching_institution", (iq, karg), rank, lim, span_of(lim, rank, most_tok, karg)
        )

    g.rule(
        "i_query",
        Alt(
            [
                entity_anchor("i_word", "i_filter", "institution"),
                Seq(
                    [
                        opt_limit(),
                        opt_rank(),
                        kw("MOST", CAT_FUNC),
                        kw("RESEARCHING", CAT_FUNC),
                        paren("i_query"),
                        kw("ABOUT", CAT_FUNC),
                        Rule("k_arg_marked"),
                    ],
                    build=i_agg_build,
                ),
            ],
            gweights=[3, 1],
        ),
    )

    # -- general functions ----------------------------------------------------------

    def count_build(v):
        return A.FunctionQuery("count", (v[2],), None, span_of(v[0], v[3]))

    def core_build(v):
        return A.FunctionQuery("core_ranks_for", (v[3], v[4]), None, span_of(v[0], v[3], v[4]))

    def anf_build(v):
        return A.FunctionQuery("alternative_names_for", (v[4],), v[0], span_of(v[0], v[1], v[4]))

    def mfa_build(v):
        return A.FunctionQuery(
            "most_frequent_attribute_of", (v[3][0], v[6]), v[0], span_of(v[0], v[1], v[7])
        )

    def attrs_build(v):
        attrs = tuple(name for name, _tok in v[2])
        return A.FunctionQuery("attributes_of", (attrs, v[6]), v[0], span_of(v[0], v[1], v[7]))

    g.rule(
        "f_query",
        Alt(
            [
                Seq([kw("COUNT", CAT_FUNC), lparen(), Rule("query"), rparen()], build=count_build),
                Seq(
                    [
                        kw("CORE", CAT_FUNC),
                        kw("RANKS", CAT_FUNC),
                        kw("FOR", CAT_FUNC),
                        Rule("pe_arg"),
                        opt(Seq([kw("IN", CAT_FUNC), Rule("core_scope_arg")], build=lambda v: v[1])),
                    ],
                    build=core_build,
                ),
                Seq(
                    [
                        opt_limit(),
                        kw("ALTERNATIVE", CAT_FUNC),
                        kw("NAMES", CAT_FUNC),
                        kw("FOR", CAT_FUNC),
                        Rule("anf_arg"),
                    ],
                    build=anf_build,
                ),
                Seq(
                    [
                        opt_limit(),
                        kw("MOST", CAT_FUNC),
                        kw("FREQUENT", CAT_FUNC),
                        Rule("attr_any"),
                        kw("OF", CAT_FUNC),
                        lparen(),
                        Rule("query"),
                        rparen(),
                    ],
                    build=mfa_build,
                ),
                Seq(
                    [
                        opt_limit(),
                        lbracket(),
                        g.rep1sep(Rule("attr_any"), comma()),
                        rbracket(),
                        kw("OF", CAT_FUNC),
                        lparen(),
                        Rule("query"),
                        rparen(),
                    ],
                    build=attrs_build,
                ),
            ],
            gweights=[2, 1, 1, 1, 1],
        ),
    )

    # -- query start -------------------------------------------------------------

    g.rule(
        "query",
        Alt(
            [
                Rule("c_query"),
                Rule("j_query"),
                Rule("k_query"),
                Rule("pu_query"),
                Rule("pe_query"),
                Rule("i_query"),
                Rule("f_query"),
            ],
            gweights=[1, 1, 1.5, 3, 3, 1, 2],
        ),
    )

    g.depth_rules = {"c_query", "j_query", "k_query", "pu_query", "pe_query", "i_query", "f_query"}
    g.tag_alternatives()
    return g


GRAMMAR = _build_grammar()
