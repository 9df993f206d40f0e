"""Relational backend: schema, loading, and plan-to-SQL translation.

The same plans the in-memory evaluator runs are compiled here into one
parameterized sqlite statement, one CTE per plan node (t0, t1, ...), so the
two backends are exchangeable row for row. Ordering is reconstructed at
materialization points (the final SELECT and every LIMIT): plain sets by key,
ranked sets by score in the operator's direction and then key, tables by
their documented column order.

Ranked operators use RANK() OVER, which is competition ranking, the same
rule the evaluator implements by hand. H-AVG comparisons against a number
stay exact through integer cross multiplication (sum op n * years); H-AVG
ranking divides as REAL, whose rounding cannot reorder the small integer
ratios a corpus produces (equal fractions round equal, distinct ones differ
by far more than an ulp).

Name and term matching run against candidate tables (name_candidate,
name_token, pub_token) that load_sqlite fills with the same normalization
the evaluator uses, so no LIKE approximations creep in. Emission itself
never touches a corpus: literal resolution precedence (key, then id fields,
then name) is encoded in the SQL.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analyzer import Plan, entity_kinds
from .ast import MODE_EXACT, MODE_FUZZY
from .corpus import Corpus
from .matching import parse_terms, strip_disambiguator, tokens
from .results import Result, entities_result, scalar_result, table_result

SCHEMA = [
    "CREATE TABLE publication (key TEXT PRIMARY KEY, title TEXT NOT NULL, type TEXT,"
    " year INTEGER, venue TEXT, abstract TEXT, doi TEXT, isbn TEXT, volume TEXT,"
    " doi_lc TEXT, isbn_lc TEXT)",
    "CREATE TABLE person (key TEXT PRIMARY KEY, name TEXT NOT NULL, orcid TEXT)",
    "CREATE TABLE venue (key TEXT PRIMARY KEY, name TEXT NOT NULL, type TEXT NOT NULL,"
    " acronym TEXT, acronym_lc TEXT)",
    "CREATE TABLE institution (key TEXT PRIMARY KEY, name TEXT NOT NULL, city TEXT,"
    " country TEXT, city_lc TEXT, country_lc TEXT)",
    # authors and editors may point outside the corpus, so person carries no
    # foreign key; src/dst of reference are both checked at load time
    "CREATE TABLE authorship (pub TEXT NOT NULL REFERENCES publication(key),"
    " person TEXT NOT NULL, pos INTEGER NOT NULL, PRIMARY KEY (pub, person))",
    "CREATE TABLE editorship (pub TEXT NOT NULL REFERENCES publication(key),"
    " person TEXT NOT NULL, pos INTEGER NOT NULL, PRIMARY KEY (pub, person))",
    "CREATE TABLE reference (src TEXT NOT NULL REFERENCES publication(key),"
    " dst TEXT NOT NULL REFERENCES publication(key), PRIMARY KEY (src, dst))",
    "CREATE TABLE pub_keyword (pub TEXT NOT NULL REFERENCES publication(key),"
    " keyword TEXT NOT NULL, PRIMARY KEY (pub, keyword))",
    "CREATE TABLE affiliation (person TEXT NOT NULL REFERENCES person(key),"
    " institution TEXT NOT NULL, PRIMARY KEY (person, institution))",
    "CREATE TABLE alias (kind TEXT NOT NULL, key TEXT NOT NULL, name TEXT NOT NULL,"
    " pos INTEGER NOT NULL, PRIMARY KEY (kind, key, pos))",
    "CREATE TABLE core_rank (venue TEXT PRIMARY KEY REFERENCES venue(key), rk TEXT NOT NULL)",
    "CREATE TABLE name_candidate (kind TEXT NOT NULL, key TEXT NOT NULL, cand INTEGER NOT NULL,"
    " text TEXT NOT NULL, text_lc TEXT NOT NULL, base_lc TEXT NOT NULL,"
    " PRIMARY KEY (kind, key, cand))",
    "CREATE TABLE name_token (kind TEXT NOT NULL, key TEXT NOT NULL, cand INTEGER NOT NULL,"
    " token TEXT NOT NULL, PRIMARY KEY (kind, key, cand, token))",
    "CREATE TABLE pub_token (pub TEXT NOT NULL REFERENCES publication(key),"
    " token TEXT NOT NULL, PRIMARY KEY (pub, token))",
    "CREATE INDEX ix_reference_dst ON reference (dst)",
    "CREATE INDEX ix_authorship_person ON authorship (person)",
    "CREATE INDEX ix_editorship_person ON editorship (person)",
    "CREATE INDEX ix_pub_keyword_keyword ON pub_keyword (keyword)",
    "CREATE INDEX ix_affiliation_institution ON affiliation (institution)",
    "CREATE INDEX ix_publication_venue ON publication (venue)",
]

def schema_sql() -> str:
    return ";\n".join(SCHEMA) + ";\n"


def load_sqlite(corpus: Corpus, conn) -> None:
    """Create the schema in conn and fill it from a loaded corpus."""
    cur = conn.cursor()
    for stmt in SCHEMA:
        cur.execute(stmt)
    for pub in corpus.publications.values():
        cur.execute(
            "INSERT INTO publication VALUES (?,?,?,?,?,?,?,?,?,?,?)",
            (
                pub.key,
                pub.title,
                pub.type,
                pub.year,
                pub.venue,
                pub.abstract,
                pub.doi,
                pub.isbn,
                pub.volume,
                pub.doi.lower() if pub.doi is not None else None,
                pub.isbn.lower() if pub.isbn is not None else None,
            ),
        )
        cur.executemany(
            "INSERT INTO authorship VALUES (?,?,?)",
            [(pub.key, a, i) for i, a in enumerate(pub.authors)],
        )
        cur.executemany(
            "INSERT INTO editorship VALUES (?,?,?)",
            [(pub.key, e, i) for i, e in enumerate(pub.editors)],
        )
        cur.executemany(
            "INSERT INTO reference VALUES (?,?)",
            [(pub.key, r) for r in pub.references if r in corpus.publications],
        )
        cur.executemany(
            "INSERT INTO pub_keyword VALUES (?,?)", [(pub.key, kw) for kw in pub.keywords]
        )
        _name_rows(cur, "publication", pub.key, (pub.title,))
        toks = sorted(set(tokens(pub.title)) | set(tokens(pub.abstract or "")))
        cur.executemany("INSERT INTO pub_token VALUES (?,?)", [(pub.key, t) for t in toks])
    for person in corpus.persons.values():
        cur.execute(
            "INSERT INTO person VALUES (?,?,?)", (person.key, person.name, person.orcid)
        )
        cur.executemany(
            "INSERT INTO affiliation VALUES (?,?)",
            [(person.key, aff) for aff in person.affiliations],
        )
        _alias_rows(cur, "person", person.key, person.aliases)
        _name_rows(cur, "person", person.key, (person.name, *person.aliases))
    for venue in corpus.venues.values():
        cur.execute(
            "INSERT INTO venue VALUES (?,?,?,?,?)",
            (
                venue.key,
                venue.name,
                venue.type,
                venue.acronym,
                venue.acronym.lower() if venue.acronym is not None else None,
            ),
        )
        _alias_rows(cur, "venue", venue.key, venue.aliases)
        _name_rows(cur, "venue", venue.key, (venue.name, *venue.aliases))
    for inst in corpus.institutions.values():
        cur.execute(
            "INSERT INTO institution VALUES (?,?,?,?,?,?)",
            (
                inst.key,
                inst.name,
                inst.city,
                inst.country,
                inst.city.lower() if inst.city is not None else None,
                inst.country.lower() if inst.country is not None else None,
            ),
        )
        _alias_rows(cur, "institution", inst.key, inst.aliases)
        _name_rows(cur, "institution", inst.key, (inst.name, *inst.aliases))
    cur.executemany(
        "INSERT INTO core_rank VALUES (?,?)", sorted(corpus.core_ranks.items())
    )
    conn.commit()


def _alias_rows(cur, kind: str, key: str, aliases: tuple[str, ...]) -> None:
    cur.executemany(
        "INSERT INTO alias VALUES (?,?,?,?)",
        [(kind, key, alias, i) for i, alias in enumerate(aliases)],
    )


def _name_rows(cur, kind: str, key: str, candidates: tuple[str, ...]) -> None:
    for i, text in enumerate(candidates):
        low = text.lower()
        cur.execute(
            "INSERT INTO name_candidate VALUES (?,?,?,?,?,?)",
            (kind, key, i, text, low, strip_disambiguator(low)),
        )
        cur.executemany(
            "INSERT INTO name_token VALUES (?,?,?,?)",
            [(kind, key, i, t) for t in sorted(set(tokens(text)))],
        )


# -- emission -----------------------------------------------------------------

_COMP_OP = {"eq": "=", "at_least": ">=", "at_most": "<=", "more_than": ">", "less_than": "<"}

_BASE_TABLE = {
    "publication": "publication",
    "person": "person",
    "conference": "venue",
    "journal": "venue",
    "institution": "institution",
}

_NAME_KIND = {
    "publication": "publication",
    "person": "person",
    "conference": "venue",
    "journal": "venue",
    "institution": "institution",
}

_ORDINAL_CASE = "CASE cr.rk WHEN 'A*' THEN 4 WHEN 'A' THEN 3 WHEN 'B' THEN 2 WHEN 'C' THEN 1 ELSE 0 END"

_PUB_CITES = (
    "SELECT p.key AS pub, p.venue AS venue, p.year AS year,"
    " (SELECT COUNT(*) FROM reference r WHERE r.dst = p.key) AS cites FROM publication p"
)

_HAVG = {
    "havg_venue": (
        "SELECT venue AS key, SUM(h) AS s, COUNT(*) AS c FROM ("
        "SELECT venue, year, MAX(MIN(rn, cites)) AS h FROM ("
        "SELECT venue, year, cites,"
        " ROW_NUMBER() OVER (PARTITION BY venue, year ORDER BY cites DESC) AS rn"
        " FROM pub_cites WHERE year IS NOT NULL AND venue IN (SELECT key FROM venue)"
        ") GROUP BY venue, year) GROUP BY venue"
    ),
    "havg_person": (
        "SELECT person AS key, SUM(h) AS s, COUNT(*) AS c FROM ("
        "SELECT person, year, MAX(MIN(rn, cites)) AS h FROM ("
        "SELECT a.person AS person, pc.year AS year, pc.cites AS cites,"
        " ROW_NUMBER() OVER (PARTITION BY a.person, pc.year ORDER BY pc.cites DESC) AS rn"
        " FROM authorship a JOIN pub_cites pc ON pc.pub = a.pub WHERE pc.year IS NOT NULL"
        ") GROUP BY person, year) GROUP BY person"
    ),
    "havg_institution": (
        "SELECT institution AS key, SUM(h) AS s, COUNT(*) AS c FROM ("
        "SELECT institution, year, MAX(MIN(rn, cites)) AS h FROM ("
        "SELECT ip.institution AS institution, pc.year AS year, pc.cites AS cites,"
        " ROW_NUMBER() OVER (PARTITION BY ip.institution, pc.year ORDER BY pc.cites DESC) AS rn"
        " FROM (SELECT DISTINCT af.institution AS institution, a.pub AS pub"
        " FROM affiliation af JOIN authorship a ON a.person = af.person) ip"
        " JOIN pub_cites pc ON pc.pub = ip.pub WHERE pc.year IS NOT NULL"
        ") GROUP BY institution, year) GROUP BY institution"
    ),
}

_HAVG_TABLE = {
    "conference": "havg_venue",
    "journal": "havg_venue",
    "publication": "havg_venue",
    "person": "havg_person",
    "institution": "havg_institution",
}


@dataclass
class SqlQuery:
    text: str
    params: list

    @property
    def statement(self) -> str:
        return self.text + ";"


def emit(plan: Plan) -> SqlQuery:
    return _Emitter(plan).build()


def execute(plan: Plan, conn) -> Result:
    """Run a plan on a loaded sqlite connection, as a Result."""
    q = emit(plan)
    rows = conn.execute(q.text, q.params).fetchall()
    if plan.result_kind == "entities":
        return entities_result(plan.entity_kind, [r[0] for r in rows])
    if plan.result_kind == "scalar":
        return scalar_result(rows[0][0])
    return table_result(plan.columns, [tuple(r) for r in rows])


class _Emitter:
    def __init__(self, plan: Plan) -> None:
        self.plan = plan
        self.kinds = entity_kinds(plan)
        self.params: list = []
        self.ctes: list[tuple[str, str]] = []
        # per node: (select list, ORDER BY body) for materialization
        self.shape: dict[int, tuple[str, str]] = {}

    def build(self) -> SqlQuery:
        self._helper_ctes()
        for node in self.plan.nodes:
            self.ctes.append((f"t{node.id}", self.node_body(node)))
        cols, order = self.shape[self.plan.root]
        final = f"SELECT {cols} FROM t{self.plan.root}"
        if order:
            final += f" ORDER BY {order}"
        text = "WITH " + ",\n".join(f"{name} AS ({body})" for name, body in self.ctes)
        return SqlQuery(text + "\n" + final, self.params)

    def p(self, value) -> str:
        self.params.append(value)
        return "?"

    def _helper_ctes(self) -> None:
        need: set[str] = set()
        for node in self.plan.nodes:
            if node.params.get("metric") == "h_avg":
                need.add(_HAVG_TABLE[self.kinds[node.inputs[0]]])
        if need:
            self.ctes.append(("pub_cites", _PUB_CITES))
            for name in ("havg_venue", "havg_person", "havg_institution"):
                if name in need:
                    self.ctes.append((name, _HAVG[name]))

    # -- per-node bodies -------------------------------------------------------

    def node_body(self, node) -> str:
        op = node.op
        if op == "scan":
            return self.scan(node)
        if op == "predicate":
            return self.predicate(node)
        if op == "setop":
            sop = {"union": "UNION", "intersect": "INTERSECT", "minus": "EXCEPT"}[node.kind]
            a, b = node.inputs
            self.shape[node.id] = ("key", "key")
            return f"SELECT key FROM t{a} {sop} SELECT key FROM t{b}"
        if op == "rank_filter":
            return self.rank_filter(node)
        if op == "aggregate":
            return self.aggregate(node)
        if op == "truncate":
            cols, order = self.shape[node.inputs[0]]
            self.shape[node.id] = (cols, order)
            by = f" ORDER BY {order}" if order else ""
            return f"SELECT * FROM t{node.inputs[0]}{by} LIMIT {self.p(node.params['n'])}"
        if op == "count":
            self.shape[node.id] = ("n", "")
            return f"SELECT COUNT(*) AS n FROM t{node.inputs[0]}"
        if op == "core_ranks":
            return self.core_ranks(node)
        if op == "alt_names":
            return self.alt_names(node)
        if op == "most_frequent_attr":
            return self.most_frequent_attr(node)
        if op == "project":
            return self.project(node)
        raise AssertionError(f"unknown op {op}")

    def scan(self, node) -> str:
        self.shape[node.id] = ("key", "key")
        kind = node.kind
        if kind == "keyword":
            return "SELECT DISTINCT keyword AS key FROM pub_keyword"
        if kind in ("conference", "journal"):
            return f"SELECT key FROM venue WHERE type = '{kind}'"
        return f"SELECT key FROM {_BASE_TABLE[kind]}"

    def predicate(self, node) -> str:
        i0 = node.inputs[0]
        ek = self.kinds[i0]
        in_cols, in_order = self.shape[i0]
        ranked = "score" in in_cols
        self.shape[node.id] = (in_cols, in_order)
        cond, needs_base = self.pred_cond(node, ek)
        cols = "t.key AS key" + (", t.score AS score" if ranked else "")
        frm = f"t{i0} t"
        if needs_base:
            frm += f" JOIN {_BASE_TABLE[ek]} b ON b.key = t.key"
        return f"SELECT {cols} FROM {frm} WHERE {cond}"

    # -- predicate conditions ---------------------------------------------------

    def pred_cond(self, node, ek: str) -> tuple[str, bool]:
        k = node.kind
        p = node.params
        args = node.inputs[1:]

        if k == "type_is":
            return f"b.type = {self.p(p['type'])}", True
        if k == "role_is":
            table = "authorship" if p["role"] == "author" else "editorship"
            return f"EXISTS(SELECT 1 FROM {table} a WHERE a.person = t.key)", False
        if k == "matches_literal":
            return self.literal_cond(node, ek)
        if k == "named":
            return self.name_cond(_NAME_KIND[ek], p["text"], p["mode"]), False
        if k == "titled":
            return self.name_cond("publication", p["text"], p["mode"]), False
        if k == "key_is":
            return f"t.key = {self.p(p['text'])}", False
        if k == "orcid_is":
            return f"b.orcid = {self.p(p['text'])}", True
        if k == "doi_is":
            return f"COALESCE(b.doi_lc, '') = {self.p(p['text'])}", True
        if k == "isbn_is":
            return f"COALESCE(b.isbn_lc, '') = {self.p(p['text'])}", True
        if k == "acronym_is":
            return f"COALESCE(b.acronym_lc, '') = {self.p(p['text'])}", True
        if k == "city_is":
            return f"COALESCE(b.city_lc, '') = {self.p(p['text'])}", True
        if k == "country_is":
            return f"COALESCE(b.country_lc, '') = {self.p(p['text'])}", True
        if k == "volume_is":
            return (
                "EXISTS(SELECT 1 FROM publication p WHERE p.venue = t.key"
                f" AND p.volume = {self.p(p['text'])})",
                False,
            )
        if k == "year_cmp":
            op = _COMP_OP[p["comp"]]
            if ek == "publication":
                return f"b.year IS NOT NULL AND b.year {op} {self.p(p['value'])}", True
            return (
                "EXISTS(SELECT 1 FROM publication p WHERE p.venue = t.key"
                f" AND p.year IS NOT NULL AND p.year {op} {self.p(p['value'])})",
                False,
            )
        if k == "about_keyword":
            u = self.arg_union(args)
            if ek == "publication":
                return (
                    "EXISTS(SELECT 1 FROM pub_keyword pk WHERE pk.pub = t.key"
                    f" AND pk.keyword IN {u})",
                    False,
                )
            return (
                "EXISTS(SELECT 1 FROM publication p JOIN pub_keyword pk ON pk.pub = p.key"
                f" WHERE p.venue = t.key AND pk.keyword IN {u})",
                False,
            )
        if k == "about_terms":
            expr = parse_terms(p["text"])
            if ek == "publication":
                return self.terms_cond(expr, "t.key"), False
            inner = self.terms_cond(expr, "p.key")
            return (
                f"EXISTS(SELECT 1 FROM publication p WHERE p.venue = t.key AND {inner})",
                False,
            )
        if k == "hosts":
            u = self.arg_union(args)
            return f"t.key IN (SELECT p.venue FROM publication p WHERE p.key IN {u})", False
        if k == "appeared_in":
            return f"b.venue IN {self.arg_union(args)}", True
        if k == "cited_by":
            u = self.arg_union(args)
            if ek == "publication":
                return (
                    f"EXISTS(SELECT 1 FROM reference r WHERE r.dst = t.key AND r.src IN {u})",
                    False,
                )
            return (
                "EXISTS(SELECT 1 FROM authorship a JOIN reference r ON r.dst = a.pub"
                f" WHERE a.person = t.key AND r.src IN {u})",
                False,
            )
        if k == "references":
            u = self.arg_union(args)
            if ek == "publication":
                return (
                    f"EXISTS(SELECT 1 FROM reference r WHERE r.src = t.key AND r.dst IN {u})",
                    False,
                )
            return (
                "EXISTS(SELECT 1 FROM authorship a JOIN reference r ON r.src = a.pub"
                f" WHERE a.person = t.key AND r.dst IN {u})",
                False,
            )
        if k == "written_by":
            u = self.arg_union(args)
            return (
                f"EXISTS(SELECT 1 FROM authorship a WHERE a.pub = t.key AND a.person IN {u})",
                False,
            )
        if k == "edited_by":
            u = self.arg_union(args)
            return (
                f"EXISTS(SELECT 1 FROM editorship a WHERE a.pub = t.key AND a.person IN {u})",
                False,
            )
        if k == "written_by_any":
            if p["distinct"]:
                parts = [
                    "CASE WHEN EXISTS(SELECT 1 FROM authorship a WHERE a.pub = t.key"
                    f" AND a.person IN (SELECT key FROM t{g})) THEN 1 ELSE 0 END"
                    for g in args
                ]
                return f"({' + '.join(parts)}) >= {self.p(p['n'])}", False
            u = self.arg_union(args)
            return (
                "(SELECT COUNT(DISTINCT a.person) FROM authorship a WHERE a.pub = t.key"
                f" AND a.person IN {u}) >= {self.p(p['n'])}",
                False,
            )
        if k == "published_with":
            u = self.arg_union(args)
            return (
                "EXISTS(SELECT 1 FROM authorship a JOIN affiliation af ON af.person = a.person"
                f" WHERE a.pub = t.key AND af.institution IN {u})",
                False,
            )
        if k == "authored":
            u = self.arg_union(args)
            has = f"EXISTS(SELECT 1 FROM authorship a WHERE a.person = t.key AND a.pub IN {u})"
            if p["qual"] == "only":
                return (
                    f"{has} AND NOT EXISTS(SELECT 1 FROM authorship a"
                    f" WHERE a.person = t.key AND a.pub NOT IN {u})",
                    False,
                )
            if p["qual"] == "no":
                return f"NOT {has}", False
            return has, False
        if k == "edited":
            u = self.arg_union(args)
            return (
                f"EXISTS(SELECT 1 FROM editorship a WHERE a.person = t.key AND a.pub IN {u})",
                False,
            )
        if k == "works_for":
            u = self.arg_union(args)
            return (
                "EXISTS(SELECT 1 FROM affiliation af WHERE af.person = t.key"
                f" AND af.institution IN {u})",
                False,
            )
        if k == "published_in":
            u = self.arg_union(args)
            return (
                "EXISTS(SELECT 1 FROM authorship a JOIN publication p ON p.key = a.pub"
                f" WHERE a.person = t.key AND p.venue IN {u})",
                False,
            )
        if k == "with_members":
            u = self.arg_union(args)
            return (
                "EXISTS(SELECT 1 FROM affiliation af WHERE af.institution = t.key"
                f" AND af.person IN {u})",
                False,
            )
        if k == "keywords_of":
            pubs = self.pubs_of_args(args, node.params["arg_kinds"])
            return f"t.key IN (SELECT pk.keyword FROM pub_keyword pk WHERE pk.pub IN {pubs})", False
        if k == "count_cmp":
            scope = f"(SELECT key FROM t{args[0]})" if args else None
            expr = self.count_expr(ek, p["dim"], scope)
            return f"{expr} {_COMP_OP[p['comp']]} {self.p(p['value'])}", False
        if k == "metric_cmp":
            if p["metric"] == "core_rank":
                target = {"A*": 4, "A": 3, "B": 2, "C": 1}[p["value"]]
                return f"{self.ordinal_expr(ek)} {_COMP_OP[p['comp']]} {self.p(target)}", False
            s, c = self.havg_pair(ek)
            return f"{s} {_COMP_OP[p['comp']]} {self.p(p['value'])} * {c}", False
        if k == "length_cmp":
            expr = self.attr_text_expr(ek, p["attr"])
            return f"LENGTH({expr}) {_COMP_OP[p['comp']]} {self.p(p['value'])}", True
        raise AssertionError(f"unknown predicate {k}")

    def literal_cond(self, node, ek: str) -> tuple[str, bool]:
        p = node.params
        if p["mode"] == "list":
            in_list = ", ".join(self.p(x) for x in p["texts"])
            return f"t.key IN ({in_list})", False
        text, mode = p["text"], p["mode"]
        if text.startswith("~"):
            mode, text = MODE_FUZZY, text[1:]
        elif text.startswith("="):
            mode, text = MODE_EXACT, text[1:]
        if ek == "keyword":
            return f"t.key = {self.p(text.lower().strip())}", False
        pool = f"t{node.inputs[0]}"
        assert self.plan.nodes[node.inputs[0]].op == "scan"
        low = text.lower()
        if ek == "publication":
            cond = f"t.key = {self.p(text)}"
            no_key = f"NOT EXISTS(SELECT 1 FROM publication px WHERE px.key = {self.p(text)})"
            cond += f" OR ({no_key} AND (b.doi_lc = {self.p(low)} OR b.isbn_lc = {self.p(low)}))"
            no_key2 = f"NOT EXISTS(SELECT 1 FROM publication px WHERE px.key = {self.p(text)})"
            no_id = (
                f"NOT EXISTS(SELECT 1 FROM publication px WHERE px.doi_lc = {self.p(low)}"
                f" OR px.isbn_lc = {self.p(low)})"
            )
            named = self.name_cond("publication", text, mode, raw=True)
            return f"({cond} OR ({no_key2} AND {no_id} AND {named}))", True
        if ek == "person":
            cond = f"t.key = {self.p(text)}"
            no_key = f"NOT EXISTS(SELECT 1 FROM person px WHERE px.key = {self.p(text)})"
            cond += f" OR ({no_key} AND b.orcid = {self.p(text)})"
            no_key2 = f"NOT EXISTS(SELECT 1 FROM person px WHERE px.key = {self.p(text)})"
            no_id = f"NOT EXISTS(SELECT 1 FROM person px WHERE px.orcid = {self.p(text)})"
            named = self.name_cond("person", text, mode, raw=True)
            return f"({cond} OR ({no_key2} AND {no_id} AND {named}))", True
        if ek in ("conference", "journal"):
            cond = f"t.key = {self.p(text)}"
            no_key = f"NOT EXISTS(SELECT 1 FROM {pool} x WHERE x.key = {self.p(text)})"
            cond += f" OR ({no_key} AND COALESCE(b.acronym_lc, '') = {self.p(low)})"
            no_key2 = f"NOT EXISTS(SELECT 1 FROM {pool} x WHERE x.key = {self.p(text)})"
            no_id = (
                f"NOT EXISTS(SELECT 1 FROM {pool} x JOIN venue v ON v.key = x.key"
                f" WHERE v.acronym_lc = {self.p(low)})"
            )
            named = self.name_cond("venue", text, mode, raw=True)
            return f"({cond} OR ({no_key2} AND {no_id} AND {named}))", True
        # institution
        cond = f"t.key = {self.p(text)}"
        no_key = f"NOT EXISTS(SELECT 1 FROM institution px WHERE px.key = {self.p(text)})"
        named = self.name_cond("institution", text, mode, raw=True)
        return f"({cond} OR ({no_key} AND {named}))", False

    def name_cond(self, name_kind: str, text: str, mode: str, raw: bool = False) -> str:
        """Name match against the candidate tables, keyed on t.key.

        Filter literals (NAMED, TITLED) keep their text as written; resolve
        literals (raw=False is the filter path, raw=True the resolver path)
        share the same candidate semantics.
        """
        if mode == MODE_EXACT:
            head = f"EXISTS(SELECT 1 FROM name_candidate nc WHERE nc.kind = {self.p(name_kind)}"
            return head + f" AND nc.key = t.key AND nc.text = {self.p(text)})"
        if mode == MODE_FUZZY:
            toks = list(dict.fromkeys(tokens(text)))
            if not toks:
                return "0 = 1"
            head = f"EXISTS(SELECT 1 FROM name_token nt WHERE nt.kind = {self.p(name_kind)}"
            head += " AND nt.key = t.key AND nt.token IN ("
            head += ", ".join(self.p(t) for t in toks)
            return head + f") GROUP BY nt.cand HAVING COUNT(DISTINCT nt.token) = {len(toks)})"
        low = text.lower()
        head = f"EXISTS(SELECT 1 FROM name_candidate nc WHERE nc.kind = {self.p(name_kind)}"
        return head + (
            f" AND nc.key = t.key AND (nc.text_lc = {self.p(low)}"
            f" OR nc.base_lc = {self.p(low)}))"
        )

    def terms_cond(self, expr, pubref: str) -> str:
        op, parts = expr
        if op == "word":
            bits = [
                f"EXISTS(SELECT 1 FROM pub_token pt WHERE pt.pub = {pubref}"
                f" AND pt.token = {self.p(t)})"
                for t in parts
            ]
            return "(" + " AND ".join(bits) + ")"
        joiner = " AND " if op == "and" else " OR "
        return "(" + joiner.join(self.terms_cond(child, pubref) for child in parts) + ")"

    # -- scores ------------------------------------------------------------------

    def count_expr(self, ek: str, dim: str, scope: str | None) -> str:
        if ek == "publication":
            if dim == "references":
                w = "r.src = t.key" + (f" AND r.dst IN {scope}" if scope else "")
            else:
                w = "r.dst = t.key" + (f" AND r.src IN {scope}" if scope else "")
            return f"(SELECT COUNT(*) FROM reference r WHERE {w})"
        if dim == "coauthors":
            w = "a1.person = t.key AND a2.person <> t.key"
            if scope:
                w += f" AND a1.pub IN {scope}"
            return (
                "(SELECT COUNT(DISTINCT a2.person) FROM authorship a1"
                f" JOIN authorship a2 ON a2.pub = a1.pub WHERE {w})"
            )
        if dim == "references":
            w = "a.person = t.key" + (f" AND r.dst IN {scope}" if scope else "")
            return (
                "(SELECT COUNT(*) FROM authorship a JOIN reference r ON r.src = a.pub"
                f" WHERE {w})"
            )
        w = "a.person = t.key" + (f" AND r.src IN {scope}" if scope else "")
        return (
            f"(SELECT COUNT(*) FROM authorship a JOIN reference r ON r.dst = a.pub WHERE {w})"
        )

    def ordinal_expr(self, ek: str) -> str:
        case = _ORDINAL_CASE
        if ek in ("conference", "journal"):
            return f"COALESCE((SELECT {case} FROM core_rank cr WHERE cr.venue = t.key), 0)"
        if ek == "publication":
            return (
                f"COALESCE((SELECT {case} FROM core_rank cr JOIN publication p"
                " ON p.venue = cr.venue WHERE p.key = t.key), 0)"
            )
        if ek == "person":
            return (
                f"COALESCE((SELECT MAX({case}) FROM authorship a"
                " JOIN publication p ON p.key = a.pub JOIN core_rank cr ON cr.venue = p.venue"
                " WHERE a.person = t.key), 0)"
            )
        return (
            f"COALESCE((SELECT MAX({case}) FROM affiliation af"
            " JOIN authorship a ON a.person = af.person JOIN publication p ON p.key = a.pub"
            " JOIN core_rank cr ON cr.venue = p.venue WHERE af.institution = t.key), 0)"
        )

    def havg_pair(self, ek: str) -> tuple[str, str]:
        table = _HAVG_TABLE[ek]
        keyref = "t.key"
        if ek == "publication":
            keyref = "(SELECT venue FROM publication WHERE key = t.key)"
        s = f"COALESCE((SELECT h.s FROM {table} h WHERE h.key = {keyref}), 0)"
        c = f"COALESCE((SELECT h.c FROM {table} h WHERE h.key = {keyref}), 1)"
        return s, c

    def metric_score(self, ek: str, metric: str) -> str:
        if metric == "core_rank":
            return self.ordinal_expr(ek)
        s, c = self.havg_pair(ek)
        return f"(CAST({s} AS REAL) / {c})"

    def attr_text_expr(self, ek: str, attr: str) -> str:
        if attr == "location":
            return (
                "CASE WHEN COALESCE(b.city, '') <> '' AND COALESCE(b.country, '') <> ''"
                " THEN b.city || ', ' || b.country WHEN COALESCE(b.city, '') <> ''"
                " THEN b.city ELSE COALESCE(b.country, '') END"
            )
        return self.attr_value_expr(ek, attr)[0]

    def attr_value_expr(self, ek: str, attr: str) -> tuple[str, bool]:
        if attr == "dblp_key" or ek == "keyword":
            return "t.key", False
        required = {
            ("publication", "title"),
            ("person", "name"),
            ("conference", "name"),
            ("journal", "name"),
            ("institution", "name"),
        }
        if (ek, attr) in required:
            return f"b.{attr}", True
        return f"COALESCE(b.{attr}, '')", True

    # -- ranked operators ----------------------------------------------------------

    def rank_filter(self, node) -> str:
        i0 = node.inputs[0]
        ek = self.kinds[i0]
        p = node.params
        desc = p["direction"] in ("most", "highest", "longest")
        needs_base = False
        if node.kind == "count":
            scope = f"(SELECT key FROM t{node.inputs[1]})" if len(node.inputs) > 1 else None
            score = self.count_expr(ek, p["dim"], scope)
        elif node.kind == "metric":
            score = self.metric_score(ek, p["metric"])
        else:
            score = f"LENGTH({self.attr_text_expr(ek, p['attr'])})"
            needs_base = True
        frm = f"t{i0} t"
        if needs_base:
            frm += f" JOIN {_BASE_TABLE[ek]} b ON b.key = t.key"
        scored = f"SELECT t.key AS key, {score} AS score FROM {frm}"
        return self.ranked(node, scored, p["n"], desc, zero_filter=False)

    def ranked(self, node, scored: str, n: int, desc: bool, zero_filter: bool) -> str:
        direction = "DESC" if desc else "ASC"
        self.shape[node.id] = ("key, score", f"score {direction}, key")
        mid = f"SELECT key, score, RANK() OVER (ORDER BY score {direction}) AS rnk FROM ({scored})"
        cond = f"rnk <= {self.p(n)}"
        if zero_filter:
            cond += " AND score > 0"
        return f"SELECT key, score FROM ({mid}) WHERE {cond}"

    def aggregate(self, node) -> str:
        k = node.kind
        p = node.params
        a = node.inputs[0]
        if k == "most_cited":
            scored = (
                "SELECT t.key AS key, (SELECT COUNT(*) FROM reference r WHERE r.dst = t.key)"
                f" AS score FROM t{a} t"
            )
            return self.ranked(node, scored, p["rank"], desc=True, zero_filter=False)
        if k in ("newest", "oldest"):
            scored = (
                f"SELECT t.key AS key, p.year AS score FROM t{a} t"
                " JOIN publication p ON p.key = t.key WHERE p.year IS NOT NULL"
            )
            return self.ranked(node, scored, p["rank"], desc=(k == "newest"), zero_filter=False)
        if k == "coauthors_of":
            self.shape[node.id] = ("key", "key")
            return (
                "SELECT DISTINCT a2.person AS key FROM authorship a1"
                " JOIN authorship a2 ON a2.pub = a1.pub"
                " JOIN person pe ON pe.key = a2.person"
                f" WHERE a1.person IN (SELECT key FROM t{a})"
                f" AND a2.person NOT IN (SELECT key FROM t{a})"
            )
        if k == "most_publishing_in":
            u = self.arg_union(node.inputs[1:])
            scored = (
                "SELECT t.key AS key, (SELECT COUNT(*) FROM authorship a"
                " JOIN publication p ON p.key = a.pub WHERE a.person = t.key"
                f" AND p.venue IN {u}) AS score FROM t{a} t"
            )
            return self.ranked(node, scored, p["rank"], desc=True, zero_filter=True)
        if k == "most_researching_about":
            kw = node.inputs[1]
            scored = (
                "SELECT t.key AS key, (SELECT COUNT(*) FROM authorship a"
                " WHERE a.person = t.key AND EXISTS(SELECT 1 FROM pub_keyword pk"
                f" WHERE pk.pub = a.pub AND pk.keyword IN (SELECT key FROM t{kw})))"
                f" AS score FROM t{a} t"
            )
            return self.ranked(node, scored, p["rank"], desc=True, zero_filter=True)
        if k == "most_researching_institution":
            kw = node.inputs[1]
            scored = (
                "SELECT t.key AS key, (SELECT COUNT(*) FROM publication p"
                " WHERE EXISTS(SELECT 1 FROM pub_keyword pk WHERE pk.pub = p.key"
                f" AND pk.keyword IN (SELECT key FROM t{kw}))"
                " AND EXISTS(SELECT 1 FROM authorship a JOIN affiliation af"
                " ON af.person = a.person WHERE a.pub = p.key AND af.institution = t.key))"
                f" AS score FROM t{a} t"
            )
            return self.ranked(node, scored, p["rank"], desc=True, zero_filter=True)
        if k == "related_keywords_to":
            self.shape[node.id] = ("key, score", "score DESC, key")
            body = (
                "SELECT pk.keyword AS key, COUNT(*) AS score FROM pub_keyword pk"
                f" WHERE pk.keyword NOT IN (SELECT key FROM t{a})"
                " AND EXISTS(SELECT 1 FROM pub_keyword s2 WHERE s2.pub = pk.pub"
                f" AND s2.keyword IN (SELECT key FROM t{a}))"
            )
            if p["scoped"]:
                body += f" AND pk.pub IN (SELECT key FROM t{node.inputs[1]})"
            return body + " GROUP BY pk.keyword"
        if k == "most_frequent_keywords_of":
            arg_kinds = list(p["arg_kinds"])
            if "keyword" in arg_kinds:
                u = self.arg_union(node.inputs)
                scored = (
                    "SELECT k.key AS key, (SELECT COUNT(*) FROM pub_keyword pk"
                    f" WHERE pk.keyword = k.key) AS score FROM {u} k"
                )
            else:
                pubs = self.pubs_of_args(node.inputs, arg_kinds)
                scored = (
                    "SELECT pk.keyword AS key, COUNT(*) AS score FROM pub_keyword pk"
                    f" WHERE pk.pub IN {pubs} GROUP BY pk.keyword"
                )
            return self.ranked(node, scored, p["rank"], desc=True, zero_filter=True)
        raise AssertionError(f"unknown aggregation {k}")

    # -- table builders --------------------------------------------------------------

    def core_ranks(self, node) -> str:
        ordinal = "CASE rk WHEN 'A*' THEN 4 WHEN 'A' THEN 3 WHEN 'B' THEN 2 WHEN 'C' THEN 1 ELSE 0 END"
        self.shape[node.id] = ("rk, cnt", f"{ordinal} DESC")
        pubs = (
            "SELECT DISTINCT a.pub AS pub FROM authorship a"
            f" WHERE a.person IN (SELECT key FROM t{node.inputs[0]})"
        )
        where = ""
        if node.params["scoped"]:
            venue_ids = []
            pub_ids = []
            for i, kind in zip(node.inputs[1:], node.params["arg_kinds"]):
                (pub_ids if kind == "publication" else venue_ids).append(i)
            conds = []
            if venue_ids:
                conds.append(f"p.venue IN {self.arg_union(venue_ids)}")
            if pub_ids:
                conds.append(f"s.pub IN {self.arg_union(pub_ids)}")
            where = f" WHERE {' OR '.join(conds)}"
        return (
            f"SELECT cr.rk AS rk, COUNT(*) AS cnt FROM ({pubs}) s"
            " JOIN publication p ON p.key = s.pub JOIN core_rank cr ON cr.venue = p.venue"
            f"{where} GROUP BY cr.rk"
        )

    def alt_names(self, node) -> str:
        self.shape[node.id] = ("k, nm", "k, pos")
        alias_kind = {"person": "person", "institution": "institution"}
        parts = []
        for i, kind in zip(node.inputs, node.params["arg_kinds"]):
            ak = alias_kind.get(kind, "venue")
            parts.append(
                f"SELECT al.key AS k, al.name AS nm, al.pos AS pos FROM alias al"
                f" WHERE al.kind = {self.p(ak)} AND al.key IN (SELECT key FROM t{i})"
            )
        return " UNION ".join(parts)

    def most_frequent_attr(self, node) -> str:
        self.shape[node.id] = ("val, cnt", "val")
        i0 = node.inputs[0]
        ek = self.kinds[i0]
        expr, needs_base = self.attr_value_expr(ek, node.params["attr"])
        frm = f"t{i0} t"
        if needs_base:
            frm += f" JOIN {_BASE_TABLE[ek]} b ON b.key = t.key"
        inner = f"SELECT {expr} AS val FROM {frm}"
        grouped = (
            "SELECT val, COUNT(*) AS cnt, RANK() OVER (ORDER BY COUNT(*) DESC) AS rnk"
            f" FROM ({inner}) WHERE val <> '' GROUP BY val"
        )
        return f"SELECT val, cnt FROM ({grouped}) WHERE rnk = 1"

    def project(self, node) -> str:
        i0 = node.inputs[0]
        ek = self.kinds[i0]
        in_cols, _ = self.shape[i0]
        ranked = "score" in in_cols
        exprs = []
        needs_base = False
        for j, attr in enumerate(node.params["attrs"]):
            expr, base = self.attr_value_expr(ek, attr)
            needs_base = needs_base or base
            exprs.append(f"{expr} AS a{j}")
        cols = ", ".join(f"a{j}" for j in range(len(node.params["attrs"])))
        exprs.append("t.key AS ok")
        order = "ok"
        if ranked:
            exprs.append("t.score AS os")
            _, in_order = self.shape[i0]
            direction = "DESC" if "DESC" in in_order else "ASC"
            order = f"os {direction}, ok"
        self.shape[node.id] = (cols, order)
        frm = f"t{i0} t"
        if needs_base:
            frm += f" JOIN {_BASE_TABLE[ek]} b ON b.key = t.key"
        return f"SELECT {', '.join(exprs)} FROM {frm}"

    # -- shared fragments ---------------------------------------------------------------

    def arg_union(self, ids) -> str:
        parts = [f"SELECT key FROM t{i}" for i in ids]
        return "(" + " UNION ".join(parts) + ")"

    def pubs_of_args(self, ids, arg_kinds) -> str:
        parts = []
        for i, kind in zip(ids, arg_kinds):
            if kind == "publication":
                parts.append(f"SELECT key FROM t{i}")
            elif kind == "person":
                parts.append(
                    "SELECT a.pub AS key FROM authorship a"
                    f" WHERE a.person IN (SELECT key FROM t{i})"
                )
            else:
                parts.append(
                    f"SELECT p.key AS key FROM publication p"
                    f" WHERE p.venue IN (SELECT key FROM t{i})"
                )
        return "(" + " UNION ".join(parts) + ")"
